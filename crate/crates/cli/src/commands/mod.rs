//! One module per subcommand; shared stage logic lives in [`crate::stages`].

pub mod classify;
pub mod enhance;
pub mod features;
pub mod metrics;
pub mod pipeline;
pub mod segment;
pub mod train;
