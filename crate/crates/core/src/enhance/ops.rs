//! Arithmetic operation accounting for instrumented equalizer runs.

/// Tally of additions and multiplications performed by an algorithm run.
///
/// See the [`crate::quality`] module documentation for the exact counting
/// convention and the per-method closed-form formulas.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct OpCount {
    pub additions: u64,
    pub multiplications: u64,
}

impl OpCount {
    #[must_use]
    pub fn total(&self) -> u64 {
        self.additions + self.multiplications
    }
}

impl std::ops::AddAssign for OpCount {
    fn add_assign(&mut self, rhs: Self) {
        self.additions += rhs.additions;
        self.multiplications += rhs.multiplications;
    }
}
