//! Connected-component filtering for region masks.

use super::{RoiMask, SegmentError};

/// Pixel adjacency rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    /// Edge neighbors only.
    Four,
    /// Edge and corner neighbors.
    Eight,
}

/// Keeps only the connected component of `mask` with the most pixels.
///
/// A clustering by gray level alone often scatters into several blobs; the
/// structure of interest is taken to be the biggest one. Ties go to the
/// component encountered first in row-major order (smallest top-left
/// coordinate). An empty mask has no component to keep and is an error.
pub fn largest_component(
    mask: &RoiMask,
    connectivity: Connectivity,
) -> Result<RoiMask, SegmentError> {
    let (w, h) = (mask.width(), mask.height());
    let bits = mask.bits();

    const UNVISITED: u32 = u32::MAX;
    let mut component = vec![UNVISITED; bits.len()];
    let mut sizes: Vec<usize> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();

    for start in 0..bits.len() {
        if !bits[start] || component[start] != UNVISITED {
            continue;
        }
        let id = sizes.len() as u32;
        let mut size = 0usize;
        component[start] = id;
        stack.push(start);
        while let Some(i) = stack.pop() {
            size += 1;
            let (x, y) = (i % w, i / w);
            let mut visit = |nx: usize, ny: usize| {
                let n = ny * w + nx;
                if bits[n] && component[n] == UNVISITED {
                    component[n] = id;
                    stack.push(n);
                }
            };
            if x > 0 {
                visit(x - 1, y);
            }
            if x + 1 < w {
                visit(x + 1, y);
            }
            if y > 0 {
                visit(x, y - 1);
            }
            if y + 1 < h {
                visit(x, y + 1);
            }
            if connectivity == Connectivity::Eight {
                if x > 0 && y > 0 {
                    visit(x - 1, y - 1);
                }
                if x + 1 < w && y > 0 {
                    visit(x + 1, y - 1);
                }
                if x > 0 && y + 1 < h {
                    visit(x - 1, y + 1);
                }
                if x + 1 < w && y + 1 < h {
                    visit(x + 1, y + 1);
                }
            }
        }
        sizes.push(size);
    }

    if sizes.is_empty() {
        return Err(SegmentError::EmptyMask);
    }

    // Components are numbered in row-major discovery order, so a strict
    // comparison keeps the earliest on ties.
    let mut best = 0u32;
    for (id, &size) in sizes.iter().enumerate() {
        if size > sizes[best as usize] {
            best = id as u32;
        }
    }

    let kept = component.iter().map(|&c| c == best).collect();
    Ok(RoiMask::new(w, h, kept, mask.source_cluster()))
}
