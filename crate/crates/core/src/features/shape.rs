//! Shape parameters of a region mask.

use super::FeatureError;
use crate::segment::{largest_component, Connectivity, RoiMask, SegmentError};

/// Pixel-count shape descriptors.
///
/// `white_pixels` counts every set bit in the mask, while `area` and
/// `perimeter` describe only its largest 8-connected component — a mask
/// produced by gray-level clustering often carries small satellite blobs
/// that would otherwise pollute the size measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShapeFeatures {
    pub white_pixels: u64,
    pub area: u64,
    /// Number of component pixels exposed to the outside: those on the
    /// image border or with at least one off-component edge neighbor.
    pub perimeter: u64,
}

/// Measures `mask`; fails on a mask with no set pixels.
pub fn shape_features(mask: &RoiMask) -> Result<ShapeFeatures, FeatureError> {
    let component = largest_component(mask, Connectivity::Eight).map_err(|e| match e {
        SegmentError::EmptyMask => FeatureError::EmptyMask,
        other => panic!("unexpected component error: {other}"),
    })?;

    let (w, h) = (component.width(), component.height());
    let mut perimeter = 0u64;
    for y in 0..h {
        for x in 0..w {
            if !component.get(x, y) {
                continue;
            }
            let exposed = x == 0
                || y == 0
                || x == w - 1
                || y == h - 1
                || !component.get(x - 1, y)
                || !component.get(x + 1, y)
                || !component.get(x, y - 1)
                || !component.get(x, y + 1);
            if exposed {
                perimeter += 1;
            }
        }
    }

    Ok(ShapeFeatures {
        white_pixels: mask.count_set() as u64,
        area: component.count_set() as u64,
        perimeter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask_from_rows(rows: &[&str]) -> RoiMask {
        let h = rows.len();
        let w = rows[0].len();
        let bits = rows
            .iter()
            .flat_map(|r| r.chars().map(|c| c == '#'))
            .collect();
        RoiMask::new(w, h, bits, None)
    }

    #[test]
    fn single_pixel() {
        let mask = mask_from_rows(&["...", ".#.", "..."]);
        let s = shape_features(&mask).unwrap();
        assert_eq!(s.white_pixels, 1);
        assert_eq!(s.area, 1);
        assert_eq!(s.perimeter, 1);
    }

    #[test]
    fn solid_block_perimeter_excludes_the_center() {
        let mask = mask_from_rows(&[".....", ".###.", ".###.", ".###.", "....."]);
        let s = shape_features(&mask).unwrap();
        assert_eq!(s.white_pixels, 9);
        assert_eq!(s.area, 9);
        assert_eq!(s.perimeter, 8);
    }

    #[test]
    fn satellite_blob_counts_toward_white_pixels_only() {
        let mask = mask_from_rows(&[
            "####...",
            "####..#",
            "####..#",
            "......#",
            "##.....",
        ]);
        let s = shape_features(&mask).unwrap();
        assert_eq!(s.white_pixels, 17);
        assert_eq!(s.area, 12);
        // All of the 4x3 block except its two interior pixels is exposed.
        assert_eq!(s.perimeter, 10);
    }

    #[test]
    fn block_touching_the_border_is_fully_exposed() {
        let mask = mask_from_rows(&["##", "##"]);
        let s = shape_features(&mask).unwrap();
        assert_eq!(s.perimeter, 4);
    }

    #[test]
    fn empty_mask_is_rejected() {
        let mask = RoiMask::new(4, 4, vec![false; 16], None);
        assert!(matches!(shape_features(&mask), Err(FeatureError::EmptyMask)));
    }
}
