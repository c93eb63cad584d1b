//! Drawing a region's boundary onto its source image.

use super::{RoiMask, SegmentError};
use crate::imgcore::GrayImage;

/// Copies `img` with the boundary of `mask` painted white.
///
/// A mask pixel is boundary when it touches the image border or has at
/// least one off-mask edge neighbor. Interior mask pixels and everything
/// outside the mask keep their original intensity, so a full-image mask
/// paints only the border ring and an empty mask changes nothing.
pub fn outline(img: &GrayImage, mask: &RoiMask) -> Result<GrayImage, SegmentError> {
    let (w, h) = (img.width(), img.height());
    if mask.width() != w || mask.height() != h {
        return Err(SegmentError::DimensionMismatch(
            mask.width(),
            mask.height(),
            w,
            h,
        ));
    }
    let out = GrayImage::from_fn(w, h, |x, y| {
        if !mask.get(x, y) {
            return img.get(x, y);
        }
        let on_border = x == 0 || y == 0 || x == w - 1 || y == h - 1;
        let exposed = on_border
            || !mask.get(x - 1, y)
            || !mask.get(x + 1, y)
            || !mask.get(x, y - 1)
            || !mask.get(x, y + 1);
        if exposed {
            255
        } else {
            img.get(x, y)
        }
    });
    Ok(out)
}
