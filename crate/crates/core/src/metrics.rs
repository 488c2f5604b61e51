//! Quality and cost measurement: PSNR between decoded planes and file-size
//! deltas between serialized bitstreams.

use crate::jpeg::{decode_to_pixels, JpegImage, PixelPlane};
use crate::rdh::SchemeId;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("plane dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
}

/// One measurement row: quality and size cost of a marked image against
/// its original.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub scheme: SchemeId,
    pub payload_bits: u64,
    /// Infinite when the decoded planes are identical.
    pub psnr_db: f64,
    pub file_size_original: u64,
    pub file_size_marked: u64,
    /// `file_size_marked - file_size_original`.
    pub size_increase: i64,
}

/// Mean squared error over all samples, in double precision.
pub fn mse(a: &PixelPlane, b: &PixelPlane) -> Result<f64, MetricsError> {
    if a.width != b.width || a.height != b.height {
        return Err(MetricsError::DimensionMismatch(
            a.width, a.height, b.width, b.height,
        ));
    }
    let sum: f64 = a
        .samples
        .iter()
        .zip(&b.samples)
        .map(|(&x, &y)| {
            let d = x as f64 - y as f64;
            d * d
        })
        .sum();
    Ok(sum / a.samples.len() as f64)
}

/// Peak signal-to-noise ratio in decibels: `10*log10(255^2 / MSE)`.
/// Identical planes report positive infinity.
pub fn psnr(a: &PixelPlane, b: &PixelPlane) -> Result<f64, MetricsError> {
    let mse = mse(a, b)?;
    if mse == 0.0 {
        Ok(f64::INFINITY)
    } else {
        Ok(10.0 * (255.0f64 * 255.0 / mse).log10())
    }
}

/// Measures marked against original: PSNR on the decoded luminance planes,
/// sizes from the serialized byte lengths provided.
pub fn measure(
    original: &JpegImage,
    marked: &JpegImage,
    scheme: SchemeId,
    payload_bits: u64,
    original_bytes: &[u8],
    marked_bytes: &[u8],
) -> Result<MetricsReport, MetricsError> {
    let a = decode_to_pixels(original);
    let b = decode_to_pixels(marked);
    let psnr_db = psnr(&a, &b)?;
    Ok(MetricsReport {
        scheme,
        payload_bits,
        psnr_db,
        file_size_original: original_bytes.len() as u64,
        file_size_marked: marked_bytes.len() as u64,
        size_increase: marked_bytes.len() as i64 - original_bytes.len() as i64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane(w: usize, h: usize, f: impl Fn(usize) -> u8) -> PixelPlane {
        PixelPlane::new(w, h, (0..w * h).map(f).collect())
    }

    #[test]
    fn identical_planes_have_infinite_psnr() {
        let a = plane(16, 16, |i| (i % 251) as u8);
        assert_eq!(psnr(&a, &a).unwrap(), f64::INFINITY);
    }

    #[test]
    fn unit_difference_everywhere_is_48_13_db() {
        let a = plane(32, 32, |_| 100);
        let b = plane(32, 32, |_| 101);
        let p = psnr(&a, &b).unwrap();
        assert!((p - 48.13).abs() < 0.01, "psnr {p}");
    }

    #[test]
    fn maximal_difference_is_zero_db() {
        let a = plane(8, 8, |_| 0);
        let b = plane(8, 8, |_| 255);
        assert_eq!(psnr(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn psnr_is_symmetric() {
        let a = plane(16, 8, |i| (i * 7 % 256) as u8);
        let b = plane(16, 8, |i| (i * 13 % 256) as u8);
        assert_eq!(psnr(&a, &b).unwrap(), psnr(&b, &a).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = plane(8, 8, |_| 0);
        let b = plane(8, 9, |_| 0);
        assert_eq!(
            psnr(&a, &b).unwrap_err(),
            MetricsError::DimensionMismatch(8, 8, 8, 9)
        );
    }

    #[test]
    fn measure_of_identical_images_is_infinite_with_zero_increase() {
        let cover = plane(24, 24, |i| (i * 31 % 256) as u8);
        let img = crate::jpeg::encode_from_pixels(&cover, 60);
        let bytes =
            crate::jpeg::serialize_jpeg(&img, crate::jpeg::TablePolicy::RebuildOptimal).unwrap();
        let report = measure(&img, &img, SchemeId::Proposed, 0, &bytes, &bytes).unwrap();
        assert_eq!(report.psnr_db, f64::INFINITY);
        assert_eq!(report.size_increase, 0);
        assert_eq!(report.file_size_original, bytes.len() as u64);
    }
}
