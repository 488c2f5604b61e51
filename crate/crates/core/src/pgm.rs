//! Binary PGM (P5, maxval 255) reading and writing for the test corpus.

use crate::jpeg::PixelPlane;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PgmError {
    #[error("not a binary PGM (P5) file")]
    NotPgm,
    #[error("malformed PGM header: {0}")]
    Malformed(String),
    #[error("unsupported PGM: {0}")]
    Unsupported(String),
    #[error("pixel data truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
}

/// Reads the next whitespace-delimited unsigned integer, skipping `#`
/// comment lines.
fn next_int(data: &[u8], pos: &mut usize) -> Result<u32, PgmError> {
    loop {
        while *pos < data.len() && data[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < data.len() && data[*pos] == b'#' {
            while *pos < data.len() && data[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < data.len() && data[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if *pos == start {
        return Err(PgmError::Malformed("expected an integer".into()));
    }
    std::str::from_utf8(&data[start..*pos])
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| PgmError::Malformed("integer out of range".into()))
}

pub fn read_pgm(data: &[u8]) -> Result<PixelPlane, PgmError> {
    if data.len() < 2 || &data[..2] != b"P5" {
        return Err(PgmError::NotPgm);
    }
    let mut pos = 2;
    let width = next_int(data, &mut pos)? as usize;
    let height = next_int(data, &mut pos)? as usize;
    let maxval = next_int(data, &mut pos)?;
    if width == 0 || height == 0 {
        return Err(PgmError::Malformed("zero dimension".into()));
    }
    if maxval != 255 {
        return Err(PgmError::Unsupported(format!(
            "maxval {maxval} (only 255 is supported)"
        )));
    }
    // Exactly one whitespace byte separates the header from the raster.
    if pos >= data.len() || !data[pos].is_ascii_whitespace() {
        return Err(PgmError::Malformed("missing raster separator".into()));
    }
    pos += 1;
    let expected = width * height;
    let raster = &data[pos..];
    if raster.len() < expected {
        return Err(PgmError::Truncated {
            expected,
            found: raster.len(),
        });
    }
    Ok(PixelPlane::new(width, height, raster[..expected].to_vec()))
}

pub fn write_pgm(plane: &PixelPlane) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", plane.width, plane.height).into_bytes();
    out.extend_from_slice(&plane.samples);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let plane = PixelPlane::new(3, 2, vec![0, 10, 255, 128, 7, 42]);
        let bytes = write_pgm(&plane);
        let back = read_pgm(&bytes).unwrap();
        assert_eq!(back, plane);
    }

    #[test]
    fn header_comments_are_skipped() {
        let mut bytes = b"P5\n# a comment\n3 2\n# another\n255\n".to_vec();
        bytes.extend_from_slice(&[1, 2, 3, 4, 5, 6]);
        let plane = read_pgm(&bytes).unwrap();
        assert_eq!((plane.width, plane.height), (3, 2));
        assert_eq!(plane.samples, vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn rejects_p6_and_short_raster() {
        assert!(matches!(
            read_pgm(b"P6\n1 1\n255\nxxx"),
            Err(PgmError::NotPgm)
        ));
        assert!(matches!(
            read_pgm(b"P5\n4 4\n255\nab"),
            Err(PgmError::Truncated { .. })
        ));
    }

    #[test]
    fn rejects_16_bit_maxval() {
        assert!(matches!(
            read_pgm(b"P5\n1 1\n65535\n\x00\x00"),
            Err(PgmError::Unsupported(_))
        ));
    }
}
