//! Image-level embedding, blind extraction, and recovery.
//!
//! Traversal order is fixed: components in scan-header order, blocks in
//! raster order within a component, coefficients in zigzag order within a
//! block. A 32-bit big-endian length frame precedes the payload so
//! extraction is blind. `Huang2016` reorders whole blocks by descending
//! zero-AC count (ties by traversal position) before embedding; zeros are
//! never touched, so the receiver recomputes the identical order.

use super::{embed_coeff, extract_coeff, shift_coeff, CoeffError, SchemeId};
use crate::jpeg::JpegImage;
use crate::payload::{frame, BitSeq, FRAME_HEADER_BITS};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("framed payload of {framed_bits} bits exceeds capacity of {capacity_bits} bits")]
    PayloadTooLarge {
        framed_bits: u64,
        capacity_bits: u64,
    },
    #[error(
        "embedding would push a coefficient past the baseline limit \
         (component {component}, block {block}, zigzag {index}, marked value {value})"
    )]
    Overflow {
        component: usize,
        block: usize,
        index: usize,
        value: i32,
    },
}

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("length frame corrupt: {0}")]
    FrameCorrupt(String),
}

/// Outcome of an embedding run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbedReport {
    pub scheme: SchemeId,
    pub capacity_bits: u64,
    /// Framed bits actually embedded (32-bit header + payload).
    pub bits_embedded: u64,
    /// Coefficients whose value changed.
    pub coeffs_modified: u64,
    /// Nonzero AC coefficients examined by the traversal.
    pub coeffs_visited: u64,
}

/// Embedding capacity in bits: every nonzero AC for `Proposed`/`Liu2018`,
/// magnitude-1 ACs for `Huang2016`. Counted over the whole image.
pub fn capacity(image: &JpegImage, scheme: SchemeId) -> u64 {
    match scheme {
        SchemeId::Proposed | SchemeId::Liu2018 => image.count_nonzero_ac(),
        SchemeId::Huang2016 => image.count_unit_ac(),
    }
}

/// Blocks in traversal order as (component index, block index) pairs.
fn scan_order_blocks(image: &JpegImage) -> Vec<(usize, usize)> {
    image
        .scan
        .components
        .iter()
        .flat_map(|sc| {
            (0..image.coefficients[sc.component].blocks.len()).map(move |b| (sc.component, b))
        })
        .collect()
}

/// Huang2016 block order: descending zero-AC count, stable on the scan
/// traversal order.
fn huang_order(image: &JpegImage) -> Vec<(usize, usize)> {
    let mut order = scan_order_blocks(image);
    order.sort_by_key(|&(comp, b)| {
        std::cmp::Reverse(image.coefficients[comp].blocks[b].count_zero_ac())
    });
    order
}

/// Embeds the framed payload and returns the marked image with a report.
/// DC and zero coefficients are never altered.
pub fn embed_image(
    image: JpegImage,
    payload: &BitSeq,
    scheme: SchemeId,
) -> Result<(JpegImage, EmbedReport), EmbedError> {
    let capacity_bits = capacity(&image, scheme);
    let framed = frame(payload).map_err(|_| EmbedError::PayloadTooLarge {
        framed_bits: payload.len() as u64 + FRAME_HEADER_BITS,
        capacity_bits,
    })?;
    if framed.len() as u64 > capacity_bits {
        return Err(EmbedError::PayloadTooLarge {
            framed_bits: framed.len() as u64,
            capacity_bits,
        });
    }
    match scheme {
        SchemeId::Proposed | SchemeId::Liu2018 => {
            embed_parity(image, &framed, scheme, capacity_bits)
        }
        SchemeId::Huang2016 => embed_huang(image, &framed, capacity_bits),
    }
}

fn embed_parity(
    mut image: JpegImage,
    framed: &BitSeq,
    scheme: SchemeId,
    capacity_bits: u64,
) -> Result<(JpegImage, EmbedReport), EmbedError> {
    let order = scan_order_blocks(&image);
    let mut bit_idx = 0usize;
    let mut modified = 0u64;
    'blocks: for (comp, b) in order {
        let block = &mut image.coefficients[comp].blocks[b];
        for k in 1..64 {
            let c = block.coeffs[k] as i32;
            if c == 0 {
                continue;
            }
            if bit_idx >= framed.len() {
                break 'blocks;
            }
            let bit = framed.get(bit_idx).unwrap();
            bit_idx += 1;
            let marked = embed_coeff(scheme, c, bit).map_err(|e| overflow_error(e, comp, b, k))?;
            if marked != c {
                modified += 1;
            }
            block.coeffs[k] = marked as i16;
        }
    }
    let report = EmbedReport {
        scheme,
        capacity_bits,
        bits_embedded: framed.len() as u64,
        coeffs_modified: modified,
        coeffs_visited: bit_idx as u64,
    };
    Ok((image, report))
}

fn embed_huang(
    mut image: JpegImage,
    framed: &BitSeq,
    capacity_bits: u64,
) -> Result<(JpegImage, EmbedReport), EmbedError> {
    let order = huang_order(&image);
    let mut bit_idx = 0usize;
    let mut modified = 0u64;
    let mut visited = 0u64;
    for (comp, b) in order {
        let block = &mut image.coefficients[comp].blocks[b];
        for k in 1..64 {
            let c = block.coeffs[k] as i32;
            if c == 0 {
                continue;
            }
            visited += 1;
            if c.abs() == 1 {
                if bit_idx < framed.len() {
                    let bit = framed.get(bit_idx).unwrap();
                    bit_idx += 1;
                    // |marked| <= 2, overflow is impossible here.
                    let marked = embed_coeff(SchemeId::Huang2016, c, bit).unwrap();
                    if marked != c {
                        modified += 1;
                    }
                    block.coeffs[k] = marked as i16;
                }
            } else {
                let shifted = shift_coeff(c).map_err(|e| overflow_error(e, comp, b, k))?;
                modified += 1;
                block.coeffs[k] = shifted as i16;
            }
        }
        // The block holding the last framed bit is still shifted in full;
        // later blocks stay untouched.
        if bit_idx >= framed.len() {
            break;
        }
    }
    let report = EmbedReport {
        scheme: SchemeId::Huang2016,
        capacity_bits,
        bits_embedded: framed.len() as u64,
        coeffs_modified: modified,
        coeffs_visited: visited,
    };
    Ok((image, report))
}

fn overflow_error(e: CoeffError, component: usize, block: usize, index: usize) -> EmbedError {
    match e {
        CoeffError::Overflow(value) => EmbedError::Overflow {
            component,
            block,
            index,
            value,
        },
        // Zero and domain violations are filtered out by the traversal.
        other => unreachable!("unexpected coefficient error: {other:?}"),
    }
}

/// Tracks the length frame and payload during extraction.
struct FrameReader {
    header: u64,
    header_bits: u8,
    declared: Option<u64>,
    payload: BitSeq,
}

impl FrameReader {
    fn new() -> Self {
        FrameReader {
            header: 0,
            header_bits: 0,
            declared: None,
            payload: BitSeq::new(),
        }
    }

    fn feed(&mut self, bit: bool) {
        if self.header_bits < 32 {
            self.header = (self.header << 1) | bit as u64;
            self.header_bits += 1;
            if self.header_bits == 32 {
                self.declared = Some(self.header);
            }
        } else {
            self.payload.push(bit);
        }
    }

    fn complete(&self) -> bool {
        matches!(self.declared, Some(d) if self.payload.len() as u64 == d)
    }
}

/// Blind extraction: recovers the payload and restores the image to its
/// pre-embedding coefficients.
pub fn extract_image(
    marked: JpegImage,
    scheme: SchemeId,
) -> Result<(BitSeq, JpegImage), ExtractError> {
    match scheme {
        SchemeId::Proposed | SchemeId::Liu2018 => extract_parity(marked, scheme),
        SchemeId::Huang2016 => extract_huang(marked),
    }
}

fn extract_parity(
    mut image: JpegImage,
    scheme: SchemeId,
) -> Result<(BitSeq, JpegImage), ExtractError> {
    let order = scan_order_blocks(&image);
    let mut reader = FrameReader::new();
    'blocks: for (comp, b) in order {
        let block = &mut image.coefficients[comp].blocks[b];
        for k in 1..64 {
            let c = block.coeffs[k] as i32;
            if c == 0 {
                continue;
            }
            let (bit, restored) = extract_coeff(scheme, c).unwrap();
            block.coeffs[k] = restored as i16;
            reader.feed(bit.unwrap());
            if reader.complete() {
                break 'blocks;
            }
        }
    }
    finish_extraction(reader, image)
}

fn extract_huang(mut image: JpegImage) -> Result<(BitSeq, JpegImage), ExtractError> {
    let order = huang_order(&image);
    let mut reader = FrameReader::new();
    let mut done = false;
    for (comp, b) in order {
        let block = &mut image.coefficients[comp].blocks[b];
        for k in 1..64 {
            let c = block.coeffs[k] as i32;
            if c == 0 {
                continue;
            }
            if !done {
                let (bit, restored) = extract_coeff(SchemeId::Huang2016, c).unwrap();
                block.coeffs[k] = restored as i16;
                if let Some(bit) = bit {
                    reader.feed(bit);
                    done = reader.complete();
                }
            } else if c.abs() > 1 {
                // Tail of the final embedded block: undo the shift. Embedding
                // cannot leave magnitude 2 past the exhaustion point, so this
                // never collides with a carried bit.
                block.coeffs[k] = (c - c.signum()) as i16;
            }
        }
        if done {
            break;
        }
    }
    if !done && !reader.complete() {
        return Err(ExtractError::FrameCorrupt(frame_shortfall(&reader)));
    }
    finish_extraction(reader, image)
}

fn finish_extraction(
    reader: FrameReader,
    image: JpegImage,
) -> Result<(BitSeq, JpegImage), ExtractError> {
    if reader.complete() {
        Ok((reader.payload, image))
    } else {
        Err(ExtractError::FrameCorrupt(frame_shortfall(&reader)))
    }
}

fn frame_shortfall(reader: &FrameReader) -> String {
    match reader.declared {
        None => format!(
            "coefficient stream ended inside the length header ({} of 32 bits)",
            reader.header_bits
        ),
        Some(d) => format!(
            "length frame declares {d} bits but only {} could be read",
            reader.payload.len()
        ),
    }
}
