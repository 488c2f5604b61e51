//! Coefficient-to-pixel bridge: reference decode for quality measurement and
//! pixel-to-coefficient encode for corpus generation.

use super::dct::{forward_2d, inverse_2d};
use super::tables::{
    default_luma_ac, default_luma_dc, scaled_quant_table, ANNEX_K_LUMA_QUANT, ZIGZAG_TO_NATURAL,
};
use super::{
    ceil_div, AppSegment, ComponentPlane, FrameComponent, FrameInfo, HuffmanSpec, JpegImage,
    QuantTable, ScanComponent, ScanInfo,
};

/// A single 8-bit sample plane, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelPlane {
    pub width: usize,
    pub height: usize,
    pub samples: Vec<u8>,
}

impl PixelPlane {
    pub fn new(width: usize, height: usize, samples: Vec<u8>) -> Self {
        assert_eq!(samples.len(), width * height, "sample count mismatch");
        PixelPlane {
            width,
            height,
            samples,
        }
    }

    pub fn sample(&self, x: usize, y: usize) -> u8 {
        self.samples[y * self.width + x]
    }
}

/// Decodes every component to its own plane at component resolution
/// (chroma stays subsampled). Dequantize, inverse DCT in f64, +128 level
/// shift, round half away from zero, clamp to [0, 255].
///
/// Panics if the image references an undefined quantization table; parsed
/// images always satisfy this.
pub fn decode_components(image: &JpegImage) -> Vec<PixelPlane> {
    (0..image.frame.components.len())
        .map(|idx| decode_component(image, idx))
        .collect()
}

/// Decodes the first (luminance) component.
pub fn decode_to_pixels(image: &JpegImage) -> PixelPlane {
    decode_component(image, 0)
}

fn decode_component(image: &JpegImage, idx: usize) -> PixelPlane {
    let comp = &image.frame.components[idx];
    let quant = image.quant_tables[comp.quant_table as usize]
        .as_ref()
        .expect("component references an undefined quantization table");
    let plane = &image.coefficients[idx];
    let (width, height) = image.frame.component_size(idx);
    let mut samples = vec![0u8; width * height];

    for by in 0..plane.blocks_high {
        for bx in 0..plane.blocks_wide {
            let block = plane.block(bx, by);
            let mut freq = [0.0f64; 64];
            for zz in 0..64 {
                let dq = block.coeffs[zz] as f64 * quant.values[zz] as f64;
                freq[ZIGZAG_TO_NATURAL[zz]] = dq;
            }
            let spatial = inverse_2d(&freq);
            for y in 0..8 {
                let py = by * 8 + y;
                if py >= height {
                    break;
                }
                for x in 0..8 {
                    let px = bx * 8 + x;
                    if px >= width {
                        break;
                    }
                    let v = (spatial[y * 8 + x] + 128.0).round().clamp(0.0, 255.0);
                    samples[py * width + px] = v as u8;
                }
            }
        }
    }

    PixelPlane {
        width,
        height,
        samples,
    }
}

/// Standard JFIF 1.01 APP0 payload: 1:1 aspect, no thumbnail.
pub(crate) fn jfif_app0() -> AppSegment {
    AppSegment {
        marker: super::marker::APP0,
        data: vec![
            b'J', b'F', b'I', b'F', 0x00, 0x01, 0x01, 0x00, 0x00, 0x01, 0x00, 0x01, 0x00, 0x00,
        ],
    }
}

/// Encodes a grayscale plane to quantized coefficients with the Annex K
/// luminance table scaled by the IJG quality formula. The attached Huffman
/// tables are the Annex K.3 defaults; serialize with `RebuildOptimal` to
/// replace them with measured ones.
pub fn encode_from_pixels(plane: &PixelPlane, quality: u8) -> JpegImage {
    assert!((1..=100).contains(&quality), "quality must be in [1, 100]");
    assert!(
        plane.width > 0 && plane.width <= u16::MAX as usize,
        "width out of range"
    );
    assert!(
        plane.height > 0 && plane.height <= u16::MAX as usize,
        "height out of range"
    );

    let quant_values = scaled_quant_table(&ANNEX_K_LUMA_QUANT, quality);
    let blocks_wide = ceil_div(plane.width, 8);
    let blocks_high = ceil_div(plane.height, 8);
    let mut coeff_plane = ComponentPlane::new(blocks_wide, blocks_high);

    for by in 0..blocks_high {
        for bx in 0..blocks_wide {
            let mut spatial = [0.0f64; 64];
            for y in 0..8 {
                // Edge blocks replicate the last row/column.
                let py = (by * 8 + y).min(plane.height - 1);
                for x in 0..8 {
                    let px = (bx * 8 + x).min(plane.width - 1);
                    spatial[y * 8 + x] = plane.sample(px, py) as f64 - 128.0;
                }
            }
            let freq = forward_2d(&spatial);
            let block = coeff_plane.block_mut(bx, by);
            for zz in 0..64 {
                let q = quant_values[zz] as f64;
                block.coeffs[zz] = (freq[ZIGZAG_TO_NATURAL[zz]] / q).round() as i16;
            }
        }
    }

    let mut quant_tables: [Option<QuantTable>; 4] = Default::default();
    quant_tables[0] = Some(QuantTable {
        values: quant_values,
    });
    let mut dc_tables: [Option<HuffmanSpec>; 4] = Default::default();
    dc_tables[0] = Some(default_luma_dc());
    let mut ac_tables: [Option<HuffmanSpec>; 4] = Default::default();
    ac_tables[0] = Some(default_luma_ac());

    JpegImage {
        frame: FrameInfo {
            precision: 8,
            width: plane.width as u16,
            height: plane.height as u16,
            components: vec![FrameComponent {
                id: 1,
                h_sampling: 1,
                v_sampling: 1,
                quant_table: 0,
            }],
        },
        quant_tables,
        dc_tables,
        ac_tables,
        restart_interval: 0,
        scan: ScanInfo {
            components: vec![ScanComponent {
                component: 0,
                dc_table: 0,
                ac_table: 0,
            }],
        },
        coefficients: vec![coeff_plane],
        app_segments: vec![jfif_app0()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jpeg::CoeffBlock;

    fn gray_image_from_block(block: CoeffBlock, quant: [u16; 64]) -> JpegImage {
        let mut img = encode_from_pixels(&PixelPlane::new(8, 8, vec![128; 64]), 50);
        img.quant_tables[0] = Some(QuantTable { values: quant });
        img.coefficients[0].blocks[0] = block;
        img
    }

    #[test]
    fn all_zero_block_decodes_to_mid_gray() {
        let img = gray_image_from_block(CoeffBlock::ZERO, [1u16; 64]);
        let plane = decode_to_pixels(&img);
        assert!(plane.samples.iter().all(|&s| s == 128));
    }

    #[test]
    fn dc_only_block_decodes_to_level_shifted_constant() {
        let mut block = CoeffBlock::ZERO;
        block.coeffs[0] = 8;
        let img = gray_image_from_block(block, [1u16; 64]);
        let plane = decode_to_pixels(&img);
        // Orthonormal scaling: DC of 8 contributes 8/8 = 1 per sample.
        assert!(plane.samples.iter().all(|&s| s == 129));
    }

    #[test]
    fn mid_gray_image_has_zero_ac_at_any_quality() {
        let plane = PixelPlane::new(24, 16, vec![128; 24 * 16]);
        for q in [1u8, 25, 50, 75, 100] {
            let img = encode_from_pixels(&plane, q);
            assert_eq!(img.count_nonzero_ac(), 0, "q={q}");
            for b in &img.coefficients[0].blocks {
                assert_eq!(b.dc(), 0);
            }
        }
    }

    #[test]
    fn encode_decode_is_near_lossless_at_q100() {
        let mut samples = Vec::with_capacity(32 * 32);
        for y in 0..32usize {
            for x in 0..32usize {
                samples.push(((x * 3 + y * 5) % 200 + 20) as u8);
            }
        }
        let plane = PixelPlane::new(32, 32, samples);
        let img = encode_from_pixels(&plane, 100);
        let back = decode_to_pixels(&img);
        for (a, b) in plane.samples.iter().zip(&back.samples) {
            assert!((*a as i32 - *b as i32).abs() <= 1);
        }
    }

    #[test]
    fn odd_dimensions_pad_and_crop() {
        let plane = PixelPlane::new(13, 9, vec![77; 13 * 9]);
        let img = encode_from_pixels(&plane, 90);
        assert_eq!(img.coefficients[0].blocks_wide, 2);
        assert_eq!(img.coefficients[0].blocks_high, 2);
        let back = decode_to_pixels(&img);
        assert_eq!(back.width, 13);
        assert_eq!(back.height, 9);
        // Constant image survives exactly at any quality.
        assert!(back.samples.iter().all(|&s| (s as i32 - 77).abs() <= 1));
    }
}
