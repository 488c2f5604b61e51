//! Baseline JPEG structural model and coefficient-level codec.
//!
//! The pipeline is lossless at the coefficient level:
//!
//! ```text
//! bytes -> parse_jpeg -> JpegImage (quantized coefficients) -> serialize_jpeg -> bytes
//! ```
//!
//! Coefficients are stored exactly as entropy-coded (quantized, zigzag order,
//! DC prediction resolved). `decode_to_pixels` and `encode_from_pixels` bridge
//! to the pixel domain for quality measurement and corpus generation.

pub mod bitio;
pub mod dct;
pub mod huffman;
pub mod marker;
pub mod parser;
pub mod pixels;
pub mod scan;
pub mod tables;
pub mod writer;

pub use parser::parse_jpeg;
pub use pixels::{decode_components, decode_to_pixels, encode_from_pixels, PixelPlane};
pub use writer::{serialize_jpeg, TablePolicy};

use thiserror::Error;

/// Largest quantized AC magnitude representable by a baseline size category.
pub const MAX_AC_MAGNITUDE: i32 = 1023;
/// Largest DC difference magnitude representable by a baseline size category.
pub const MAX_DC_DIFF_MAGNITUDE: i32 = 2047;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported format at byte {offset}: {detail}")]
    UnsupportedFormat { offset: usize, detail: String },
    #[error("truncated stream at byte {offset}")]
    TruncatedStream { offset: usize },
    #[error("invalid Huffman code at byte {offset}")]
    InvalidHuffmanCode { offset: usize },
    #[error("marker syntax error at byte {offset}: {detail}")]
    MarkerSyntax { offset: usize, detail: String },
    #[error(
        "coefficient exceeds baseline size categories \
         (component {component}, block {block}, zigzag {index}, value {value})"
    )]
    CategoryOverflow {
        component: usize,
        block: usize,
        index: usize,
        value: i32,
    },
    #[error("{class} Huffman table {table} has no code for symbol 0x{symbol:02X}")]
    MissingCode {
        class: &'static str,
        table: u8,
        symbol: u8,
    },
}

/// One 8x8 block of quantized DCT coefficients in zigzag order.
/// Index 0 is the DC coefficient; indices 1..=63 are AC coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoeffBlock {
    pub coeffs: [i16; 64],
}

impl CoeffBlock {
    pub const ZERO: CoeffBlock = CoeffBlock { coeffs: [0; 64] };

    pub fn dc(&self) -> i16 {
        self.coeffs[0]
    }

    /// AC coefficients in zigzag order (indices 1..=63).
    pub fn ac(&self) -> &[i16] {
        &self.coeffs[1..]
    }

    pub fn count_nonzero_ac(&self) -> usize {
        self.ac().iter().filter(|&&c| c != 0).count()
    }

    pub fn count_zero_ac(&self) -> usize {
        63 - self.count_nonzero_ac()
    }
}

impl Default for CoeffBlock {
    fn default() -> Self {
        Self::ZERO
    }
}

/// Quantization table in zigzag order. The DQT precision field is not
/// modeled; the writer derives it from the value range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantTable {
    pub values: [u16; 64],
}

/// A Huffman table definition as carried in a DHT segment:
/// 16 code-length counts plus the symbol list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HuffmanSpec {
    pub counts: [u8; 16],
    pub symbols: Vec<u8>,
}

impl HuffmanSpec {
    pub fn new(counts: [u8; 16], symbols: Vec<u8>) -> Self {
        debug_assert_eq!(
            counts.iter().map(|&c| c as usize).sum::<usize>(),
            symbols.len()
        );
        HuffmanSpec { counts, symbols }
    }
}

/// One component entry of the SOF0 header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameComponent {
    pub id: u8,
    pub h_sampling: u8,
    pub v_sampling: u8,
    pub quant_table: u8,
}

/// SOF0 frame header: geometry and component layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameInfo {
    pub precision: u8,
    pub width: u16,
    pub height: u16,
    pub components: Vec<FrameComponent>,
}

impl FrameInfo {
    pub fn h_max(&self) -> u8 {
        self.components
            .iter()
            .map(|c| c.h_sampling)
            .max()
            .unwrap_or(1)
    }

    pub fn v_max(&self) -> u8 {
        self.components
            .iter()
            .map(|c| c.v_sampling)
            .max()
            .unwrap_or(1)
    }

    pub fn mcus_wide(&self) -> usize {
        ceil_div(self.width as usize, 8 * self.h_max() as usize)
    }

    pub fn mcus_high(&self) -> usize {
        ceil_div(self.height as usize, 8 * self.v_max() as usize)
    }

    /// Pixel extent of component `idx` before block padding.
    pub fn component_size(&self, idx: usize) -> (usize, usize) {
        let c = &self.components[idx];
        let w = ceil_div(
            self.width as usize * c.h_sampling as usize,
            self.h_max() as usize,
        );
        let h = ceil_div(
            self.height as usize * c.v_sampling as usize,
            self.v_max() as usize,
        );
        (w, h)
    }
}

/// Per-component scan parameters from the SOS header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanComponent {
    /// Index into `FrameInfo::components`.
    pub component: usize,
    pub dc_table: u8,
    pub ac_table: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanInfo {
    pub components: Vec<ScanComponent>,
}

impl ScanInfo {
    /// A scan with more than one component stores its blocks MCU-interleaved.
    pub fn is_interleaved(&self) -> bool {
        self.components.len() > 1
    }
}

/// The quantized-coefficient grid of one component, covering the
/// entropy-coded extent (MCU-padded for interleaved scans).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPlane {
    pub blocks_wide: usize,
    pub blocks_high: usize,
    pub blocks: Vec<CoeffBlock>,
}

impl ComponentPlane {
    pub fn new(blocks_wide: usize, blocks_high: usize) -> Self {
        ComponentPlane {
            blocks_wide,
            blocks_high,
            blocks: vec![CoeffBlock::ZERO; blocks_wide * blocks_high],
        }
    }

    pub fn block(&self, bx: usize, by: usize) -> &CoeffBlock {
        &self.blocks[by * self.blocks_wide + bx]
    }

    pub fn block_mut(&mut self, bx: usize, by: usize) -> &mut CoeffBlock {
        &mut self.blocks[by * self.blocks_wide + bx]
    }
}

/// An APPn or COM segment preserved verbatim: `marker` is the byte after
/// 0xFF (0xE0..=0xEF or 0xFE), `data` the payload after the length field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppSegment {
    pub marker: u8,
    pub data: Vec<u8>,
}

/// Full structural model of a baseline JPEG. Immutable in normal use;
/// embedding pipelines clone and rewrite the coefficient planes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JpegImage {
    pub frame: FrameInfo,
    pub quant_tables: [Option<QuantTable>; 4],
    pub dc_tables: [Option<HuffmanSpec>; 4],
    pub ac_tables: [Option<HuffmanSpec>; 4],
    pub restart_interval: u32,
    pub scan: ScanInfo,
    /// One coefficient plane per frame component, in frame order.
    pub coefficients: Vec<ComponentPlane>,
    pub app_segments: Vec<AppSegment>,
}

impl JpegImage {
    pub fn width(&self) -> usize {
        self.frame.width as usize
    }

    pub fn height(&self) -> usize {
        self.frame.height as usize
    }

    /// Coefficient-grid extent of component `idx` as entropy-coded:
    /// MCU-padded for interleaved scans, block-padded otherwise.
    pub fn coded_block_extent(&self, idx: usize) -> (usize, usize) {
        scan::coded_extent(&self.frame, self.scan.is_interleaved(), idx)
    }

    /// Total nonzero AC coefficients across all components.
    pub fn count_nonzero_ac(&self) -> u64 {
        self.coefficients
            .iter()
            .flat_map(|p| p.blocks.iter())
            .map(|b| b.count_nonzero_ac() as u64)
            .sum()
    }

    /// Total AC coefficients with magnitude exactly 1 across all components.
    pub fn count_unit_ac(&self) -> u64 {
        self.coefficients
            .iter()
            .flat_map(|p| p.blocks.iter())
            .flat_map(|b| b.ac().iter())
            .filter(|&&c| c == 1 || c == -1)
            .count() as u64
    }
}

pub(crate) fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}
