//! Coefficient-level JPEG transcoding and reversible data hiding.
//!
//! This crate parses baseline JPEG bitstreams down to their quantized DCT
//! coefficients, embeds payloads reversibly with one of three schemes
//! ([`rdh::SchemeId`]), serializes coefficients back to standard bitstreams
//! (optionally with optimal Huffman tables), and measures the quality and
//! file-size cost of embedding.
//!
//! Everything is pure-functional over immutable values: parse, transform,
//! serialize. Bit-exact reversibility is the core contract — extracting from
//! a marked image yields the exact payload and the exact original
//! coefficients.

pub mod jpeg;
pub mod metrics;
pub mod payload;
pub mod pgm;
pub mod rdh;

pub use jpeg::{
    decode_components, decode_to_pixels, encode_from_pixels, parse_jpeg, serialize_jpeg,
    CoeffBlock, JpegImage, PixelPlane, TablePolicy,
};
pub use metrics::{measure, psnr, MetricsReport};
pub use payload::{frame, random_payload, unframe, BitSeq};
pub use rdh::{capacity, embed_image, extract_image, EmbedReport, SchemeId};
