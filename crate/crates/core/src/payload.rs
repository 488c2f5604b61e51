//! Payload bit sequences: length framing, byte conversion, and seeded
//! random generation for reproducible benchmarks.
//!
//! The frame layout is a 32-bit big-endian payload length in bits followed
//! by the payload itself; extraction reads the header first and stops after
//! exactly the declared number of bits.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

/// Name of the payload PRNG, recorded in benchmark metadata.
pub const PRNG_NAME: &str = "chacha20";

pub const FRAME_HEADER_BITS: u64 = 32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PayloadError {
    #[error("payload of {0} bits exceeds the 32-bit length frame")]
    TooLong(u64),
    #[error("length frame corrupt: {0}")]
    FrameCorrupt(String),
}

/// An ordered sequence of payload bits.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BitSeq {
    bits: Vec<bool>,
}

impl BitSeq {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitSeq { bits }
    }

    /// Unpacks bytes MSB-first.
    pub fn from_bytes(bytes: &[u8]) -> Self {
        let mut bits = Vec::with_capacity(bytes.len() * 8);
        for &b in bytes {
            for i in (0..8).rev() {
                bits.push((b >> i) & 1 == 1);
            }
        }
        BitSeq { bits }
    }

    /// Packs bits MSB-first, zero-padding the final byte.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.bits.len().div_ceil(8)];
        for (i, &bit) in self.bits.iter().enumerate() {
            if bit {
                out[i / 8] |= 0x80 >> (i % 8);
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn get(&self, idx: usize) -> Option<bool> {
        self.bits.get(idx).copied()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }
}

/// Prepends the 32-bit big-endian bit-length header.
pub fn frame(payload: &BitSeq) -> Result<BitSeq, PayloadError> {
    let len = payload.len() as u64;
    if len >= 1 << 32 {
        return Err(PayloadError::TooLong(len));
    }
    let mut bits = Vec::with_capacity(32 + payload.len());
    for i in (0..32).rev() {
        bits.push((len >> i) & 1 == 1);
    }
    bits.extend(payload.iter());
    Ok(BitSeq { bits })
}

/// Reads the header and returns exactly the declared payload bits.
pub fn unframe(stream: &BitSeq) -> Result<BitSeq, PayloadError> {
    if stream.len() < 32 {
        return Err(PayloadError::FrameCorrupt(format!(
            "stream of {} bits is shorter than the header",
            stream.len()
        )));
    }
    let mut declared = 0u64;
    for i in 0..32 {
        declared = (declared << 1) | stream.get(i).unwrap() as u64;
    }
    let available = (stream.len() - 32) as u64;
    if declared > available {
        return Err(PayloadError::FrameCorrupt(format!(
            "declared {declared} payload bits but only {available} follow"
        )));
    }
    Ok(BitSeq {
        bits: stream.as_slice()[32..32 + declared as usize].to_vec(),
    })
}

/// Deterministic pseudorandom payload: ChaCha20 keyed by `seed`, bits taken
/// MSB-first from the byte stream, so a longer request extends a shorter one.
pub fn random_payload(length_bits: usize, seed: u64) -> BitSeq {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut bytes = vec![0u8; length_bits.div_ceil(8)];
    rng.fill_bytes(&mut bytes);
    let mut seq = BitSeq::from_bytes(&bytes);
    seq.bits.truncate(length_bits);
    seq
}
