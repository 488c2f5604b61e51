//! Shared test fixtures: a deterministic six-image 512x512 grayscale corpus
//! with varied texture statistics, encoded at QF 50/70/90 through the
//! canonical pipeline.

use jrdh_core::jpeg::{
    encode_from_pixels, parse_jpeg, serialize_jpeg, JpegImage, PixelPlane, TablePolicy,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::sync::OnceLock;

pub const SIZE: usize = 512;
pub const QUALITY_FACTORS: [u8; 3] = [50, 70, 90];

pub struct CorpusEntry {
    pub name: &'static str,
    pub qf: u8,
    /// Canonical bitstream: produced by this toolkit's serializer.
    pub bytes: Vec<u8>,
    /// The canonical image: `parse_jpeg(bytes)`.
    pub image: JpegImage,
}

fn smooth_field(
    rng: &mut ChaCha20Rng,
    n: usize,
    count: usize,
    sigma: (f64, f64),
    amp: f64,
) -> Vec<f64> {
    let mut field = vec![0.0f64; n * n];
    for _ in 0..count {
        let cx = rng.gen_range(0.0..n as f64);
        let cy = rng.gen_range(0.0..n as f64);
        let s = rng.gen_range(sigma.0..sigma.1);
        let a = rng.gen_range(-amp..amp);
        let reach = (3.0 * s) as isize;
        let (icx, icy) = (cx as isize, cy as isize);
        for y in (icy - reach).max(0)..(icy + reach).min(n as isize) {
            for x in (icx - reach).max(0)..(icx + reach).min(n as isize) {
                let dx = x as f64 - cx;
                let dy = y as f64 - cy;
                field[y as usize * n + x as usize] +=
                    a * (-(dx * dx + dy * dy) / (2.0 * s * s)).exp();
            }
        }
    }
    field
}

fn finalize(values: Vec<f64>, n: usize) -> PixelPlane {
    let samples = values
        .into_iter()
        .map(|v| v.round().clamp(0.0, 255.0) as u8)
        .collect();
    PixelPlane::new(n, n, samples)
}

/// Smooth sky-and-slope image with mild detail: the sparsest of the set.
pub fn gen_gradient(n: usize) -> PixelPlane {
    let mut rng = ChaCha20Rng::seed_from_u64(0x67726164);
    let mut v = vec![0.0f64; n * n];
    for y in 0..n {
        for x in 0..n {
            let (xf, yf) = (x as f64, y as f64);
            v[y * n + x] = 70.0
                + 90.0 * (xf / n as f64)
                + 50.0 * (yf / n as f64)
                + 12.0 * (xf * 0.043).sin() * (yf * 0.031).cos()
                + 9.0 * (xf * 0.19 + yf * 0.12).sin()
                + rng.gen_range(-5.5..5.5);
        }
    }
    finalize(v, n)
}

/// Portrait-like image built from Gaussian blobs plus fine detail; its
/// QF-50 nonzero-AC count sits near the published Lena figure.
pub fn gen_portrait(n: usize) -> PixelPlane {
    let mut rng = ChaCha20Rng::seed_from_u64(0x706f7274);
    let blobs = smooth_field(&mut rng, n, 60, (12.0, 64.0), 55.0);
    let detail = smooth_field(&mut rng, n, 1900, (1.2, 5.0), 42.0);
    let mut v = vec![0.0f64; n * n];
    for i in 0..n * n {
        v[i] = 125.0 + blobs[i] + detail[i] + rng.gen_range(-11.0..11.0);
    }
    finalize(v, n)
}

/// Fur-like high-frequency texture: the densest coefficient population.
pub fn gen_texture(n: usize) -> PixelPlane {
    let mut rng = ChaCha20Rng::seed_from_u64(0x74657874);
    let mut v = vec![0.0f64; n * n];
    for y in 0..n {
        for x in 0..n {
            let (xf, yf) = (x as f64, y as f64);
            v[y * n + x] = 128.0
                + 28.0 * rng.gen_range(-1.0..1.0)
                + 24.0 * (xf * 0.9).sin() * (yf * 0.7).cos()
                + 16.0 * ((xf + 2.0 * yf) * 0.21).sin();
        }
    }
    finalize(v, n)
}

/// Hard-edged rectangles over a gradient: ringing-heavy blocks.
pub fn gen_shapes(n: usize) -> PixelPlane {
    let mut rng = ChaCha20Rng::seed_from_u64(0x73686170);
    let mut v = vec![0.0f64; n * n];
    for y in 0..n {
        for x in 0..n {
            v[y * n + x] = 60.0 + 120.0 * (x as f64 / n as f64);
        }
    }
    for _ in 0..45 {
        let x0 = rng.gen_range(0..n);
        let y0 = rng.gen_range(0..n);
        let w = rng.gen_range(8..n / 4);
        let h = rng.gen_range(8..n / 4);
        let level = rng.gen_range(20.0..235.0);
        for y in y0..(y0 + h).min(n) {
            for x in x0..(x0 + w).min(n) {
                v[y * n + x] = level;
            }
        }
    }
    let mut rng2 = ChaCha20Rng::seed_from_u64(0x73686171);
    for (i, val) in v.iter_mut().enumerate() {
        let (x, y) = ((i % n) as f64, (i / n) as f64);
        *val += 6.0 * (x * 0.27).sin() * (y * 0.33).cos() + rng2.gen_range(-5.0..5.0);
    }
    finalize(v, n)
}

/// Interfering sinusoids: mid-frequency energy.
pub fn gen_waves(n: usize) -> PixelPlane {
    let mut rng = ChaCha20Rng::seed_from_u64(0x77617665);
    let mut v = vec![0.0f64; n * n];
    for y in 0..n {
        for x in 0..n {
            let (xf, yf) = (x as f64, y as f64);
            v[y * n + x] = 128.0
                + 50.0 * (xf * 0.11 + yf * 0.05).sin()
                + 30.0 * (xf * 0.023 - yf * 0.19).cos()
                + 18.0 * ((xf + yf) * 0.31).sin()
                + 8.0 * (xf * 0.51).sin() * (yf * 0.47).cos()
                + rng.gen_range(-7.0..7.0);
        }
    }
    finalize(v, n)
}

/// Blobs, a few rectangles and moderate noise mixed together.
pub fn gen_mixed(n: usize) -> PixelPlane {
    let mut rng = ChaCha20Rng::seed_from_u64(0x6d697865);
    let blobs = smooth_field(&mut rng, n, 45, (10.0, 50.0), 60.0);
    let detail = smooth_field(&mut rng, n, 350, (2.0, 8.0), 32.0);
    let mut v = vec![0.0f64; n * n];
    for i in 0..n * n {
        v[i] = 120.0 + blobs[i] + detail[i];
    }
    for _ in 0..10 {
        let x0 = rng.gen_range(0..n);
        let y0 = rng.gen_range(0..n);
        let w = rng.gen_range(20..n / 4);
        let h = rng.gen_range(20..n / 4);
        let delta = rng.gen_range(-50.0..50.0);
        for y in y0..(y0 + h).min(n) {
            for x in x0..(x0 + w).min(n) {
                v[y * n + x] += delta;
            }
        }
    }
    for val in v.iter_mut() {
        *val += rng.gen_range(-11.0..11.0);
    }
    finalize(v, n)
}

pub fn source_planes() -> &'static [(&'static str, PixelPlane)] {
    static PLANES: OnceLock<Vec<(&'static str, PixelPlane)>> = OnceLock::new();
    PLANES.get_or_init(|| {
        vec![
            ("gradient", gen_gradient(SIZE)),
            ("portrait", gen_portrait(SIZE)),
            ("texture", gen_texture(SIZE)),
            ("shapes", gen_shapes(SIZE)),
            ("waves", gen_waves(SIZE)),
            ("mixed", gen_mixed(SIZE)),
        ]
    })
}

/// The full 6-image x 3-QF canonical corpus.
pub fn corpus() -> &'static [CorpusEntry] {
    static CORPUS: OnceLock<Vec<CorpusEntry>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut entries = Vec::new();
        for (name, plane) in source_planes() {
            for &qf in &QUALITY_FACTORS {
                let encoded = encode_from_pixels(plane, qf);
                let bytes =
                    serialize_jpeg(&encoded, TablePolicy::RebuildOptimal).expect("serialize");
                let image = parse_jpeg(&bytes).expect("parse back");
                entries.push(CorpusEntry {
                    name,
                    qf,
                    bytes,
                    image,
                });
            }
        }
        entries
    })
}
