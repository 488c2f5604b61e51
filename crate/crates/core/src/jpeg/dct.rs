//! Reference floating-point 8x8 DCT pair (separable, orthonormal, f64).
//! Correctness over speed: this backs quality measurement and corpus
//! generation, not a production decode path.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// basis[u][x] = c(u)/2 * cos((2x+1) u pi / 16), c(0) = 1/sqrt(2), else 1.
/// The matrix is orthonormal: forward is B f B^T, inverse is B^T F B.
fn basis() -> &'static [[f64; 8]; 8] {
    static BASIS: OnceLock<[[f64; 8]; 8]> = OnceLock::new();
    BASIS.get_or_init(|| {
        let mut b = [[0.0f64; 8]; 8];
        for (u, row) in b.iter_mut().enumerate() {
            let cu = if u == 0 { 1.0 / 2f64.sqrt() } else { 1.0 };
            for (x, e) in row.iter_mut().enumerate() {
                *e = 0.5 * cu * ((2 * x + 1) as f64 * u as f64 * PI / 16.0).cos();
            }
        }
        b
    })
}

/// Forward 2-D DCT of a natural-order (row-major) spatial block.
pub fn forward_2d(spatial: &[f64; 64]) -> [f64; 64] {
    let b = basis();
    let mut rows = [0.0f64; 64];
    for y in 0..8 {
        for u in 0..8 {
            let mut acc = 0.0;
            for x in 0..8 {
                acc += b[u][x] * spatial[y * 8 + x];
            }
            rows[y * 8 + u] = acc;
        }
    }
    let mut out = [0.0f64; 64];
    for v in 0..8 {
        for u in 0..8 {
            let mut acc = 0.0;
            for y in 0..8 {
                acc += b[v][y] * rows[y * 8 + u];
            }
            out[v * 8 + u] = acc;
        }
    }
    out
}

/// Inverse 2-D DCT to a natural-order (row-major) spatial block.
pub fn inverse_2d(freq: &[f64; 64]) -> [f64; 64] {
    let b = basis();
    let mut cols = [0.0f64; 64];
    for u in 0..8 {
        for y in 0..8 {
            let mut acc = 0.0;
            for v in 0..8 {
                acc += b[v][y] * freq[v * 8 + u];
            }
            cols[y * 8 + u] = acc;
        }
    }
    let mut out = [0.0f64; 64];
    for y in 0..8 {
        for x in 0..8 {
            let mut acc = 0.0;
            for u in 0..8 {
                acc += b[u][x] * cols[y * 8 + u];
            }
            out[y * 8 + x] = acc;
        }
    }
    out
}
