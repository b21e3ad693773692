//! Inversion of small symmetric positive definite matrices via Cholesky.

use crate::{Error, Result};

/// Row-major dense matrix.
pub type Matrix = Vec<Vec<f64>>;

fn inf_norm(m: &Matrix) -> f64 {
    m.iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Inverse of a symmetric positive definite matrix.
///
/// Fails with [`Error::Singular`] when a Cholesky pivot is at or below
/// `1e-12 · ‖m‖∞`, which covers both singular and indefinite input.
pub fn invert_symmetric(m: &Matrix) -> Result<Matrix> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Domain("matrix is not square".into()));
    }
    if m.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Singular);
    }
    let norm = inf_norm(m);
    // lower-triangular factor
    let mut l = vec![vec![0.0; n]; n];
    for j in 0..n {
        let mut d = m[j][j];
        for k in 0..j {
            d -= l[j][k] * l[j][k];
        }
        if !(d > 1e-12 * norm) {
            return Err(Error::Singular);
        }
        let d = d.sqrt();
        l[j][j] = d;
        for i in j + 1..n {
            let mut s = 0.5 * (m[i][j] + m[j][i]);
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            l[i][j] = s / d;
        }
    }
    // inverse of L, then L^{-T} L^{-1}
    let mut li = vec![vec![0.0; n]; n];
    for i in 0..n {
        li[i][i] = 1.0 / l[i][i];
        for j in 0..i {
            let mut s = 0.0;
            for k in j..i {
                s -= l[i][k] * li[k][j];
            }
            li[i][j] = s / l[i][i];
        }
    }
    let mut inv = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (i..n).map(|k| li[k][i] * li[k][j]).sum();
            inv[i][j] = s;
            inv[j][i] = s;
        }
    }
    Ok(inv)
}

/// Three-by-three convenience wrapper around [`invert_symmetric`].
pub fn invert_3x3_symmetric(m: &[[f64; 3]; 3]) -> Result<[[f64; 3]; 3]> {
    let inv = invert_symmetric(&m.iter().map(|r| r.to_vec()).collect())?;
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        out[i].copy_from_slice(&inv[i]);
    }
    Ok(out)
}
