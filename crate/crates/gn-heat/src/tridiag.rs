//! Direct solvers for tridiagonal and cyclic-tridiagonal systems.
//!
//! The implicit time steppers assemble systems of the form (I − c·L) with L
//! a 3-point Laplacian, which is tridiagonal for wall boundary conditions
//! and cyclic-tridiagonal (corner entries) for periodic grids.

use crate::error::{Error, Result};

/// Thomas algorithm. `sub[i]` multiplies x[i−1] (sub[0] ignored), `sup[i]`
/// multiplies x[i+1] (sup[n−1] ignored). O(n), no pivoting; callers supply
/// diagonally dominant systems.
pub fn solve(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    assert!(sub.len() == n && sup.len() == n && rhs.len() == n);
    let mut c = vec![0.0; n];
    let mut x = vec![0.0; n];
    if diag[0] == 0.0 {
        return Err(Error::Config("tridiagonal solve hit a zero pivot".into()));
    }
    c[0] = sup[0] / diag[0];
    x[0] = rhs[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - sub[i] * c[i - 1];
        if denom == 0.0 {
            return Err(Error::Config("tridiagonal solve hit a zero pivot".into()));
        }
        c[i] = sup[i] / denom;
        x[i] = (rhs[i] - sub[i] * x[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

/// Cyclic variant via the Sherman–Morrison correction. `corner_top` is the
/// (0, n−1) entry and `corner_bottom` the (n−1, 0) entry.
pub fn solve_cyclic(
    sub: &[f64],
    diag: &[f64],
    sup: &[f64],
    corner_top: f64,
    corner_bottom: f64,
    rhs: &[f64],
) -> Result<Vec<f64>> {
    let n = diag.len();
    assert!(n >= 3);
    let gamma = -diag[0];
    let mut d = diag.to_vec();
    d[0] = diag[0] - gamma;
    d[n - 1] = diag[n - 1] - corner_top * corner_bottom / gamma;
    let y = solve(sub, &d, sup, rhs)?;
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = corner_bottom;
    let z = solve(sub, &d, sup, &u)?;
    // v = (1, 0, …, corner_top/gamma)
    let vy = y[0] + corner_top / gamma * y[n - 1];
    let vz = z[0] + corner_top / gamma * z[n - 1];
    let denom = 1.0 + vz;
    if denom == 0.0 {
        return Err(Error::Config("cyclic tridiagonal solve is singular".into()));
    }
    let factor = vy / denom;
    Ok(y.iter().zip(&z).map(|(yi, zi)| yi - factor * zi).collect())
}
