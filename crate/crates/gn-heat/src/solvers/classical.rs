//! Classical Fourier conduction: λθ̇ = κΔθ + r.
//!
//! Explicit Euler (dt ≤ ½λdx²/κ, checked up front) or unconditionally
//! stable backward Euler with one tridiagonal solve per step.

use crate::grid::{Field, LaplacianStencil};
use crate::tridiag;

use super::{check_theta_admissible, Recorder, Result, Scenario, TimeScheme, Trajectory};

pub(super) fn run(sc: &Scenario) -> Result<Trajectory> {
    let n = sc.grid.n;
    let p = &sc.material;
    let stencil = LaplacianStencil::new(&sc.grid);
    let n_steps = sc.n_steps();
    let mut theta = sc.theta_init.values.clone();
    let mut recorder = Recorder::new(sc);
    recorder.record_if_due(0, &theta, None);

    // Backward Euler factors of (I − (dt·κ/λ)L); assembled once, the grid
    // and dt are fixed for the whole run.
    let c = sc.dt * p.kappa / p.lambda;
    let sub: Vec<f64> = stencil.sub.iter().map(|v| -c * v).collect();
    let diag: Vec<f64> = stencil.diag.iter().map(|v| 1.0 - c * v).collect();
    let sup: Vec<f64> = stencil.sup.iter().map(|v| -c * v).collect();

    for step in 0..n_steps {
        let t = step as f64 * sc.dt;
        match sc.scheme {
            TimeScheme::Explicit => {
                let lap = Field { grid: sc.grid, values: theta.clone() }.laplacian();
                let (r, _) = sc.supplies(t, &theta);
                for i in 0..n {
                    theta[i] += sc.dt / p.lambda * (p.kappa * lap.values[i] + r[i]);
                }
            }
            TimeScheme::Implicit => {
                let (r, _) = sc.supplies(t + sc.dt, &theta);
                let rhs: Vec<f64> = (0..n)
                    .map(|i| theta[i] + sc.dt / p.lambda * (p.kappa * stencil.affine[i] + r[i]))
                    .collect();
                theta = match stencil.corners {
                    Some((ct, cb)) => {
                        tridiag::solve_cyclic(&sub, &diag, &sup, -c * ct, -c * cb, &rhs)?
                    }
                    None => tridiag::solve(&sub, &diag, &sup, &rhs)?,
                };
            }
        }
        check_theta_admissible(sc, t, &theta)?;
        recorder.record_if_due(step + 1, &theta, None);
    }
    Ok(recorder.finish())
}
