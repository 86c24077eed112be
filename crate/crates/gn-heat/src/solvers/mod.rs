//! Time integration of the five field equations.
//!
//! - classical:        λθ̇ = κΔθ + r
//! - Type I nonlinear: λθ̇ = κθ⁻¹div(θ∇θ) + θ⁻¹θ₀r
//! - Type I ξ-form:    λθ̇ = κΔθ + θ₀(ξ_I + s)
//! - Type II α-wave:   λα̈ = κ*Δα + θ₀s,  θ = α̇
//! - Type III linearized: λθ̈ = κΔθ̇ + κ*Δθ + ṙ
//! - Type III full:    λθ̇ = κΔθ + κ*Δα + θ₀s + κ**Δα + θ₀ξ_III,  α̇ = θ
//!
//! Integrators are matched to each PDE class: explicit or backward Euler
//! for the first-order-in-time equations, kick-drift-kick leapfrog for the
//! α-wave, and a semi-implicit scheme (damping term κΔθ̇ solved
//! tridiagonally) for the linearized Type III equation. Stability bounds
//! are enforced before stepping, never discovered by blow-up.
//!
//! Sources are declared as either r or s and converted through r = θs
//! pointwise where a solver needs the other form; the near-isothermal
//! shortcut r ≃ θ₀s is a separate explicit flag, never silent.
//!
//! The thermal displacement α has no initial/boundary data of its own in
//! the underlying theory; here α(x,0) defaults to zero and α inherits θ's
//! boundary-condition *type*, with wall data advanced in time by the wall
//! values of θ (α̇ = θ at the walls too).
//!
//! Budget records: each snapshot carries the totals and fluxes of the
//! energy balance ε̇ = −div q + r and the entropy balance
//! η̇ = −div h + s + ξ. For the exact theories the recorded densities are
//! the constitutive ones (with the |∇α|² part of ε quadratured over faces,
//! which is the discrete energy the leapfrog dynamics conserve). The
//! linearized Type III solver and the pseudolinearized variant of the full
//! solver transport the near-isothermal quantities instead (ε̃ = λθ,
//! q̃ = −κ∇θ − κ*∇α, …), so their budgets are recorded in those terms.

mod classical;
mod type1;
mod type2;
mod type3;

use serde::{Deserialize, Serialize};

use crate::constitutive::{
    eval_classic, eval_type1, eval_type3, MaterialParams, StateI, StateIII, Theory,
};
use crate::error::{Error, Result};
use crate::grid::{BoundaryCondition, Field, Grid1D};
use crate::source::{SourceRole, SourceTerm};

/// Which field equation to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Classical,
    Type1Nonlinear,
    Type1XiForm,
    Type2Alpha,
    Type3Linearized,
    Type3Full,
}

impl SolverKind {
    /// The constitutive set a solver's states live in.
    pub fn theory(&self) -> Theory {
        match self {
            SolverKind::Classical => Theory::Classical,
            SolverKind::Type1Nonlinear | SolverKind::Type1XiForm => Theory::TypeI,
            SolverKind::Type2Alpha => Theory::TypeII,
            SolverKind::Type3Linearized | SolverKind::Type3Full => Theory::TypeIII,
        }
    }

    /// Order of the time integrator, used when budget tolerances are
    /// computed from dx² + dt^p.
    pub fn time_order(&self) -> u32 {
        match self {
            SolverKind::Type2Alpha => 2,
            _ => 1,
        }
    }

    /// Whether this solver evolves the thermal displacement α.
    pub fn has_alpha(&self) -> bool {
        matches!(
            self,
            SolverKind::Type2Alpha | SolverKind::Type3Linearized | SolverKind::Type3Full
        )
    }
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SolverKind::Classical => "classical",
            SolverKind::Type1Nonlinear => "type1_nonlinear",
            SolverKind::Type1XiForm => "type1_xi_form",
            SolverKind::Type2Alpha => "type2_alpha",
            SolverKind::Type3Linearized => "type3_linearized",
            SolverKind::Type3Full => "type3_full",
        };
        f.write_str(s)
    }
}

/// Time scheme for the first-order-in-time diffusion equations (classical
/// and Type I ξ-form). Other solvers have a fixed scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TimeScheme {
    #[default]
    Explicit,
    Implicit,
}

/// Everything one run needs: grid, material, equation, initial and
/// boundary data, sources, and integrator settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub grid: Grid1D,
    pub material: MaterialParams,
    pub solver: SolverKind,
    pub scheme: TimeScheme,
    pub theta_init: Field,
    /// Initial thermal displacement; defaults to zero for solvers that
    /// evolve α.
    pub alpha_init: Option<Field>,
    /// Initial θ̇, required by the second-order-in-time θ equation.
    pub theta_dot_init: Option<Field>,
    pub source: SourceTerm,
    /// Use the near-isothermal shortcut r ≃ θ₀s instead of r = θs when
    /// converting between supply forms.
    pub isothermal_supply: bool,
    /// Type III full only: drop θ₀ξ_III (including its ∇α·∇θ part) from
    /// the right-hand side.
    pub pseudolinearize: bool,
    pub dt: f64,
    pub t_end: f64,
    /// Steps between recorded snapshots (first and last are always kept).
    pub output_stride: usize,
}

impl Scenario {
    /// Number of time steps for this run.
    pub fn n_steps(&self) -> usize {
        ((self.t_end / self.dt) - 1e-9).ceil().max(1.0) as usize
    }

    /// True when the recorded budgets are the near-isothermal ones.
    pub fn pseudolinearized_budget(&self) -> bool {
        matches!(self.solver, SolverKind::Type3Linearized)
            || (matches!(self.solver, SolverKind::Type3Full) && self.pseudolinearize)
    }

    /// Validate every invariant and stability bound before stepping.
    pub fn validate(&self) -> Result<()> {
        let p = &self.material;
        let dx = self.grid.dx;
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Config(format!("dt = {} must be positive", self.dt)));
        }
        if self.t_end < self.dt {
            return Err(Error::Config(format!(
                "t_end = {} must be at least dt = {}",
                self.t_end, self.dt
            )));
        }
        if self.output_stride == 0 {
            return Err(Error::Config("output_stride must be at least 1".into()));
        }
        for (name, field) in [
            ("theta_init", Some(&self.theta_init)),
            ("alpha_init", self.alpha_init.as_ref()),
            ("theta_dot_init", self.theta_dot_init.as_ref()),
        ] {
            if let Some(f) = field {
                if f.grid != self.grid {
                    return Err(Error::Config(format!("{name} does not live on the scenario grid")));
                }
                if let Some(bad) = f.values.iter().find(|v| !v.is_finite()) {
                    return Err(Error::Config(format!("{name} contains non-finite value {bad}")));
                }
            }
        }
        if let Some((i, bad)) =
            self.theta_init.values.iter().enumerate().find(|(_, t)| !(**t > 0.0))
        {
            return Err(Error::Config(format!(
                "theta_init must be positive everywhere; theta = {bad} at x = {}",
                self.grid.x(i)
            )));
        }
        if let BoundaryCondition::Dirichlet { left, right } = self.grid.bc {
            if !(left > 0.0) || !(right > 0.0) {
                return Err(Error::Config(format!(
                    "Dirichlet wall temperatures must be positive, got left = {left}, right = {right}"
                )));
            }
        }
        self.source.profile.validate()?;

        match self.solver {
            SolverKind::Classical => {
                if self.scheme == TimeScheme::Explicit && p.kappa > 0.0 {
                    let bound = 0.5 * p.lambda * dx * dx / p.kappa;
                    if self.dt > bound {
                        return Err(Error::Config(format!(
                            "explicit classical scheme is unstable: dt = {} exceeds 0.5*lambda*dx^2/kappa = {bound}",
                            self.dt
                        )));
                    }
                }
            }
            SolverKind::Type1Nonlinear => {
                // Effective face diffusivity scales with θ_face/θ_cell, so the
                // classical bound is tightened by the initial contrast.
                if p.kappa > 0.0 {
                    let tmax = self.theta_init.values.iter().cloned().fold(f64::MIN, f64::max);
                    let tmin = self.theta_init.values.iter().cloned().fold(f64::MAX, f64::min);
                    let bound = 0.5 * p.lambda * dx * dx / p.kappa * (tmin / tmax);
                    if self.dt > bound {
                        return Err(Error::Config(format!(
                            "explicit nonlinear Type I scheme is unstable: dt = {} exceeds 0.5*lambda*dx^2/kappa*(theta_min/theta_max) = {bound}",
                            self.dt
                        )));
                    }
                }
            }
            SolverKind::Type1XiForm => {
                if self.scheme == TimeScheme::Explicit && p.kappa > 0.0 {
                    let bound = 0.5 * p.lambda * dx * dx / p.kappa;
                    if self.dt > bound {
                        return Err(Error::Config(format!(
                            "explicit Type I xi-form scheme is unstable: dt = {} exceeds 0.5*lambda*dx^2/kappa = {bound}",
                            self.dt
                        )));
                    }
                }
            }
            SolverKind::Type2Alpha => {
                if p.kappa_star > 0.0 {
                    let bound = dx * (p.lambda / p.kappa_star).sqrt();
                    if self.dt > bound {
                        return Err(Error::Config(format!(
                            "Type II leapfrog violates the CFL bound: dt = {} exceeds dx*sqrt(lambda/kappa_star) = {bound}",
                            self.dt
                        )));
                    }
                }
            }
            SolverKind::Type3Linearized => {
                if self.theta_dot_init.is_none() {
                    return Err(Error::Config(
                        "type3_linearized integrates theta to second order in time and needs theta_dot_init"
                            .into(),
                    ));
                }
                if self.source.role == SourceRole::Entropy
                    && !self.isothermal_supply
                    && !self.source.profile.is_zero()
                {
                    return Err(Error::Config(
                        "type3_linearized needs the analytic time derivative of r; an entropy supply \
                         provides it only under the isothermal shortcut r = theta0*s (set isothermal_supply)"
                            .into(),
                    ));
                }
                type3::check_linearized_stability(self)?;
            }
            SolverKind::Type3Full => {
                if p.kappa > 0.0 {
                    let bound = 0.5 * p.lambda * dx * dx / p.kappa;
                    if self.dt > bound {
                        return Err(Error::Config(format!(
                            "explicit Type III full scheme is unstable: dt = {} exceeds the diffusion bound 0.5*lambda*dx^2/kappa = {bound}",
                            self.dt
                        )));
                    }
                }
                let wave_modulus = p.kappa_star + p.kappa_2star;
                if wave_modulus > 0.0 {
                    let bound = dx * (p.lambda / wave_modulus).sqrt();
                    if self.dt > bound {
                        return Err(Error::Config(format!(
                            "explicit Type III full scheme violates the wave CFL bound: dt = {} exceeds dx*sqrt(lambda/(kappa_star+kappa_2star)) = {bound}",
                            self.dt
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Boundary condition for α at time t: θ's boundary type with wall data
    /// advanced by integrating α̇ = θ at the walls.
    pub fn alpha_bc_at(&self, t: f64) -> BoundaryCondition {
        let seed = self.alpha_wall_seed();
        match (self.grid.bc, seed) {
            (BoundaryCondition::Periodic, _) => BoundaryCondition::Periodic,
            (BoundaryCondition::Dirichlet { left, right }, (al, ar)) => {
                BoundaryCondition::Dirichlet { left: al + left * t, right: ar + right * t }
            }
            (BoundaryCondition::Neumann { left, right }, (gl, gr)) => {
                BoundaryCondition::Neumann { left: gl + left * t, right: gr + right * t }
            }
        }
    }

    /// Wall values (Dirichlet) or wall slopes (Neumann) of the initial α.
    fn alpha_wall_seed(&self) -> (f64, f64) {
        let Some(a0) = &self.alpha_init else { return (0.0, 0.0) };
        let v = &a0.values;
        let n = v.len();
        match self.grid.bc {
            BoundaryCondition::Periodic => (0.0, 0.0),
            BoundaryCondition::Dirichlet { .. } => {
                ((3.0 * v[0] - v[1]) / 2.0, (3.0 * v[n - 1] - v[n - 2]) / 2.0)
            }
            BoundaryCondition::Neumann { .. } => {
                ((v[1] - v[0]) / self.grid.dx, (v[n - 1] - v[n - 2]) / self.grid.dx)
            }
        }
    }

    /// The (r, s) supply pair actually injected at time t, honoring the
    /// declared role and the isothermal flag.
    pub fn supplies(&self, t: f64, theta: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = self.grid.n;
        let mut r = vec![0.0; n];
        let mut s = vec![0.0; n];
        for i in 0..n {
            let raw = self.source.profile.eval(self.grid.x(i), t);
            match self.source.role {
                SourceRole::Energy => {
                    r[i] = raw;
                    s[i] = if self.isothermal_supply {
                        raw / self.material.theta0
                    } else {
                        raw / theta[i]
                    };
                }
                SourceRole::Entropy => {
                    s[i] = raw;
                    r[i] = if self.isothermal_supply {
                        self.material.theta0 * raw
                    } else {
                        theta[i] * raw
                    };
                }
            }
        }
        (r, s)
    }
}

/// Per-snapshot totals and fluxes for the energy and entropy balances.
/// `energy_outflux` is the net boundary outflow of q (zero on periodic
/// grids) and similarly for h; `energy_supply` = ∫r dx, `entropy_supply`
/// = ∫s dx, `entropy_production` = ∫ξ dx.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetRecord {
    pub time: f64,
    pub total_energy: f64,
    pub total_entropy: f64,
    pub energy_outflux: f64,
    pub entropy_outflux: f64,
    pub energy_supply: f64,
    pub entropy_supply: f64,
    pub entropy_production: f64,
}

/// The recorded output of one solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub solver: SolverKind,
    pub times: Vec<f64>,
    pub theta_snapshots: Vec<Field>,
    /// Present only for solvers that evolve the thermal displacement.
    pub alpha_snapshots: Option<Vec<Field>>,
    pub xi_snapshots: Vec<Field>,
    pub budgets: Vec<BudgetRecord>,
}

impl Trajectory {
    pub fn final_theta(&self) -> &Field {
        self.theta_snapshots.last().expect("trajectory has at least the initial snapshot")
    }

    /// Smallest ξ over all nodes and snapshots, with its (x, t) location.
    pub fn min_xi(&self) -> (f64, f64, f64) {
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for (snap, t) in self.xi_snapshots.iter().zip(&self.times) {
            for (i, &v) in snap.values.iter().enumerate() {
                if v < best.0 {
                    best = (v, snap.grid.x(i), *t);
                }
            }
        }
        best
    }
}

/// Integrate the scenario's field equation. Validates first; fails with a
/// configuration error before stepping, or a blow-up error carrying the
/// last valid time if the solution leaves its admissible set mid-run.
pub fn solve(sc: &Scenario) -> Result<Trajectory> {
    sc.validate()?;
    match sc.solver {
        SolverKind::Classical => classical::run(sc),
        SolverKind::Type1Nonlinear => type1::run_nonlinear(sc),
        SolverKind::Type1XiForm => type1::run_xi_form(sc),
        SolverKind::Type2Alpha => type2::run(sc),
        SolverKind::Type3Linearized => type3::run_linearized(sc),
        SolverKind::Type3Full => type3::run_full(sc),
    }
}

/// Scan a freshly updated θ for NaN/Inf or non-positive values; errors
/// carry the last valid time and the offending location.
pub(crate) fn check_theta_admissible(sc: &Scenario, t_last_valid: f64, theta: &[f64]) -> Result<()> {
    for (i, &v) in theta.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::BlowUp {
                t: t_last_valid,
                location: Some(sc.grid.x(i)),
                detail: format!("theta became {v}"),
            });
        }
        if v <= 0.0 {
            let mut detail = format!("theta dropped to {v}");
            if matches!(sc.solver, SolverKind::Type2Alpha) {
                detail.push_str(
                    "; theta is recovered as alpha-dot, raise the background theta0 offset in the initial data",
                );
            }
            return Err(Error::BlowUp { t: t_last_valid, location: Some(sc.grid.x(i)), detail });
        }
    }
    Ok(())
}

/// ξ sampled at the cell centers for the scenario's constitutive set.
pub(crate) fn xi_field(sc: &Scenario, t: f64, theta: &Field, alpha: Option<&Field>) -> Vec<f64> {
    let p = &sc.material;
    let n = sc.grid.n;
    match sc.solver.theory() {
        Theory::Classical => {
            let g = theta.gradient();
            (0..n)
                .map(|i| {
                    eval_classic(p, &StateI { theta: theta.values[i], grad_theta: [g.values[i]] })
                        .map(|r| r.xi)
                        .unwrap_or(f64::NAN)
                })
                .collect()
        }
        Theory::TypeI => {
            let g = theta.gradient();
            (0..n)
                .map(|i| {
                    eval_type1(p, &StateI { theta: theta.values[i], grad_theta: [g.values[i]] })
                        .map(|r| r.xi)
                        .unwrap_or(f64::NAN)
                })
                .collect()
        }
        Theory::TypeII => vec![0.0; n],
        Theory::TypeIII => {
            if matches!(sc.solver, SolverKind::Type3Linearized) {
                // The linearized equation is derived with ξ dropped.
                return vec![0.0; n];
            }
            let alpha = alpha.expect("type III full evolves alpha");
            let alpha_t = Field { grid: alpha.grid.with_bc(sc.alpha_bc_at(t)), values: alpha.values.clone() };
            let ga = alpha_t.gradient();
            let gt = theta.gradient();
            (0..n)
                .map(|i| {
                    eval_type3(
                        p,
                        &StateIII {
                            alpha: alpha_t.values[i],
                            theta: theta.values[i],
                            grad_alpha: [ga.values[i]],
                            grad_theta: [gt.values[i]],
                        },
                    )
                    .map(|r| r.xi)
                    .unwrap_or(f64::NAN)
                })
                .collect()
        }
    }
}

/// ∫|∇α|² dx quadratured over faces (interior faces weight dx, wall faces
/// dx/2). This face form is the discrete potential energy the leapfrog
/// dynamics conserve.
fn grad_sq_face_integral(alpha: &Field) -> f64 {
    let n = alpha.grid.n;
    let dx = alpha.grid.dx;
    let v = &alpha.values;
    let mut acc = 0.0;
    for i in 1..n {
        let d = (v[i] - v[i - 1]) / dx;
        acc += d * d * dx;
    }
    match alpha.grid.bc {
        BoundaryCondition::Periodic => {
            let d = (v[0] - v[n - 1]) / dx;
            acc += d * d * dx;
        }
        BoundaryCondition::Dirichlet { left, right } => {
            let dl = (v[0] - left) / (0.5 * dx);
            let dr = (right - v[n - 1]) / (0.5 * dx);
            acc += 0.5 * dx * (dl * dl + dr * dr);
        }
        BoundaryCondition::Neumann { left, right } => {
            acc += 0.5 * dx * (left * left + right * right);
        }
    }
    acc
}

/// Wall value and outward-facing gradient of a field at both walls,
/// second order. Returns None on periodic grids (no walls).
fn wall_trace(f: &Field) -> Option<((f64, f64), (f64, f64))> {
    let n = f.grid.n;
    let dx = f.grid.dx;
    let v = &f.values;
    match f.grid.bc {
        BoundaryCondition::Periodic => None,
        BoundaryCondition::Dirichlet { left, right } => {
            let a = v[0] - left;
            let b = v[1] - left;
            let grad_left = (9.0 * a - b) / (3.0 * dx);
            let a = v[n - 1] - right;
            let b = v[n - 2] - right;
            let grad_right = -(9.0 * a - b) / (3.0 * dx);
            Some(((left, grad_left), (right, grad_right)))
        }
        BoundaryCondition::Neumann { left, right } => {
            let val_left = v[0] - 0.5 * dx * left;
            let val_right = v[n - 1] + 0.5 * dx * right;
            Some(((val_left, left), (val_right, right)))
        }
    }
}

/// (q, h) at one wall for the scenario's transported balance.
fn wall_flux(
    sc: &Scenario,
    theta_wall: f64,
    grad_theta_wall: f64,
    alpha_trace: Option<(f64, f64)>,
) -> (f64, f64) {
    let p = &sc.material;
    if sc.pseudolinearized_budget() {
        let kappa_alpha = match sc.solver {
            SolverKind::Type3Full => p.kappa_star + p.kappa_2star,
            _ => p.kappa_star,
        };
        let grad_alpha = alpha_trace.map(|(_, g)| g).unwrap_or(0.0);
        let q = -p.kappa * grad_theta_wall - kappa_alpha * grad_alpha;
        return (q, q / p.theta0);
    }
    match sc.solver.theory() {
        Theory::Classical => {
            let q = -p.kappa * grad_theta_wall;
            (q, q / theta_wall)
        }
        Theory::TypeI => {
            let h = -(p.kappa / p.theta0) * grad_theta_wall;
            (theta_wall * h, h)
        }
        Theory::TypeII => {
            let grad_alpha = alpha_trace.map(|(_, g)| g).unwrap_or(0.0);
            let h = -(p.kappa_star / p.theta0) * grad_alpha;
            (theta_wall * h, h)
        }
        Theory::TypeIII => {
            let grad_alpha = alpha_trace.map(|(_, g)| g).unwrap_or(0.0);
            let h = -((p.kappa_star + p.kappa_2star) / p.theta0) * grad_alpha
                - (p.kappa / p.theta0) * grad_theta_wall;
            (theta_wall * h, h)
        }
    }
}

/// Assemble the budget record for one snapshot.
pub(crate) fn budget_record(
    sc: &Scenario,
    t: f64,
    theta: &Field,
    alpha: Option<&Field>,
    xi: &[f64],
) -> BudgetRecord {
    let p = &sc.material;
    let dx = sc.grid.dx;
    let n = sc.grid.n;
    let alpha_t = alpha.map(|a| Field {
        grid: a.grid.with_bc(sc.alpha_bc_at(t)),
        values: a.values.clone(),
    });

    let (total_energy, total_entropy) = if sc.pseudolinearized_budget() {
        let e: f64 = theta.values.iter().map(|&th| p.lambda * th).sum::<f64>() * dx;
        (e, e / p.theta0)
    } else {
        match sc.solver.theory() {
            Theory::Classical => {
                let e: f64 = theta.values.iter().map(|&th| p.lambda * th).sum::<f64>() * dx;
                let s: f64 = theta.values.iter().map(|&th| p.lambda * th.ln()).sum::<f64>() * dx;
                (e, s)
            }
            Theory::TypeI => {
                let e: f64 = theta
                    .values
                    .iter()
                    .map(|&th| 0.5 * p.lambda / p.theta0 * th * th)
                    .sum::<f64>()
                    * dx;
                let s: f64 =
                    theta.values.iter().map(|&th| p.lambda / p.theta0 * th).sum::<f64>() * dx;
                (e, s)
            }
            Theory::TypeII | Theory::TypeIII => {
                let mut e: f64 = theta
                    .values
                    .iter()
                    .map(|&th| 0.5 * p.lambda / p.theta0 * th * th)
                    .sum::<f64>()
                    * dx;
                if let Some(a) = &alpha_t {
                    e += 0.5 * p.kappa_star / p.theta0 * grad_sq_face_integral(a);
                }
                let s: f64 =
                    theta.values.iter().map(|&th| p.lambda / p.theta0 * th).sum::<f64>() * dx;
                (e, s)
            }
        }
    };

    let (energy_outflux, entropy_outflux) = match wall_trace(theta) {
        None => (0.0, 0.0),
        Some(((tl, gl), (tr, gr))) => {
            let alpha_traces = alpha_t.as_ref().and_then(wall_trace);
            let (ql, hl) = wall_flux(sc, tl, gl, alpha_traces.map(|(l, _)| l));
            let (qr, hr) = wall_flux(sc, tr, gr, alpha_traces.map(|(_, r)| r));
            (qr - ql, hr - hl)
        }
    };

    let (r, s) = sc.supplies(t, &theta.values);
    let mut energy_supply = r.iter().sum::<f64>() * dx;
    let entropy_supply = s.iter().sum::<f64>() * dx;
    if sc.pseudolinearized_budget() {
        // The pseudolinearized right-hand sides inject θ₀s as the energy
        // supply regardless of the pointwise conversion.
        energy_supply = p.theta0 * entropy_supply;
    }
    let entropy_production = xi.iter().sum::<f64>() * dx;

    BudgetRecord {
        time: t,
        total_energy,
        total_entropy,
        energy_outflux,
        entropy_outflux,
        energy_supply,
        entropy_supply,
        entropy_production,
    }
}

/// Collects snapshots at the configured stride (plus first and last step).
pub(crate) struct Recorder<'a> {
    sc: &'a Scenario,
    n_steps: usize,
    traj: Trajectory,
}

impl<'a> Recorder<'a> {
    pub fn new(sc: &'a Scenario) -> Self {
        let traj = Trajectory {
            solver: sc.solver,
            times: Vec::new(),
            theta_snapshots: Vec::new(),
            alpha_snapshots: sc.solver.has_alpha().then(Vec::new),
            xi_snapshots: Vec::new(),
            budgets: Vec::new(),
        };
        Self { sc, n_steps: sc.n_steps(), traj }
    }

    pub fn record_if_due(&mut self, step: usize, theta: &[f64], alpha: Option<&[f64]>) {
        if step % self.sc.output_stride != 0 && step != self.n_steps {
            return;
        }
        let t = step as f64 * self.sc.dt;
        let theta_f = Field { grid: self.sc.grid, values: theta.to_vec() };
        let alpha_f = alpha.map(|a| Field { grid: self.sc.grid, values: a.to_vec() });
        let xi = xi_field(self.sc, t, &theta_f, alpha_f.as_ref());
        let budget = budget_record(self.sc, t, &theta_f, alpha_f.as_ref(), &xi);
        self.traj.times.push(t);
        self.traj.xi_snapshots.push(Field { grid: self.sc.grid, values: xi });
        self.traj.theta_snapshots.push(theta_f);
        if let (Some(snaps), Some(a)) = (self.traj.alpha_snapshots.as_mut(), alpha_f) {
            snaps.push(a);
        }
        self.traj.budgets.push(budget);
    }

    pub fn finish(self) -> Trajectory {
        self.traj
    }
}
