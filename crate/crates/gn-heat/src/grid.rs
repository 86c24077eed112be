//! Uniform 1-D cell-centered grid with second-order discrete operators.
//!
//! Cells are centered at x_i = x0 + (i + ½)dx for i in 0..n; the walls sit
//! at x0 and x0 + n·dx. Dirichlet data prescribes field values at the
//! walls and enters through reflected ghost cells; Neumann data prescribes
//! wall gradients and enters through mirrored ghosts. Periodic grids wrap.
//!
//! All operators are pure functions over immutable fields with a fixed
//! summation order, so results are bitwise reproducible.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Boundary condition attached to a grid. Dirichlet carries wall values of
/// the discretized field, Neumann carries wall gradients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundaryCondition {
    Periodic,
    Dirichlet { left: f64, right: f64 },
    Neumann { left: f64, right: f64 },
}

/// Uniform 1-D grid: n cells of width dx starting at x0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub n: usize,
    pub dx: f64,
    pub x0: f64,
    pub bc: BoundaryCondition,
}

impl Grid1D {
    pub fn new(n: usize, dx: f64, x0: f64, bc: BoundaryCondition) -> Result<Self> {
        if n < 3 {
            return Err(Error::Config(format!("grid needs n >= 3 cells, got {n}")));
        }
        if !(dx > 0.0) || !dx.is_finite() {
            return Err(Error::Config(format!("grid spacing dx = {dx} must be positive")));
        }
        if !x0.is_finite() {
            return Err(Error::Config(format!("grid origin x0 = {x0} must be finite")));
        }
        Ok(Self { n, dx, x0, bc })
    }

    /// Periodic grid covering [x0, x0 + length).
    pub fn periodic(n: usize, x0: f64, length: f64) -> Result<Self> {
        if !(length > 0.0) {
            return Err(Error::Config(format!("grid length = {length} must be positive")));
        }
        Self::new(n, length / n as f64, x0, BoundaryCondition::Periodic)
    }

    /// Cell-center coordinate of cell i.
    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x0 + (i as f64 + 0.5) * self.dx
    }

    pub fn length(&self) -> f64 {
        self.n as f64 * self.dx
    }

    /// Same grid with a different boundary condition (used when a derived
    /// field, e.g. thermal displacement, inherits the primary field's
    /// boundary type with time-shifted values).
    pub fn with_bc(mut self, bc: BoundaryCondition) -> Self {
        self.bc = bc;
        self
    }

    fn ghosts(&self, v: &[f64]) -> (f64, f64) {
        let n = self.n;
        match self.bc {
            BoundaryCondition::Periodic => (v[n - 1], v[0]),
            BoundaryCondition::Dirichlet { left, right } => {
                (2.0 * left - v[0], 2.0 * right - v[n - 1])
            }
            BoundaryCondition::Neumann { left, right } => {
                (v[0] - self.dx * left, v[n - 1] + self.dx * right)
            }
        }
    }
}

/// Cell samples of a scalar field on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub grid: Grid1D,
    pub values: Vec<f64>,
}

impl Field {
    pub fn from_values(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::Config(format!(
                "field length {} does not match grid n = {}",
                values.len(),
                grid.n
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Config(format!("field contains non-finite value {bad}")));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.n).map(|i| f(grid.x(i))).collect();
        Self { grid, values }
    }

    pub fn constant(grid: Grid1D, c: f64) -> Self {
        Self { grid, values: vec![c; grid.n] }
    }

    /// Second-order gradient: central differences in the interior,
    /// wraparound on periodic grids, and second-order boundary stencils
    /// that fold in the wall data for Dirichlet/Neumann.
    pub fn gradient(&self) -> Field {
        let n = self.grid.n;
        let dx = self.grid.dx;
        let v = &self.values;
        let mut out = vec![0.0; n];
        for i in 1..n - 1 {
            out[i] = (v[i + 1] - v[i - 1]) / (2.0 * dx);
        }
        match self.grid.bc {
            BoundaryCondition::Periodic => {
                out[0] = (v[1] - v[n - 1]) / (2.0 * dx);
                out[n - 1] = (v[0] - v[n - 2]) / (2.0 * dx);
            }
            BoundaryCondition::Dirichlet { left, right } => {
                // Quadratic through (wall, cell 0, cell 1), exact for
                // parabolas, evaluated at the boundary cell center.
                out[0] = (-4.0 * left + 3.0 * v[0] + v[1]) / (3.0 * dx);
                out[n - 1] = (4.0 * right - 3.0 * v[n - 1] - v[n - 2]) / (3.0 * dx);
            }
            BoundaryCondition::Neumann { left, right } => {
                out[0] = (v[1] - v[0] + dx * left) / (2.0 * dx);
                out[n - 1] = (dx * right + v[n - 1] - v[n - 2]) / (2.0 * dx);
            }
        }
        Field { grid: self.grid, values: out }
    }

    /// Standard 3-point Laplacian with ghost cells per the boundary
    /// condition; second-order global accuracy.
    pub fn laplacian(&self) -> Field {
        let n = self.grid.n;
        let w = 1.0 / (self.grid.dx * self.grid.dx);
        let v = &self.values;
        let (ghost_left, ghost_right) = self.grid.ghosts(v);
        let mut out = vec![0.0; n];
        out[0] = (ghost_left - 2.0 * v[0] + v[1]) * w;
        for i in 1..n - 1 {
            out[i] = (v[i - 1] - 2.0 * v[i] + v[i + 1]) * w;
        }
        out[n - 1] = (v[n - 2] - 2.0 * v[n - 1] + ghost_right) * w;
        Field { grid: self.grid, values: out }
    }

    /// Conservative discretization of div(θ∇θ): the flux at face i+½ is
    /// ½(θ_i + θ_{i+1}) · (θ_{i+1} − θ_i)/dx, and faces are differenced
    /// back to cells. Requires θ > 0 everywhere.
    pub fn div_theta_grad(&self) -> Result<Field> {
        let n = self.grid.n;
        let dx = self.grid.dx;
        let v = &self.values;
        if let Some((i, bad)) = v.iter().enumerate().find(|(_, t)| !(**t > 0.0)) {
            return Err(Error::Domain(format!(
                "div_theta_grad needs theta > 0 everywhere; theta = {bad} at x = {}",
                self.grid.x(i)
            )));
        }
        // flux[i] is the face between cell i-1 and cell i; flux[0] and
        // flux[n] are the wall faces.
        let mut flux = vec![0.0; n + 1];
        for i in 1..n {
            flux[i] = 0.5 * (v[i - 1] + v[i]) * (v[i] - v[i - 1]) / dx;
        }
        match self.grid.bc {
            BoundaryCondition::Periodic => {
                let f = 0.5 * (v[n - 1] + v[0]) * (v[0] - v[n - 1]) / dx;
                flux[0] = f;
                flux[n] = f;
            }
            BoundaryCondition::Dirichlet { left, right } => {
                // Wall face: the face value is the wall value itself and the
                // gradient is one-sided over the half cell.
                flux[0] = left * (v[0] - left) / (0.5 * dx);
                flux[n] = right * (right - v[n - 1]) / (0.5 * dx);
            }
            BoundaryCondition::Neumann { left, right } => {
                flux[0] = (v[0] - 0.5 * dx * left) * left;
                flux[n] = (v[n - 1] + 0.5 * dx * right) * right;
            }
        }
        let values = (0..n).map(|i| (flux[i + 1] - flux[i]) / dx).collect();
        Ok(Field { grid: self.grid, values })
    }

    /// Midpoint-rule integral over the domain: sum(values)·dx in index
    /// order (the fixed order keeps parallel callers bitwise reproducible).
    pub fn integrate(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.dx
    }
}

/// The Laplacian as explicit tridiagonal coefficients plus the affine part
/// contributed by boundary data: lap(u) = T·u + affine. The implicit
/// steppers assemble (I − c·T) from this.
#[derive(Debug, Clone)]
pub struct LaplacianStencil {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
    /// Periodic corner coefficients: (row 0 × u[n−1], row n−1 × u[0]).
    pub corners: Option<(f64, f64)>,
    pub affine: Vec<f64>,
}

impl LaplacianStencil {
    pub fn new(grid: &Grid1D) -> Self {
        let n = grid.n;
        let w = 1.0 / (grid.dx * grid.dx);
        let mut sub = vec![w; n];
        let mut diag = vec![-2.0 * w; n];
        let mut sup = vec![w; n];
        let mut affine = vec![0.0; n];
        sub[0] = 0.0;
        sup[n - 1] = 0.0;
        let mut corners = None;
        match grid.bc {
            BoundaryCondition::Periodic => {
                corners = Some((w, w));
            }
            BoundaryCondition::Dirichlet { left, right } => {
                // Reflected ghost 2·wall − u0 folds into the diagonal.
                diag[0] = -3.0 * w;
                diag[n - 1] = -3.0 * w;
                affine[0] = 2.0 * left * w;
                affine[n - 1] = 2.0 * right * w;
            }
            BoundaryCondition::Neumann { left, right } => {
                diag[0] = -w;
                diag[n - 1] = -w;
                affine[0] = -left / grid.dx;
                affine[n - 1] = right / grid.dx;
            }
        }
        Self { sub, diag, sup, corners, affine }
    }

    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        let n = u.len();
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut acc = self.diag[i] * u[i] + self.affine[i];
            if i > 0 {
                acc += self.sub[i] * u[i - 1];
            }
            if i + 1 < n {
                acc += self.sup[i] * u[i + 1];
            }
            out[i] = acc;
        }
        if let Some((c0, c1)) = self.corners {
            out[0] += c0 * u[n - 1];
            out[n - 1] += c1 * u[0];
        }
        out
    }
}
