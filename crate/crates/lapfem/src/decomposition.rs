//! Singular/regular splitting `u = u_h * log-factor + u_reg`.
//!
//! `u_h` is the piecewise `A`-harmonic function with `u_h = a11^{-1} g` on the interface and
//! zero at `x = +-a`. The log factor is `log|x|` for the limit problem and the principal
//! `log(x + i sign |nu| r)`, `r = T11 / A11`, for an absorbed solution. One-sided traces of
//! `u_reg` are read by quadratic extrapolation from the three node lines next to the interface.

use crate::assembly::{band_ordering, dirichlet_dofs, stiffness_a, Region};
use crate::coefficients::Coefficients;
use crate::interface::{sobolev_norm, InterfaceTrace};
use crate::linsolve::Factored;
use crate::{ComplexField, Error, Grid, Result, Side, C64};
use std::f64::consts::PI;

/// Which logarithm carries the singularity.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SplitKind {
    /// `log|x|`; `sign` selects the limit (`+1` from `nu > 0`, `-1` from `nu < 0`).
    ZeroAbsorption { sign: f64 },
    /// `log(x + i sign |nu| r)`.
    Absorbed { nu: f64, sign: f64 },
}

impl SplitKind {
    pub fn sign(&self) -> f64 {
        match *self {
            SplitKind::ZeroAbsorption { sign } | SplitKind::Absorbed { sign, .. } => sign,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub u_h: ComplexField,
    /// Regular part; the interface line carries no data (zeros).
    pub u_reg: ComplexField,
    pub g: InterfaceTrace,
    pub kind: SplitKind,
    /// `T11 / A11` per node.
    pub r: Vec<f64>,
}

impl Decomposition {
    /// The log factor at node `(i, j)`; `log|x|` has no value on the interface.
    pub fn log_factor(&self, grid: &Grid, i: usize, j: usize) -> Result<C64> {
        log_factor(&self.kind, grid.x(i), self.r[grid.dof(i, j)])
    }

    /// `u_h * log-factor + u_reg` off the interface line.
    pub fn reconstruct(&self, grid: &Grid) -> ComplexField {
        let mut out = ComplexField::zeros(grid);
        for i in 0..grid.nx() {
            for j in 0..grid.ny {
                if let Ok(l) = self.log_factor(grid, i, j) {
                    if i != grid.i_sigma() {
                        out.set(i, j, self.u_h.at(i, j) * l + self.u_reg.at(i, j));
                    }
                }
            }
        }
        out
    }
}

pub fn log_factor(kind: &SplitKind, x: f64, r: f64) -> Result<C64> {
    match *kind {
        SplitKind::ZeroAbsorption { .. } => {
            if x == 0.0 {
                Err(Error::Argument("log|x| is not defined on the interface".into()))
            } else {
                Ok(C64::new(x.abs().ln(), 0.0))
            }
        }
        SplitKind::Absorbed { nu, sign } => Ok(C64::new(x, sign * nu.abs() * r).ln()),
    }
}

/// Factored Dirichlet problem for `div(A grad w) = 0` on both halves, with the interface
/// line as an extra Dirichlet line.
#[derive(Clone, Debug)]
pub struct HarmonicSolver {
    lu: Factored,
    a11: Vec<f64>,
    sigma: Vec<usize>,
}

impl HarmonicSolver {
    pub fn new(grid: &Grid, coeffs: &Coefficients) -> Result<HarmonicSolver> {
        let mut k = stiffness_a(grid, coeffs, Region::Full);
        for d in dirichlet_dofs(grid, Region::Full) {
            k.set_identity_row(d);
        }
        let sigma = grid.interface_dofs();
        for &d in &sigma {
            k.set_identity_row(d);
        }
        let lu = Factored::new(k, Some(&band_ordering(grid)), 1e-10)?;
        Ok(HarmonicSolver { lu, a11: coeffs.a.a11_on_interface(grid), sigma })
    }

    pub fn solve(&self, grid: &Grid, g: &InterfaceTrace) -> Result<ComplexField> {
        if g.len() != grid.ny {
            return Err(Error::Argument(format!("trace has {} values, expected {}", g.len(), grid.ny)));
        }
        if g.values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Argument("conormal trace is not finite".into()));
        }
        let mut b = vec![C64::new(0.0, 0.0); grid.n_dofs()];
        for ((&d, v), a) in self.sigma.iter().zip(&g.values).zip(&self.a11) {
            b[d] = v / a;
        }
        let (x, _) = self.lu.solve(&b)?;
        ComplexField::from_vec(grid, x)
    }
}

/// `u_h`: piecewise `A`-harmonic with interface values `a11^{-1} g`, zero at `x = +-a`.
pub fn solve_harmonic(g: &InterfaceTrace, coeffs: &Coefficients, grid: &Grid) -> Result<ComplexField> {
    HarmonicSolver::new(grid, coeffs)?.solve(grid, g)
}

/// Splits `u` given its conormal trace `g`. `nu = 0` selects `log|x|`; otherwise the
/// absorbed logarithm on the half plane of `branch` (`+-1`).
pub fn split(grid: &Grid, u: &ComplexField, g: &InterfaceTrace, nu: f64, coeffs: &Coefficients, branch: f64) -> Result<Decomposition> {
    let u_h = solve_harmonic(g, coeffs, grid)?;
    split_with(grid, u, g, u_h, nu, coeffs, branch)
}

/// [`split`] with a precomputed harmonic part.
pub fn split_with(
    grid: &Grid,
    u: &ComplexField,
    g: &InterfaceTrace,
    u_h: ComplexField,
    nu: f64,
    coeffs: &Coefficients,
    branch: f64,
) -> Result<Decomposition> {
    if branch != 1.0 && branch != -1.0 {
        return Err(Error::Argument(format!("branch sign must be +1 or -1, got {branch}")));
    }
    if !u.matches(grid) {
        return Err(Error::Argument("field does not match the grid".into()));
    }
    let kind = if nu == 0.0 { SplitKind::ZeroAbsorption { sign: branch } } else { SplitKind::Absorbed { nu: nu.abs(), sign: branch } };
    let r = coeffs.r_field();
    let mut u_reg = ComplexField::zeros(grid);
    for i in 0..grid.nx() {
        if i == grid.i_sigma() {
            continue;
        }
        for j in 0..grid.ny {
            let l = log_factor(&kind, grid.x(i), r[grid.dof(i, j)])?;
            u_reg.set(i, j, u.at(i, j) - u_h.at(i, j) * l);
        }
    }
    Ok(Decomposition { u_h, u_reg, g: g.clone(), kind, r })
}

/// Quadratic extrapolation `3 f(h) - 3 f(2h) + f(3h)` of `u_reg` to the interface from `side`.
pub fn trace_of_regular(grid: &Grid, dec: &Decomposition, side: Side) -> Result<InterfaceTrace> {
    extrapolated_trace(grid, &dec.u_reg, side)
}

pub fn extrapolated_trace(grid: &Grid, w: &ComplexField, side: Side) -> Result<InterfaceTrace> {
    if grid.nx_half < 3 {
        return Err(Error::Grid(format!("trace extrapolation needs nx_half >= 3, got {}", grid.nx_half)));
    }
    let l = |k| w.line(grid.line_from_interface(side, k));
    let (l1, l2, l3) = (l(1), l(2), l(3));
    let v = (0..grid.ny).map(|j| 3.0 * l1[j] - 3.0 * l2[j] + l3[j]).collect();
    Ok(InterfaceTrace::new(grid.ell, v))
}

/// Jump of the regular part and the residual of the transmission condition.
#[derive(Clone, Debug)]
pub struct JumpReport {
    /// `[gamma_0 u]`, in the `log|x|` convention whatever the split kind.
    pub jump: InterfaceTrace,
    /// `rho = [gamma_0 u] + i pi sign a11^{-1} g`.
    pub residual: InterfaceTrace,
    pub residual_l2: f64,
    pub residual_h12: f64,
    /// `||rho||_{L2} / ||[gamma_0 u]||_{L2}` (0 when both vanish).
    pub relative: f64,
}

pub fn jump_residual(grid: &Grid, dec: &Decomposition, a11: &[f64]) -> Result<JumpReport> {
    let p = trace_of_regular(grid, dec, Side::P)?;
    let n = trace_of_regular(grid, dec, Side::N)?;
    let sign = dec.kind.sign();
    let ip = C64::new(0.0, PI * sign);
    let ag = dec.g.zip(&InterfaceTrace::new(grid.ell, a11.iter().map(|&a| C64::new(a, 0.0)).collect()), |g, a| g / a);
    let mut jump = p.sub(&n);
    if let SplitKind::Absorbed { .. } = dec.kind {
        // log(x + i sign 0+) = log|x| + i pi sign on the n side
        jump = jump.sub(&ag.scale(ip));
    }
    let residual = jump.add(&ag.scale(ip));
    let residual_l2 = residual.l2_norm();
    let jl2 = jump.l2_norm();
    let relative = if jl2 > 0.0 { residual_l2 / jl2 } else { residual_l2 };
    Ok(JumpReport { residual_h12: sobolev_norm(&residual, 0.5), residual_l2, relative, jump, residual })
}
