//! Limiting-absorption experiments: absorbed solves, nu-sweeps with norm monitoring, the
//! direct solve of the limit transmission problem, and the Green identity across the interface.

use crate::assembly::{band_ordering, dirichlet_dofs, flux_load, interpolate, plain_load, Discretization, Quadrature, Region};
use crate::coefficients::Coefficients;
use crate::decomposition::{extrapolated_trace, jump_residual, split_with, Decomposition, HarmonicSolver, JumpReport, SplitKind};
use crate::interface::{conormal_trace_with, fourier_coefficients, interface_mass_apply, sobolev_norm, weighted_norm, Domain, InterfaceTrace};
use crate::linsolve::{DenseLu, Factored, SolveReport};
use crate::{ComplexField, Error, Grid, Result, Side, C64};
use std::f64::consts::PI;

/// An absorbed solution and its conormal trace on the interface (read from the p side).
#[derive(Clone, Debug)]
pub struct Absorbed {
    pub u: ComplexField,
    pub g: InterfaceTrace,
    pub nu: f64,
    pub report: SolveReport,
}

/// Full-domain solve of `div((x A + i nu T) grad u) + omega^2 u = f` with `u(+-a) = 0`.
pub fn solve_absorption(f: &ComplexField, nu: f64, coeffs: &Coefficients, grid: &Grid, omega: f64) -> Result<Absorbed> {
    if nu == 0.0 {
        return Err(Error::Argument("solve_absorption needs nu != 0".into()));
    }
    if !f.matches(grid) {
        return Err(Error::Argument("right-hand side does not match the grid".into()));
    }
    let disc = Discretization::new(grid, coeffs, nu, omega);
    let sys = disc.system()?;
    let b = disc.rhs(f);
    let lu = Factored::new(sys.matrix, Some(&band_ordering(grid)), 1e-10)?;
    let (x, report) = lu.solve(&b)?;
    let u = ComplexField::from_vec(grid, x)?;
    let g = conormal_trace_with(&disc, &u, f, Side::P);
    Ok(Absorbed { u, g, nu, report })
}

/// One row of a sweep table. `jump_res` is relative to `||[gamma_0 u]||_{L2}`; `cauchy` is
/// `||u^{nu_k} - u^{nu_{k-1}}||` (0 for the first row).
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct SweepRecord {
    pub nu: f64,
    pub l2: f64,
    pub xgrad: f64,
    pub sqrtnu_grad: f64,
    pub g_hm12: f64,
    pub g_h12: f64,
    pub jump_res: f64,
    pub cauchy: f64,
}

pub const SWEEP_HEADER: &str = "nu,l2,xgrad,sqrtnu_grad,g_hm12,g_h12,jump_res,cauchy";

/// Everything a sweep produces; `points[k]` belongs to `records[k]`.
#[derive(Clone, Debug)]
pub struct Sweep {
    pub records: Vec<SweepRecord>,
    pub points: Vec<SweepPoint>,
    pub f_norm: f64,
}

#[derive(Clone, Debug)]
pub struct SweepPoint {
    pub solution: Absorbed,
    pub decomposition: Decomposition,
    pub jump: JumpReport,
}

impl Sweep {
    /// The solution at the smallest `|nu|`: the surrogate of the limit.
    pub fn limit(&self) -> &SweepPoint {
        self.points.last().expect("sweeps are never empty")
    }
}

/// `nu_list` must be strictly decreasing in `|nu|` and of one sign.
pub fn check_nu_list(nu_list: &[f64]) -> Result<f64> {
    let Some(&first) = nu_list.first() else {
        return Err(Error::Argument("empty nu list".into()));
    };
    let sign = first.signum();
    if first == 0.0 || nu_list.iter().any(|&n| !n.is_finite() || n.signum() != sign || n == 0.0) {
        return Err(Error::Argument("nu values must be nonzero, finite and of one sign".into()));
    }
    if nu_list.windows(2).any(|w| w[1].abs() >= w[0].abs()) {
        return Err(Error::Argument("nu list must decrease strictly towards 0".into()));
    }
    Ok(sign)
}

/// Solves at every `nu` of the list and monitors the stability norms and the jump condition.
pub fn lap_sweep(f: &ComplexField, nu_list: &[f64], coeffs: &Coefficients, grid: &Grid, omega: f64) -> Result<Sweep> {
    let sign = check_nu_list(nu_list)?;
    let harmonic = HarmonicSolver::new(grid, coeffs)?;
    let a11 = coeffs.a.a11_on_interface(grid);
    let solve_one = |nu: f64| -> Result<SweepPoint> {
        let solution = solve_absorption(f, nu, coeffs, grid, omega)?;
        let u_h = harmonic.solve(grid, &solution.g)?;
        let decomposition = split_with(grid, &solution.u, &solution.g, u_h, nu, coeffs, sign)?;
        let jump = jump_residual(grid, &decomposition, &a11)?;
        Ok(SweepPoint { solution, decomposition, jump })
    };
    let points: Vec<SweepPoint> = std::thread::scope(|s| {
        let handles: Vec<_> = nu_list.iter().map(|&nu| s.spawn(move || solve_one(nu))).collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect::<Result<_>>()
    })?;
    let mut records = Vec::with_capacity(points.len());
    for (k, p) in points.iter().enumerate() {
        let u = &p.solution.u;
        let cauchy = if k == 0 { 0.0 } else { u.sub(&points[k - 1].solution.u).l2_norm(grid) };
        records.push(SweepRecord {
            nu: p.solution.nu,
            l2: u.l2_norm(grid),
            xgrad: weighted_norm(grid, u, 2.0, Domain::All).grad,
            sqrtnu_grad: p.solution.nu.abs().sqrt() * weighted_norm(grid, u, 0.0, Domain::All).grad,
            g_hm12: sobolev_norm(&p.solution.g, -0.5),
            g_h12: sobolev_norm(&p.solution.g, 0.5),
            jump_res: p.jump.relative,
            cauchy,
        });
    }
    Ok(Sweep { records, points, f_norm: f.l2_norm(grid) })
}

/// Options of [`solve_limiting`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitOptions {
    /// Accepted `||rho||_{L2} / ||[gamma_0 u]||_{L2}` of the returned solution.
    pub tol_jump: f64,
    /// `+1`: the limit from `nu > 0`; `-1`: from `nu < 0`.
    pub branch: f64,
}

impl Default for LimitOptions {
    fn default() -> Self {
        LimitOptions { tol_jump: 1e-8, branch: 1.0 }
    }
}

#[derive(Clone, Debug)]
pub struct Limiting {
    /// `u_h log|x| + u_reg` off the interface; on the interface line the cell average
    /// `u_h (log h - 1)` plus the mean of the two one-sided traces.
    pub u: ComplexField,
    pub g: InterfaceTrace,
    pub decomposition: Decomposition,
    pub jump: JumpReport,
    /// Order of the dense interface system.
    pub interface_size: usize,
}

/// Subdomain solves of the regular part for given `g`.
struct RegularSolver<'a> {
    grid: &'a Grid,
    coeffs: &'a Coefficients,
    harmonic: HarmonicSolver,
    sides: [(Side, Factored, Vec<usize>); 2],
    a11: Vec<f64>,
    branch: f64,
}

impl<'a> RegularSolver<'a> {
    fn new(grid: &'a Grid, coeffs: &'a Coefficients, branch: f64) -> Result<Self> {
        let disc = Discretization::new(grid, coeffs, 0.0, 0.0).with_quadrature(Quadrature::Gauss);
        disc.check()?;
        let perm = band_ordering(grid);
        let side = |s: Side| -> Result<(Side, Factored, Vec<usize>)> {
            let region = Region::Half(s);
            let mut k = disc.operator(region);
            let dir = dirichlet_dofs(grid, region);
            for &d in &dir {
                k.set_identity_row(d);
            }
            Ok((s, Factored::new(k, Some(&perm), 1e-10)?, dir))
        };
        Ok(RegularSolver {
            grid,
            coeffs,
            harmonic: HarmonicSolver::new(grid, coeffs)?,
            sides: [side(Side::P)?, side(Side::N)?],
            a11: coeffs.a.a11_on_interface(grid),
            branch,
        })
    }

    /// `(u_h, u_reg)` for conormal data `g` and optional source `f`.
    fn build(&self, g: &InterfaceTrace, f: Option<&ComplexField>) -> Result<(ComplexField, ComplexField)> {
        let grid = self.grid;
        let u_h = self.harmonic.solve(grid, g)?;
        let mut u_reg = ComplexField::zeros(grid);
        let mg = interface_mass_apply(grid, &g.values);
        for (side, lu, dir) in &self.sides {
            let region = Region::Half(*side);
            let mut b = match f {
                Some(f) => plain_load(grid, f, region),
                None => vec![C64::new(0.0, 0.0); grid.n_dofs()],
            };
            for (k, d) in grid.interface_dofs().into_iter().enumerate() {
                b[d] -= mg[k] * side.sign();
            }
            // weak form of div(x A grad(u_h log|x|)); x A grad(u_h log|x|) = A (u_h e_x + x log|x| grad u_h)
            let sing = flux_load(grid, region, 6, |ci, cj, x, s, t| {
                let (v, gr) = interpolate(grid, &u_h, ci, cj, s, t);
                let xl = x * x.abs().ln();
                let w = [v + gr[0] * xl, gr[1] * xl];
                let a = self.coeffs.a.cell_interp(ci, cj, s, t);
                [a[0][0] * w[0] + a[0][1] * w[1], a[1][0] * w[0] + a[1][1] * w[1]]
            });
            for (bi, si) in b.iter_mut().zip(&sing) {
                *bi -= si;
            }
            for &d in dir {
                b[d] = C64::new(0.0, 0.0);
            }
            let (x, _) = lu.solve(&b)?;
            for i in grid.side_lines(*side) {
                if i == grid.i_sigma() {
                    continue;
                }
                for j in 0..grid.ny {
                    u_reg.set(i, j, x[grid.dof(i, j)]);
                }
            }
        }
        Ok((u_h, u_reg))
    }

    /// `J(g) = [gamma_0 u_reg] + i pi sign a11^{-1} g`.
    fn residual(&self, g: &InterfaceTrace, u_reg: &ComplexField) -> Result<InterfaceTrace> {
        let p = extrapolated_trace(self.grid, u_reg, Side::P)?;
        let n = extrapolated_trace(self.grid, u_reg, Side::N)?;
        let ip = C64::new(0.0, PI * self.branch);
        let v = (0..self.grid.ny).map(|k| p.values[k] - n.values[k] + ip * g.values[k] / self.a11[k]).collect();
        Ok(InterfaceTrace::new(self.grid.ell, v))
    }
}

/// Solves the limit transmission problem `div(x A grad u) = f`, `[gamma_0 u] = -i pi sign
/// a11^{-1} gamma_n u` by probing the affine interface map with unit Fourier modes.
pub fn solve_limiting(f: &ComplexField, coeffs: &Coefficients, grid: &Grid, opts: &LimitOptions) -> Result<Limiting> {
    if opts.branch != 1.0 && opts.branch != -1.0 {
        return Err(Error::Argument(format!("branch sign must be +1 or -1, got {}", opts.branch)));
    }
    if !f.matches(grid) || !f.is_finite() {
        return Err(Error::Argument("right-hand side must be finite and match the grid".into()));
    }
    let solver = RegularSolver::new(grid, coeffs, opts.branch)?;
    let ny = grid.ny;
    let zero = InterfaceTrace::zeros(grid);
    let (_, reg0) = solver.build(&zero, Some(f))?;
    let j0 = fourier_coefficients(&solver.residual(&zero, &reg0)?.values, grid.ell);
    let columns: Vec<Vec<C64>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..ny)
            .map(|k| {
                let solver = &solver;
                s.spawn(move || -> Result<Vec<C64>> {
                    let mut e = vec![C64::new(0.0, 0.0); ny];
                    e[k] = C64::new(1.0, 0.0);
                    let g = InterfaceTrace::from_coefficients(grid.ell, e);
                    let (_, reg) = solver.build(&g, None)?;
                    Ok(fourier_coefficients(&solver.residual(&g, &reg)?.values, grid.ell))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("probe worker panicked")).collect::<Result<_>>()
    })?;
    let mut m = vec![C64::new(0.0, 0.0); ny * ny];
    for (k, col) in columns.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            m[r * ny + k] = *v;
        }
    }
    let lu = DenseLu::factor(ny, m).map_err(|e| Error::Solver(format!("interface matrix singular: {e}")))?;
    let rhs: Vec<C64> = j0.iter().map(|z| -z).collect();
    let g = InterfaceTrace::from_coefficients(grid.ell, lu.solve(&rhs));
    let (u_h, u_reg) = solver.build(&g, Some(f))?;
    let decomposition = Decomposition { u_h, u_reg, g: g.clone(), kind: SplitKind::ZeroAbsorption { sign: opts.branch }, r: coeffs.r_field() };
    let jump = jump_residual(grid, &decomposition, &solver.a11)?;
    let scale = jump.jump.l2_norm().max(f.l2_norm(grid));
    if jump.residual_l2 > opts.tol_jump * scale {
        return Err(Error::Verification(format!(
            "limit jump residual {:e} exceeds {:e} (relative)",
            jump.residual_l2 / scale.max(f64::MIN_POSITIVE),
            opts.tol_jump
        )));
    }
    let u = assemble_limit(grid, &decomposition)?;
    Ok(Limiting { u, g, decomposition, jump, interface_size: ny })
}

/// `u_h log|x| + u_reg`, with the cell-average surrogate on the interface line.
pub fn assemble_limit(grid: &Grid, dec: &Decomposition) -> Result<ComplexField> {
    let p = extrapolated_trace(grid, &dec.u_reg, Side::P)?;
    let n = extrapolated_trace(grid, &dec.u_reg, Side::N)?;
    let mut u = ComplexField::zeros(grid);
    let is = grid.i_sigma();
    for i in 0..grid.nx() {
        for j in 0..grid.ny {
            let v = if i == is {
                dec.u_h.at(i, j) * (grid.hx.ln() - 1.0) + 0.5 * (p.values[j] + n.values[j])
            } else {
                dec.u_h.at(i, j) * grid.x(i).abs().ln() + dec.u_reg.at(i, j)
            };
            u.set(i, j, v);
        }
    }
    Ok(u)
}

/// Both sides of the Green identity across the interface.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct GreenCheck {
    /// `(f_u, v) - (u, f_v)`.
    pub lhs: C64,
    /// `-<g_u, conj [v]> + conj <g_v, conj [u]>`.
    pub rhs: C64,
    /// `|lhs - rhs| / max(|lhs|, |rhs|)`.
    pub residual: f64,
}

/// `int_{(x0, x1)} p(x) log|x| dx` for `p(x) = c0 + c1 x + c2 x^2`, exact; `x0 < x1` on one side of 0.
fn poly_log_integral(c: [C64; 3], x0: f64, x1: f64) -> C64 {
    // substitute xi = |x|: p(x) = c0 + c1 s xi + c2 xi^2 with s = sign
    let s = if x1 <= 0.0 { -1.0 } else { 1.0 };
    let (a, b) = if s > 0.0 { (x0, x1) } else { (-x1, -x0) };
    let prim = |xi: f64, k: i32| -> f64 {
        if xi == 0.0 {
            return 0.0;
        }
        let k1 = (k + 1) as f64;
        xi.powi(k + 1) / k1 * (xi.ln() - 1.0 / k1)
    };
    let i = |k: i32| prim(b, k) - prim(a, k);
    c[0] * i(0) + c[1] * s * i(1) + c[2] * i(2)
}

/// `(f, w) = int f conj(w)` for `w = w_h log|x| + w_reg` given by a decomposition; the regular
/// part uses the one-sided extrapolated traces on the interface line.
fn pair_with_split(grid: &Grid, f: &ComplexField, dec: &Decomposition) -> Result<C64> {
    let traces = [extrapolated_trace(grid, &dec.u_reg, Side::P)?, extrapolated_trace(grid, &dec.u_reg, Side::N)?];
    let g3 = crate::assembly::gauss_legendre01(3);
    let is = grid.i_sigma();
    let mut total = C64::new(0.0, 0.0);
    for (ci, x0, x1) in grid.cells_x() {
        let side = grid.cell_side(ci);
        let tr = if side == Side::P { &traces[0] } else { &traces[1] };
        let reg = |i: usize, j: usize| if i == is { tr.values[j % grid.ny] } else { dec.u_reg.at(i, j) };
        for cj in 0..grid.ny {
            let fv = [f.at(ci, cj), f.at(ci + 1, cj), f.at(ci, cj + 1), f.at(ci + 1, cj + 1)];
            let rv = [reg(ci, cj), reg(ci + 1, cj), reg(ci, cj + 1), reg(ci + 1, cj + 1)];
            let hv = [dec.u_h.at(ci, cj), dec.u_h.at(ci + 1, cj), dec.u_h.at(ci, cj + 1), dec.u_h.at(ci + 1, cj + 1)];
            for &(t, wt) in &g3 {
                let lin = |v: &[C64; 4]| (v[0] * (1.0 - t) + v[2] * t, v[1] * (1.0 - t) + v[3] * t);
                let (fl, fr) = lin(&fv);
                let (rl, rr) = lin(&rv);
                let (hl, hr) = lin(&hv);
                // regular part: product of two linears, 3-point Gauss is exact
                for &(s, ws) in &g3 {
                    let fs = fl + (fr - fl) * s;
                    let rs = rl + (rr - rl) * s;
                    total += fs * rs.conj() * (ws * wt * grid.hx * grid.hy);
                }
                // singular part: (alpha + beta x)(gamma + delta x) log|x|, exact in x
                let h = x1 - x0;
                let (fb, fa) = ((fr - fl) / h, fl - (fr - fl) / h * x0);
                let hc = (hl.conj(), hr.conj());
                let (hb, ha) = ((hc.1 - hc.0) / h, hc.0 - (hc.1 - hc.0) / h * x0);
                let c = [fa * ha, fa * hb + fb * ha, fb * hb];
                total += poly_log_integral(c, x0, x1) * (wt * grid.hy);
            }
        }
    }
    Ok(total)
}

/// Green identity `(f_u, v) - (u, f_v) = -<g_u, conj [v]> + conj <g_v, conj [u]>` for two
/// limit solutions given by their sources and zero-absorption decompositions.
pub fn green_check(grid: &Grid, f_u: &ComplexField, dec_u: &Decomposition, f_v: &ComplexField, dec_v: &Decomposition) -> Result<GreenCheck> {
    for d in [dec_u, dec_v] {
        if !matches!(d.kind, SplitKind::ZeroAbsorption { .. }) {
            return Err(Error::Argument("green_check needs log|x| decompositions".into()));
        }
    }
    let lhs = pair_with_split(grid, f_u, dec_v)? - pair_with_split(grid, f_v, dec_u)?.conj();
    let jump = |d: &Decomposition| -> Result<InterfaceTrace> {
        Ok(extrapolated_trace(grid, &d.u_reg, Side::P)?.sub(&extrapolated_trace(grid, &d.u_reg, Side::N)?))
    };
    let (ju, jv) = (jump(dec_u)?, jump(dec_v)?);
    let rhs = -dec_u.g.pairing(&jv.conj()) + dec_v.g.pairing(&ju.conj()).conj();
    let scale = lhs.norm().max(rhs.norm());
    let residual = if scale > 0.0 { (lhs - rhs).norm() / scale } else { 0.0 };
    Ok(GreenCheck { lhs, rhs, residual })
}

/// Manufactured pair for `A = T = I`: `u* = sin(pi (x + a) / (2a)) exp(i pi y / ell)` and
/// `f = d_x((x + i nu) d_x u*) + (x + i nu) d_y^2 u*`, both sampled at the nodes.
pub fn manufactured(grid: &Grid, nu: f64) -> (ComplexField, ComplexField) {
    let (a, ell) = (grid.a, grid.ell);
    let k = PI / (2.0 * a);
    let m = PI / ell;
    let u = ComplexField::from_fn(grid, |x, y| C64::from_polar((k * (x + a)).sin(), m * y));
    let f = ComplexField::from_fn(grid, |x, y| {
        let th = k * (x + a);
        let w = C64::new(x, nu);
        (k * th.cos() - w * (k * k + m * m) * th.sin()) * C64::from_polar(1.0, m * y)
    });
    (u, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nu_list_validation() {
        assert!(check_nu_list(&[0.1, 0.05]).is_ok());
        assert_eq!(check_nu_list(&[-0.1, -0.05]).unwrap(), -1.0);
        assert!(check_nu_list(&[0.1, 0.2]).is_err());
        assert!(check_nu_list(&[0.1, -0.05]).is_err());
        assert!(check_nu_list(&[]).is_err());
        assert!(check_nu_list(&[0.1, 0.1]).is_err());
    }

    #[test]
    fn poly_log_matches_quadrature() {
        let c = [C64::new(1.0, 0.5), C64::new(-2.0, 0.0), C64::new(0.3, 1.0)];
        for &(x0, x1) in &[(0.0, 0.1), (0.2, 0.4), (-0.1, 0.0), (-0.5, -0.3)] {
            let exact = poly_log_integral(c, x0, x1);
            let n = 200_000;
            let h = (x1 - x0) / n as f64;
            let mut s = C64::new(0.0, 0.0);
            for k in 0..n {
                let x: f64 = x0 + (k as f64 + 0.5) * h;
                s += (c[0] + c[1] * x + c[2] * x * x) * x.abs().ln() * h;
            }
            assert!((s - exact).norm() < 1e-6, "{x0} {x1}: {s} vs {exact}");
        }
    }

    #[test]
    fn zero_source_gives_zero() {
        let g = Grid::new(1.0, 1.0, 8, 8).unwrap();
        let c = Coefficients::identity(&g);
        let f = ComplexField::zeros(&g);
        let a = solve_absorption(&f, 0.1, &c, &g, 0.0).unwrap();
        assert_eq!(a.u.max_abs(), 0.0);
        let l = solve_limiting(&f, &c, &g, &LimitOptions::default()).unwrap();
        assert!(l.g.max_abs() < 1e-12 && l.u.max_abs() < 1e-12);
    }
}
