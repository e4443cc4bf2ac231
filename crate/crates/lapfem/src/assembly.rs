//! Q1 assembly of `a_nu(u, v) = ((x A + i nu T) grad u, grad v) - omega^2 (u, v)`.
//!
//! The discrete system reads `K u = F` with `F_b = -(f, phi_b)` (the weak form of
//! `div(M grad u) = f`). Two quadratures are available for the principal part:
//!
//! * [`Quadrature::Gauss`]: 2x2 Gauss with bilinearly interpolated `A`, `T`;
//! * [`Quadrature::LogFitted`]: the `xx` entry uses, per y Gauss point, the harmonic
//!   mean `h / int dx / (alpha x + beta)` of the cell coefficient (a closed-form
//!   logarithm), plus the matching load correction. For y-independent data this is the
//!   exact three-point scheme of `((x + i nu) a u')' = f`, which keeps the `log(x + i nu)`
//!   layer resolved when `nu` is far below the mesh size.
//!
//! Dirichlet rows (x = +-a) are identity rows; numbering is always the full-grid one.

use crate::coefficients::{Coefficients, Mat2};
use crate::linsolve::CsrMatrix;
use crate::{ComplexField, Error, Grid, Result, Side, C64};

const GAUSS2: [(f64, f64); 2] = [(0.211_324_865_405_187_1, 0.5), (0.788_675_134_594_812_9, 0.5)];

/// Gauss–Legendre nodes/weights on `[0, 1]`.
pub fn gauss_legendre01(n: usize) -> Vec<(f64, f64)> {
    let (x, w): (&[f64], &[f64]) = match n {
        1 => (&[0.0], &[2.0]),
        2 => (&[-0.577_350_269_189_625_8, 0.577_350_269_189_625_8], &[1.0, 1.0]),
        3 => (&[-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4], &[0.555_555_555_555_555_6, 0.888_888_888_888_888_9, 0.555_555_555_555_555_6]),
        4 => (
            &[-0.861_136_311_594_052_6, -0.339_981_043_584_856_3, 0.339_981_043_584_856_3, 0.861_136_311_594_052_6],
            &[0.347_854_845_137_453_9, 0.652_145_154_862_546_1, 0.652_145_154_862_546_1, 0.347_854_845_137_453_9],
        ),
        6 => (
            &[-0.932_469_514_203_152, -0.661_209_386_466_264_5, -0.238_619_186_083_196_9, 0.238_619_186_083_196_9, 0.661_209_386_466_264_5, 0.932_469_514_203_152],
            &[0.171_324_492_379_170_3, 0.360_761_573_048_138_6, 0.467_913_934_572_691, 0.467_913_934_572_691, 0.360_761_573_048_138_6, 0.171_324_492_379_170_3],
        ),
        _ => panic!("no Gauss rule with {n} points"),
    };
    x.iter().zip(w).map(|(&x, &w)| (0.5 * (x + 1.0), 0.5 * w)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quadrature {
    Gauss,
    LogFitted,
}

/// Which cells contribute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Full,
    Half(Side),
}

impl Region {
    pub fn has_cell(self, grid: &Grid, ci: usize) -> bool {
        match self {
            Region::Full => true,
            Region::Half(s) => grid.cell_side(ci) == s,
        }
    }
}

/// Local Q1 basis on the unit square: node order `(0,0), (1,0), (0,1), (1,1)`.
fn basis(s: f64, t: f64) -> [f64; 4] {
    [(1.0 - s) * (1.0 - t), s * (1.0 - t), (1.0 - s) * t, s * t]
}

/// `(d/ds, d/dt)` of the local basis.
fn basis_grad(s: f64, t: f64) -> [[f64; 2]; 4] {
    [[-(1.0 - t), -(1.0 - s)], [1.0 - t, -s], [-t, 1.0 - s], [t, s]]
}

fn cell_dofs(grid: &Grid, ci: usize, cj: usize) -> [usize; 4] {
    [grid.dof(ci, cj), grid.dof(ci + 1, cj), grid.dof(ci, cj + 1), grid.dof(ci + 1, cj + 1)]
}

/// Stiffness `int M grad phi_a . grad phi_b` for a coefficient evaluated at quadrature points
/// by `coef(ci, cj, x, s, t)`; entries listed in `mask` (`[xx, xy, yx, yy]`) only.
fn stiffness_triplets(
    grid: &Grid,
    region: Region,
    nq: usize,
    mask: [bool; 4],
    mut coef: impl FnMut(usize, usize, f64, f64, f64) -> Mat2,
    trips: &mut Vec<(usize, usize, C64)>,
) {
    let rule = if nq == 2 { GAUSS2.to_vec() } else { gauss_legendre01(nq) };
    let (hx, hy) = (grid.hx, grid.hy);
    for (ci, x0, x1) in grid.cells_x() {
        if !region.has_cell(grid, ci) {
            continue;
        }
        for cj in 0..grid.ny {
            let dofs = cell_dofs(grid, ci, cj);
            let mut ke = [[C64::new(0.0, 0.0); 4]; 4];
            for &(s, ws) in &rule {
                let x = x0 + s * (x1 - x0);
                for &(t, wt) in &rule {
                    let m = coef(ci, cj, x, s, t);
                    let w = ws * wt * hx * hy;
                    let g = basis_grad(s, t);
                    for a in 0..4 {
                        let ga = [g[a][0] / hx, g[a][1] / hy];
                        for b in 0..4 {
                            let gb = [g[b][0] / hx, g[b][1] / hy];
                            let mut v = C64::new(0.0, 0.0);
                            if mask[0] {
                                v += m[0][0] * (ga[0] * gb[0]);
                            }
                            if mask[1] {
                                v += m[0][1] * (ga[1] * gb[0]);
                            }
                            if mask[2] {
                                v += m[1][0] * (ga[0] * gb[1]);
                            }
                            if mask[3] {
                                v += m[1][1] * (ga[1] * gb[1]);
                            }
                            ke[b][a] += v * w;
                        }
                    }
                }
            }
            push_element(&dofs, &ke, trips);
        }
    }
}

fn push_element(dofs: &[usize; 4], ke: &[[C64; 4]; 4], trips: &mut Vec<(usize, usize, C64)>) {
    for b in 0..4 {
        for a in 0..4 {
            trips.push((dofs[b], dofs[a], ke[b][a]));
        }
    }
}

fn mass_triplets(grid: &Grid, region: Region, scale: C64, trips: &mut Vec<(usize, usize, C64)>) {
    let (hx, hy) = (grid.hx, grid.hy);
    for (ci, _, _) in grid.cells_x() {
        if !region.has_cell(grid, ci) {
            continue;
        }
        for cj in 0..grid.ny {
            let dofs = cell_dofs(grid, ci, cj);
            let mut ke = [[C64::new(0.0, 0.0); 4]; 4];
            for &(s, ws) in &GAUSS2 {
                for &(t, wt) in &GAUSS2 {
                    let p = basis(s, t);
                    for a in 0..4 {
                        for b in 0..4 {
                            ke[b][a] += scale * (ws * wt * hx * hy * p[a] * p[b]);
                        }
                    }
                }
            }
            push_element(&dofs, &ke, trips);
        }
    }
}

fn with_diagonal(grid: &Grid, trips: &mut Vec<(usize, usize, C64)>) {
    for d in 0..grid.n_dofs() {
        trips.push((d, d, C64::new(0.0, 0.0)));
    }
}

/// `int M_ij grad phi_a grad phi_b` with `M = x A` (the real-coefficient part `S_A`).
pub fn stiffness_xa(grid: &Grid, coeffs: &Coefficients, region: Region) -> CsrMatrix {
    let mut trips = Vec::new();
    with_diagonal(grid, &mut trips);
    stiffness_triplets(grid, region, 2, [true; 4], |ci, cj, x, s, t| {
        let a = coeffs.a.cell_interp(ci, cj, s, t);
        crate::coefficients::mat2_scale(&a, x.into())
    }, &mut trips);
    CsrMatrix::from_triplets(grid.n_dofs(), trips)
}

/// Stiffness with coefficient `T` (`S_T`).
pub fn stiffness_t(grid: &Grid, coeffs: &Coefficients, region: Region) -> CsrMatrix {
    let mut trips = Vec::new();
    with_diagonal(grid, &mut trips);
    stiffness_triplets(grid, region, 2, [true; 4], |ci, cj, _, s, t| coeffs.t.cell_interp(ci, cj, s, t), &mut trips);
    CsrMatrix::from_triplets(grid.n_dofs(), trips)
}

/// Stiffness with coefficient `A` alone (the harmonic-part operator `div(A grad .)`).
pub fn stiffness_a(grid: &Grid, coeffs: &Coefficients, region: Region) -> CsrMatrix {
    let mut trips = Vec::new();
    with_diagonal(grid, &mut trips);
    stiffness_triplets(grid, region, 2, [true; 4], |ci, cj, _, s, t| coeffs.a.cell_interp(ci, cj, s, t), &mut trips);
    CsrMatrix::from_triplets(grid.n_dofs(), trips)
}

/// `b_b = int q . grad phi_b` over `region` for a vector field `q(ci, cj, x, s, t)` given at
/// the points of an `nq x nq` Gauss rule (the weak form of `-div q`).
pub fn flux_load(grid: &Grid, region: Region, nq: usize, mut q: impl FnMut(usize, usize, f64, f64, f64) -> [C64; 2]) -> Vec<C64> {
    let rule = gauss_legendre01(nq);
    let (hx, hy) = (grid.hx, grid.hy);
    let mut b = vec![C64::new(0.0, 0.0); grid.n_dofs()];
    for (ci, x0, x1) in grid.cells_x() {
        if !region.has_cell(grid, ci) {
            continue;
        }
        for cj in 0..grid.ny {
            let dofs = cell_dofs(grid, ci, cj);
            for &(s, ws) in &rule {
                let x = x0 + s * (x1 - x0);
                for &(t, wt) in &rule {
                    let v = q(ci, cj, x, s, t);
                    let w = ws * wt * hx * hy;
                    let g = basis_grad(s, t);
                    for a in 0..4 {
                        b[dofs[a]] += (v[0] * (g[a][0] / hx) + v[1] * (g[a][1] / hy)) * w;
                    }
                }
            }
        }
    }
    b
}

/// Value and gradient of the bilinear interpolant of `u` in cell `(ci, cj)` at `(s, t)`.
pub fn interpolate(grid: &Grid, u: &ComplexField, ci: usize, cj: usize, s: f64, t: f64) -> (C64, [C64; 2]) {
    let v = [u.at(ci, cj), u.at(ci + 1, cj), u.at(ci, cj + 1), u.at(ci + 1, cj + 1)];
    let p = basis(s, t);
    let g = basis_grad(s, t);
    let mut val = C64::new(0.0, 0.0);
    let mut grad = [C64::new(0.0, 0.0); 2];
    for a in 0..4 {
        val += v[a] * p[a];
        grad[0] += v[a] * (g[a][0] / grid.hx);
        grad[1] += v[a] * (g[a][1] / grid.hy);
    }
    (val, grad)
}

/// Stiffness with an arbitrary pointwise tensor `coef(x, y)` (2x2 Gauss), e.g. the identity.
pub fn stiffness_with(grid: &Grid, region: Region, coef: impl Fn(f64, f64) -> Mat2) -> CsrMatrix {
    let mut trips = Vec::new();
    with_diagonal(grid, &mut trips);
    stiffness_triplets(grid, region, 2, [true; 4], |_, cj, x, _, t| coef(x, grid.y(cj) + t * grid.hy), &mut trips);
    CsrMatrix::from_triplets(grid.n_dofs(), trips)
}

/// Consistent Q1 mass matrix.
pub fn mass_matrix(grid: &Grid, region: Region) -> CsrMatrix {
    let mut trips = Vec::new();
    with_diagonal(grid, &mut trips);
    mass_triplets(grid, region, C64::new(1.0, 0.0), &mut trips);
    CsrMatrix::from_triplets(grid.n_dofs(), trips)
}

/// `2 atanh(z) / z - 2`-type helpers for the fitted cell integrals with `z = alpha h / (2 k_mid)`.
fn atanh_c(z: C64) -> C64 {
    if z.norm() < 1e-2 {
        let z2 = z * z;
        let mut term = z;
        let mut s = z;
        for k in 1..8 {
            term *= z2;
            s += term / (2 * k + 1) as f64;
        }
        s
    } else {
        0.5 * ((C64::new(1.0, 0.0) + z).ln() - (C64::new(1.0, 0.0) - z).ln())
    }
}

/// `atanh(z) / z - 1`, accurate for small `z`.
fn atanh_excess(z: C64) -> C64 {
    if z.norm() < 0.1 {
        let z2 = z * z;
        let mut term = C64::new(1.0, 0.0);
        let mut s = C64::new(0.0, 0.0);
        for k in 1..12 {
            term *= z2;
            s += term / (2 * k + 1) as f64;
        }
        s
    } else {
        atanh_c(z) / z - 1.0
    }
}

/// Fitted cell data for `k(x) = alpha x + beta` on `[x0, x0 + h]`:
/// `(k_H, S)` with `k_H = h / int dx/k` and `S = atanh(z)/z - 1`. `None` when the
/// integral diverges (`beta = 0` and the cell touches `x = 0`).
fn fitted_cell(alpha: C64, beta: C64, x0: f64, h: f64) -> Option<(C64, C64)> {
    let km = alpha * (x0 + 0.5 * h) + beta;
    let k0 = alpha * x0 + beta;
    let k1 = alpha * (x0 + h) + beta;
    if k0 == C64::new(0.0, 0.0) || k1 == C64::new(0.0, 0.0) {
        return None;
    }
    let z = alpha * h / (2.0 * km);
    // int dx / k = 2 atanh(z) / alpha
    let integral = 2.0 * atanh_c(z) / alpha;
    let kh = h / integral;
    if !(kh.re.is_finite() && kh.im.is_finite()) {
        return None;
    }
    Some((kh, atanh_excess(z)))
}

/// A discretization of the full or one-sided problem at fixed `nu`, `omega`.
#[derive(Clone, Copy, Debug)]
pub struct Discretization<'a> {
    pub grid: &'a Grid,
    pub coeffs: &'a Coefficients,
    pub nu: f64,
    pub omega: f64,
    pub quadrature: Quadrature,
}

impl<'a> Discretization<'a> {
    /// Log-fitted quadrature when `nu != 0`, Gauss otherwise.
    pub fn new(grid: &'a Grid, coeffs: &'a Coefficients, nu: f64, omega: f64) -> Self {
        let quadrature = if nu != 0.0 { Quadrature::LogFitted } else { Quadrature::Gauss };
        Discretization { grid, coeffs, nu, omega, quadrature }
    }

    pub fn with_quadrature(mut self, q: Quadrature) -> Self {
        self.quadrature = q;
        self
    }

    pub fn check(&self) -> Result<()> {
        if !self.coeffs.a.matches(self.grid) || !self.coeffs.t.matches(self.grid) {
            return Err(Error::Argument("coefficients are sampled on a different grid".into()));
        }
        if !(self.omega >= 0.0) || !self.nu.is_finite() {
            return Err(Error::Argument(format!("need finite nu and omega >= 0 (nu={}, omega={})", self.nu, self.omega)));
        }
        Ok(())
    }

    /// Coefficients of the fitted `xx` flux at y Gauss point `t`: `k = alpha x + beta`.
    fn xx_line(&self, ci: usize, cj: usize, t: f64) -> (C64, C64) {
        let a = self.coeffs.a.cell_interp(ci, cj, 0.5, t)[0][0];
        let tt = self.coeffs.t.cell_interp(ci, cj, 0.5, t)[0][0];
        (a, C64::new(0.0, self.nu) * tt)
    }

    /// Unconstrained operator over `region` (no boundary rows).
    pub fn operator(&self, region: Region) -> CsrMatrix {
        let grid = self.grid;
        let nu = C64::new(0.0, self.nu);
        let coef = |ci: usize, cj: usize, x: f64, s: f64, t: f64| -> Mat2 {
            let a = self.coeffs.a.cell_interp(ci, cj, s, t);
            let tt = self.coeffs.t.cell_interp(ci, cj, s, t);
            let mut m = [[C64::new(0.0, 0.0); 2]; 2];
            for r in 0..2 {
                for c in 0..2 {
                    m[r][c] = a[r][c] * x + nu * tt[r][c];
                }
            }
            m
        };
        let mut trips = Vec::new();
        with_diagonal(grid, &mut trips);
        match self.quadrature {
            Quadrature::Gauss => stiffness_triplets(grid, region, 2, [true; 4], coef, &mut trips),
            Quadrature::LogFitted => {
                stiffness_triplets(grid, region, 2, [false, true, true, true], coef, &mut trips);
                self.fitted_xx(region, &mut trips);
            }
        }
        if self.omega != 0.0 {
            mass_triplets(grid, region, C64::new(-self.omega * self.omega, 0.0), &mut trips);
        }
        CsrMatrix::from_triplets(grid.n_dofs(), trips)
    }

    fn fitted_xx(&self, region: Region, trips: &mut Vec<(usize, usize, C64)>) {
        let grid = self.grid;
        let (hx, hy) = (grid.hx, grid.hy);
        for (ci, x0, x1) in grid.cells_x() {
            if !region.has_cell(grid, ci) {
                continue;
            }
            for cj in 0..grid.ny {
                let dofs = cell_dofs(grid, ci, cj);
                let mut ke = [[C64::new(0.0, 0.0); 4]; 4];
                for &(t, wt) in &GAUSS2 {
                    let (alpha, beta) = self.xx_line(ci, cj, t);
                    let kh = match fitted_cell(alpha, beta, x0, x1 - x0) {
                        Some((kh, _)) => kh,
                        None => alpha * (0.5 * (x0 + x1)) + beta,
                    };
                    let c = kh * (wt * hy / hx);
                    let p = basis(0.5, t);
                    let ydep = [p[0] + p[1], p[0] + p[1], p[2] + p[3], p[2] + p[3]];
                    let sx = [-1.0, 1.0, -1.0, 1.0];
                    for a in 0..4 {
                        for b in 0..4 {
                            ke[b][a] += c * (sx[a] * sx[b] * ydep[a] * ydep[b]);
                        }
                    }
                }
                push_element(&dofs, &ke, trips);
            }
        }
    }

    /// Load `F_b = -(f, phi_b)` over `region`, plus the fitted-flux correction when active.
    pub fn load(&self, f: &ComplexField, region: Region) -> Vec<C64> {
        let mut b = plain_load(self.grid, f, region);
        if self.quadrature == Quadrature::LogFitted {
            self.add_fitted_correction(f, region, &mut b);
        }
        b
    }

    /// Per y Gauss line the exact cell relation is `k_H/h (u_1 - u_0 - delta) = flux(x_mid)` with
    /// `delta = int (F(x) - F(x_mid)) / k dx`; moving `delta` to the right-hand side gives this term.
    fn add_fitted_correction(&self, f: &ComplexField, region: Region, b: &mut [C64]) {
        let grid = self.grid;
        let (hx, hy) = (grid.hx, grid.hy);
        for (ci, x0, x1) in grid.cells_x() {
            if !region.has_cell(grid, ci) {
                continue;
            }
            let h = x1 - x0;
            for cj in 0..grid.ny {
                let dofs = cell_dofs(grid, ci, cj);
                let fv = [f.at(ci, cj), f.at(ci + 1, cj), f.at(ci, cj + 1), f.at(ci + 1, cj + 1)];
                for &(t, wt) in &GAUSS2 {
                    let (alpha, beta) = self.xx_line(ci, cj, t);
                    let Some((kh, s)) = fitted_cell(alpha, beta, x0, h) else { continue };
                    let fl = fv[0] * (1.0 - t) + fv[2] * t;
                    let fr = fv[1] * (1.0 - t) + fv[3] * t;
                    let fm = 0.5 * (fl + fr);
                    let fp = (fr - fl) / h;
                    let km = alpha * (x0 + 0.5 * h) + beta;
                    let delta = s * h / alpha * (-fm + fp * km / (2.0 * alpha));
                    let c = kh * (wt * hy / hx) * delta;
                    let p = basis(0.5, t);
                    let ydep = [p[0] + p[1], p[0] + p[1], p[2] + p[3], p[2] + p[3]];
                    let sx = [-1.0, 1.0, -1.0, 1.0];
                    for a in 0..4 {
                        b[dofs[a]] += c * (sx[a] * ydep[a]);
                    }
                }
            }
        }
    }

    /// Full-domain system with Dirichlet identity rows at `x = +-a`.
    pub fn system(&self) -> Result<SystemMatrix> {
        self.check()?;
        let mut matrix = self.operator(Region::Full);
        let dirichlet = dirichlet_dofs(self.grid, Region::Full);
        for &d in &dirichlet {
            matrix.set_identity_row(d);
        }
        Ok(SystemMatrix { matrix, nu: self.nu, omega: self.omega, quadrature: self.quadrature, region: Region::Full, dirichlet })
    }

    /// Full-domain right-hand side with zeroed Dirichlet rows.
    pub fn rhs(&self, f: &ComplexField) -> Vec<C64> {
        let mut b = self.load(f, Region::Full);
        for d in dirichlet_dofs(self.grid, Region::Full) {
            b[d] = C64::new(0.0, 0.0);
        }
        b
    }
}

/// Dofs fixed by identity rows: outer Dirichlet lines, plus for a half region every node
/// strictly on the other side.
pub fn dirichlet_dofs(grid: &Grid, region: Region) -> Vec<usize> {
    let mut out = Vec::new();
    for i in 0..grid.nx() {
        let inactive = match region {
            Region::Full => false,
            Region::Half(Side::P) => i < grid.i_sigma(),
            Region::Half(Side::N) => i > grid.i_sigma(),
        };
        if grid.is_dirichlet(i) || inactive {
            out.extend(grid.line_dofs(i));
        }
    }
    out
}

/// Assembled operator with boundary rows applied.
#[derive(Clone, Debug)]
pub struct SystemMatrix {
    pub matrix: CsrMatrix,
    pub nu: f64,
    pub omega: f64,
    pub quadrature: Quadrature,
    pub region: Region,
    pub dirichlet: Vec<usize>,
}

/// Full-domain system (log-fitted for `nu != 0`).
pub fn assemble_system(grid: &Grid, coeffs: &Coefficients, nu: f64, omega: f64) -> Result<SystemMatrix> {
    Discretization::new(grid, coeffs, nu, omega).system()
}

/// Plain consistent load `-(f, phi)` over `region` (no boundary treatment).
pub fn plain_load(grid: &Grid, f: &ComplexField, region: Region) -> Vec<C64> {
    let (hx, hy) = (grid.hx, grid.hy);
    let mut b = vec![C64::new(0.0, 0.0); grid.n_dofs()];
    // Q1 element mass = hx hy / 36 * [[4,2,2,1],[2,4,1,2],[2,1,4,2],[1,2,2,4]]
    const M: [[f64; 4]; 4] = [[4.0, 2.0, 2.0, 1.0], [2.0, 4.0, 1.0, 2.0], [2.0, 1.0, 4.0, 2.0], [1.0, 2.0, 2.0, 4.0]];
    let w = hx * hy / 36.0;
    for (ci, _, _) in grid.cells_x() {
        if !region.has_cell(grid, ci) {
            continue;
        }
        for cj in 0..grid.ny {
            let dofs = cell_dofs(grid, ci, cj);
            for a in 0..4 {
                let mut s = C64::new(0.0, 0.0);
                for c in 0..4 {
                    s += f.data[dofs[c]] * M[a][c];
                }
                b[dofs[a]] -= s * w;
            }
        }
    }
    b
}

/// Consistent load vector `-(f, phi)` with zeroed Dirichlet rows.
pub fn assemble_rhs(grid: &Grid, f: &ComplexField) -> Vec<C64> {
    let mut b = plain_load(grid, f, Region::Full);
    for d in dirichlet_dofs(grid, Region::Full) {
        b[d] = C64::new(0.0, 0.0);
    }
    b
}

/// One-sided problem on the closed half `side`: natural condition on the interface with
/// optional conormal data `g` (values on the interface by increasing y), Dirichlet at the
/// outer boundary; nodes of the other side are identity rows with zero data.
pub fn assemble_subdomain(
    grid: &Grid,
    side: Side,
    coeffs: &Coefficients,
    nu: f64,
    f: &ComplexField,
    g: Option<&[C64]>,
) -> Result<(SystemMatrix, Vec<C64>)> {
    let disc = Discretization::new(grid, coeffs, nu, 0.0);
    disc.check()?;
    let region = Region::Half(side);
    let mut matrix = disc.operator(region);
    let dirichlet = dirichlet_dofs(grid, region);
    for &d in &dirichlet {
        matrix.set_identity_row(d);
    }
    let mut rhs = disc.load(f, region);
    if let Some(g) = g {
        if g.len() != grid.ny {
            return Err(Error::Argument(format!("interface data has {} values, expected {}", g.len(), grid.ny)));
        }
        let mg = crate::interface::interface_mass_apply(grid, g);
        for (k, d) in grid.interface_dofs().into_iter().enumerate() {
            rhs[d] -= mg[k] * side.sign();
        }
    }
    for &d in &dirichlet {
        rhs[d] = C64::new(0.0, 0.0);
    }
    Ok((SystemMatrix { matrix, nu, omega: 0.0, quadrature: disc.quadrature, region, dirichlet }, rhs))
}

/// Dof permutation (`perm[old] = new`) that interleaves the periodic y index so that the
/// band of a grid operator is about `ny + 3` instead of `2 ny`.
pub fn band_ordering(grid: &Grid) -> Vec<usize> {
    let ny = grid.ny;
    let pos = |j: usize| if j < ny / 2 { 2 * j } else { 2 * (ny - 1 - j) + 1 };
    (0..grid.n_dofs()).map(|d| {
        let (i, j) = grid.node(d);
        i * ny + pos(j)
    }).collect()
}
