//! Interface traces, periodic Fourier norms on the interface, harmonic liftings, weighted
//! volume norms and the tangential frequency diagnostics.
//!
//! Fourier convention: orthonormal modes `e_m(y) = exp(i pi m y / ell) / sqrt(2 ell)` for
//! `m = -ny/2 .. ny/2 - 1`, eigenvalues `lambda_m = pi |m| / ell` of the periodic Laplacian.

use crate::assembly::{Discretization, Region};
use crate::coefficients::Coefficients;
use crate::{ComplexField, Error, Grid, Result, Side, C64};
use rustfft::FftPlanner;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Mode numbers in storage order `-ny/2, ..., ny/2 - 1`.
pub fn mode_numbers(ny: usize) -> impl Iterator<Item = i64> {
    let h = (ny / 2) as i64;
    -h..h
}

pub fn lambda(m: i64, ell: f64) -> f64 {
    PI * m.unsigned_abs() as f64 / ell
}

fn fft(data: &mut [C64], inverse: bool) {
    let mut planner = FftPlanner::new();
    let plan = if inverse { planner.plan_fft_inverse(data.len()) } else { planner.plan_fft_forward(data.len()) };
    plan.process(data);
}

/// Orthonormal coefficients `v_m = int v conj(e_m) dy` (rectangle rule, exact Parseval).
pub fn fourier_coefficients(values: &[C64], ell: f64) -> Vec<C64> {
    let ny = values.len();
    let hy = 2.0 * ell / ny as f64;
    let mut buf = values.to_vec();
    fft(&mut buf, false);
    let scale = hy / (2.0 * ell).sqrt();
    mode_numbers(ny)
        .map(|m| {
            let k = m.rem_euclid(ny as i64) as usize;
            // y_j = -ell + j hy  =>  exp(-i pi m y_j / ell) = (-1)^m exp(-2 pi i m j / ny)
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            buf[k] * (scale * sign)
        })
        .collect()
}

/// Inverse of [`fourier_coefficients`].
pub fn from_fourier(coeffs: &[C64], ell: f64) -> Vec<C64> {
    let ny = coeffs.len();
    let mut buf = vec![C64::new(0.0, 0.0); ny];
    for (c, m) in coeffs.iter().zip(mode_numbers(ny)) {
        let k = m.rem_euclid(ny as i64) as usize;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        buf[k] = c * sign;
    }
    fft(&mut buf, true);
    let scale = 1.0 / (2.0 * ell).sqrt();
    buf.iter().map(|z| z * scale).collect()
}

/// Complex values on an interface-parallel line, ordered by increasing y.
#[derive(Clone, Debug)]
pub struct InterfaceTrace {
    pub ell: f64,
    pub values: Vec<C64>,
    coeffs: OnceLock<Vec<C64>>,
}

impl PartialEq for InterfaceTrace {
    fn eq(&self, other: &Self) -> bool {
        self.ell == other.ell && self.values == other.values
    }
}

impl InterfaceTrace {
    pub fn new(ell: f64, values: Vec<C64>) -> InterfaceTrace {
        InterfaceTrace { ell, values, coeffs: OnceLock::new() }
    }

    pub fn zeros(grid: &Grid) -> InterfaceTrace {
        Self::new(grid.ell, vec![C64::new(0.0, 0.0); grid.ny])
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> C64) -> InterfaceTrace {
        Self::new(grid.ell, grid.ys().into_iter().map(f).collect())
    }

    pub fn from_coefficients(ell: f64, coeffs: Vec<C64>) -> InterfaceTrace {
        let values = from_fourier(&coeffs, ell);
        let t = Self::new(ell, values);
        let _ = t.coeffs.set(coeffs);
        t
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn hy(&self) -> f64 {
        2.0 * self.ell / self.values.len() as f64
    }

    /// Periodic Fourier coefficients, computed once.
    pub fn coefficients(&self) -> &[C64] {
        self.coeffs.get_or_init(|| fourier_coefficients(&self.values, self.ell))
    }

    pub fn lambdas(&self) -> Vec<f64> {
        mode_numbers(self.len()).map(|m| lambda(m, self.ell)).collect()
    }

    /// Discrete L² norm `(hy sum |v_j|^2)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.hy() * self.values.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> InterfaceTrace {
        Self::new(self.ell, self.values.iter().map(|&z| f(z)).collect())
    }

    pub fn zip(&self, other: &InterfaceTrace, f: impl Fn(C64, C64) -> C64) -> InterfaceTrace {
        assert_eq!(self.len(), other.len());
        Self::new(self.ell, self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect())
    }

    pub fn sub(&self, other: &InterfaceTrace) -> InterfaceTrace {
        self.zip(other, |a, b| a - b)
    }

    pub fn add(&self, other: &InterfaceTrace) -> InterfaceTrace {
        self.zip(other, |a, b| a + b)
    }

    pub fn scale(&self, s: C64) -> InterfaceTrace {
        self.map(|z| z * s)
    }

    pub fn conj(&self) -> InterfaceTrace {
        self.map(|z| z.conj())
    }

    /// Bilinear pairing `<g, h> = int g h dy` (rectangle rule; exact for trigonometric data).
    pub fn pairing(&self, other: &InterfaceTrace) -> C64 {
        self.hy() * self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum::<C64>()
    }

    pub fn mean(&self) -> C64 {
        self.values.iter().sum::<C64>() / self.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

/// `(sum_m (1 + lambda_m^2)^s |v_m|^2)^{1/2}`; meant for `|s| <= 2`.
pub fn sobolev_norm(t: &InterfaceTrace, s: f64) -> f64 {
    t.coefficients()
        .iter()
        .zip(mode_numbers(t.len()))
        .map(|(c, m)| (1.0 + lambda(m, t.ell).powi(2)).powf(s) * c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn filter(t: &InterfaceTrace, keep: impl Fn(f64) -> bool) -> InterfaceTrace {
    let c: Vec<C64> = t
        .coefficients()
        .iter()
        .zip(mode_numbers(t.len()))
        .map(|(&c, m)| if keep(lambda(m, t.ell)) { c } else { C64::new(0.0, 0.0) })
        .collect();
    InterfaceTrace::from_coefficients(t.ell, c)
}

/// Keeps the modes with `lambda_m < w`.
pub fn lowpass(t: &InterfaceTrace, w: f64) -> InterfaceTrace {
    filter(t, |l| l < w)
}

/// Keeps the modes with `lambda_m >= w`.
pub fn highpass(t: &InterfaceTrace, w: f64) -> InterfaceTrace {
    filter(t, |l| l >= w)
}

/// Nodal restriction of `u` to node line `line`.
pub fn dirichlet_trace(grid: &Grid, u: &ComplexField, line: usize) -> Result<InterfaceTrace> {
    if line >= grid.nx() {
        return Err(Error::Argument(format!("node line {line} out of range 0..{}", grid.nx())));
    }
    Ok(InterfaceTrace::new(grid.ell, u.line(line)))
}

/// Eigenvalues of the periodic interface mass matrix `hy [1/6, 2/3, 1/6]` (circulant).
fn interface_mass_symbol(ny: usize, hy: f64) -> Vec<f64> {
    (0..ny).map(|k| hy * (2.0 / 3.0 + (2.0 * PI * k as f64 / ny as f64).cos() / 3.0)).collect()
}

fn circulant(grid: &Grid, g: &[C64], invert: bool) -> Vec<C64> {
    let sym = interface_mass_symbol(grid.ny, grid.hy);
    let mut buf = g.to_vec();
    fft(&mut buf, false);
    for (b, s) in buf.iter_mut().zip(&sym) {
        *b = if invert { *b / *s } else { *b * *s };
    }
    fft(&mut buf, true);
    let n = grid.ny as f64;
    buf.iter().map(|z| z / n).collect()
}

/// `M_Sigma g`: the 1D periodic Q1 mass matrix on the interface applied to nodal data.
pub fn interface_mass_apply(grid: &Grid, g: &[C64]) -> Vec<C64> {
    circulant(grid, g, false)
}

pub fn interface_mass_solve(grid: &Grid, r: &[C64]) -> Vec<C64> {
    circulant(grid, r, true)
}

/// Variational conormal trace `(M grad u) . e_x` on the interface, seen from `side`.
///
/// With `r = (K_side u - F_side)` restricted to the interface rows, `g = -sign(side) M_Sigma^{-1} r`.
pub fn conormal_trace_with(disc: &Discretization, u: &ComplexField, f: &ComplexField, side: Side) -> InterfaceTrace {
    let grid = disc.grid;
    let region = Region::Half(side);
    let k = disc.operator(region);
    let load = disc.load(f, region);
    let r: Vec<C64> = grid
        .interface_dofs()
        .into_iter()
        .map(|d| k.row(d).map(|(c, v)| v * u.data[c]).sum::<C64>() - load[d])
        .collect();
    let g = interface_mass_solve(grid, &r);
    InterfaceTrace::new(grid.ell, g.into_iter().map(|z| -side.sign() * z).collect())
}

/// [`conormal_trace_with`] for the default discretization at `nu` (no mass term).
pub fn conormal_trace(
    grid: &Grid,
    u: &ComplexField,
    f: &ComplexField,
    side: Side,
    coeffs: &Coefficients,
    nu: f64,
) -> InterfaceTrace {
    conormal_trace_with(&Discretization::new(grid, coeffs, nu, 0.0), u, f, side)
}

/// Mode profile `sinh(lambda (delta - x)) / sinh(lambda delta)` (linear for `lambda = 0`), `0 <= x <= delta`.
pub fn lifting_profile(lambda: f64, delta: f64, x: f64) -> f64 {
    if x >= delta {
        return 0.0;
    }
    if lambda == 0.0 {
        return 1.0 - x / delta;
    }
    let e = |t: f64| (-t).exp();
    e(lambda * x) * (1.0 - e(2.0 * lambda * (delta - x))) / (1.0 - e(2.0 * lambda * delta))
}

/// Explicit harmonic extension into `Omega_p` of decay length `delta`: equal to `t` on the
/// interface, zero for `x >= delta` and for `x < 0`.
pub fn harmonic_lifting(grid: &Grid, t: &InterfaceTrace, delta: f64) -> Result<ComplexField> {
    if !(delta > 0.0 && delta < grid.a) {
        return Err(Error::Argument(format!("lifting width {delta} outside (0, {})", grid.a)));
    }
    if t.len() != grid.ny {
        return Err(Error::Argument("trace length differs from ny".into()));
    }
    let coeffs = t.coefficients();
    let lams = t.lambdas();
    let mut u = ComplexField::zeros(grid);
    for i in grid.side_lines(Side::P) {
        let x = grid.x(i);
        if x >= delta {
            break;
        }
        let modes: Vec<C64> = coeffs.iter().zip(&lams).map(|(c, &l)| c * lifting_profile(l, delta, x)).collect();
        let vals = if i == grid.i_sigma() { t.values.clone() } else { from_fourier(&modes, grid.ell) };
        for (j, v) in vals.into_iter().enumerate() {
            u.set(i, j, v);
        }
    }
    Ok(u)
}

/// Exact `(||Phi||_{L2}, ||grad Phi||_{L2})` of the continuous lifting, from the mode formulas.
pub fn lifting_norms(t: &InterfaceTrace, delta: f64) -> (f64, f64) {
    let mut l2 = 0.0;
    let mut h1 = 0.0;
    for (c, l) in t.coefficients().iter().zip(t.lambdas()) {
        let v2 = c.norm_sqr();
        if l == 0.0 {
            l2 += v2 * delta / 3.0;
            h1 += v2 / delta;
        } else {
            let ld = l * delta;
            // 1/sinh^2(ld) * int_0^delta sinh^2(l u) du, written with exp(-2 ld) to stay finite
            let q = (-2.0 * ld).exp();
            let coth = (1.0 + q) / (1.0 - q);
            let inv_sinh2 = 4.0 * q / ((1.0 - q) * (1.0 - q));
            l2 += v2 * 0.5 * (coth / l - delta * inv_sinh2);
            h1 += v2 * l * coth;
        }
    }
    (l2.sqrt(), h1.sqrt())
}

/// Weighted quantities of `u` over a region.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct WeightedNorm {
    /// `|| |x|^{delta/2} grad u ||`.
    pub grad: f64,
    /// `|| u ||`.
    pub l2: f64,
    /// `(grad^2 + l2^2)^{1/2}`: the `H^1_delta` norm.
    pub total: f64,
}

/// Region selector for volume norms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    All,
    Half(Side),
}

impl Domain {
    fn has_cell(self, grid: &Grid, ci: usize) -> bool {
        match self {
            Domain::All => true,
            Domain::Half(s) => grid.cell_side(ci) == s,
        }
    }
}

const G2: [f64; 2] = [0.211_324_865_405_187_1, 0.788_675_134_594_812_9];

/// Cellwise 2x2 Gauss integration of `w(x) |grad u_h|^2` and `v(x) |u_h|^2` for the bilinear
/// interpolant `u_h`. Gauss points never lie on `x = 0`.
fn cell_integrals(grid: &Grid, u: &ComplexField, dom: Domain, wgrad: impl Fn(f64) -> f64, wval: impl Fn(f64) -> f64) -> (f64, f64) {
    let (hx, hy) = (grid.hx, grid.hy);
    let (mut sg, mut sv) = (0.0, 0.0);
    for (ci, x0, x1) in grid.cells_x() {
        if !dom.has_cell(grid, ci) {
            continue;
        }
        for cj in 0..grid.ny {
            let v = [u.at(ci, cj), u.at(ci + 1, cj), u.at(ci, cj + 1), u.at(ci + 1, cj + 1)];
            for &s in &G2 {
                let x = x0 + s * (x1 - x0);
                let (wg, wv) = (wgrad(x), wval(x));
                for &t in &G2 {
                    let w = 0.25 * hx * hy;
                    let ux = ((v[1] - v[0]) * (1.0 - t) + (v[3] - v[2]) * t) / hx;
                    let uy = ((v[2] - v[0]) * (1.0 - s) + (v[3] - v[1]) * s) / hy;
                    let val = v[0] * (1.0 - s) * (1.0 - t) + v[1] * s * (1.0 - t) + v[2] * (1.0 - s) * t + v[3] * s * t;
                    sg += w * wg * (ux.norm_sqr() + uy.norm_sqr());
                    sv += w * wv * val.norm_sqr();
                }
            }
        }
    }
    (sg, sv)
}

/// `H^1_delta` quantities: `|| |x|^{delta/2} grad u ||` and `|| u ||` over `dom`.
pub fn weighted_norm(grid: &Grid, u: &ComplexField, delta: f64, dom: Domain) -> WeightedNorm {
    let (g, v) = cell_integrals(grid, u, dom, |x| x.abs().powf(delta), |_| 1.0);
    WeightedNorm { grad: g.sqrt(), l2: v.sqrt(), total: (g + v).sqrt() }
}

/// `|| |x|^{p} u ||` over `dom` (used by the Hardy probe with `p = -1/2 + eps`).
pub fn weighted_l2(grid: &Grid, u: &ComplexField, p: f64, dom: Domain) -> f64 {
    cell_integrals(grid, u, dom, |_| 0.0, |x| x.abs().powf(2.0 * p)).1.sqrt()
}

/// Multiplies every node line's y-Fourier coefficients by `(1 + lambda_m^2)^{k/4}` (`k = 1` is `J`).
pub fn bessel_potential_pow(grid: &Grid, u: &ComplexField, k: i32) -> ComplexField {
    map_lines(grid, u, |m| C64::new((1.0 + lambda(m, grid.ell).powi(2)).powf(k as f64 / 4.0), 0.0))
}

/// The Bessel potential `J`: symbol `(1 + lambda_m^2)^{1/4}` along y.
pub fn bessel_potential(grid: &Grid, u: &ComplexField) -> ComplexField {
    bessel_potential_pow(grid, u, 1)
}

/// Spectral `d/dy` along every node line.
pub fn spectral_dy(grid: &Grid, u: &ComplexField) -> ComplexField {
    map_lines(grid, u, |m| C64::new(0.0, PI * m as f64 / grid.ell))
}

fn map_lines(grid: &Grid, u: &ComplexField, symbol: impl Fn(i64) -> C64) -> ComplexField {
    let sym: Vec<C64> = mode_numbers(grid.ny).map(symbol).collect();
    let mut out = ComplexField::zeros(grid);
    for i in 0..grid.nx() {
        let c: Vec<C64> = fourier_coefficients(&u.line(i), grid.ell).iter().zip(&sym).map(|(a, b)| a * b).collect();
        for (j, v) in from_fourier(&c, grid.ell).into_iter().enumerate() {
            out.set(i, j, v);
        }
    }
    out
}

/// Discrete inner product `(u, v) = sum w_i u conj(v)` matching [`ComplexField::l2_norm`].
pub fn inner(grid: &Grid, u: &ComplexField, v: &ComplexField) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for i in 0..grid.nx() {
        let w = if grid.is_dirichlet(i) { 0.5 } else { 1.0 } * grid.hx * grid.hy;
        for j in 0..grid.ny {
            s += u.at(i, j) * v.at(i, j).conj() * w;
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(ell: f64, ny: usize) -> Grid {
        Grid::new(1.0, ell, 8, ny).unwrap()
    }

    #[test]
    fn constant_trace_h12() {
        let g = grid(PI, 16);
        let t = InterfaceTrace::from_fn(&g, |_| C64::new(1.0, 0.0));
        assert!((sobolev_norm(&t, 0.5) - (2.0 * PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn cosine_trace_norm() {
        for ell in [0.5, 1.0, 3.0] {
            let g = grid(ell, 32);
            let t = InterfaceTrace::from_fn(&g, |y| C64::new((PI * y / ell).cos(), 0.0));
            let expect = (1.0 + PI * PI / (ell * ell)).sqrt() * ell;
            assert!((sobolev_norm(&t, 0.5).powi(2) - expect).abs() < 1e-12 * expect);
            assert!((sobolev_norm(&t, 0.0) - t.l2_norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn fourier_roundtrip_and_symmetry() {
        let g = grid(1.3, 16);
        let t = InterfaceTrace::from_fn(&g, |y| C64::new(y.sin() + 0.2 * (3.0 * y).cos(), 0.0));
        let c = t.coefficients();
        let back = from_fourier(c, g.ell);
        for (a, b) in back.iter().zip(&t.values) {
            assert!((a - b).norm() < 1e-13);
        }
        let n = c.len();
        for k in 1..n / 2 {
            // m = -n/2 + k and its mirror
            let (m1, m2) = (k, n - k);
            assert!((c[m1] - c[m2].conj()).norm() < 1e-13);
        }
    }

    #[test]
    fn mass_solve_inverts_apply() {
        let g = grid(1.0, 12);
        let v: Vec<C64> = (0..12).map(|k| C64::new(k as f64, (k * k) as f64 * 0.1)).collect();
        let back = interface_mass_solve(&g, &interface_mass_apply(&g, &v));
        for (a, b) in back.iter().zip(&v) {
            assert!((a - b).norm() < 1e-12);
        }
        let ones = vec![C64::new(1.0, 0.0); 12];
        for z in interface_mass_apply(&g, &ones) {
            assert!((z.re - g.hy).abs() < 1e-14);
        }
    }

    #[test]
    fn filters() {
        let g = grid(1.0, 16);
        let t = InterfaceTrace::from_fn(&g, |y| C64::new(1.0 + (PI * y).cos() + (4.0 * PI * y).sin(), 0.0));
        let lo = lowpass(&t, 1e6);
        for (a, b) in lo.values.iter().zip(&t.values) {
            assert!((a - b).norm() < 1e-13);
        }
        let mean = lowpass(&t, 1e-9);
        for v in &mean.values {
            assert!((v - C64::new(1.0, 0.0)).norm() < 1e-13);
        }
        let w = 2.0 * PI;
        let s = lowpass(&t, w).add(&highpass(&t, w));
        for (a, b) in s.values.iter().zip(&t.values) {
            assert!((a - b).norm() < 1e-13);
        }
        let l1 = lowpass(&t, w);
        let l2 = lowpass(&l1, w);
        for (a, b) in l1.values.iter().zip(&l2.values) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn lifting_boundary_values() {
        let g = Grid::new(1.0, 1.0, 16, 16).unwrap();
        let t = InterfaceTrace::from_fn(&g, |y| C64::new(1.0 + 0.5 * (PI * y).cos(), 0.3 * (2.0 * PI * y).sin()));
        let delta = 0.5;
        let u = harmonic_lifting(&g, &t, delta).unwrap();
        assert_eq!(u.line(g.i_sigma()), t.values);
        let id = g.line_from_interface(Side::P, 8);
        assert!(u.line(id).iter().all(|z| z.norm() < 1e-15));
        assert!(harmonic_lifting(&g, &t, 1.0).is_err());
        assert!(harmonic_lifting(&g, &t, 0.0).is_err());
        let z = harmonic_lifting(&g, &InterfaceTrace::zeros(&g), 0.3).unwrap();
        assert_eq!(z.max_abs(), 0.0);
    }

    #[test]
    fn lifting_norms_match_quadrature() {
        let g = Grid::new(1.0, 1.0, 256, 64).unwrap();
        let t = InterfaceTrace::from_fn(&g, |y| C64::new(1.0 + 0.5 * (PI * y).cos(), 0.0));
        let delta = 0.5;
        let u = harmonic_lifting(&g, &t, delta).unwrap();
        let w = weighted_norm(&g, &u, 0.0, Domain::Half(Side::P));
        let (l2, h1) = lifting_norms(&t, delta);
        assert!((w.l2 - l2).abs() < 1e-3 * l2, "{} vs {}", w.l2, l2);
        assert!((w.grad - h1).abs() < 2e-2 * h1, "{} vs {}", w.grad, h1);
    }

    #[test]
    fn weighted_norm_constant_and_log() {
        let g = Grid::new(1.0, 1.0, 16, 8).unwrap();
        let c = ComplexField::from_fn(&g, |_, _| C64::new(2.0, 0.0));
        let w = weighted_norm(&g, &c, 1.0, Domain::Half(Side::P));
        assert!(w.grad < 1e-14);
        assert!((w.l2 * w.l2 - 4.0 * 2.0).abs() < 1e-12);
        let xs = |n: usize| {
            let g = Grid::new(1.0, 0.5, n, 4).unwrap();
            let h = g.hx;
            let u = ComplexField::from_fn(&g, |x, _| C64::new(if x == 0.0 { h.ln() } else { x.abs().ln() }, 0.0));
            (weighted_norm(&g, &u, 2.0, Domain::Half(Side::P)).grad, weighted_norm(&g, &u, 1.0, Domain::Half(Side::P)).grad)
        };
        let (s1, r1) = xs(16);
        let (s2, r2) = xs(64);
        // ||x grad u||^2 -> 2 ell (a - h), ||x^{1/2} grad u||^2 ~ 2 ell log(a/h)
        assert!((s1 * s1 - s2 * s2).abs() < 0.1);
        assert!(r2 * r2 - r1 * r1 > 0.8 * (4.0f64).ln());
    }

    #[test]
    fn bessel_identity_and_selfadjoint() {
        let g = Grid::new(1.0, 1.0, 4, 16).unwrap();
        let u = ComplexField::from_fn(&g, |x, y| C64::new((PI * y).sin() * x + 1.0, (3.0 * PI * y).cos() * x * x));
        let j2 = bessel_potential_pow(&g, &u, 2);
        let dy = spectral_dy(&g, &u);
        let lhs = j2.l2_norm(&g).powi(2);
        let rhs = u.l2_norm(&g).powi(2) + dy.l2_norm(&g).powi(2);
        assert!((lhs - rhs).abs() < 1e-10 * rhs);
        let c = ComplexField::from_fn(&g, |x, _| C64::new(x, 1.0));
        let jc = bessel_potential(&g, &c);
        for (a, b) in jc.data.iter().zip(&c.data) {
            assert!((a - b).norm() < 1e-13);
        }
        let v = ComplexField::from_fn(&g, |x, y| C64::new(y.cos(), x * y));
        let a = inner(&g, &bessel_potential(&g, &u), &v);
        let b = inner(&g, &u, &bessel_potential(&g, &v));
        assert!((a - b).norm() < 1e-12);
    }
}
