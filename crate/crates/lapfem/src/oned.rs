//! Quadrature oracle for y-independent data: `((x + i nu) a(x) u')' = f` on `(-a, a)`,
//! `u(+-a) = 0`. Shares no code with the 2D discretization.
//!
//! With `F(x) = int_{-a}^x f`, the flux is `(x + i nu) a u' = F + c0` and `c0` is fixed by
//! `u(a) = 0`. Near `x = 0` the solution behaves like `kappa log(x + i nu)`; `kappa` is the
//! residue of `u'` at `x = -i nu`, taken to first order in `nu`:
//! `kappa = (F(0) + c0 - i nu f(0)) / a(0)` (exact for constant `f` and `a`).

use crate::{Error, Result, C64};
use std::f64::consts::PI;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6, 0.949_107_912_342_758_5, 0.864_864_423_359_769_1, 0.741_531_185_599_394_4,
    0.586_087_235_467_691_1, 0.405_845_151_377_397_2, 0.207_784_955_007_898_5, 0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22, 0.063_092_092_629_978_55, 0.104_790_010_322_250_2, 0.140_653_259_715_525_9,
    0.169_004_726_639_267_9, 0.190_350_578_064_785_4, 0.204_432_940_075_298_9, 0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// Oracle quadrature tolerance (absolute).
pub const TOL: f64 = 1e-12;

fn gk15(f: &mut impl FnMut(f64) -> C64, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += s * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Adaptive Gauss–Kronrod (7/15) quadrature of a complex integrand with absolute tolerance
/// `tol`, bisecting until each piece meets its length-proportional share.
pub fn integrate(mut f: impl FnMut(f64) -> C64, a: f64, b: f64, tol: f64) -> Result<C64> {
    if a == b {
        return Ok(C64::new(0.0, 0.0));
    }
    let total = (b - a).abs();
    let mut stack = vec![(a, b, 0u32)];
    let mut sum = C64::new(0.0, 0.0);
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, err) = gk15(&mut f, lo, hi);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Quadrature(format!("non-finite integrand on [{lo}, {hi}]")));
        }
        let share = tol * (hi - lo).abs() / total;
        if err <= share.max(1e-15 * v.norm()) {
            sum += v;
        } else if depth >= 60 {
            return Err(Error::Quadrature(format!("no convergence on [{lo}, {hi}] (error {err:e})")));
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    Ok(sum)
}

/// Integral over `[a, b]` split at the given interior breakpoints.
pub fn integrate_pieces(mut f: impl FnMut(f64) -> C64, a: f64, b: f64, breaks: &[f64], tol: f64) -> Result<C64> {
    let mut pts = vec![a];
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|&x| x > lo && x < hi).collect();
    inner.sort_by(|p, q| if a < b { p.total_cmp(q) } else { q.total_cmp(p) });
    pts.extend(inner);
    pts.push(b);
    let n = pts.len() - 1;
    let mut s = C64::new(0.0, 0.0);
    for w in pts.windows(2) {
        s += integrate(&mut f, w[0], w[1], tol / n as f64)?;
    }
    Ok(s)
}

/// Solution of the absorbed 1D problem sampled at `xs`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneDSolution {
    pub xs: Vec<f64>,
    pub u: Vec<C64>,
    /// Amplitude of `log(x + i nu)`, to first order in `nu`.
    pub kappa: C64,
    /// `u(0) - kappa log(i nu)`.
    pub d: C64,
    /// Flux constant: `(x + i nu) a u' = F + c0`.
    pub c0: C64,
    /// Conormal trace `(x + i nu) a u'` at `x = 0`.
    pub g: C64,
    pub nu: f64,
    pub a: f64,
}

/// Antiderivative `F(x) = int_{-a}^x f`.
fn antiderivative<'f>(f: &'f dyn Fn(f64) -> f64, a: f64) -> impl Fn(f64) -> Result<f64> + 'f {
    move |x| Ok(integrate(|s| C64::new(f(s), 0.0), -a, x, 1e-3 * TOL)?.re)
}

/// Solves `((x + i nu) a_coeff(x) u')' = f` on `(-a, a)` with `u(+-a) = 0`, evaluating `u` at `xs`.
pub fn solve_1d(f: &dyn Fn(f64) -> f64, a_coeff: &dyn Fn(f64) -> f64, nu: f64, a: f64, xs: &[f64]) -> Result<OneDSolution> {
    if nu == 0.0 {
        return Err(Error::Argument("solve_1d needs nu != 0 (use limit_1d for the limit)".into()));
    }
    if !(a > 0.0) {
        return Err(Error::Argument(format!("half-width must be positive, got {a}")));
    }
    let big_f = antiderivative(f, a);
    let k = |x: f64| C64::new(x, nu) * a_coeff(x);
    let failure: std::cell::RefCell<Option<Error>> = std::cell::RefCell::new(None);
    let ff = |x: f64| match big_f(x) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let breaks = [0.0];
    let i_fk = integrate_pieces(|x| ff(x) / k(x), -a, a, &breaks, TOL)?;
    let i_k = integrate_pieces(|x| 1.0 / k(x), -a, a, &breaks, TOL)?;
    let c0 = -i_fk / i_k;
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&p, &q| xs[p].total_cmp(&xs[q]));
    let mut u = vec![C64::new(0.0, 0.0); xs.len()];
    let mut acc = C64::new(0.0, 0.0);
    let mut x_prev = -a;
    for &idx in &order {
        let x = xs[idx].clamp(-a, a);
        acc += integrate_pieces(|s| (ff(s) + c0) / k(s), x_prev, x, &breaks, TOL)?;
        u[idx] = acc;
        x_prev = x;
    }
    let f0 = ff(0.0);
    let u0 = integrate_pieces(|s| (ff(s) + c0) / k(s), -a, 0.0, &[], TOL)?;
    if let Some(e) = failure.borrow_mut().take() {
        return Err(e);
    }
    let g = f0 + c0;
    let kappa = (g - C64::new(0.0, nu) * f(0.0)) / a_coeff(0.0);
    let d = u0 - kappa * C64::new(0.0, nu).ln();
    Ok(OneDSolution { xs: xs.to_vec(), u, kappa, d, c0, g, nu, a })
}

/// The `nu -> 0` limit on the branch `sign` (`+1`: `nu -> 0+`, `-1`: `nu -> 0-`).
#[derive(Clone, Debug, PartialEq)]
pub struct OneDLimit {
    pub xs: Vec<f64>,
    /// `u(x)` at `xs` (for `x = 0` the value is not defined and reported as NaN).
    pub u: Vec<C64>,
    pub kappa: C64,
    pub c0: C64,
    /// Conormal trace `g = kappa a(0)`.
    pub g: C64,
    /// One-sided traces of the regular part `u - u_h log|x|`.
    pub reg_trace_p: C64,
    pub reg_trace_n: C64,
    /// `reg_trace_p - reg_trace_n = -i pi sign kappa`.
    pub jump: C64,
    pub sign: f64,
}

/// Analytic limit `u = kappa (log|x| + i pi sign 1_{x<0}) + H(x) + C`, with
/// `q/a = kappa + x h(x)` and `H(x) = int_0^x h`.
pub fn limit_1d(f: &dyn Fn(f64) -> f64, a_coeff: &dyn Fn(f64) -> f64, a: f64, xs: &[f64], sign: f64) -> Result<OneDLimit> {
    if !(a > 0.0) {
        return Err(Error::Argument(format!("half-width must be positive, got {a}")));
    }
    let sign = if sign < 0.0 { -1.0 } else { 1.0 };
    let big_f = antiderivative(f, a);
    let f0 = big_f(0.0)?;
    let a0 = a_coeff(0.0);
    // h(x) = h0(x) + c0 h1(x)
    let h0 = |x: f64| -> C64 { C64::new((big_f(x).unwrap_or(f64::NAN) / a_coeff(x) - f0 / a0) / x, 0.0) };
    let h1 = |x: f64| -> C64 { C64::new((1.0 / a_coeff(x) - 1.0 / a0) / x, 0.0) };
    let ip = C64::new(0.0, PI * sign);
    let i_h0 = integrate_pieces(h0, -a, a, &[0.0], TOL)?;
    let i_h1 = integrate_pieces(h1, -a, a, &[0.0], TOL)?;
    // i pi sign kappa + H(-a) - H(a) = 0 with kappa = (F0 + c0)/a0
    let c0 = (i_h0 - ip * f0 / a0) / (ip / a0 - i_h1);
    let kappa = (f0 + c0) / a0;
    let h = |x: f64| h0(x) + c0 * h1(x);
    let h_a = integrate(h, 0.0, a, TOL)?;
    let cst = -kappa * a.ln() - h_a;
    let mut u = Vec::with_capacity(xs.len());
    for &x in xs {
        if x == 0.0 {
            u.push(C64::new(f64::NAN, f64::NAN));
            continue;
        }
        let hx = integrate(h, 0.0, x, TOL)?;
        let sing = x.abs().ln() + if x < 0.0 { ip.im } else { 0.0 } * C64::new(0.0, 1.0);
        u.push(kappa * sing + hx + cst);
    }
    let reg_trace_p = cst;
    let reg_trace_n = cst + ip * kappa;
    Ok(OneDLimit { xs: xs.to_vec(), u, kappa, c0, g: kappa * a0, reg_trace_p, reg_trace_n, jump: reg_trace_p - reg_trace_n, sign })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(_: f64) -> f64 {
        1.0
    }

    fn closed_form(x: f64, nu: f64) -> C64 {
        let kappa = -2.0 / (C64::new(1.0, nu).ln() - C64::new(-1.0, nu).ln());
        let d = -1.0 - kappa * C64::new(1.0, nu).ln();
        x + kappa * C64::new(x, nu).ln() + d
    }

    #[test]
    fn quadrature_polynomial_and_log() {
        let v = integrate(|x| C64::new(x * x, 0.0), 0.0, 3.0, 1e-13).unwrap();
        assert!((v.re - 9.0).abs() < 1e-12);
        let v = integrate(|x| C64::new(x, 1e-4).inv(), -1.0, 1.0, 1e-12).unwrap();
        let exact = C64::new(1.0, 1e-4).ln() - C64::new(-1.0, 1e-4).ln();
        assert!((v - exact).norm() < 1e-11);
    }

    #[test]
    fn zero_source_zero_solution() {
        let xs = [-0.5, 0.0, 0.5];
        let s = solve_1d(&|_| 0.0, &one, 0.1, 1.0, &xs).unwrap();
        assert!(s.u.iter().all(|z| z.norm() < 1e-14));
        assert!(s.kappa.norm() < 1e-14);
    }

    #[test]
    fn unit_source_matches_closed_form() {
        let xs: Vec<f64> = (0..=20).map(|k| -1.0 + 0.1 * k as f64).collect();
        for nu in [1e-1, 1e-3, -1e-3] {
            let s = solve_1d(&one, &one, nu, 1.0, &xs).unwrap();
            for (x, u) in xs.iter().zip(&s.u) {
                assert!((u - closed_form(*x, nu)).norm() < 1e-10, "nu={nu} x={x}");
            }
            let kappa = -2.0 / (C64::new(1.0, nu).ln() - C64::new(-1.0, nu).ln());
            assert!((s.kappa - kappa).norm() < 1e-10, "nu={nu}: {} vs {}", s.kappa, kappa);
            assert!((s.d - (-1.0 - kappa * C64::new(1.0, nu).ln())).norm() < 1e-10);
        }
    }

    #[test]
    fn unit_source_limit() {
        let xs = [-0.5, 0.25];
        let l = limit_1d(&one, &one, 1.0, &xs, 1.0).unwrap();
        assert!((l.kappa - C64::new(0.0, -2.0 / PI)).norm() < 1e-12);
        assert!((l.reg_trace_p - C64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!((l.reg_trace_n - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((l.jump - C64::new(-2.0, 0.0)).norm() < 1e-12);
        let m = limit_1d(&one, &one, 1.0, &xs, -1.0).unwrap();
        assert!((m.kappa - C64::new(0.0, 2.0 / PI)).norm() < 1e-12);
        // the lower limit is the conjugate: the same real jump, now equal to +i pi g
        assert!((m.jump - C64::new(-2.0, 0.0)).norm() < 1e-12);
        assert!((m.jump - C64::new(0.0, PI) * m.g).norm() < 1e-12);
        // u+ = x - 1 + kappa (log|x| + i pi 1_{x<0})
        for (x, u) in xs.iter().zip(&l.u) {
            let sing = C64::new(x.abs().ln(), if *x < 0.0 { PI } else { 0.0 });
            assert!((u - (x - 1.0 + l.kappa * sing)).norm() < 1e-11);
        }
    }

    #[test]
    fn small_nu_approaches_limit() {
        let xs = [-0.5, 0.5];
        let l = limit_1d(&one, &one, 1.0, &xs, 1.0).unwrap();
        let s = solve_1d(&one, &one, 1e-6, 1.0, &xs).unwrap();
        assert!((s.kappa - l.kappa).norm() < 1e-5);
        for (a, b) in s.u.iter().zip(&l.u) {
            assert!((a - b).norm() < 1e-5);
        }
    }

    #[test]
    fn odd_source_has_no_singularity() {
        let l = limit_1d(&|x| x, &one, 1.0, &[0.3], 1.0).unwrap();
        assert!(l.kappa.norm() < 1e-12);
        // for nu > 0 the amplitude is O(nu)
        let s = solve_1d(&|x| x, &one, 1e-3, 1.0, &[0.3]).unwrap();
        assert!(s.kappa.norm() < 1e-2);
    }

    #[test]
    fn jump_is_minus_i_pi_over_a_times_g() {
        let ac = |x: f64| 2.0 + x;
        let l = limit_1d(&|x| 1.0 + x * x, &ac, 1.0, &[0.1], 1.0).unwrap();
        let expect = C64::new(0.0, -PI) * l.g / ac(0.0);
        assert!((l.jump - expect).norm() < 1e-12);
    }
}
