//! Invariants over randomized inputs.

use lapfem::coefficients::{coercivity_probe, validate_coefficients, Mat2, Role, TensorField};
use lapfem::coefficients::Coefficients;
use lapfem::decomposition::{log_factor, split, SplitKind};
use lapfem::experiment::{read_field, write_field};
use lapfem::interface::{bessel_potential, harmonic_lifting, highpass, inner, lowpass, sobolev_norm, InterfaceTrace};
use lapfem::limiting::solve_absorption;
use lapfem::{ComplexField, Grid, C64};
use proptest::prelude::*;
use std::f64::consts::PI;

fn c64() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn trace(ny: usize) -> impl Strategy<Value = InterfaceTrace> {
    prop::collection::vec(c64(), ny).prop_map(|v| InterfaceTrace::new(1.0, v))
}

fn field(grid: Grid) -> impl Strategy<Value = ComplexField> {
    prop::collection::vec(c64(), grid.n_dofs()).prop_map(move |v| ComplexField::from_vec(&grid, v).unwrap())
}

/// Real source built from a few smooth modes.
fn real_source() -> impl Strategy<Value = [f64; 4]> {
    [-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64]
}

fn source(grid: &Grid, c: [f64; 4]) -> ComplexField {
    ComplexField::from_fn(grid, |x, y| C64::new(c[0] + c[1] * x + c[2] * (PI * y).cos() + c[3] * x * (PI * y).sin(), 0.0))
}

/// Hermitian positive definite matrix `L L^*` plus a shift.
fn hpd() -> impl Strategy<Value = Mat2> {
    (-1.0..1.0f64, -1.0..1.0f64, c64(), 0.05..1.0f64).prop_map(|(l11, l22, l21, shift)| {
        let l = [[C64::new(l11, 0.0), C64::new(0.0, 0.0)], [l21, C64::new(l22, 0.0)]];
        let mut m = [[C64::new(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                m[r][c] = (0..2).map(|k| l[r][k] * l[c][k].conj()).sum::<C64>();
            }
            m[r][r] += shift;
        }
        m[0][0].im = 0.0;
        m[1][1].im = 0.0;
        m[1][0] = m[0][1].conj();
        m
    })
}

fn small_grid() -> Grid {
    Grid::new(1.0, 1.0, 8, 8).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parseval(t in trace(16)) {
        let f = t.coefficients().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!((f - t.l2_norm()).abs() <= 1e-12 * (1.0 + f));
    }

    #[test]
    fn filters_split_and_are_idempotent(t in trace(16), w in 0.0..30.0f64) {
        let (lo, hi) = (lowpass(&t, w), highpass(&t, w));
        prop_assert!(lo.add(&hi).sub(&t).max_abs() < 1e-12);
        prop_assert!(lowpass(&lo, w).sub(&lo).max_abs() < 1e-12);
        prop_assert!(highpass(&lo, w).max_abs() < 1e-12);
    }

    #[test]
    fn sobolev_norm_is_monotone_in_s(t in trace(16), s in -1.0..1.0f64, ds in 0.01..1.0f64) {
        prop_assert!(sobolev_norm(&t, s) <= sobolev_norm(&t, s + ds) * (1.0 + 1e-12));
    }

    #[test]
    fn bessel_potential_is_self_adjoint(u in field(small_grid()), v in field(small_grid())) {
        let g = small_grid();
        let l = inner(&g, &bessel_potential(&g, &u), &v);
        let r = inner(&g, &u, &bessel_potential(&g, &v));
        prop_assert!((l - r).norm() <= 1e-12 * (1.0 + l.norm()));
    }

    #[test]
    fn lifting_reproduces_trace(t in trace(8), delta in 0.05..0.95f64) {
        let g = small_grid();
        let phi = harmonic_lifting(&g, &t, delta).unwrap();
        prop_assert_eq!(phi.line(g.i_sigma()), t.values.clone());
        for i in 0..g.nx() {
            if g.x(i) < 0.0 || g.x(i) >= delta {
                prop_assert!(phi.line(i).iter().all(|z| *z == C64::new(0.0, 0.0)));
            }
        }
    }

    #[test]
    fn field_dump_round_trips_bitwise(u in field(small_grid())) {
        let dir = tempfile::tempdir().unwrap();
        let side = write_field(dir.path(), "u", &small_grid(), &u).unwrap();
        let (meta, back) = read_field(&side).unwrap();
        prop_assert_eq!(meta.nx * meta.ny, u.data.len());
        for (a, b) in u.data.iter().zip(&back.data) {
            prop_assert!(a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits());
        }
    }

    #[test]
    fn log_branch_follows_sign(x in -1.0..1.0f64, nu in 1e-6..1.0f64, r in 0.1..10.0f64) {
        for sign in [1.0, -1.0] {
            let l = log_factor(&SplitKind::Absorbed { nu, sign }, x, r).unwrap();
            prop_assert!(l.im * sign > 0.0 && l.im.abs() < PI);
        }
    }

    #[test]
    fn coercivity_margin_at_least_c_t(a in hpd(), t in hpd(), nu in 1e-3..1.0f64, probes in prop::collection::vec((c64(), c64()), 1..6)) {
        let g = small_grid();
        let (fa, ft) = (TensorField::constant(&g, Role::A, a), TensorField::constant(&g, Role::T, t));
        let report = validate_coefficients(&fa, &ft).unwrap();
        let probes: Vec<[C64; 2]> = probes.into_iter().filter(|(p, q)| p.norm() + q.norm() > 1e-3).map(|(p, q)| [p, q]).collect();
        prop_assume!(!probes.is_empty());
        let m = coercivity_probe(&g, &fa, &ft, nu, &probes).unwrap();
        prop_assert!(m.im_margin >= report.c_t - 1e-12);
        prop_assert!((m.re_ratio.0 - 1.0).abs() < 1e-9 && (m.re_ratio.1 - 1.0).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn mirrored_absorption_is_conjugate(c in real_source(), nu in 1e-3..1.0f64) {
        let g = small_grid();
        let co = Coefficients::identity(&g);
        let f = source(&g, c);
        let p = solve_absorption(&f, nu, &co, &g, 0.0).unwrap();
        let n = solve_absorption(&f, -nu, &co, &g, 0.0).unwrap();
        prop_assert!(n.u.sub(&p.u.conj()).max_abs() <= 1e-10 * (1.0 + p.u.max_abs()));
        prop_assert!(n.g.sub(&p.g.conj()).max_abs() <= 1e-10 * (1.0 + p.g.max_abs()));
    }

    #[test]
    fn split_reconstructs_off_interface(c in real_source(), nu in 1e-3..1.0f64) {
        let g = small_grid();
        let co = Coefficients::identity(&g);
        let s = solve_absorption(&source(&g, c), nu, &co, &g, 0.0).unwrap();
        for (nu_split, branch) in [(nu, 1.0), (0.0, 1.0), (0.0, -1.0)] {
            let d = split(&g, &s.u, &s.g, nu_split, &co, branch).unwrap();
            let rec = d.reconstruct(&g);
            for i in (0..g.nx()).filter(|&i| i != g.i_sigma()) {
                for (a, b) in rec.line(i).iter().zip(s.u.line(i)) {
                    prop_assert!((a - b).norm() <= 1e-12 * (1.0 + b.norm()));
                }
            }
        }
    }
}
