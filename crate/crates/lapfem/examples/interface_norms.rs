//! Fourier norms on the interface, the harmonic lifting and the Bessel potential.

use lapfem::interface::{
    bessel_potential_pow, harmonic_lifting, highpass, lifting_norms, lowpass, sobolev_norm, spectral_dy, InterfaceTrace,
};
use lapfem::{ComplexField, Grid, C64};
use std::f64::consts::PI;

fn main() -> lapfem::Result<()> {
    let grid = Grid::new(1.0, 1.0, 64, 64)?;
    let t = InterfaceTrace::from_fn(&grid, |y| C64::new(1.0 + 0.5 * (PI * y).cos(), 0.3 * (3.0 * PI * y).sin()));
    let parseval: f64 = t.coefficients().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    println!("||t||_L2 = {:.12}, Fourier = {:.12}", t.l2_norm(), parseval);
    for s in [-0.5, 0.0, 0.5, 1.0] {
        println!("||t||_H^{s:<4} = {:.6}", sobolev_norm(&t, s));
    }
    let (lo, hi) = (lowpass(&t, 5.0), highpass(&t, 5.0));
    println!("lowpass + highpass - t = {:.1e}", lo.add(&hi).sub(&t).max_abs());

    println!("delta   (||Phi|| + delta ||grad Phi||) / (delta^1/2 ||t||_1/2)");
    for delta in [0.4, 0.2, 0.1, 0.05] {
        let (l2, h1) = lifting_norms(&t, delta);
        println!("{delta:<7} {:.5}", (l2 + delta * h1) / (delta.sqrt() * sobolev_norm(&t, 0.5)));
    }
    let phi = harmonic_lifting(&grid, &t, 0.2)?;
    println!("lifting on the interface - t = {:.1e}", InterfaceTrace::new(grid.ell, phi.line(grid.i_sigma())).sub(&t).max_abs());

    let u = ComplexField::from_fn(&grid, |x, y| C64::new((1.0 - x * x) * (PI * y).sin(), x * (2.0 * PI * y).cos()));
    let lhs = bessel_potential_pow(&grid, &u, 2).l2_norm(&grid).powi(2);
    let rhs = u.l2_norm(&grid).powi(2) + spectral_dy(&grid, &u).l2_norm(&grid).powi(2);
    println!("||J^2 u||^2 = {lhs:.12}, ||u||^2 + ||d_y u||^2 = {rhs:.12}");
    Ok(())
}
