//! Direct solve of the limit transmission problem and comparison with a small-`nu` solve.

use lapfem::coefficients::Coefficients;
use lapfem::limiting::{solve_absorption, solve_limiting, LimitOptions};
use lapfem::{ComplexField, Grid, C64};

fn main() -> lapfem::Result<()> {
    let grid = Grid::new(1.0, 1.0, 128, 32)?;
    let coeffs = Coefficients::identity(&grid);
    let f = ComplexField::from_fn(&grid, |_, _| C64::new(1.0, 0.0));
    let limit = solve_limiting(&f, &coeffs, &grid, &LimitOptions::default())?;
    println!("g+   = {:.8}   (-2i/pi = {:.8}i)", limit.g.mean(), -2.0 / std::f64::consts::PI);
    println!("[u]  = {:.8}", limit.jump.jump.mean());
    println!("jump residual (relative) = {:.1e}", limit.jump.relative);
    let fnorm = f.l2_norm(&grid);
    for nu in [1e-2, 5e-3, 2.5e-3, 1.25e-3] {
        let s = solve_absorption(&f, nu, &coeffs, &grid, 0.0)?;
        println!("nu = {nu:<8} ||u+ - u^nu|| / ||f|| = {:.4}", limit.u.sub(&s.u).l2_norm(&grid) / fnorm);
    }
    let zero = solve_limiting(&ComplexField::zeros(&grid), &coeffs, &grid, &LimitOptions::default())?;
    println!("f = 0: ||g+|| = {:.1e}", zero.g.l2_norm());
    Ok(())
}
