//! Singular/regular split of an absorbed solution with y-dependent data, and the
//! one-sided traces of the regular part.

use lapfem::coefficients::{CoeffPreset, Coefficients};
use lapfem::decomposition::{jump_residual, split, trace_of_regular};
use lapfem::limiting::solve_absorption;
use lapfem::{ComplexField, Grid, Side, C64};
use std::f64::consts::PI;

fn main() -> lapfem::Result<()> {
    let grid = Grid::new(1.0, 1.0, 96, 32)?;
    let coeffs = Coefficients::preset(&grid, &CoeffPreset::Smooth)?;
    let f = ComplexField::from_fn(&grid, |x, y| C64::new(1.0 + 0.5 * (PI * y).cos(), 0.2 * x));
    let a11 = coeffs.a.a11_on_interface(&grid);
    for nu in [2e-2, 5e-3] {
        let s = solve_absorption(&f, nu, &coeffs, &grid, 0.0)?;
        let dec = split(&grid, &s.u, &s.g, nu, &coeffs, 1.0)?;
        let p = trace_of_regular(&grid, &dec, Side::P)?;
        let n = trace_of_regular(&grid, &dec, Side::N)?;
        let jr = jump_residual(&grid, &dec, &a11)?;
        println!("nu = {nu}");
        println!("  ||u_h||            = {:.5}", dec.u_h.l2_norm(&grid));
        println!("  trace_p(y = 0)     = {:.5}", p.values[grid.ny / 2]);
        println!("  trace_n(y = 0)     = {:.5}", n.values[grid.ny / 2]);
        println!("  ||rho|| / ||[u]||  = {:.2e}", jr.relative);
        println!("  ||rho||_1/2        = {:.2e}", jr.residual_h12);
    }
    Ok(())
}
