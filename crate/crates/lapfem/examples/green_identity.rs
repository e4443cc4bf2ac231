//! The Green identity across the interface for limit solutions.

use lapfem::coefficients::Coefficients;
use lapfem::limiting::{green_check, solve_limiting, LimitOptions};
use lapfem::{ComplexField, Grid, C64};
use std::f64::consts::PI;

fn main() -> lapfem::Result<()> {
    let grid = Grid::new(1.0, 1.0, 128, 32)?;
    let coeffs = Coefficients::identity(&grid);
    let f = ComplexField::from_fn(&grid, |_, _| C64::new(1.0, 0.0));
    let h = ComplexField::from_fn(&grid, |x, y| C64::new((1.0 + x) * (PI * y).cos(), 0.5 * x * x));
    let u = solve_limiting(&f, &coeffs, &grid, &LimitOptions::default())?;
    let v = solve_limiting(&h, &coeffs, &grid, &LimitOptions::default())?;
    for (name, fv, dv) in [("self", &f, &u.decomposition), ("pair", &h, &v.decomposition)] {
        let g = green_check(&grid, &f, &u.decomposition, fv, dv)?;
        println!("{name}: lhs = {:.8}, rhs = {:.8}, residual = {:.1e}", g.lhs, g.rhs, g.residual);
    }
    // uniqueness mechanism: int conj(g) [u] = -i pi int |g|^2 / a11, so Im (f, u) < 0 unless g = 0
    let j = &u.jump.jump;
    println!("int conj(g) [u] = {:.8}, -i pi ||g||^2 = {:.8}", u.g.conj().pairing(j), C64::new(0.0, -PI) * u.g.l2_norm().powi(2));
    Ok(())
}
