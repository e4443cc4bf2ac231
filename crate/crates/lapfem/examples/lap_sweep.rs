//! A limiting-absorption sweep: norms stay bounded, the Cauchy increments shrink and the
//! jump of the regular part approaches `-i pi g`.

use lapfem::coefficients::Coefficients;
use lapfem::experiment::sweep_csv;
use lapfem::limiting::lap_sweep;
use lapfem::{ComplexField, Grid, C64};

fn main() -> lapfem::Result<()> {
    let grid = Grid::new(1.0, 1.0, 128, 32)?;
    let coeffs = Coefficients::identity(&grid);
    let f = ComplexField::from_fn(&grid, |_, _| C64::new(1.0, 0.0));
    let nus = [1e-1, 5e-2, 2.5e-2, 1e-2, 5e-3, 2.5e-3];
    let sweep = lap_sweep(&f, &nus, &coeffs, &grid, 0.0)?;
    print!("{}", sweep_csv(&sweep.records)?);
    let last = sweep.limit();
    println!("g      = {:.5}", last.solution.g.mean());
    println!("[u]    = {:.5}", last.jump.jump.mean());
    println!("-i pi g = {:.5}", last.solution.g.mean() * C64::new(0.0, -std::f64::consts::PI));

    // the mirrored sweep is the complex conjugate
    let neg: Vec<f64> = nus.iter().map(|n| -n).collect();
    let mirrored = lap_sweep(&f, &neg, &coeffs, &grid, 0.0)?;
    let d = mirrored.limit().solution.u.sub(&last.solution.u.conj()).max_abs();
    println!("nu < 0: [u] = {:.5}, max |u(-nu) - conj u(nu)| = {d:.1e}", mirrored.limit().jump.jump.mean());
    Ok(())
}
