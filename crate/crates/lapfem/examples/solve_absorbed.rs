//! One absorbed solve: `div((x + i nu) grad u) = 1` on the unit square, with the
//! conormal trace on the interface and the monitored norms.

use lapfem::coefficients::Coefficients;
use lapfem::interface::{sobolev_norm, weighted_norm, Domain};
use lapfem::limiting::solve_absorption;
use lapfem::{ComplexField, Grid, C64};

fn main() -> lapfem::Result<()> {
    let grid = Grid::new(1.0, 1.0, 64, 16)?;
    let coeffs = Coefficients::identity(&grid);
    let f = ComplexField::from_fn(&grid, |_, _| C64::new(1.0, 0.0));
    for nu in [1e-1, 1e-2, 1e-3] {
        let s = solve_absorption(&f, nu, &coeffs, &grid, 0.0)?;
        println!(
            "nu = {nu:<6}  ||u|| = {:.5}  ||x grad u|| = {:.5}  g = {:.5}  ||g||_1/2 = {:.5}  residual = {:.1e}",
            s.u.l2_norm(&grid),
            weighted_norm(&grid, &s.u, 2.0, Domain::All).grad,
            s.g.mean(),
            sobolev_norm(&s.g, 0.5),
            s.report.rel_residual,
        );
    }
    println!("limit value of g: {:.5}i", -2.0 / std::f64::consts::PI);
    Ok(())
}
