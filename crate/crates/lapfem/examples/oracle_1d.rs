//! The quadrature oracle for y-independent data against the 2D solver.

use lapfem::coefficients::Coefficients;
use lapfem::limiting::solve_absorption;
use lapfem::oned::{limit_1d, solve_1d};
use lapfem::{ComplexField, Grid, C64};

fn main() -> lapfem::Result<()> {
    let one = |_: f64| 1.0;
    let nu = 1e-3;
    for nx_half in [64, 128, 256] {
        let grid = Grid::new(1.0, 1.0, nx_half, 16)?;
        let f = ComplexField::from_fn(&grid, |_, _| C64::new(1.0, 0.0));
        let s = solve_absorption(&f, nu, &Coefficients::identity(&grid), &grid, 0.0)?;
        let o = solve_1d(&one, &one, nu, 1.0, &grid.xs())?;
        let err = (0..grid.nx()).map(|i| (s.u.at(i, 0) - o.u[i]).norm()).fold(0.0, f64::max);
        println!("nx = {:4}  max |u_2d - u_1d| / ||u|| = {:.2e}", grid.nx(), err / s.u.max_abs());
    }
    let o = solve_1d(&one, &one, nu, 1.0, &[0.5])?;
    println!("nu = {nu}: kappa = {:.6}, d = {:.6}", o.kappa, o.d);
    for sign in [1.0, -1.0] {
        let l = limit_1d(&one, &one, 1.0, &[-0.5, 0.5], sign)?;
        println!(
            "limit sign {sign:+}: kappa = {:.6}, traces ({:.4}, {:.4}), jump = {:.4}",
            l.kappa, l.reg_trace_p, l.reg_trace_n, l.jump
        );
    }
    Ok(())
}
