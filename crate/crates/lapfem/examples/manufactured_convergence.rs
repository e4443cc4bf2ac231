//! Convergence study with the manufactured solution `sin(pi (x + a) / 2a) exp(i pi y / ell)`.

use lapfem::coefficients::Coefficients;
use lapfem::limiting::{manufactured, solve_absorption};
use lapfem::Grid;

fn main() -> lapfem::Result<()> {
    let nu = 0.1;
    let mut prev: Option<f64> = None;
    for n in [8, 16, 32, 64, 128] {
        let grid = Grid::new(1.0, 1.0, n, 2 * n)?;
        let (exact, f) = manufactured(&grid, nu);
        let s = solve_absorption(&f, nu, &Coefficients::identity(&grid), &grid, 0.0)?;
        let err = s.u.sub(&exact).l2_norm(&grid);
        match prev {
            Some(p) => println!("h = 1/{n:<4} L2 error = {err:.3e}  rate = {:.3}", (p / err).log2()),
            None => println!("h = 1/{n:<4} L2 error = {err:.3e}"),
        }
        prev = Some(err);
    }
    Ok(())
}
