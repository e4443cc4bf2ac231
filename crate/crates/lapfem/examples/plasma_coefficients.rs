//! Cold-plasma coefficients near the hybrid resonance and the first-order collision expansion.

use lapfem::coefficients::plasma::{admissible_s_range, d_i, expansion_residual, solver_coefficients};
use lapfem::coefficients::validate_coefficients;
use lapfem::Grid;

fn main() -> lapfem::Result<()> {
    let (omega, omega_c) = (2.0, 1.0);
    let (lo, hi) = admissible_s_range(omega, omega_c)?;
    println!("D_I = {}, admissible S in ({lo}, {hi})", d_i(omega, omega_c));
    let grid = Grid::new(1.0, 1.0, 32, 16)?;
    let c = solver_coefficients(&grid, omega, omega_c, 0.25)?;
    let r = validate_coefficients(&c.a, &c.t)?;
    println!("coercivity: c_A = {:.4}, c_T = {:.4}", r.c_a, r.c_t);
    for s in [-0.2, 0.1, 0.25] {
        let mut nu = 4e-2;
        print!("S = {s:+.2}: residual ratios");
        for _ in 0..4 {
            print!(" {:.3}", expansion_residual(omega, omega_c, s, nu)? / expansion_residual(omega, omega_c, s, nu / 2.0)?);
            nu /= 2.0;
        }
        println!();
    }
    Ok(())
}
