//! Finite-element laboratory for the degenerate elliptic problem
//!
//! ```text
//! div((x A + i nu T) grad u) = f   in (-a, a) x (-l, l),   u = 0 at x = +-a,  periodic in y
//! ```
//!
//! The principal coefficient changes sign across the interface `x = 0`. For `nu != 0`
//! the problem is coercive; as `nu -> 0+` the solutions converge to a limit that has a
//! `log|x|` singularity and whose regular part jumps across the interface by
//! `-i pi a11^{-1} g`, with `g` the conormal trace. The crate provides:
//!
//! * [`grid`]: the structured mesh with a node line on the interface,
//! * [`coefficients`]: Hermitian tensor fields and the cold-plasma generator,
//! * [`assembly`] / [`linsolve`]: Q1 assembly and complex direct/Krylov solvers,
//! * [`interface`]: traces, periodic Fourier norms, liftings, weighted norms,
//! * [`decomposition`]: the singular/regular split and one-sided traces,
//! * [`limiting`]: absorption sweeps, the limiting solver and the Green check,
//! * [`oned`]: an independent quadrature oracle for y-independent data,
//! * [`experiment`]: config-driven runs, field dumps and reports.
//!
//! Start with the runnable programs in `examples/`.

pub mod assembly;
pub mod coefficients;
pub mod decomposition;
pub mod experiment;
pub mod field;
pub mod grid;
pub mod interface;
pub mod limiting;
pub mod linsolve;
pub mod oned;

mod error;

pub use error::{Error, Result};
pub use field::ComplexField;
pub use grid::{Grid, Side};
pub use num_complex::Complex64 as C64;
