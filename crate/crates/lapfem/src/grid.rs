//! Structured mesh of `(-a, a) x (-ell, ell)` with the interface `x = 0` on a node line.
//!
//! Nodes are `x_i = (i - nx_half) h_x` for `i = 0..=2 nx_half` and `y_j = -ell + j h_y`
//! for `j = 0..ny`; the row `j = ny` is identified with `j = 0`. Degrees of freedom are
//! numbered row-major with y fastest: `dof(i, j) = i * ny + j`.

use crate::{Error, Result};

/// Which half of the domain: `P` is `x > 0`, `N` is `x < 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    P,
    N,
}

impl Side {
    /// `+1` for `P`, `-1` for `N`.
    pub fn sign(self) -> f64 {
        match self {
            Side::P => 1.0,
            Side::N => -1.0,
        }
    }

    pub fn both() -> [Side; 2] {
        [Side::P, Side::N]
    }
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" | "P" => Ok(Side::P),
            "n" | "N" => Ok(Side::N),
            _ => Err(Error::Argument(format!("unknown side {s:?} (expected p or n)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Grid {
    pub a: f64,
    pub ell: f64,
    pub nx_half: usize,
    pub ny: usize,
    pub hx: f64,
    pub hy: f64,
}

impl Grid {
    pub fn new(a: f64, ell: f64, nx_half: usize, ny: usize) -> Result<Grid> {
        if !(a > 0.0 && a.is_finite()) || !(ell > 0.0 && ell.is_finite()) {
            return Err(Error::Grid(format!("sizes must be positive, got a={a}, ell={ell}")));
        }
        if nx_half < 2 {
            return Err(Error::Grid(format!("nx_half must be >= 2, got {nx_half}")));
        }
        if ny < 4 || ny % 2 != 0 {
            return Err(Error::Grid(format!("ny must be even and >= 4, got {ny}")));
        }
        Ok(Grid { a, ell, nx_half, ny, hx: a / nx_half as f64, hy: 2.0 * ell / ny as f64 })
    }

    /// Number of x node lines, `2 nx_half + 1`.
    pub fn nx(&self) -> usize {
        2 * self.nx_half + 1
    }

    pub fn n_dofs(&self) -> usize {
        self.nx() * self.ny
    }

    /// Index of the interface node line.
    pub fn i_sigma(&self) -> usize {
        self.nx_half
    }

    pub fn x(&self, i: usize) -> f64 {
        debug_assert!(i < self.nx());
        if i == 0 {
            -self.a
        } else if i == 2 * self.nx_half {
            self.a
        } else {
            (i as f64 - self.nx_half as f64) * self.hx
        }
    }

    pub fn y(&self, j: usize) -> f64 {
        -self.ell + j as f64 * self.hy
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.nx()).map(|i| self.x(i)).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        (0..self.ny).map(|j| self.y(j)).collect()
    }

    /// Dof of node `(i, j)`; `j` wraps periodically.
    pub fn dof(&self, i: usize, j: usize) -> usize {
        i * self.ny + j % self.ny
    }

    /// Inverse of [`Grid::dof`].
    pub fn node(&self, dof: usize) -> (usize, usize) {
        (dof / self.ny, dof % self.ny)
    }

    /// The `ny` dofs on the interface, by increasing y.
    pub fn interface_dofs(&self) -> Vec<usize> {
        self.line_dofs(self.i_sigma())
    }

    pub fn line_dofs(&self, i: usize) -> Vec<usize> {
        (0..self.ny).map(|j| self.dof(i, j)).collect()
    }

    pub fn is_dirichlet(&self, i: usize) -> bool {
        i == 0 || i == self.nx() - 1
    }

    /// Side owning the cell whose left node line is `ci`.
    pub fn cell_side(&self, ci: usize) -> Side {
        if ci >= self.nx_half {
            Side::P
        } else {
            Side::N
        }
    }

    /// Node lines belonging to the closed half domain of `side` (interface included).
    pub fn side_lines(&self, side: Side) -> std::ops::RangeInclusive<usize> {
        match side {
            Side::P => self.nx_half..=2 * self.nx_half,
            Side::N => 0..=self.nx_half,
        }
    }

    /// Node line at signed distance `k h_x` from the interface on `side` (`k = 0` is the interface).
    pub fn line_from_interface(&self, side: Side, k: usize) -> usize {
        match side {
            Side::P => self.nx_half + k,
            Side::N => self.nx_half - k,
        }
    }

    /// Cell x-ranges `(ci, x_left, x_right)`.
    pub fn cells_x(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        (0..self.nx() - 1).map(move |ci| (ci, self.x(ci), self.x(ci + 1)))
    }

    pub fn area(&self) -> f64 {
        4.0 * self.a * self.ell
    }

    /// Same domain with every cell split in two in both directions.
    pub fn refined(&self) -> Grid {
        Grid::new(self.a, self.ell, 2 * self.nx_half, 2 * self.ny).expect("refinement of a valid grid")
    }
}
