//! Nodal complex grid functions.

use crate::{Grid, Result, Error, C64};

/// One complex value per dof, stored in the grid's dof order (y fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexField {
    pub nx: usize,
    pub ny: usize,
    pub data: Vec<C64>,
}

impl ComplexField {
    pub fn zeros(grid: &Grid) -> ComplexField {
        ComplexField { nx: grid.nx(), ny: grid.ny, data: vec![C64::new(0.0, 0.0); grid.n_dofs()] }
    }

    pub fn from_fn(grid: &Grid, mut f: impl FnMut(f64, f64) -> C64) -> ComplexField {
        let mut data = Vec::with_capacity(grid.n_dofs());
        for i in 0..grid.nx() {
            let x = grid.x(i);
            for j in 0..grid.ny {
                data.push(f(x, grid.y(j)));
            }
        }
        ComplexField { nx: grid.nx(), ny: grid.ny, data }
    }

    pub fn from_vec(grid: &Grid, data: Vec<C64>) -> Result<ComplexField> {
        if data.len() != grid.n_dofs() {
            return Err(Error::Argument(format!(
                "field has {} values, grid has {} dofs",
                data.len(),
                grid.n_dofs()
            )));
        }
        Ok(ComplexField { nx: grid.nx(), ny: grid.ny, data })
    }

    pub fn matches(&self, grid: &Grid) -> bool {
        self.nx == grid.nx() && self.ny == grid.ny && self.data.len() == grid.n_dofs()
    }

    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.ny + j % self.ny]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.ny + j % self.ny] = v;
    }

    /// Values on node line `i`, by increasing y.
    pub fn line(&self, i: usize) -> Vec<C64> {
        self.data[i * self.ny..(i + 1) * self.ny].to_vec()
    }

    pub fn conj(&self) -> ComplexField {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> ComplexField {
        ComplexField { nx: self.nx, ny: self.ny, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, s: C64) -> ComplexField {
        self.map(|z| z * s)
    }

    pub fn sub(&self, other: &ComplexField) -> ComplexField {
        self.zip(other, |a, b| a - b)
    }

    pub fn add(&self, other: &ComplexField) -> ComplexField {
        self.zip(other, |a, b| a + b)
    }

    fn zip(&self, other: &ComplexField, f: impl Fn(C64, C64) -> C64) -> ComplexField {
        assert_eq!(self.data.len(), other.data.len(), "field shapes differ");
        ComplexField {
            nx: self.nx,
            ny: self.ny,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Discrete L² norm over the whole domain (trapezoidal weights in x, periodic in y).
    pub fn l2_norm(&self, grid: &Grid) -> f64 {
        let mut s = 0.0;
        for i in 0..grid.nx() {
            let w = if grid.is_dirichlet(i) { 0.5 } else { 1.0 } * grid.hx * grid.hy;
            for j in 0..grid.ny {
                s += w * self.at(i, j).norm_sqr();
            }
        }
        s.sqrt()
    }
}
