//! Hermitian tensor fields `A`, `T` and the cold-plasma coefficient generator.

use crate::{Error, Grid, Result, C64};

/// 2x2 complex matrix, row-major.
pub type Mat2 = [[C64; 2]; 2];

const HERMITIAN_TOL: f64 = 1e-12;

pub fn mat2_real(m00: f64, m01: f64, m10: f64, m11: f64) -> Mat2 {
    [[C64::new(m00, 0.0), C64::new(m01, 0.0)], [C64::new(m10, 0.0), C64::new(m11, 0.0)]]
}

pub fn identity() -> Mat2 {
    mat2_real(1.0, 0.0, 0.0, 1.0)
}

pub fn mat2_scale(m: &Mat2, s: C64) -> Mat2 {
    [[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]]
}

pub fn mat2_add(p: &Mat2, q: &Mat2) -> Mat2 {
    [[p[0][0] + q[0][0], p[0][1] + q[0][1]], [p[1][0] + q[1][0], p[1][1] + q[1][1]]]
}

pub fn mat2_sub(p: &Mat2, q: &Mat2) -> Mat2 {
    mat2_add(p, &mat2_scale(q, C64::new(-1.0, 0.0)))
}

/// Frobenius norm.
pub fn mat2_norm(m: &Mat2) -> f64 {
    m.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `q^H M p`.
pub fn quad_form(m: &Mat2, p: [C64; 2], q: [C64; 2]) -> C64 {
    let mp = [m[0][0] * p[0] + m[0][1] * p[1], m[1][0] * p[0] + m[1][1] * p[1]];
    q[0].conj() * mp[0] + q[1].conj() * mp[1]
}

pub fn is_hermitian(m: &Mat2) -> bool {
    let scale = mat2_norm(m).max(f64::MIN_POSITIVE);
    (m[0][1] - m[1][0].conj()).norm() <= HERMITIAN_TOL * scale
        && m[0][0].im.abs() <= HERMITIAN_TOL * scale
        && m[1][1].im.abs() <= HERMITIAN_TOL * scale
}

/// Eigenvalues (ascending) of the Hermitian part of `m`, by the closed 2x2 formula.
pub fn hermitian_eigenvalues(m: &Mat2) -> [f64; 2] {
    let a = m[0][0].re;
    let d = m[1][1].re;
    let b = 0.5 * (m[0][1] + m[1][0].conj());
    let mean = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mean - rad, mean + rad]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Role {
    A,
    T,
}

/// One Hermitian 2x2 matrix per grid node (`ny` rows; the row at `y = ell` is the row at `-ell`).
#[derive(Clone, Debug, PartialEq)]
pub struct TensorField {
    pub role: Role,
    pub nx: usize,
    pub ny: usize,
    pub data: Vec<Mat2>,
}

impl TensorField {
    pub fn constant(grid: &Grid, role: Role, m: Mat2) -> TensorField {
        TensorField { role, nx: grid.nx(), ny: grid.ny, data: vec![m; grid.n_dofs()] }
    }

    pub fn identity(grid: &Grid, role: Role) -> TensorField {
        Self::constant(grid, role, identity())
    }

    pub fn from_fn(grid: &Grid, role: Role, mut f: impl FnMut(f64, f64) -> Mat2) -> TensorField {
        let mut data = Vec::with_capacity(grid.n_dofs());
        for i in 0..grid.nx() {
            for j in 0..grid.ny {
                data.push(f(grid.x(i), grid.y(j)));
            }
        }
        TensorField { role, nx: grid.nx(), ny: grid.ny, data }
    }

    /// Nodal table with either `ny` rows per x line or `ny + 1` rows (the last one
    /// repeating `y = -ell`, checked for periodicity).
    pub fn from_nodes(grid: &Grid, role: Role, nodes: Vec<Mat2>) -> Result<TensorField> {
        let nx = grid.nx();
        if nodes.len() == nx * grid.ny {
            return Ok(TensorField { role, nx, ny: grid.ny, data: nodes });
        }
        if nodes.len() != nx * (grid.ny + 1) {
            return Err(Error::Coefficient(format!(
                "table has {} nodes, expected {} or {}",
                nodes.len(),
                nx * grid.ny,
                nx * (grid.ny + 1)
            )));
        }
        let rows = grid.ny + 1;
        let mut data = Vec::with_capacity(nx * grid.ny);
        for i in 0..nx {
            let first = &nodes[i * rows];
            let last = &nodes[i * rows + grid.ny];
            if mat2_norm(&mat2_sub(first, last)) > HERMITIAN_TOL * mat2_norm(first).max(1.0) {
                return Err(Error::Coefficient(format!("y-period mismatch on x line {i}")));
            }
            data.extend_from_slice(&nodes[i * rows..i * rows + grid.ny]);
        }
        Ok(TensorField { role, nx, ny: grid.ny, data })
    }

    pub fn matches(&self, grid: &Grid) -> bool {
        self.nx == grid.nx() && self.ny == grid.ny && self.data.len() == grid.n_dofs()
    }

    pub fn at(&self, i: usize, j: usize) -> Mat2 {
        self.data[i * self.ny + j % self.ny]
    }

    /// Bilinear interpolation inside cell `(ci, cj)` at local coordinates `s, t` in `[0, 1]`.
    pub fn cell_interp(&self, ci: usize, cj: usize, s: f64, t: f64) -> Mat2 {
        let w = [(1.0 - s) * (1.0 - t), s * (1.0 - t), (1.0 - s) * t, s * t];
        let nodes = [self.at(ci, cj), self.at(ci + 1, cj), self.at(ci, cj + 1), self.at(ci + 1, cj + 1)];
        let mut m = [[C64::new(0.0, 0.0); 2]; 2];
        for (wk, nk) in w.iter().zip(&nodes) {
            for r in 0..2 {
                for c in 0..2 {
                    m[r][c] += nk[r][c] * wk;
                }
            }
        }
        m
    }

    /// `A_11` on the interface line, by increasing y (real part; `A` is Hermitian).
    pub fn a11_on_interface(&self, grid: &Grid) -> Vec<f64> {
        (0..grid.ny).map(|j| self.at(grid.i_sigma(), j)[0][0].re).collect()
    }

    /// True when every entry is real (real symmetric tensors).
    pub fn is_real(&self) -> bool {
        self.data.iter().flatten().flatten().all(|z| z.im == 0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CoercivityReport {
    pub c_a: f64,
    pub c_t: f64,
}

fn min_eigenvalue(field: &TensorField) -> Result<f64> {
    let mut c = f64::INFINITY;
    for (k, m) in field.data.iter().enumerate() {
        if !is_hermitian(m) {
            return Err(Error::Coefficient(format!(
                "{:?} is not Hermitian at node {} (line {}, row {})",
                field.role,
                k,
                k / field.ny,
                k % field.ny
            )));
        }
        let lo = hermitian_eigenvalues(m)[0];
        if !(lo > 0.0) {
            return Err(Error::Coefficient(format!(
                "{:?} has eigenvalue {lo:e} <= 0 at node {k}",
                field.role
            )));
        }
        c = c.min(lo);
    }
    Ok(c)
}

/// Checks Hermitian symmetry and positive definiteness; returns the smallest eigenvalues.
pub fn validate_coefficients(a: &TensorField, t: &TensorField) -> Result<CoercivityReport> {
    if a.nx != t.nx || a.ny != t.ny || a.data.len() != t.data.len() {
        return Err(Error::Coefficient("A and T are sampled on different grids".into()));
    }
    Ok(CoercivityReport { c_a: min_eigenvalue(a)?, c_t: min_eigenvalue(t)? })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeMargins {
    /// `min Im(M p . conj p) / (nu |p|^2)` over nodes and probes; at least `c_T`.
    pub im_margin: f64,
    /// Range of `Re(M p . conj p) / (x A p . conj p)` over nodes with `x != 0`; exactly 1 in theory.
    pub re_ratio: (f64, f64),
}

/// Evaluates `M_nu = x A + i nu T` against probe vectors at every node.
pub fn coercivity_probe(
    grid: &Grid,
    a: &TensorField,
    t: &TensorField,
    nu: f64,
    probes: &[[C64; 2]],
) -> Result<ProbeMargins> {
    if !(nu > 0.0) {
        return Err(Error::Argument(format!("coercivity probe needs nu > 0, got {nu}")));
    }
    if probes.iter().any(|p| p[0].norm_sqr() + p[1].norm_sqr() == 0.0) {
        return Err(Error::Argument("zero probe vector".into()));
    }
    let mut im_margin = f64::INFINITY;
    let mut re_lo = f64::INFINITY;
    let mut re_hi = f64::NEG_INFINITY;
    for i in 0..grid.nx() {
        let x = grid.x(i);
        for j in 0..grid.ny {
            let am = a.at(i, j);
            let m = mat2_add(&mat2_scale(&am, x.into()), &mat2_scale(&t.at(i, j), C64::new(0.0, nu)));
            for &p in probes {
                let q = quad_form(&m, p, p);
                let pp = p[0].norm_sqr() + p[1].norm_sqr();
                im_margin = im_margin.min(q.im / (nu * pp));
                if x != 0.0 {
                    let r = q.re / (x * quad_form(&am, p, p).re);
                    re_lo = re_lo.min(r);
                    re_hi = re_hi.max(r);
                }
            }
        }
    }
    Ok(ProbeMargins { im_margin, re_ratio: (re_lo, re_hi) })
}

/// Closed-form coefficient presets.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoeffPreset {
    /// `A = T = I`.
    Identity,
    /// Constant Hermitian `A`, `T = I`.
    ConstantHermitian,
    /// Smooth y-periodic real symmetric `A` and `T`.
    Smooth,
    /// Cold-plasma coefficients with `S = slope * x`.
    Plasma,
}

impl std::str::FromStr for CoeffPreset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(CoeffPreset::Identity),
            "constant_hermitian" => Ok(CoeffPreset::ConstantHermitian),
            "smooth" => Ok(CoeffPreset::Smooth),
            "plasma" => Ok(CoeffPreset::Plasma),
            _ => Err(Error::Config(format!("unknown coefficient preset {s:?}"))),
        }
    }
}

/// The pair `(A, T)` used by the solvers.
#[derive(Clone, Debug)]
pub struct Coefficients {
    pub a: TensorField,
    pub t: TensorField,
}

impl Coefficients {
    pub fn identity(grid: &Grid) -> Coefficients {
        Coefficients { a: TensorField::identity(grid, Role::A), t: TensorField::identity(grid, Role::T) }
    }

    pub fn preset(grid: &Grid, preset: &CoeffPreset) -> Result<Coefficients> {
        let ell = grid.ell;
        let c = match preset {
            CoeffPreset::Identity => Self::identity(grid),
            CoeffPreset::ConstantHermitian => Coefficients {
                a: TensorField::constant(
                    grid,
                    Role::A,
                    [[C64::new(2.0, 0.0), C64::new(0.3, 0.4)], [C64::new(0.3, -0.4), C64::new(1.5, 0.0)]],
                ),
                t: TensorField::identity(grid, Role::T),
            },
            CoeffPreset::Smooth => {
                let w = std::f64::consts::PI / ell;
                Coefficients {
                    a: TensorField::from_fn(grid, Role::A, |x, y| {
                        let c = 0.25 * (w * y).cos();
                        mat2_real(1.5 + 0.3 * (w * y).sin() + 0.2 * x, c, c, 1.2 + 0.1 * x * x)
                    }),
                    t: TensorField::from_fn(grid, Role::T, |x, y| {
                        mat2_real(1.0 + 0.2 * (w * y).cos(), 0.1 * x, 0.1 * x, 0.8)
                    }),
                }
            }
            CoeffPreset::Plasma => plasma::solver_coefficients(grid, 2.0, 1.0, 0.25)?,
        };
        validate_coefficients(&c.a, &c.t)?;
        Ok(c)
    }

    /// `r = T_11 / A_11` per node (the absorbed-log scale).
    pub fn r_field(&self) -> Vec<f64> {
        self.a.data.iter().zip(&self.t.data).map(|(a, t)| t[0][0].re / a[0][0].re).collect()
    }
}

/// Cold-plasma tensors: the expansion `alpha^nu = const + S a + i nu t + O(nu^2)`.
pub mod plasma {
    use super::*;

    /// `D_I = omega_c / omega`.
    pub fn d_i(omega: f64, omega_c: f64) -> f64 {
        omega_c / omega
    }

    /// Open interval of admissible `S`: `(-D_I / (1 - D_I), D_I / (1 + D_I))`.
    pub fn admissible_s_range(omega: f64, omega_c: f64) -> Result<(f64, f64)> {
        if !(omega > 0.0 && omega_c > 0.0) {
            return Err(Error::Coefficient(format!(
                "frequencies must be positive (omega={omega}, omega_c={omega_c})"
            )));
        }
        let di = d_i(omega, omega_c);
        if !(di > 0.0 && di < 1.0) {
            return Err(Error::Coefficient(format!("need 0 < omega_c/omega < 1, got {di}")));
        }
        Ok((-di / (1.0 - di), di / (1.0 + di)))
    }

    /// Collision-model perturbation rates `(delta_S, delta_D)` at a point with the given `S`.
    pub fn deltas(omega: f64, omega_c: f64, s: f64) -> (f64, f64) {
        let w2 = omega * omega - omega_c * omega_c;
        let ds = (omega * omega + omega_c * omega_c) / (omega * w2) * (1.0 - s);
        let dd = -2.0 * omega_c / w2 * (1.0 - s);
        (ds, dd)
    }

    /// The (negative definite) matrix `a` with `alpha = const + S a`.
    pub fn a_matrix(di: f64, s: f64) -> Result<Mat2> {
        let d = di * (1.0 - s);
        let den = s * s - d * d;
        if den == 0.0 {
            return Err(Error::Coefficient(format!("S = +-D at S = {s}")));
        }
        let off = (s + d * di) / di;
        Ok([
            [C64::new(1.0 / den, 0.0), C64::new(0.0, off / den)],
            [C64::new(0.0, -off / den), C64::new(1.0 / den, 0.0)],
        ])
    }

    /// The first-order absorption matrix `t` from `S, D, delta_S, delta_D`.
    pub fn t_matrix(s: f64, d: f64, ds: f64, dd: f64) -> Result<Mat2> {
        let den = s * s - d * d;
        if den == 0.0 {
            return Err(Error::Coefficient(format!("S = +-D at S = {s}")));
        }
        let k = 1.0 / (den * den);
        let diag = (2.0 * d * s * dd - ds * (s * s + d * d)) * k;
        let off = (dd * (s * s + d * d) - 2.0 * s * d * ds) * k;
        Ok([[C64::new(diag, 0.0), C64::new(0.0, off)], [C64::new(0.0, -off), C64::new(diag, 0.0)]])
    }

    /// The constant anti-diagonal part `-(1/D_I^2) [[0, i D_I], [-i D_I, 0]]`.
    pub fn alpha_constant(di: f64) -> Mat2 {
        [[C64::new(0.0, 0.0), C64::new(0.0, -1.0 / di)], [C64::new(0.0, 1.0 / di), C64::new(0.0, 0.0)]]
    }

    /// The full inverse perpendicular permittivity with collision frequency `nu`
    /// (`omega -> omega + i nu` in the Stix coefficients).
    pub fn collision_tensor(omega: f64, omega_c: f64, s: f64, nu: f64) -> Mat2 {
        let wp2 = (1.0 - s) * (omega * omega - omega_c * omega_c);
        let wn = C64::new(omega, nu);
        let den = wn * wn - omega_c * omega_c;
        let sn = C64::new(1.0, 0.0) - wp2 * wn / (omega * den);
        let dn = omega_c * wp2 / (omega * den);
        let k = C64::new(1.0, 0.0) / (sn * sn - dn * dn);
        let i = C64::new(0.0, 1.0);
        [[sn * k, i * dn * k], [-i * dn * k, sn * k]]
    }

    #[derive(Clone, Debug, PartialEq)]
    pub struct PlasmaParams {
        pub omega: f64,
        pub omega_c: f64,
        /// Nodal values of `S`, in dof order.
        pub s_profile: Vec<f64>,
        pub nu: f64,
    }

    #[derive(Clone, Debug)]
    pub struct PlasmaTensors {
        pub s: Vec<f64>,
        pub d: Vec<f64>,
        /// `-a`, Hermitian positive definite.
        pub a: TensorField,
        /// `-t`, Hermitian positive definite.
        pub t: TensorField,
    }

    /// Builds `(-a, -t)` at every node of the `S` profile.
    pub fn plasma_tensors(grid: &Grid, params: &PlasmaParams) -> Result<PlasmaTensors> {
        let (lo, hi) = admissible_s_range(params.omega, params.omega_c)?;
        if params.s_profile.len() != grid.n_dofs() {
            return Err(Error::Coefficient(format!(
                "S profile has {} values, grid has {} dofs",
                params.s_profile.len(),
                grid.n_dofs()
            )));
        }
        let di = d_i(params.omega, params.omega_c);
        let mut a = Vec::with_capacity(grid.n_dofs());
        let mut t = Vec::with_capacity(grid.n_dofs());
        let mut d = Vec::with_capacity(grid.n_dofs());
        for (k, &s) in params.s_profile.iter().enumerate() {
            if !(s > lo && s < hi) {
                return Err(Error::Coefficient(format!(
                    "S = {s} at node {k} outside the admissible range ({lo}, {hi})"
                )));
            }
            let dk = di * (1.0 - s);
            let (ds, dd) = deltas(params.omega, params.omega_c, s);
            a.push(mat2_scale(&a_matrix(di, s)?, (-1.0).into()));
            t.push(mat2_scale(&t_matrix(s, dk, ds, dd)?, (-1.0).into()));
            d.push(dk);
        }
        let out = PlasmaTensors {
            s: params.s_profile.clone(),
            d,
            a: TensorField::from_nodes(grid, Role::A, a)?,
            t: TensorField::from_nodes(grid, Role::T, t)?,
        };
        validate_coefficients(&out.a, &out.t)?;
        Ok(out)
    }

    /// Solver coefficients for `S(x) = slope * x`: the principal part `S (-a) = x (slope (-a))`.
    pub fn solver_coefficients(grid: &Grid, omega: f64, omega_c: f64, slope: f64) -> Result<Coefficients> {
        if !(slope > 0.0) {
            return Err(Error::Coefficient(format!("S slope must be positive, got {slope}")));
        }
        let s_profile: Vec<f64> =
            (0..grid.n_dofs()).map(|k| slope * grid.x(grid.node(k).0)).collect();
        let p = plasma_tensors(grid, &PlasmaParams { omega, omega_c, s_profile, nu: 0.0 })?;
        let a = TensorField { data: p.a.data.iter().map(|m| mat2_scale(m, slope.into())).collect(), ..p.a };
        Ok(Coefficients { a, t: p.t })
    }

    /// Nodewise `|| alpha^nu - const - (S a + i nu t) ||` (Frobenius), for one `S`.
    pub fn expansion_residual(omega: f64, omega_c: f64, s: f64, nu: f64) -> Result<f64> {
        let di = d_i(omega, omega_c);
        let d = di * (1.0 - s);
        let (ds, dd) = deltas(omega, omega_c, s);
        let first = mat2_add(
            &mat2_add(&alpha_constant(di), &mat2_scale(&a_matrix(di, s)?, s.into())),
            &mat2_scale(&t_matrix(s, d, ds, dd)?, C64::new(0.0, nu)),
        );
        Ok(mat2_norm(&mat2_sub(&collision_tensor(omega, omega_c, s, nu), &first)))
    }
}
