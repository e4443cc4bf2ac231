//! Sparse complex matrices and linear solvers.
//!
//! The primary path is a banded LU factorization with partial pivoting (the structured
//! grids give a bandwidth of about one x-line of dofs after an interleaved y ordering).
//! The Krylov path is restarted GMRES with an ILU(0) right preconditioner.

use crate::{Error, Result, C64};
use std::time::Instant;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Compressed sparse row matrix with sorted column indices.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    pub n: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<usize>,
    pub values: Vec<C64>,
}

impl CsrMatrix {
    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(n: usize, mut trips: Vec<(usize, usize, C64)>) -> CsrMatrix {
        trips.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut indptr = vec![0; n + 1];
        let mut indices = Vec::with_capacity(trips.len());
        let mut values: Vec<C64> = Vec::with_capacity(trips.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in trips {
            assert!(r < n && c < n, "triplet ({r}, {c}) out of range for n = {n}");
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(c);
                values.push(v);
                indptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..n {
            indptr[r + 1] += indptr[r];
        }
        CsrMatrix { n, indptr, indices, values }
    }

    pub fn identity(n: usize) -> CsrMatrix {
        CsrMatrix { n, indptr: (0..=n).collect(), indices: (0..n).collect(), values: vec![ONE; n] }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        (self.indptr[r]..self.indptr[r + 1]).map(move |k| (self.indices[k], self.values[k]))
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        let cols = &self.indices[self.indptr[r]..self.indptr[r + 1]];
        match cols.binary_search(&c) {
            Ok(k) => self.values[self.indptr[r] + k],
            Err(_) => ZERO,
        }
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.n);
        (0..self.n).map(|r| self.row(r).map(|(c, v)| v * x[c]).sum()).collect()
    }

    pub fn conj_transpose(&self) -> CsrMatrix {
        let mut trips = Vec::with_capacity(self.nnz());
        for r in 0..self.n {
            for (c, v) in self.row(r) {
                trips.push((c, r, v.conj()));
            }
        }
        CsrMatrix::from_triplets(self.n, trips)
    }

    /// `self + s * other` (patterns merged).
    pub fn add_scaled(&self, other: &CsrMatrix, s: C64) -> CsrMatrix {
        assert_eq!(self.n, other.n);
        let mut trips = Vec::with_capacity(self.nnz() + other.nnz());
        for r in 0..self.n {
            trips.extend(self.row(r).map(|(c, v)| (r, c, v)));
            trips.extend(other.row(r).map(|(c, v)| (r, c, v * s)));
        }
        CsrMatrix::from_triplets(self.n, trips)
    }

    /// Replaces row `r` by the identity row (the diagonal must be in the pattern).
    pub fn set_identity_row(&mut self, r: usize) {
        let mut found = false;
        for k in self.indptr[r]..self.indptr[r + 1] {
            if self.indices[k] == r {
                self.values[k] = ONE;
                found = true;
            } else {
                self.values[k] = ZERO;
            }
        }
        assert!(found, "row {r} has no diagonal entry");
    }

    /// Quadratic form `x^H M x`.
    pub fn quad_form(&self, x: &[C64]) -> C64 {
        let mx = self.matvec(x);
        x.iter().zip(&mx).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn max_abs_diff(&self, other: &CsrMatrix) -> f64 {
        let d = self.add_scaled(other, -ONE);
        d.values.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `(lower, upper)` bandwidth under the permutation `perm` (new index of each old index).
    pub fn bandwidth(&self, perm: Option<&[usize]>) -> (usize, usize) {
        let p = |i: usize| perm.map_or(i, |p| p[i]);
        let (mut kl, mut ku) = (0, 0);
        for r in 0..self.n {
            for (c, v) in self.row(r) {
                if v == ZERO {
                    continue;
                }
                let (pr, pc) = (p(r), p(c));
                if pr > pc {
                    kl = kl.max(pr - pc);
                } else {
                    ku = ku.max(pc - pr);
                }
            }
        }
        (kl, ku)
    }
}

pub fn norm2(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Gmres,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct SolveReport {
    pub method: Method,
    pub rel_residual: f64,
    /// Band widths for the direct path; zero for Krylov.
    pub bandwidth: (usize, usize),
    /// Krylov iterations; zero for the direct path.
    pub iterations: usize,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug)]
pub struct SolverOptions {
    pub method: Method,
    pub tol: f64,
    pub restart: usize,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { method: Method::Direct, tol: 1e-10, restart: 60, max_iter: 5000 }
    }
}

/// Banded LU with partial pivoting (LAPACK `gbtf2` layout, column-major band storage).
#[derive(Clone, Debug)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    ldab: usize,
    ab: Vec<C64>,
    ipiv: Vec<usize>,
    /// `perm[old] = new`.
    perm: Option<Vec<usize>>,
}

impl BandedLu {
    pub fn factor(m: &CsrMatrix, perm: Option<&[usize]>) -> Result<BandedLu> {
        let n = m.n;
        if let Some(p) = perm {
            if p.len() != n {
                return Err(Error::Solver(format!("ordering has length {}, matrix has {n} rows", p.len())));
            }
        }
        let (kl, ku) = m.bandwidth(perm);
        let kv = kl + ku;
        let ldab = 2 * kl + ku + 1;
        let mut ab = vec![ZERO; ldab * n];
        let pm = |i: usize| perm.map_or(i, |p| p[i]);
        let mut scale = 0.0f64;
        for r in 0..n {
            for (c, v) in m.row(r) {
                let (i, j) = (pm(r), pm(c));
                ab[kv + i - j + j * ldab] += v;
                scale = scale.max(v.norm());
            }
        }
        let mut ipiv = vec![0; n];
        let mut ju = 0usize;
        let tiny = scale * f64::EPSILON * 1e-3;
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            let col = j * ldab + kv;
            let mut jp = 0;
            let mut best = ab[col].norm();
            for r in 1..=km {
                let v = ab[col + r].norm();
                if v > best {
                    best = v;
                    jp = r;
                }
            }
            ipiv[j] = j + jp;
            if !(best > tiny) {
                return Err(Error::Solver(format!("singular matrix: zero pivot in column {j}")));
            }
            ju = ju.max((j + ku + jp).min(n - 1));
            if jp != 0 {
                for c in j..=ju {
                    let base = kv + c * ldab;
                    ab.swap(base + j - c, base + j + jp - c);
                }
            }
            if km > 0 {
                let inv = ONE / ab[col];
                for r in 1..=km {
                    ab[col + r] *= inv;
                }
                for c in j + 1..=ju {
                    let base = kv + c * ldab;
                    let ujc = ab[base + j - c];
                    if ujc == ZERO {
                        continue;
                    }
                    for r in 1..=km {
                        let l = ab[col + r];
                        ab[base + j + r - c] -= l * ujc;
                    }
                }
            }
        }
        Ok(BandedLu { n, kl, ku, ldab, ab, ipiv, perm: perm.map(|p| p.to_vec()) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let kv = self.kl + self.ku;
        let mut x = vec![ZERO; n];
        match &self.perm {
            Some(p) => {
                for (old, &new) in p.iter().enumerate() {
                    x[new] = b[old];
                }
            }
            None => x.copy_from_slice(b),
        }
        for j in 0..n {
            let km = self.kl.min(n - 1 - j);
            let l = self.ipiv[j];
            if l != j {
                x.swap(j, l);
            }
            let xj = x[j];
            if xj != ZERO {
                let col = j * self.ldab + kv;
                for r in 1..=km {
                    x[j + r] -= self.ab[col + r] * xj;
                }
            }
        }
        for j in (0..n).rev() {
            let base = kv + j * self.ldab;
            x[j] /= self.ab[base];
            let xj = x[j];
            if xj != ZERO {
                let lo = j.saturating_sub(kv);
                for i in lo..j {
                    x[i] -= self.ab[base + i - j] * xj;
                }
            }
        }
        match &self.perm {
            Some(p) => p.iter().map(|&new| x[new]).collect(),
            None => x,
        }
    }
}

/// A factored matrix that checks the residual of every solve.
#[derive(Clone, Debug)]
pub struct Factored {
    matrix: CsrMatrix,
    lu: BandedLu,
    tol: f64,
}

impl Factored {
    pub fn new(matrix: CsrMatrix, perm: Option<&[usize]>, tol: f64) -> Result<Factored> {
        let lu = BandedLu::factor(&matrix, perm)?;
        Ok(Factored { matrix, lu, tol })
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn solve(&self, b: &[C64]) -> Result<(Vec<C64>, SolveReport)> {
        let t0 = Instant::now();
        let mut x = self.lu.solve(b);
        let bn = norm2(b);
        let mut rel = relative_residual(&self.matrix, &x, b, bn);
        if rel > self.tol && rel.is_finite() {
            // one step of iterative refinement
            let r: Vec<C64> = self.matrix.matvec(&x).iter().zip(b).map(|(ax, bi)| bi - ax).collect();
            let dx = self.lu.solve(&r);
            for (xi, d) in x.iter_mut().zip(dx) {
                *xi += d;
            }
            rel = relative_residual(&self.matrix, &x, b, bn);
        }
        if !(rel <= self.tol) {
            return Err(Error::Solver(format!("relative residual {rel:e} exceeds {:e}", self.tol)));
        }
        Ok((
            x,
            SolveReport {
                method: Method::Direct,
                rel_residual: rel,
                bandwidth: self.lu.bandwidth(),
                iterations: 0,
                wall_time_s: t0.elapsed().as_secs_f64(),
            },
        ))
    }
}

fn relative_residual(m: &CsrMatrix, x: &[C64], b: &[C64], bn: f64) -> f64 {
    let ax = m.matvec(x);
    let rn = ax.iter().zip(b).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    if bn == 0.0 {
        rn
    } else {
        rn / bn
    }
}

/// Solves `m x = b` with the chosen method.
pub fn solve(m: &CsrMatrix, b: &[C64], perm: Option<&[usize]>, opts: &SolverOptions) -> Result<(Vec<C64>, SolveReport)> {
    if b.len() != m.n {
        return Err(Error::Solver(format!("rhs has length {}, matrix has {} rows", b.len(), m.n)));
    }
    match opts.method {
        Method::Direct => {
            let t0 = Instant::now();
            let f = Factored::new(m.clone(), perm, opts.tol)?;
            let (x, mut rep) = f.solve(b)?;
            rep.wall_time_s = t0.elapsed().as_secs_f64();
            Ok((x, rep))
        }
        Method::Gmres => gmres(m, b, opts),
    }
}

/// ILU(0): incomplete LU on the sparsity pattern of `m`.
#[derive(Clone, Debug)]
pub struct Ilu0 {
    lu: CsrMatrix,
    diag: Vec<usize>,
}

impl Ilu0 {
    pub fn new(m: &CsrMatrix) -> Result<Ilu0> {
        let mut lu = m.clone();
        let n = m.n;
        let mut diag = vec![usize::MAX; n];
        for r in 0..n {
            for k in lu.indptr[r]..lu.indptr[r + 1] {
                if lu.indices[k] == r {
                    diag[r] = k;
                }
            }
            if diag[r] == usize::MAX {
                return Err(Error::Solver(format!("ILU(0): row {r} has no diagonal")));
            }
        }
        let mut pos = vec![usize::MAX; n];
        for i in 0..n {
            let (s, e) = (lu.indptr[i], lu.indptr[i + 1]);
            for k in s..e {
                pos[lu.indices[k]] = k;
            }
            for k in s..e {
                let c = lu.indices[k];
                if c >= i {
                    break;
                }
                let piv = lu.values[diag[c]];
                if piv == ZERO {
                    return Err(Error::Solver(format!("ILU(0): zero pivot at row {c}")));
                }
                let lik = lu.values[k] / piv;
                lu.values[k] = lik;
                for kk in diag[c] + 1..lu.indptr[c + 1] {
                    let cc = lu.indices[kk];
                    let p = pos[cc];
                    if p != usize::MAX {
                        let u = lu.values[kk];
                        lu.values[p] -= lik * u;
                    }
                }
            }
            for k in s..e {
                pos[lu.indices[k]] = usize::MAX;
            }
            if lu.values[diag[i]] == ZERO {
                return Err(Error::Solver(format!("ILU(0): zero pivot at row {i}")));
            }
        }
        Ok(Ilu0 { lu, diag })
    }

    pub fn apply(&self, b: &[C64]) -> Vec<C64> {
        let n = self.lu.n;
        let mut x = b.to_vec();
        for i in 0..n {
            let mut s = x[i];
            for k in self.lu.indptr[i]..self.diag[i] {
                s -= self.lu.values[k] * x[self.lu.indices[k]];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in self.diag[i] + 1..self.lu.indptr[i + 1] {
                s -= self.lu.values[k] * x[self.lu.indices[k]];
            }
            x[i] = s / self.lu.values[self.diag[i]];
        }
        x
    }
}

/// Restarted GMRES with ILU(0) right preconditioning.
pub fn gmres(m: &CsrMatrix, b: &[C64], opts: &SolverOptions) -> Result<(Vec<C64>, SolveReport)> {
    let t0 = Instant::now();
    let n = m.n;
    let pre = Ilu0::new(m)?;
    let bn = norm2(b);
    let mut x = vec![ZERO; n];
    if bn == 0.0 {
        return Ok((x, SolveReport { method: Method::Gmres, rel_residual: 0.0, bandwidth: (0, 0), iterations: 0, wall_time_s: 0.0 }));
    }
    let mm = opts.restart.max(1);
    let mut iters = 0;
    let mut best = f64::INFINITY;
    let mut stagnant = 0;
    loop {
        let ax = m.matvec(&x);
        let r: Vec<C64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let beta = norm2(&r);
        let rel = beta / bn;
        if rel <= opts.tol {
            return Ok((x, SolveReport { method: Method::Gmres, rel_residual: rel, bandwidth: (0, 0), iterations: iters, wall_time_s: t0.elapsed().as_secs_f64() }));
        }
        if rel < 0.5 * best {
            best = rel;
            stagnant = 0;
        } else {
            stagnant += 1;
        }
        if iters >= opts.max_iter || stagnant > 20 {
            return Err(Error::Solver(format!("GMRES stagnated at relative residual {rel:e} after {iters} iterations")));
        }
        let mut v: Vec<Vec<C64>> = vec![r.iter().map(|z| z / beta).collect()];
        let mut h = vec![vec![ZERO; mm]; mm + 1];
        let mut cs = vec![ZERO; mm];
        let mut sn = vec![ZERO; mm];
        let mut g = vec![ZERO; mm + 1];
        g[0] = C64::new(beta, 0.0);
        let mut k_used = 0;
        for k in 0..mm {
            iters += 1;
            let z = pre.apply(&v[k]);
            let mut w = m.matvec(&z);
            for i in 0..=k {
                let hik: C64 = v[i].iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                h[i][k] = hik;
                for (wj, vj) in w.iter_mut().zip(&v[i]) {
                    *wj -= hik * vj;
                }
            }
            let hn = norm2(&w);
            h[k + 1][k] = C64::new(hn, 0.0);
            for i in 0..k {
                let t = cs[i].conj() * h[i][k] + sn[i].conj() * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            let (a, bb) = (h[k][k], h[k + 1][k]);
            let den = (a.norm_sqr() + bb.norm_sqr()).sqrt();
            if den == 0.0 {
                cs[k] = ONE;
                sn[k] = ZERO;
            } else {
                cs[k] = a / den;
                sn[k] = bb / den;
            }
            h[k][k] = cs[k].conj() * a + sn[k].conj() * bb;
            h[k + 1][k] = ZERO;
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k].conj() * g[k];
            k_used = k + 1;
            if g[k + 1].norm() / bn <= 0.1 * opts.tol || hn == 0.0 || iters >= opts.max_iter {
                break;
            }
            v.push(w.iter().map(|z| z / hn).collect());
        }
        let mut y = vec![ZERO; k_used];
        for i in (0..k_used).rev() {
            let mut s = g[i];
            for j in i + 1..k_used {
                s -= h[i][j] * y[j];
            }
            y[i] = s / h[i][i];
        }
        let mut dz = vec![ZERO; n];
        for (j, yj) in y.iter().enumerate() {
            for (d, vj) in dz.iter_mut().zip(&v[j]) {
                *d += yj * vj;
            }
        }
        let dx = pre.apply(&dz);
        for (xi, d) in x.iter_mut().zip(dx) {
            *xi += d;
        }
    }
}

/// Dense complex LU with partial pivoting, for the small interface systems.
#[derive(Clone, Debug)]
pub struct DenseLu {
    n: usize,
    a: Vec<C64>,
    piv: Vec<usize>,
}

impl DenseLu {
    /// Factors the row-major `n x n` matrix `a`.
    pub fn factor(n: usize, mut a: Vec<C64>) -> Result<DenseLu> {
        assert_eq!(a.len(), n * n);
        let scale = a.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        let mut piv: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (mut p, mut best) = (k, a[k * n + k].norm());
            for r in k + 1..n {
                let v = a[r * n + k].norm();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if !(best > scale * 1e-13) {
                return Err(Error::Solver(format!("singular dense matrix at column {k}")));
            }
            if p != k {
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                piv.swap(k, p);
            }
            let inv = ONE / a[k * n + k];
            for r in k + 1..n {
                let l = a[r * n + k] * inv;
                a[r * n + k] = l;
                if l != ZERO {
                    for c in k + 1..n {
                        let u = a[k * n + c];
                        a[r * n + c] -= l * u;
                    }
                }
            }
        }
        Ok(DenseLu { n, a, piv })
    }

    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut x: Vec<C64> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.a[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.a[i * n + j] * x[j];
            }
            x[i] = s / self.a[i * n + i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg(seed: &mut u64) -> f64 {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((*seed >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
    }

    fn random_banded(n: usize, bw: usize, seed: u64) -> CsrMatrix {
        let mut s = seed;
        let mut trips = Vec::new();
        for r in 0..n {
            let mut rowsum = 0.0;
            for c in r.saturating_sub(bw)..(r + bw + 1).min(n) {
                if c != r {
                    let v = C64::new(lcg(&mut s), lcg(&mut s));
                    rowsum += v.norm();
                    trips.push((r, c, v));
                }
            }
            trips.push((r, r, C64::new(rowsum + 1.0, lcg(&mut s))));
            trips.push((r, (r + n / 2) % n, C64::new(0.1 * lcg(&mut s), 0.0)));
        }
        CsrMatrix::from_triplets(n, trips)
    }

    #[test]
    fn identity_solves_to_rhs() {
        let m = CsrMatrix::identity(5);
        let b: Vec<C64> = (0..5).map(|k| C64::new(k as f64, -1.0)).collect();
        let (x, rep) = solve(&m, &b, None, &SolverOptions::default()).unwrap();
        assert_eq!(x, b);
        assert_eq!(rep.rel_residual, 0.0);
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let m = random_banded(40, 3, 7);
        let (x, _) = solve(&m, &vec![ZERO; 40], None, &SolverOptions::default()).unwrap();
        assert!(x.iter().all(|z| *z == ZERO));
    }

    #[test]
    fn direct_and_gmres_agree() {
        let m = random_banded(200, 4, 11);
        let mut s = 3;
        let b: Vec<C64> = (0..200).map(|_| C64::new(lcg(&mut s), lcg(&mut s))).collect();
        let (x1, r1) = solve(&m, &b, None, &SolverOptions::default()).unwrap();
        assert!(r1.rel_residual <= 1e-10);
        let opts = SolverOptions { method: Method::Gmres, ..Default::default() };
        let (x2, r2) = solve(&m, &b, None, &opts).unwrap();
        assert!(r2.rel_residual <= 1e-10);
        let d: f64 = x1.iter().zip(&x2).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(d < 1e-8);
    }

    #[test]
    fn permutation_preserves_solution() {
        let m = random_banded(60, 2, 5);
        let b: Vec<C64> = (0..60).map(|k| C64::new((k as f64).sin(), 1.0)).collect();
        let perm: Vec<usize> = (0..60).map(|k| (k * 7) % 60).collect();
        let (x1, _) = solve(&m, &b, None, &SolverOptions::default()).unwrap();
        let (x2, _) = solve(&m, &b, Some(&perm), &SolverOptions::default()).unwrap();
        let d: f64 = x1.iter().zip(&x2).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(d < 1e-12);
    }

    #[test]
    fn pivoting_handles_zero_diagonal() {
        let m = CsrMatrix::from_triplets(2, vec![(0, 1, ONE), (1, 0, C64::new(2.0, 0.0)), (1, 1, ONE)]);
        let (x, _) = solve(&m, &[C64::new(3.0, 0.0), C64::new(5.0, 0.0)], None, &SolverOptions::default()).unwrap();
        assert!((x[0] - C64::new(1.0, 0.0)).norm() < 1e-14 && (x[1] - C64::new(3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn singular_is_reported() {
        let m = CsrMatrix::from_triplets(2, vec![(0, 0, ONE), (0, 1, ONE), (1, 0, ONE), (1, 1, ONE)]);
        assert!(solve(&m, &[ONE, ONE], None, &SolverOptions::default()).is_err());
    }

    #[test]
    fn dense_lu_roundtrip() {
        let n = 6;
        let mut s = 9;
        let a: Vec<C64> = (0..n * n).map(|_| C64::new(lcg(&mut s), lcg(&mut s))).collect();
        let x0: Vec<C64> = (0..n).map(|k| C64::new(k as f64, 1.0)).collect();
        let b: Vec<C64> = (0..n).map(|i| (0..n).map(|j| a[i * n + j] * x0[j]).sum()).collect();
        let x = DenseLu::factor(n, a).unwrap().solve(&b);
        for (p, q) in x.iter().zip(&x0) {
            assert!((p - q).norm() < 1e-10);
        }
    }
}
