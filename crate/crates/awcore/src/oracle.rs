//! Ground truth for small systems: the ASEP master equation solved
//! directly, and exact diagonalization of the open XXZ chain.
//!
//! Configurations are bit words with site 1 as the most significant bit.
//! On the spin side site 1 is the leftmost Kronecker factor, an empty site
//! is spin up (index 0) and an occupied site is spin down (index 1).

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::asep::{ASEPRates, Observables};
use crate::error::{Error, Result};
use crate::linalg::{c, cr, eye, fro, kron, CMat, C64};

pub const MAX_SITES: usize = 14;
const DENSE_LIMIT: usize = 10;

/// Generator `Γ` of the master equation `dP/dt = Γ P` in compressed rows.
#[derive(Debug, Clone)]
pub struct MarkovGenerator {
    pub l: usize,
    pub rates: ASEPRates,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<f64>,
}

impl MarkovGenerator {
    pub fn size(&self) -> usize {
        1 << self.l
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.size())
            .map(|r| (self.row_ptr[r]..self.row_ptr[r + 1]).map(|k| self.vals[k] * x[self.col_idx[k]]).sum())
            .collect()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.size();
        let mut m = DMatrix::zeros(n, n);
        for r in 0..n {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                m[(r, self.col_idx[k])] += self.vals[k];
            }
        }
        m
    }

    /// Largest absolute column sum.
    pub fn column_sum_defect(&self) -> f64 {
        let mut sums = vec![0.0; self.size()];
        for r in 0..self.size() {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                sums[self.col_idx[k]] += self.vals[k];
            }
        }
        sums.iter().fold(0.0, |m, s| m.max(s.abs()))
    }

    fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.size()];
        for (r, dr) in d.iter_mut().enumerate() {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                if self.col_idx[k] == r {
                    *dr += self.vals[k];
                }
            }
        }
        d
    }
}

/// Occupation of site `i` (0-based) in word `s` of an `l`-site chain.
#[inline]
pub fn occupied(s: usize, i: usize, l: usize) -> bool {
    (s >> (l - 1 - i)) & 1 == 1
}

pub fn build_generator(rates: &ASEPRates, l: usize) -> Result<MarkovGenerator> {
    if l == 0 || l > MAX_SITES {
        return Err(Error::InvalidParameter(format!("generator needs 1 <= L <= {MAX_SITES}, got {l}")));
    }
    let n = 1usize << l;
    let q = rates.q.q;
    // Triplets (target, source, rate) for each transition out of `s`.
    let mut rows: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); n];
    let mut add = |s: usize, t: usize, r: f64| {
        if r != 0.0 {
            *rows[t].entry(s).or_insert(0.0) += r;
            *rows[s].entry(s).or_insert(0.0) -= r;
        }
    };
    let first = 1usize << (l - 1);
    for s in 0..n {
        if occupied(s, 0, l) {
            add(s, s & !first, rates.gamma_r);
        } else {
            add(s, s | first, rates.alpha);
        }
        if occupied(s, l - 1, l) {
            add(s, s & !1, rates.beta_r);
        } else {
            add(s, s | 1, rates.delta_r);
        }
        for i in 0..l - 1 {
            let mask = (1usize << (l - 1 - i)) | (1usize << (l - 2 - i));
            match (occupied(s, i, l), occupied(s, i + 1, l)) {
                (true, false) => add(s, s ^ mask, 1.0),
                (false, true) => add(s, s ^ mask, q),
                _ => {}
            }
        }
    }
    let mut row_ptr = Vec::with_capacity(n + 1);
    let mut col_idx = Vec::new();
    let mut vals = Vec::new();
    row_ptr.push(0);
    for row in rows {
        for (cidx, v) in row {
            col_idx.push(cidx);
            vals.push(v);
        }
        row_ptr.push(col_idx.len());
    }
    let g = MarkovGenerator { l, rates: *rates, row_ptr, col_idx, vals };
    let defect = g.column_sum_defect();
    if defect > 1e-12 {
        return Err(Error::Numerical(format!("generator column sums deviate by {defect:.3e}")));
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDistribution {
    pub l: usize,
    /// Indexed by occupation word.
    pub probs: Vec<f64>,
    /// `‖Γ p‖_∞` of the returned vector.
    pub residual: f64,
}

/// Kernel vector of `Γ`, normalized to unit sum.
pub fn stationary_distribution(g: &MarkovGenerator) -> Result<StationaryDistribution> {
    let n = g.size();
    let mut p = if g.l <= DENSE_LIMIT { dense_kernel(g)? } else { gmres_kernel(g)? };
    let min = p.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -1e-12 {
        return Err(Error::Numerical(format!("stationary vector has a negative entry {min:.3e}")));
    }
    for x in p.iter_mut() {
        *x = x.max(0.0);
    }
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    let residual = g.matvec(&p).iter().fold(0.0, |m: f64, x| m.max(x.abs()));
    if residual > 1e-12 {
        return Err(Error::Numerical(format!("‖Γp‖ = {residual:.3e} on {n} states")));
    }
    Ok(StationaryDistribution { l: g.l, probs: p, residual })
}

/// Replaces the first balance equation by the normalization `Σ p = 1`.
fn dense_kernel(g: &MarkovGenerator) -> Result<Vec<f64>> {
    let n = g.size();
    let mut m = g.to_dense();
    m.row_mut(0).fill(1.0);
    let mut rhs = DVector::zeros(n);
    rhs[0] = 1.0;
    let lu = m.lu();
    let sol = lu.solve(&rhs).ok_or_else(|| {
        Error::Numerical("bordered generator is singular: kernel dimension is not one".into())
    })?;
    let r = g.matvec(sol.as_slice());
    let scale = sol.amax().max(1e-300);
    if r.iter().any(|x| !x.is_finite()) || r.iter().fold(0.0, |a: f64, x| a.max(x.abs())) / scale > 1e-8 {
        return Err(Error::Numerical("kernel dimension is not one".into()));
    }
    Ok(sol.as_slice().to_vec())
}

/// Restarted GMRES on the same bordered system, with Jacobi scaling.
fn gmres_kernel(g: &MarkovGenerator) -> Result<Vec<f64>> {
    let n = g.size();
    let diag = g.diagonal();
    let precond: Vec<f64> = (0..n).map(|i| if i == 0 || diag[i] == 0.0 { 1.0 } else { 1.0 / diag[i] }).collect();
    let apply = |x: &[f64]| -> Vec<f64> {
        let z: Vec<f64> = x.iter().zip(&precond).map(|(a, b)| a * b).collect();
        let mut y = g.matvec(&z);
        y[0] = z.iter().sum();
        y
    };
    let mut rhs = vec![0.0; n];
    rhs[0] = 1.0;
    let mut x = vec![1.0 / n as f64; n];
    for v in x.iter_mut().zip(&precond) {
        *v.0 /= v.1;
    }
    let restart = 80;
    let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
    for _cycle in 0..200 {
        let ax = apply(&x);
        let r: Vec<f64> = rhs.iter().zip(&ax).map(|(a, b)| a - b).collect();
        let beta = norm(&r);
        if beta < 1e-15 {
            break;
        }
        let mut basis: Vec<Vec<f64>> = vec![r.iter().map(|v| v / beta).collect()];
        let mut h = DMatrix::<f64>::zeros(restart + 1, restart);
        let mut k_used = 0;
        for k in 0..restart {
            let mut w = apply(&basis[k]);
            for (i, b) in basis.iter().enumerate() {
                let hij: f64 = w.iter().zip(b).map(|(a, c)| a * c).sum();
                h[(i, k)] = hij;
                w.iter_mut().zip(b).for_each(|(a, c)| *a -= hij * c);
            }
            let wn = norm(&w);
            h[(k + 1, k)] = wn;
            k_used = k + 1;
            if wn < 1e-300 {
                break;
            }
            basis.push(w.iter().map(|v| v / wn).collect());
        }
        let hk = h.view((0, 0), (k_used + 1, k_used)).into_owned();
        let mut e1 = DVector::zeros(k_used + 1);
        e1[0] = beta;
        let y = hk.svd(true, true).solve(&e1, 1e-14).map_err(|e| Error::Numerical(e.to_string()))?;
        for (j, yj) in y.iter().enumerate() {
            x.iter_mut().zip(&basis[j]).for_each(|(a, b)| *a += yj * b);
        }
    }
    let p: Vec<f64> = x.iter().zip(&precond).map(|(a, b)| a * b).collect();
    Ok(p)
}

/// Densities, two-point functions and currents of the exact distribution.
#[derive(Debug, Clone)]
pub struct OracleObservables {
    pub observables: Observables,
    pub bond_currents: Vec<f64>,
    pub left_current: f64,
    pub right_current: f64,
}

pub fn oracle_observables(sd: &StationaryDistribution, rates: &ASEPRates) -> OracleObservables {
    let l = sd.l;
    let q = rates.q.q;
    let mut density = vec![0.0; l];
    let mut two_point = BTreeMap::new();
    let mut bond_currents = vec![0.0; l.saturating_sub(1)];
    for (s, &p) in sd.probs.iter().enumerate() {
        for i in 0..l {
            if occupied(s, i, l) {
                density[i] += p;
                for j in i + 1..l {
                    if occupied(s, j, l) {
                        *two_point.entry((i + 1, j + 1)).or_insert(0.0) += p;
                    }
                }
            }
        }
        for (i, jb) in bond_currents.iter_mut().enumerate() {
            match (occupied(s, i, l), occupied(s, i + 1, l)) {
                (true, false) => *jb += p,
                (false, true) => *jb -= q * p,
                _ => {}
            }
        }
    }
    for i in 1..=l {
        for j in i + 1..=l {
            two_point.entry((i, j)).or_insert(0.0);
        }
    }
    let left_current = rates.alpha * (1.0 - density[0]) - rates.gamma_r * density[0];
    let right_current = rates.beta_r * density[l - 1] - rates.delta_r * (1.0 - density[l - 1]);
    let current = bond_currents.first().copied().unwrap_or(left_current);
    OracleObservables {
        observables: Observables { z_l: 1.0, density, current, two_point },
        bond_currents,
        left_current,
        right_current,
    }
}

/// Total-variation distance of two distributions on the same words.
pub fn total_variation(p: &[f64], r: &[f64]) -> f64 {
    0.5 * p.iter().zip(r).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

pub fn sigma_x() -> CMat {
    CMat::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)])
}

pub fn sigma_y() -> CMat {
    CMat::from_row_slice(2, 2, &[cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0)])
}

pub fn sigma_z() -> CMat {
    CMat::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)])
}

/// `σ+`, which maps down to up (an occupied site to an empty one).
pub fn sigma_plus() -> CMat {
    CMat::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(0.0), cr(0.0)])
}

pub fn sigma_minus() -> CMat {
    sigma_plus().transpose()
}

/// Kronecker product over `l` sites with the given single-site factors, identity elsewhere.
pub fn site_op(l: usize, ops: &[(usize, &CMat)]) -> CMat {
    let i2 = eye(2);
    let mut out = CMat::identity(1, 1);
    for site in 0..l {
        let f = ops.iter().find(|(k, _)| *k == site).map(|(_, m)| *m).unwrap_or(&i2);
        out = kron(&out, f);
    }
    out
}

/// `-(1/2) Σ [σxσx + σyσy + zz σzσz + h (σz_{i+1} - σz_i) + c]`.
fn bulk(l: usize, zz: f64, h: f64, cst: f64) -> CMat {
    let (sx, sy, sz) = (sigma_x(), sigma_y(), sigma_z());
    let dim = 1usize << l;
    let mut out = CMat::zeros(dim, dim);
    for i in 0..l.saturating_sub(1) {
        let term = site_op(l, &[(i, &sx), (i + 1, &sx)])
            + site_op(l, &[(i, &sy), (i + 1, &sy)])
            + site_op(l, &[(i, &sz), (i + 1, &sz)]) * cr(zz)
            + (site_op(l, &[(i + 1, &sz)]) - site_op(l, &[(i, &sz)])) * cr(h)
            + eye(dim) * cr(cst);
        out -= term * cr(0.5);
    }
    out
}

/// The invariant Hamiltonian in its nominal form, with
/// `Δ(x) = -(x + 1/x)/2` on both the `σzσz` term and the constant and
/// `h(x) = (x - 1/x)/2`.
pub fn h_qgr(l: usize, x: f64) -> CMat {
    let delta = -(x + 1.0 / x) / 2.0;
    let h = (x - 1.0 / x) / 2.0;
    bulk(l, delta, h, delta)
}

/// `U = ⊗_m diag(e^{iπm/2}, e^{-iπm/2})`, `m = 1, …, L`.
pub fn gauge_u(l: usize) -> CMat {
    let mut out = CMat::identity(1, 1);
    for m in 1..=l {
        let ph = std::f64::consts::FRAC_PI_2 * m as f64;
        let d = CMat::from_row_slice(2, 2, &[C64::from_polar(1.0, ph), cr(0.0), cr(0.0), C64::from_polar(1.0, -ph)]);
        out = kron(&out, &d);
    }
    out
}

/// Relative norm of `H(-1/x) + U H(x) U^{-1}`.
pub fn gauge_residual(l: usize, x: f64) -> f64 {
    let u = gauge_u(l);
    let uinv = u.adjoint();
    let lhs = h_qgr(l, -1.0 / x);
    let rhs = &u * h_qgr(l, x) * uinv;
    fro(&(&lhs + &rhs)) / fro(&lhs).max(fro(&rhs))
}

/// Reading of the spin-chain map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XxzVariant {
    /// Nominal couplings at deformation `q`, `Γ ~ -q H`.
    Nominal,
    /// Deformation `q^{1/2}`: `σzσz` coefficient `+(q^{1/2}+q^{-1/2})/2`,
    /// boundary terms divided by `2 q^{1/2}`, `Γ ~ -q^{1/2} H`.
    Ratio,
}

#[derive(Debug, Clone)]
pub struct XXZModel {
    pub l: usize,
    pub h: CMat,
    pub h_bulk: CMat,
    pub b1: CMat,
    pub bl: CMat,
    pub delta_q: f64,
    pub h_field: f64,
    pub mu: f64,
    pub variant: XxzVariant,
    /// The factor `Q` in `Γ ~ -Q H`.
    pub spectral_factor: f64,
}

pub fn build_xxz(rates: &ASEPRates, l: usize, mu: f64, variant: XxzVariant) -> Result<XXZModel> {
    if !(2..=12).contains(&l) {
        return Err(Error::InvalidParameter(format!("XXZ chain needs 2 <= L <= 12, got {l}")));
    }
    if mu == 0.0 {
        return Err(Error::InvalidParameter("μ must be nonzero".into()));
    }
    let big_q = match variant {
        XxzVariant::Nominal => rates.q.q,
        XxzVariant::Ratio => rates.q.sqrt_q,
    };
    let delta_q = -(big_q + 1.0 / big_q) / 2.0;
    let h_field = (big_q - 1.0 / big_q) / 2.0;
    let h_bulk = match variant {
        XxzVariant::Nominal => bulk(l, delta_q, h_field, delta_q),
        XxzVariant::Ratio => bulk(l, -delta_q, h_field, delta_q),
    };
    let dim = 1usize << l;
    let id = eye(dim);
    let (sz, sp, sm) = (sigma_z(), sigma_plus(), sigma_minus());
    let (al, be, ga, de) = (rates.alpha, rates.beta_r, rates.gamma_r, rates.delta_r);
    let last = l - 1;
    let edge = big_q.powi(last as i32);
    let b1 = (&id * cr(al + ga) + site_op(l, &[(0, &sz)]) * cr(al - ga)
        - site_op(l, &[(0, &sm)]) * cr(2.0 * al * mu)
        - site_op(l, &[(0, &sp)]) * cr(2.0 * ga / mu))
        / cr(2.0 * big_q);
    let bl = (&id * cr(be + de) - site_op(l, &[(last, &sz)]) * cr(be - de)
        - site_op(l, &[(last, &sm)]) * cr(2.0 * de * mu * edge)
        - site_op(l, &[(last, &sp)]) * cr(2.0 * be / (mu * edge)))
        / cr(2.0 * big_q);
    let h = &h_bulk + &b1 + &bl;
    Ok(XXZModel { l, h, h_bulk, b1, bl, delta_q, h_field, mu, variant, spectral_factor: big_q })
}

/// Eigenvalues of a real matrix stored as complex; errors if it has an imaginary part.
fn real_eigenvalues(m: &CMat) -> Result<Vec<C64>> {
    let im = m.iter().fold(0.0, |a: f64, z| a.max(z.im.abs()));
    if im > 0.0 {
        return Err(Error::Unsupported("eigenvalues are only computed for real matrices".into()));
    }
    Ok(m.map(|z| z.re).complex_eigenvalues().iter().copied().collect())
}

/// Optimal assignment cost matrix `cost[i][j]`; returns `perm[i]` = column matched to row `i`.
fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut perm = vec![0; n];
    for j in 1..=n {
        if p[j] > 0 {
            perm[p[j] - 1] = j - 1;
        }
    }
    perm
}

/// Largest distance between matched eigenvalues of two multisets, using
/// the assignment that minimizes the total distance.
pub fn match_spectra(a: &[C64], b: &[C64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidParameter("spectra of different sizes".into()));
    }
    let cost: Vec<Vec<f64>> = a.iter().map(|x| b.iter().map(|y| (x - y).norm()).collect()).collect();
    let perm = hungarian(&cost);
    Ok(perm.iter().enumerate().map(|(i, &j)| cost[i][j]).fold(0.0, f64::max))
}

/// Matched distance between the spectra of `Γ` and `-Q H`.
pub fn spectrum_compare(g: &MarkovGenerator, m: &XXZModel) -> Result<f64> {
    if g.l != m.l {
        return Err(Error::InvalidParameter("generator and chain lengths differ".into()));
    }
    let eg: Vec<C64> = g.to_dense().complex_eigenvalues().iter().copied().collect();
    let eh = real_eigenvalues(&(&m.h * cr(-m.spectral_factor)))?;
    match_spectra(&eg, &eh)
}

/// Matched distance between the spectra of two chains.
pub fn spectrum_distance(a: &XXZModel, b: &XXZModel) -> Result<f64> {
    match_spectra(&real_eigenvalues(&a.h)?, &real_eigenvalues(&b.h)?)
}
