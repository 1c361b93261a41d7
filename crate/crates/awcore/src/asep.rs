//! Stationary state of the open ASEP via the matrix product ansatz, the
//! boundary Askey-Wilson algebra and the conserved boundary charges.
//!
//! Particles hop right at rate 1 and left at rate `q`, enter at site 1 at
//! rate `α`, leave it at rate `γ`, leave site `L` at rate `β` and enter it
//! at rate `δ`.

use std::collections::BTreeMap;

use crate::awalgebra::{coideal_structure_constants, AWStructure, TridiagonalPair};
use crate::error::{Error, Result};
use crate::linalg::{commutator, cr, diag_real, eye, fro, leading_block, CMat, CVec, C64};
use crate::oracle::{gauge_u, h_qgr, sigma_minus, sigma_plus, sigma_z, site_op};
use crate::qspecial::{monic_recurrence, recurrence_coeffs, AWParams, QParams, M_GUARD};
use crate::quantumrep::{casimir_value, CoidealParams, SpinRep};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ASEPRates {
    pub alpha: f64,
    pub beta_r: f64,
    pub gamma_r: f64,
    pub delta_r: f64,
    pub q: QParams,
    /// Scale of the quadratic algebra, `x1 = -x0`. Equal to `q^{1/2}` in
    /// the representation built here; [`build_mpa`] re-derives it.
    pub x0: f64,
}

impl ASEPRates {
    pub fn new(alpha: f64, beta_r: f64, gamma_r: f64, delta_r: f64, q: f64) -> Result<Self> {
        let q = QParams::new(q)?;
        for (name, v) in [("alpha", alpha), ("beta", beta_r), ("gamma", gamma_r), ("delta", delta_r)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("rate {name} must be finite and nonnegative, got {v}")));
            }
        }
        if alpha + gamma_r <= 0.0 || beta_r + delta_r <= 0.0 {
            return Err(Error::InvalidParameter("each boundary needs a positive rate".into()));
        }
        Ok(Self { alpha, beta_r, gamma_r, delta_r, q, x0: q.sqrt_q })
    }
}

fn kappa_pair(x: f64, y: f64, q: f64) -> (f64, f64) {
    let b = x - y - (1.0 - q);
    let disc = (b * b + 4.0 * x * y).sqrt();
    ((-b + disc) / (2.0 * x), (-b - disc) / (2.0 * x))
}

/// `a = κ*_+`, `b = κ_+`, `c = κ*_-`, `d = κ_-`.
pub fn kappa_map(rates: &ASEPRates) -> Result<AWParams> {
    kappa_map_with_guard(rates, M_GUARD)
}

pub fn kappa_map_with_guard(rates: &ASEPRates, m_guard: usize) -> Result<AWParams> {
    if rates.alpha <= 0.0 || rates.beta_r <= 0.0 {
        return Err(Error::InvalidParameter("the parameter map needs α > 0 and β > 0".into()));
    }
    let q = rates.q.q;
    let (b, d) = kappa_pair(rates.beta_r, rates.delta_r, q);
    let (a, c) = kappa_pair(rates.alpha, rates.gamma_r, q);
    let checks = [
        (b * d, -rates.delta_r / rates.beta_r),
        (a * c, -rates.gamma_r / rates.alpha),
        (rates.beta_r * (1.0 + b) * (1.0 + d), 1.0 - q),
        (rates.alpha * (1.0 + a) * (1.0 + c), 1.0 - q),
    ];
    for (got, want) in checks {
        if (got - want).abs() > 1e-12 * want.abs().max(1.0) {
            return Err(Error::Numerical(format!("parameter map identity off: {got} vs {want}")));
        }
    }
    AWParams::with_guard(cr(a), cr(b), cr(c), cr(d), rates.q, m_guard)
}

#[derive(Debug, Clone)]
pub struct MPAState {
    pub d0: CMat,
    pub d1: CMat,
    pub w_vec: CVec,
    pub v_vec: CVec,
    pub params: AWParams,
    pub rates: ASEPRates,
    pub n: usize,
    pub x0: f64,
}

/// Residuals of the defining relations of an MPA state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpaInvariants {
    /// Relative residual of `D1 D0 - q D0 D1 = x0 (D0 + D1)` on the leading `N-1` block.
    pub bulk: f64,
    /// `‖(β D1 - δ D0) v - x0 v‖`.
    pub right: f64,
    /// `‖wᵗ (α D0 - γ D1) - x0 wᵗ‖`.
    pub left: f64,
}

impl MpaInvariants {
    pub fn max(&self) -> f64 {
        self.bulk.max(self.right).max(self.left)
    }
}

pub fn mpa_invariants(d0: &CMat, d1: &CMat, w: &CVec, v: &CVec, rates: &ASEPRates, x0: f64) -> MpaInvariants {
    let n = d0.nrows();
    let q = rates.q.q;
    let keep = n - 1;
    let lhs = leading_block(&(d1 * d0 - d0 * d1 * cr(q)), keep);
    let rhs = leading_block(&((d0 + d1) * cr(x0)), keep);
    let bulk = fro(&(&lhs - &rhs)) / fro(&lhs).max(fro(&rhs)).max(1e-300);
    let rv = (d1 * cr(rates.beta_r) - d0 * cr(rates.delta_r)) * v - v * cr(x0);
    let lw = (d0 * cr(rates.alpha) - d1 * cr(rates.gamma_r)).transpose() * w - w * cr(x0);
    MpaInvariants { bulk, right: rv.norm(), left: lw.norm() }
}

/// Monic Jacobi matrix of `p_n(x; a,b,c,d)`: ones below the diagonal,
/// `α_n` on it and `β_{n+1}` above.
pub fn monic_jacobi(n: usize, p: &AWParams) -> Result<CMat> {
    let mut j = CMat::zeros(n, n);
    for k in 0..n {
        let (alpha, _) = monic_recurrence(k, p)?;
        j[(k, k)] = alpha;
        if k + 1 < n {
            let (_, beta) = monic_recurrence(k + 1, p)?;
            j[(k + 1, k)] = cr(1.0);
            j[(k, k + 1)] = beta;
        }
    }
    Ok(j)
}

/// Builds `D0`, `D1` on `N = L + 2` basis vectors, which is exact for
/// words of length `L` against `e_0`.
pub fn build_mpa(rates: &ASEPRates, l: usize) -> Result<MPAState> {
    build_mpa_dim(rates, l + 2)
}

/// `D1 = x0 (1 + d)/(1-q)`, `D0 = x0 (1 + J - d)/(1-q)` where `J` is the monic
/// Jacobi matrix and `d` is the tridiagonal solution of
/// `d(J - d) - q (J - d) d = 1 - q` fixed by the boundary conditions on `e_0`.
pub fn build_mpa_dim(rates: &ASEPRates, n: usize) -> Result<MPAState> {
    if n < 2 {
        return Err(Error::InvalidParameter("MPA needs at least two basis vectors".into()));
    }
    let params = kappa_map(rates)?;
    if (params.abcd() - 1.0).norm() < 1e-14 {
        return Err(Error::Domain("abcd = 1 makes the representation singular".into()));
    }
    let q = rates.q.q;
    let jac = monic_jacobi(n, &params)?;
    let ac = params.a * params.c;
    let bd = params.b * params.d;
    let (be, de) = (rates.beta_r, rates.delta_r);
    let mut dm = CMat::zeros(n, n);
    dm[(0, 0)] = (cr((1.0 - q) - (be - de)) + jac[(0, 0)] * de) / (be + de);
    for k in 0..n - 1 {
        let qk = q.powi(k as i32);
        let mu = cr(1.0) / (cr(1.0) - ac * qk);
        let nu = bd * qk / (bd * qk - 1.0);
        let g = jac[(k, k + 1)];
        let u = g * mu;
        dm[(k, k + 1)] = u;
        dm[(k + 1, k)] = nu;
        dm[(k + 1, k + 1)] =
            (dm[(k, k)] * (g - u * (1.0 - q)) + u * (jac[(k + 1, k + 1)] - jac[(k, k)] * q)) / (g * q + u * (1.0 - q));
    }
    // x0 = β λ_0, with λ_0 the boundary eigenvalue on e_0.
    let lambda0 = (params.b + 1.0) * (params.d + 1.0) * (rates.q.sqrt_q / (1.0 - q));
    let x0 = (lambda0 * be).re;
    let lambda0_star = (params.a + 1.0) * (params.c + 1.0) * (rates.q.sqrt_q / (1.0 - q));
    if (lambda0_star * rates.alpha - x0).norm() > 1e-12 {
        return Err(Error::Convention(format!("x0 from the left boundary ({}) disagrees with {x0}", lambda0_star * rates.alpha)));
    }
    let id = eye(n);
    let pref = cr(x0 / (1.0 - q));
    let d1 = (&id + &dm) * pref;
    let d0 = (&id + &jac - &dm) * pref;
    let mut e0 = CVec::zeros(n);
    e0[0] = cr(1.0);
    let inv = mpa_invariants(&d0, &d1, &e0, &e0, rates, x0);
    if inv.max() > 1e-10 {
        return Err(Error::Convention(format!(
            "MPA invariants fail: bulk {:.3e}, right {:.3e}, left {:.3e}",
            inv.bulk, inv.right, inv.left
        )));
    }
    Ok(MPAState { d0, d1, w_vec: e0.clone(), v_vec: e0, params, rates: *rates, n, x0 })
}

/// One reading of the nominal boundary representations.
#[derive(Debug, Clone, PartialEq)]
pub struct MpaCandidate {
    pub name: String,
    pub invariants: Option<MpaInvariants>,
    pub error: Option<String>,
}

/// Builds `D1 + bd D0 = diag(λ_n)` and `D0 + ac D1 = q^{1/2}/(1-q) (p 𝒜' + 1 + ac)` for
/// `p ∈ {a, b}`, `𝒜' ∈ {𝒜, 𝒜ᵗ}` and parameter order `(a,b,c,d)` or `(b,a,d,c)`,
/// and reports the residuals of each.
pub fn mpa_candidate_audit(rates: &ASEPRates, n: usize) -> Result<Vec<MpaCandidate>> {
    let base = kappa_map(rates)?;
    let q = rates.q.q;
    let pref = rates.q.sqrt_q / (1.0 - q);
    let mut out = Vec::new();
    for swap in [false, true] {
        let p = if swap { base.permuted([1, 0, 3, 2]) } else { base };
        for use_b in [false, true] {
            for transpose in [false, true] {
                let name = format!(
                    "prefactor={} matrix={} order={}",
                    if use_b { "b" } else { "a" },
                    if transpose { "transposed" } else { "plain" },
                    if swap { "badc" } else { "abcd" }
                );
                let built = (|| -> Result<MpaInvariants> {
                    let mut amat = CMat::zeros(n, n);
                    for k in 0..n {
                        let (ak, bk, _) = recurrence_coeffs(k, &p)?;
                        amat[(k, k)] = ak;
                        if k + 1 < n {
                            amat[(k + 1, k)] = bk;
                            amat[(k, k + 1)] = recurrence_coeffs(k + 1, &p)?.2;
                        }
                    }
                    if transpose {
                        amat = amat.transpose();
                    }
                    let (ac, bd) = (p.a * p.c, p.b * p.d);
                    let lam: Vec<C64> = (0..n)
                        .map(|k| {
                            let qk = q.powi(k as i32);
                            (p.b / qk + p.d * qk + 1.0 + bd) * pref
                        })
                        .collect();
                    let m1 = CMat::from_diagonal(&CVec::from_vec(lam));
                    let factor = if use_b { p.b } else { p.a };
                    let m2 = (&amat * factor + eye(n) * (cr(1.0) + ac)) * cr(pref);
                    let det = cr(1.0) - p.abcd();
                    let d1 = (&m1 - &m2 * bd) / det;
                    let d0 = (&m2 - &m1 * ac) / det;
                    let mut e0 = CVec::zeros(n);
                    e0[0] = cr(1.0);
                    Ok(mpa_invariants(&d0, &d1, &e0, &e0, rates, rates.q.sqrt_q))
                })();
                match built {
                    Ok(inv) => out.push(MpaCandidate { name, invariants: Some(inv), error: None }),
                    Err(e) => out.push(MpaCandidate { name, invariants: None, error: Some(e.to_string()) }),
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observables {
    pub z_l: f64,
    /// `⟨s_i⟩` for `i = 1, …, L`.
    pub density: Vec<f64>,
    pub current: f64,
    /// `⟨s_i s_j⟩` for `1 <= i < j <= L`.
    pub two_point: BTreeMap<(usize, usize), f64>,
}

/// MPA observables together with the per-bond currents.
#[derive(Debug, Clone)]
pub struct MpaObservables {
    pub observables: Observables,
    pub bond_currents: Vec<f64>,
    /// `x0 Z_{L-1} / Z_L`.
    pub current_ratio: f64,
}

fn powers(c: &CMat, l: usize) -> Vec<CMat> {
    let mut out = vec![eye(c.nrows())];
    for k in 1..=l {
        let next = &out[k - 1] * c;
        out.push(next);
    }
    out
}

fn element(w: &CVec, m: &CMat, v: &CVec) -> f64 {
    (w.transpose() * m * v)[(0, 0)].re
}

pub fn observables(mpa: &MPAState, l: usize) -> Result<MpaObservables> {
    if l == 0 || l + 2 > mpa.n {
        return Err(Error::InvalidParameter(format!("need 1 <= L <= N-2 = {}", mpa.n - 2)));
    }
    let c = &mpa.d0 + &mpa.d1;
    let pw = powers(&c, l);
    let (w, v) = (&mpa.w_vec, &mpa.v_vec);
    // Z_L changes sign with abcd q^k - 1; only a vanishing Z_L is fatal.
    let z = element(w, &pw[l], v);
    if !(z.is_finite() && z != 0.0) {
        return Err(Error::Numerical(format!("Z_L = {z} is not usable")));
    }
    let density: Vec<f64> = (0..l).map(|i| element(w, &(&pw[i] * &mpa.d1 * &pw[l - 1 - i]), v) / z).collect();
    let mut two_point = BTreeMap::new();
    for i in 0..l {
        for j in i + 1..l {
            let m = &pw[i] * &mpa.d1 * &pw[j - i - 1] * &mpa.d1 * &pw[l - 1 - j];
            two_point.insert((i + 1, j + 1), element(w, &m, v) / z);
        }
    }
    let q = mpa.rates.q.q;
    let hop = &mpa.d1 * &mpa.d0 - &mpa.d0 * &mpa.d1 * cr(q);
    let bond_currents: Vec<f64> = (0..l.saturating_sub(1))
        .map(|i| element(w, &(&pw[i] * &hop * &pw[l - 2 - i]), v) / z)
        .collect();
    let current_ratio = mpa.x0 * element(w, &pw[l - 1], v) / z;
    let current = bond_currents.first().copied().unwrap_or(current_ratio);
    if (current - current_ratio).abs() > 1e-9 * current_ratio.abs().max(1.0) {
        return Err(Error::Numerical(format!("bond current {current} differs from x0 Z_(L-1)/Z_L = {current_ratio}")));
    }
    Ok(MpaObservables { observables: Observables { z_l: z, density, current, two_point }, bond_currents, current_ratio })
}

/// `P(s) = ⟨w| D_{s_1} … D_{s_L} |v⟩ / Z_L`, indexed by occupation word (site 1 the high bit).
pub fn mpa_distribution(mpa: &MPAState, l: usize) -> Result<Vec<f64>> {
    if l == 0 || l + 2 > mpa.n {
        return Err(Error::InvalidParameter(format!("need 1 <= L <= N-2 = {}", mpa.n - 2)));
    }
    // Row vectors ⟨w| D_{s_1} … D_{s_k}, extended one site at a time.
    let mut rows: Vec<CVec> = vec![mpa.w_vec.clone()];
    for _ in 0..l {
        let mut next = Vec::with_capacity(rows.len() * 2);
        for r in &rows {
            next.push(mpa.d0.transpose() * r);
            next.push(mpa.d1.transpose() * r);
        }
        rows = next;
    }
    let weights: Vec<f64> = rows.iter().map(|r| (r.transpose() * &mpa.v_vec)[(0, 0)].re).collect();
    let z: f64 = weights.iter().sum();
    let scale: f64 = weights.iter().map(|x| x.abs()).sum();
    if !(z.is_finite() && z.abs() > 1e-12 * scale) {
        return Err(Error::Numerical(format!("Z_L = {z} vanishes against the weights")));
    }
    Ok(weights.iter().map(|x| x / z).collect())
}

/// Coefficients of the boundary operators on a `U_q(su(2))` representation:
/// `β D1 - δ D0 = c1 q^{N/2}A+ + c2 A- q^{N/2} + c3 q^N + x0(β-δ)/(1-q)` and
/// `α D0 - γ D1 = d1 q^{-N/2}A+ + d2 A- q^{-N/2} + d3 q^{-N} + x0(α-γ)/(1-q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryCoefficients {
    pub c: [f64; 3],
    pub d: [f64; 3],
    pub shift_right: f64,
    pub shift_left: f64,
}

pub fn boundary_coefficients(rates: &ASEPRates) -> BoundaryCoefficients {
    let q = rates.q.q;
    let x0 = rates.x0;
    let (al, be, ga, de) = (rates.alpha, rates.beta_r, rates.gamma_r, rates.delta_r);
    let r1 = (1.0 - q).sqrt();
    BoundaryCoefficients {
        c: [x0 * be / r1, -x0 * de / r1, -x0 * (-be * rates.q.sqrt_q + de) / (1.0 - q)],
        d: [x0 * al / r1, -x0 * ga / r1, x0 * (al * rates.q.inv_sqrt_q - ga) / (1.0 - q)],
        shift_right: x0 * (be - de) / (1.0 - q),
        shift_left: x0 * (al - ga) / (1.0 - q),
    }
}

/// Structure constants in their nominal closed form, with Casimir value `q_val`.
pub fn boundary_aw_constants(rates: &ASEPRates, q_val: C64) -> AWStructure {
    let q = rates.q;
    let x0 = rates.x0;
    let (al, be, ga, de) = (rates.alpha, rates.beta_r, rates.gamma_r, rates.delta_r);
    let s = q.s();
    let p = q.sqrt_q + q.inv_sqrt_q;
    let x2 = x0 * x0;
    let rho = cr(x2 * be * de / q.q * p * p);
    let rho_star = cr(x2 * al * ga / q.q * p * p);
    let omega = -(cr(x2 * (be - de) * (ga - al)) - q_val * (x2 * (be * ga + al * de) * s));
    let pre = q.sqrt_q * p * x2 * x0;
    let eta = (q_val * (be * de * (ga - al)) + cr((be - de) * (be * ga + al * de) / s)) * pre;
    let eta_star = (q_val * (al * ga * (be - de)) + cr((al - ga) * (al * de + be * ga) / s)) * pre;
    AWStructure::reduced(q, rho, rho_star, omega, eta, eta_star)
}

/// The boundary pair written in coideal form (evaluation parameter 1).
pub fn boundary_coideal_params(rates: &ASEPRates) -> CoidealParams {
    let bc = boundary_coefficients(rates);
    let q = rates.q;
    let s = q.s();
    CoidealParams::new(
        cr(bc.c[1] / s),
        cr(bc.d[0] * q.inv_sqrt_q / s),
        cr(-bc.c[0] * q.sqrt_q / s),
        cr(-bc.d[1] / s),
        cr(bc.c[2]),
        cr(bc.d[2]),
    )
}

/// Structure constants of the boundary pair obtained from its coideal form,
/// with `l = (q^{1/2} - q^{-1/2})^2 Q`.
pub fn boundary_aw_constants_derived(rates: &ASEPRates, q_val: C64) -> AWStructure {
    let s = rates.q.s();
    coideal_structure_constants(&boundary_coideal_params(rates), q_val * (s * s), rates.q)
}

/// `(A, A*)` from the boundary operators on a spin representation, with the
/// constant shifts removed.
pub fn boundary_pair_finite(rates: &ASEPRates, rep: &SpinRep) -> Result<TridiagonalPair> {
    if (rep.q.q - rates.q.q).abs() > 0.0 {
        return Err(Error::InvalidParameter("representation and rates must share q".into()));
    }
    let bc = boundary_coefficients(rates);
    let (h, hi) = (rep.q_pow_n(0.5), rep.q_pow_n(-0.5));
    let a = &h * &rep.a_plus * cr(bc.c[0]) + &rep.a_minus * &h * cr(bc.c[1]) + rep.q_pow_n(1.0) * cr(bc.c[2]);
    let a_star =
        &hi * &rep.a_plus * cr(bc.d[0]) + &rep.a_minus * &hi * cr(bc.d[1]) + rep.q_pow_n(-1.0) * cr(bc.d[2]);
    Ok(TridiagonalPair::new(a, a_star, true, rep.q))
}

/// `Q` on the irreducible representation, through [`casimir_value`].
pub fn boundary_casimir(rep: &SpinRep) -> Result<C64> {
    casimir_value(rep)
}

/// Generators of `U_q(su(2))` on `L` spin-1/2 sites through the iterated
/// coproduct: `N = Σ σz/2`, `A± = Σ_i q^{σz/4} ⊗ … ⊗ σ±_i ⊗ q^{-σz/4} ⊗ …`.
#[derive(Debug, Clone)]
pub struct ChainGenerators {
    pub n_diag: Vec<f64>,
    pub a_plus: CMat,
    pub a_minus: CMat,
    pub q: QParams,
}

impl ChainGenerators {
    pub fn q_pow_n(&self, s: f64) -> CMat {
        diag_real(&self.n_diag.iter().map(|m| self.q.pow(s * m)).collect::<Vec<_>>())
    }
}

pub fn chain_generators(l: usize, q: QParams) -> ChainGenerators {
    let sz = sigma_z();
    let left = diag_real(&[q.pow(0.25), q.pow(-0.25)]);
    let right = diag_real(&[q.pow(-0.25), q.pow(0.25)]);
    let dim = 1usize << l;
    let build = |x: &CMat| -> CMat {
        let mut out = CMat::zeros(dim, dim);
        for i in 0..l {
            let mut ops: Vec<(usize, &CMat)> = Vec::with_capacity(l);
            for j in 0..l {
                ops.push((j, if j < i { &left } else if j > i { &right } else { x }));
            }
            out += site_op(l, &ops);
        }
        out
    };
    let nz: CMat = (0..l).map(|i| site_op(l, &[(i, &sz)])).fold(CMat::zeros(dim, dim), |a, b| a + b) * cr(0.5);
    let n_diag = (0..dim).map(|k| nz[(k, k)].re).collect();
    ChainGenerators { n_diag, a_plus: build(&sigma_plus()), a_minus: build(&sigma_minus()), q }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// `α D0 - γ D1`, checked against `H(q)`.
    Left,
    /// `β D1 - δ D0`, checked against `H(-q^{-1}) = -U H(q) U^{-1}`.
    Right,
}

/// The boundary operator on the chain, including its constant shift.
pub fn boundary_charge(rates: &ASEPRates, l: usize, which: Boundary) -> CMat {
    let g = chain_generators(l, rates.q);
    let bc = boundary_coefficients(rates);
    let id = eye(1 << l);
    match which {
        Boundary::Right => {
            let h = g.q_pow_n(0.5);
            &h * &g.a_plus * cr(bc.c[0]) + &g.a_minus * &h * cr(bc.c[1]) + g.q_pow_n(1.0) * cr(bc.c[2])
                + id * cr(bc.shift_right)
        }
        Boundary::Left => {
            let h = g.q_pow_n(-0.5);
            &h * &g.a_plus * cr(bc.d[0]) + &g.a_minus * &h * cr(bc.d[1]) + g.q_pow_n(-1.0) * cr(bc.d[2])
                + id * cr(bc.shift_left)
        }
    }
}

/// `H(q)`: the nominal invariant Hamiltonian at the chain deformation `q^{1/2}`.
pub fn invariant_hamiltonian(l: usize, q: QParams) -> CMat {
    h_qgr(l, q.sqrt_q)
}

/// `H(-q^{-1})`, through `-U H(q) U^{-1}`.
pub fn invariant_hamiltonian_dual(l: usize, q: QParams) -> CMat {
    let u = gauge_u(l);
    -(&u * invariant_hamiltonian(l, q) * u.adjoint())
}

fn rel_commutator(x: &CMat, h: &CMat) -> f64 {
    fro(&commutator(x, h)) / (fro(x) * fro(h)).max(1e-300)
}

/// `‖[X, H]‖ / (‖X‖ ‖H‖)` for the chosen boundary charge and Hamiltonian.
pub fn conserved_charge_residual(rates: &ASEPRates, l: usize, which: Boundary) -> Result<f64> {
    if !(2..=8).contains(&l) {
        return Err(Error::InvalidParameter(format!("charges are checked for 2 <= L <= 8, got {l}")));
    }
    let x = boundary_charge(rates, l, which);
    let h = match which {
        Boundary::Left => invariant_hamiltonian(l, rates.q),
        Boundary::Right => invariant_hamiltonian_dual(l, rates.q),
    };
    Ok(rel_commutator(&x, &h))
}

/// Commutator of the left charge with `H(-q^{-1})`, the Hamiltonian that
/// both charges commute with.
pub fn left_charge_dual_residual(rates: &ASEPRates, l: usize) -> f64 {
    rel_commutator(&boundary_charge(rates, l, Boundary::Left), &invariant_hamiltonian_dual(l, rates.q))
}
