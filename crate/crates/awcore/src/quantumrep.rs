//! Spin-j representations of U_q(su(2)), evaluation representations of
//! quantum affine sl(2), the coproduct, and the q-Serre check.
//!
//! Conventions: index 0 carries `m = j`; `A+` raises `m`; `H_1 = N`,
//! `H_0 = -N` in evaluation representations.

use crate::awalgebra::build_coideal_ops;
use crate::error::{Error, Result};
use crate::linalg::{commutator, cr, diag_real, eye, fro, kron, rel, rel_diff, CMat, C64};
use crate::qspecial::{q_number, QParams};

#[derive(Debug, Clone)]
pub struct SpinRep {
    pub dim: usize,
    pub j_twice: usize,
    pub a_plus: CMat,
    pub a_minus: CMat,
    /// Eigenvalues of `N`, `j, j-1, …, -j`.
    pub n_diag: Vec<f64>,
    pub qn_pos: CMat,
    pub qn_neg: CMat,
    pub q: QParams,
}

impl SpinRep {
    /// `q^{s N}` for any real `s`.
    pub fn q_pow_n(&self, s: f64) -> CMat {
        let d: Vec<f64> = self.n_diag.iter().map(|m| self.q.pow(s * m)).collect();
        diag_real(&d)
    }

    pub fn n_matrix(&self) -> CMat {
        diag_real(&self.n_diag)
    }

    /// Residuals of `[N, A±] = ±A±` and `[A+, A-] = (q^N - q^{-N})/(q^{1/2} - q^{-1/2})`.
    pub fn relation_residuals(&self) -> (f64, f64, f64) {
        let n = self.n_matrix();
        let rp = rel(&(commutator(&n, &self.a_plus) - &self.a_plus), fro(&self.a_plus).max(1.0));
        let rm = rel(&(commutator(&n, &self.a_minus) + &self.a_minus), fro(&self.a_minus).max(1.0));
        let rhs = (&self.qn_pos - &self.qn_neg) / cr(self.q.s());
        let rc = rel(&(commutator(&self.a_plus, &self.a_minus) - &rhs), fro(&rhs).max(1.0));
        (rp, rm, rc)
    }
}

/// Spin-`j_twice/2` matrices with `A+` entry `√([j-m][j+m+1])` from `m` to `m+1`.
pub fn build_spin_rep(j_twice: usize, q: QParams) -> SpinRep {
    let dim = j_twice + 1;
    let j = j_twice as f64 / 2.0;
    let n_diag: Vec<f64> = (0..dim).map(|i| j - i as f64).collect();
    let mut a_plus = CMat::zeros(dim, dim);
    for i in 1..dim {
        let m = n_diag[i];
        a_plus[(i - 1, i)] = cr((q_number(j - m, &q) * q_number(j + m + 1.0, &q)).sqrt());
    }
    let a_minus = a_plus.transpose();
    let qn_pos = diag_real(&n_diag.iter().map(|m| q.pow(*m)).collect::<Vec<_>>());
    let qn_neg = diag_real(&n_diag.iter().map(|m| q.pow(-*m)).collect::<Vec<_>>());
    SpinRep { dim, j_twice, a_plus, a_minus, n_diag, qn_pos, qn_neg, q }
}

/// The central element `Q = A+A- + (q^{N-1/2} + q^{-N+1/2})/(q^{1/2} - q^{-1/2})^2`.
pub fn casimir_matrix(rep: &SpinRep) -> CMat {
    let s = rep.q.s();
    let shift = (rep.q_pow_n(1.0) * cr(rep.q.inv_sqrt_q) + rep.q_pow_n(-1.0) * cr(rep.q.sqrt_q)) / cr(s * s);
    &rep.a_plus * &rep.a_minus + shift
}

/// The variant with the opposite inner sign, `A+A- - (q^{N-1/2} - q^{-N+1/2})/(q^{1/2} - q^{-1/2})^2`.
/// It is not central; kept for the convention report.
pub fn casimir_nominal_matrix(rep: &SpinRep) -> CMat {
    let s = rep.q.s();
    let shift = (rep.q_pow_n(1.0) * cr(rep.q.inv_sqrt_q) - rep.q_pow_n(-1.0) * cr(rep.q.sqrt_q)) / cr(s * s);
    &rep.a_plus * &rep.a_minus - shift
}

/// Largest relative commutator of a candidate central element with `A±` and `N`.
pub fn centrality_residual(rep: &SpinRep, cas: &CMat) -> f64 {
    let scale = fro(cas).max(1.0) * fro(&rep.a_plus).max(1.0);
    [&rep.a_plus, &rep.a_minus, &rep.n_matrix()]
        .iter()
        .map(|g| rel(&commutator(cas, g), scale))
        .fold(0.0, f64::max)
}

/// Scalar value of the central element on an irreducible representation.
pub fn casimir_value(rep: &SpinRep) -> Result<C64> {
    let m = casimir_matrix(rep);
    let v = m[(0, 0)];
    let dev = rel_diff(&m, &(eye(rep.dim) * v));
    if dev > 1e-10 {
        return Err(Error::Convention(format!("Casimir matrix is not scalar (deviation {dev:.3e})")));
    }
    Ok(v)
}

/// Free scalars of the coideal generators `A`, `A*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoidealParams {
    pub u: C64,
    pub u_star: C64,
    pub v: C64,
    pub v_star: C64,
    pub k: C64,
    pub k_star: C64,
}

impl CoidealParams {
    pub fn new(u: C64, u_star: C64, v: C64, v_star: C64, k: C64, k_star: C64) -> Self {
        Self { u, u_star, v, v_star, k, k_star }
    }

    /// Parameters seen by the structure constants once an evaluation
    /// representation with parameter `nu` is chosen: `u -> u nu`, `v -> v / nu`.
    pub fn absorb_nu(&self, nu: C64) -> Self {
        Self { u: self.u * nu, v: self.v / nu, ..*self }
    }

    /// The starred and unstarred scalars exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            u: self.u_star,
            u_star: self.u,
            v: self.v_star,
            v_star: self.v,
            k: self.k_star,
            k_star: self.k,
        }
    }
}

/// Images of the Chevalley generators. `h0`, `h1` hold the eigenvalues of
/// `H_0`, `H_1` so that fractional powers `q^{s H_i}` are available.
#[derive(Debug, Clone)]
pub struct ChevalleyRep {
    pub e0p: CMat,
    pub e0m: CMat,
    pub e1p: CMat,
    pub e1m: CMat,
    pub h0: Vec<f64>,
    pub h1: Vec<f64>,
    pub level: i64,
    pub nu: Option<C64>,
    pub q: QParams,
}

impl ChevalleyRep {
    pub fn dim(&self) -> usize {
        self.h0.len()
    }

    /// `q^{s H_i}`.
    pub fn q_pow_h(&self, i: usize, s: f64) -> CMat {
        let h = if i == 0 { &self.h0 } else { &self.h1 };
        diag_real(&h.iter().map(|x| self.q.pow(s * x)).collect::<Vec<_>>())
    }

    pub fn e(&self, i: usize, plus: bool) -> &CMat {
        match (i, plus) {
            (0, true) => &self.e0p,
            (0, false) => &self.e0m,
            (1, true) => &self.e1p,
            _ => &self.e1m,
        }
    }

    /// Largest relative residual of the defining relations: Cartan
    /// conjugation, `[E_i^+, E_j^-] = δ_ij [H_i]`, and the level.
    pub fn relation_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let s = self.q.s();
        for i in 0..2 {
            let kp = self.q_pow_h(i, 1.0);
            let km = self.q_pow_h(i, -1.0);
            for j in 0..2 {
                for plus in [true, false] {
                    let e = self.e(j, plus);
                    let sign = if plus { 1.0 } else { -1.0 };
                    let a = if i == j { 1.0 } else { -1.0 };
                    let lhs = &kp * e * &km;
                    let rhs = e * cr(self.q.pow(sign * a));
                    worst = worst.max(rel(&(lhs - rhs), fro(e).max(1.0)));
                }
                let comm = commutator(self.e(i, true), self.e(j, false));
                let rhs = if i == j { (&kp - &km) / cr(s) } else { CMat::zeros(self.dim(), self.dim()) };
                worst = worst.max(rel(&(comm - &rhs), fro(&rhs).max(1.0)));
            }
        }
        let lvl = self.q_pow_h(0, 1.0) * self.q_pow_h(1, 1.0) - eye(self.dim()) * cr(self.q.pow(self.level as f64));
        worst.max(fro(&lvl))
    }
}

/// Evaluation representation: `E1± = A±`, `E0± = ν^{±1} A∓`, `q^{H1} = q^N`, `q^{H0} = q^{-N}`.
pub fn build_evaluation_rep(nu: C64, base: &SpinRep) -> ChevalleyRep {
    ChevalleyRep {
        e0p: &base.a_minus * nu,
        e0m: &base.a_plus / nu,
        e1p: base.a_plus.clone(),
        e1m: base.a_minus.clone(),
        h0: base.n_diag.iter().map(|m| -m).collect(),
        h1: base.n_diag.clone(),
        level: 0,
        nu: Some(nu),
        q: base.q,
    }
}

/// Sign of the last term in the q-Serre relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SerreSign {
    /// `… - E_j (E_i)^3`, which annihilates evaluation representations.
    Minus,
    /// `… + E_j (E_i)^3`, the alternative sign; it fails from spin 3/2 up.
    Plus,
}

/// Largest relative q-Serre residual over `i ≠ j` and both signs of `E`.
pub fn qserre_residual_with(rep: &ChevalleyRep, sign: SerreSign) -> f64 {
    let q3 = cr(1.0 + rep.q.q + 1.0 / rep.q.q);
    let last = match sign {
        SerreSign::Minus => -1.0,
        SerreSign::Plus => 1.0,
    };
    let mut worst: f64 = 0.0;
    for (i, j) in [(0usize, 1usize), (1, 0)] {
        for plus in [true, false] {
            let ei = rep.e(i, plus);
            let ej = rep.e(j, plus);
            let ei2 = ei * ei;
            let ei3 = &ei2 * ei;
            let terms = [&ei3 * ej, &ei2 * ej * ei * q3, ei * ej * &ei2 * q3, ej * &ei3];
            let r = &terms[0] - &terms[1] + &terms[2] + &terms[3] * cr(last);
            let scale = fro(ei).powi(3) * fro(ej);
            worst = worst.max(if scale > 0.0 { fro(&r) / scale } else { 0.0 });
        }
    }
    worst
}

pub fn qserre_residual(rep: &ChevalleyRep) -> f64 {
    qserre_residual_with(rep, SerreSign::Minus)
}

/// Image of the generators on `rep1 ⊗ rep2` under
/// `Δ(E_i^±) = E_i^± ⊗ q^{-H_i/2} + q^{H_i/2} ⊗ E_i^±`, `Δ(H_i) = H_i ⊗ 1 + 1 ⊗ H_i`.
pub fn tensor_rep(r1: &ChevalleyRep, r2: &ChevalleyRep) -> ChevalleyRep {
    let cop = |i: usize, plus: bool| -> CMat {
        kron(r1.e(i, plus), &r2.q_pow_h(i, -0.5)) + kron(&r1.q_pow_h(i, 0.5), r2.e(i, plus))
    };
    let hsum = |a: &Vec<f64>, b: &Vec<f64>| -> Vec<f64> {
        a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect()
    };
    ChevalleyRep {
        e0p: cop(0, true),
        e0m: cop(0, false),
        e1p: cop(1, true),
        e1m: cop(1, false),
        h0: hsum(&r1.h0, &r2.h0),
        h1: hsum(&r1.h1, &r2.h1),
        level: r1.level + r2.level,
        nu: None,
        q: r1.q,
    }
}

/// Relative difference between the coideal generators built on the
/// coproduct representation and `1 ⊗ A + (A - k) ⊗ q^{-H_0}`
/// (respectively `1 ⊗ A* + (A* - k*) ⊗ q^{-H_1}`). Returns the larger one.
pub fn coproduct_coideal_residual(r1: &ChevalleyRep, r2: &ChevalleyRep, cp: &CoidealParams) -> Result<f64> {
    if (r1.q.q - r2.q.q).abs() > 0.0 {
        return Err(Error::InvalidParameter("representations must share q".into()));
    }
    let big = build_coideal_ops(&tensor_rep(r1, r2), cp);
    let p1 = build_coideal_ops(r1, cp);
    let p2 = build_coideal_ops(r2, cp);
    let i1 = eye(r1.dim());
    let rhs_a = kron(&i1, &p2.a) + kron(&(&p1.a - &i1 * cp.k), &r2.q_pow_h(0, -1.0));
    let rhs_as = kron(&i1, &p2.a_star) + kron(&(&p1.a_star - &i1 * cp.k_star), &r2.q_pow_h(1, -1.0));
    Ok(rel_diff(&big.a, &rhs_a).max(rel_diff(&big.a_star, &rhs_as)))
}
