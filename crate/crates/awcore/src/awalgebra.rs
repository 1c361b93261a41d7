//! Askey-Wilson algebras realized by pairs of matrices.
//!
//! A pair `(A, A*)` closes an AW algebra when
//!
//! ```text
//! [[A,A*]_q, A]_q = -ρ A* - ω A - η
//! [A*, [A,A*]_q]_q = -ρ* A - ω A* - η*
//! ```
//!
//! with `[X,Y]_q = q^{1/2} XY - q^{-1/2} YX`. Truncated matrices of
//! infinite operators are only compared on a leading block whose entries
//! are untouched by the truncation.

use crate::error::{Error, Result};
use crate::linalg::{abs_mat, bandwidth, componentwise, cr, eye, leading_block, lstsq, CMat, CVec, RMat, C64};
use crate::qspecial::{dual_eigenvalue, recurrence_coeffs, AWParams, QParams};
use crate::quantumrep::{ChevalleyRep, CoidealParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AWStructure {
    pub beta_aw: C64,
    pub gamma: C64,
    pub gamma_star: C64,
    pub rho: C64,
    pub rho_star: C64,
    pub omega: C64,
    pub eta: C64,
    pub eta_star: C64,
}

impl AWStructure {
    /// Reduced form: `γ = γ* = 0`, `β = q + q^{-1}`.
    pub fn reduced(q: QParams, rho: C64, rho_star: C64, omega: C64, eta: C64, eta_star: C64) -> Self {
        Self {
            beta_aw: cr(q.q + 1.0 / q.q),
            gamma: cr(0.0),
            gamma_star: cr(0.0),
            rho,
            rho_star,
            omega,
            eta,
            eta_star,
        }
    }

    /// The sign of ω as it appears in the nominal closed form, which is
    /// the negative of the value that closes the algebra.
    pub fn omega_nominal(&self) -> C64 {
        -self.omega
    }
}

#[derive(Debug, Clone)]
pub struct TridiagonalPair {
    pub a: CMat,
    pub a_star: CMat,
    pub bandwidth_a: usize,
    pub bandwidth_a_star: usize,
    /// Set when the matrices are an exact representation rather than a truncation.
    pub exact_dim: Option<usize>,
    pub q: QParams,
}

impl TridiagonalPair {
    /// Builds a pair and measures its bandwidths.
    pub fn new(a: CMat, a_star: CMat, exact: bool, q: QParams) -> Self {
        let bandwidth_a = bandwidth(&a);
        let bandwidth_a_star = bandwidth(&a_star);
        let exact_dim = exact.then_some(a.nrows());
        Self { a, a_star, bandwidth_a, bandwidth_a_star, exact_dim, q }
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// Margin for words of length three in `A`, `A*`.
    pub fn cubic_margin(&self) -> usize {
        if self.exact_dim.is_some() {
            0
        } else {
            cubic_margin(self.bandwidth_a, self.bandwidth_a_star)
        }
    }

    /// Margin for words of length four.
    pub fn quartic_margin(&self) -> usize {
        if self.exact_dim.is_some() {
            0
        } else {
            quartic_margin(self.bandwidth_a, self.bandwidth_a_star)
        }
    }

    fn block(&self, margin: usize) -> Result<usize> {
        let n = self.dim();
        if margin >= n {
            return Err(Error::InvalidParameter(format!(
                "truncation margin {margin} leaves no interior block of a {n}x{n} pair"
            )));
        }
        Ok(n - margin)
    }
}

/// `2 (b + b*) + max(b, b*)`.
pub fn cubic_margin(bw_a: usize, bw_a_star: usize) -> usize {
    2 * (bw_a + bw_a_star) + bw_a.max(bw_a_star)
}

/// `3 (b + b*)`.
pub fn quartic_margin(bw_a: usize, bw_a_star: usize) -> usize {
    3 * (bw_a + bw_a_star)
}

/// `[X,Y]_q = q^{1/2} XY - q^{-1/2} YX`.
pub fn q_commutator(x: &CMat, y: &CMat, q: &QParams) -> CMat {
    x * y * cr(q.sqrt_q) - y * x * cr(q.inv_sqrt_q)
}

/// Coideal generators on a representation of the quantum affine algebra,
///
/// ```text
/// A  = s u  E0+ q^{-H0/2} - s v  E0- q^{-H0/2} + k  q^{-H0}
/// A* = s u* E1+ q^{-H1/2} - s v* E1- q^{-H1/2} + k* q^{-H1}
/// ```
///
/// with `s = q^{1/2} - q^{-1/2}`.
pub fn build_coideal_ops(rep: &ChevalleyRep, cp: &CoidealParams) -> TridiagonalPair {
    build_coideal_ops_with(rep, cp, true)
}

/// As [`build_coideal_ops`]; `rescale = false` drops the `±s` factors on
/// the raising and lowering terms.
pub fn build_coideal_ops_with(rep: &ChevalleyRep, cp: &CoidealParams, rescale: bool) -> TridiagonalPair {
    let (sp, sm) = if rescale { (rep.q.s(), -rep.q.s()) } else { (1.0, 1.0) };
    let half0 = rep.q_pow_h(0, -0.5);
    let half1 = rep.q_pow_h(1, -0.5);
    let a = (&rep.e0p * (cp.u * sp) + &rep.e0m * (cp.v * sm)) * &half0 + rep.q_pow_h(0, -1.0) * cp.k;
    let a_star =
        (&rep.e1p * (cp.u_star * sp) + &rep.e1m * (cp.v_star * sm)) * &half1 + rep.q_pow_h(1, -1.0) * cp.k_star;
    TridiagonalPair::new(a, a_star, true, rep.q)
}

/// Closed-form structure constants of the coideal pair. `cp` must already
/// include the evaluation parameter (see [`CoidealParams::absorb_nu`]);
/// `l_v0` is the representation-dependent scalar, `s^2` times the Casimir
/// value on irreducible evaluation representations.
pub fn coideal_structure_constants(cp: &CoidealParams, l_v0: C64, q: QParams) -> AWStructure {
    let s = q.s();
    let qq = q.q - 1.0 / q.q;
    let m = cp.u * cp.u_star * q.sqrt_q + cp.v_star * cp.v * q.inv_sqrt_q;
    let rho = -cp.u * cp.v * qq * qq;
    let rho_star = -cp.u_star * cp.v_star * qq * qq;
    let omega = -(cp.k * cp.k_star + l_v0 * m) * s * s;
    let eta = (cp.k * m + l_v0 * cp.u * cp.v * cp.k_star) * qq * s;
    let eta_star = (cp.k_star * m + l_v0 * cp.u_star * cp.v_star * cp.k) * qq * s;
    AWStructure::reduced(q, rho, rho_star, omega, eta, eta_star)
}

/// Solves the ω formula of [`coideal_structure_constants`] for `l_v0`.
pub fn l_v0_from_omega(cp: &CoidealParams, omega: C64, q: QParams) -> Result<C64> {
    let s = q.s();
    let m = cp.u * cp.u_star * q.sqrt_q + cp.v_star * cp.v * q.inv_sqrt_q;
    if m.norm() < 1e-300 {
        return Err(Error::DegenerateFit("ω does not depend on l_v0 when u u* q^{1/2} + v* v q^{-1/2} = 0".into()));
    }
    Ok((-omega / (s * s) - cp.k * cp.k_star) / m)
}

fn flat(m: &CMat) -> CVec {
    CVec::from_iterator(m.len(), m.iter().copied())
}

/// Leading blocks of `A`, `A*`, both cubic AW words and the moduli of the
/// terms that make up each word.
struct Words {
    a: CMat,
    a_star: CMat,
    id: CMat,
    l1: CMat,
    l2: CMat,
    s1: RMat,
    s2: RMat,
}

fn words(pair: &TridiagonalPair, keep: usize) -> Words {
    let q = &pair.q;
    let c = q_commutator(&pair.a, &pair.a_star, q);
    let l1 = q_commutator(&c, &pair.a, q);
    let l2 = q_commutator(&pair.a_star, &c, q);
    // [[A,A*]_q,A]_q = (q + 1/q) A A* A - A^2 A* - A* A^2, and the starred analogue.
    let (x, y) = (abs_mat(&pair.a), abs_mat(&pair.a_star));
    let beta = q.q + 1.0 / q.q;
    let cubic = |u: &RMat, v: &RMat| -> RMat { u * v * u * beta + u * u * v + v * u * u };
    let blk = |m: &RMat| m.view((0, 0), (keep, keep)).into_owned();
    Words {
        a: leading_block(&pair.a, keep),
        a_star: leading_block(&pair.a_star, keep),
        id: eye(keep),
        l1: leading_block(&l1, keep),
        l2: leading_block(&l2, keep),
        s1: blk(&cubic(&x, &y)),
        s2: blk(&cubic(&y, &x)),
    }
}

/// Least-squares fit of `(ρ, ω, η)` and `(ρ*, ω', η*)` on the interior
/// block, each entry weighted by the inverse magnitude of its terms.
/// Returns the constants (ω from the first relation) and the larger
/// post-fit weighted residual.
pub fn fit_structure_constants(pair: &TridiagonalPair) -> Result<(AWStructure, f64)> {
    let keep = pair.block(pair.cubic_margin())?;
    let w = words(pair, keep);
    let fit = |x: &CMat, y: &CMat, lhs: &CMat, scale: &RMat| -> Result<(CVec, f64)> {
        let weight: Vec<f64> = scale
            .iter()
            .zip(x.iter().zip(y.iter()))
            .zip(w.id.iter())
            .map(|((s, (xv, yv)), iv)| 1.0 / (s + xv.norm() + yv.norm() + iv.norm()).max(1e-300))
            .collect();
        let cols = [flat(x), flat(y), flat(&w.id)];
        let m = CMat::from_fn(keep * keep, 3, |i, j| -cols[j][i] * weight[i]);
        let rhs = CVec::from_iterator(keep * keep, lhs.iter().zip(&weight).map(|(v, wt)| v * *wt));
        let (sol, res, rank) = lstsq(&m, &rhs);
        if rank < 3 {
            return Err(Error::DegenerateFit(format!("design matrix has rank {rank} < 3")));
        }
        Ok((sol, res))
    };
    let (x1, r1) = fit(&w.a_star, &w.a, &w.l1, &w.s1)?;
    let (x2, r2) = fit(&w.a, &w.a_star, &w.l2, &w.s2)?;
    let res = r1.max(r2);
    let scale = x1[1].norm().max(x2[1].norm()).max(1.0);
    if res < 1e-10 && (x1[1] - x2[1]).norm() > 1e-8 * scale {
        return Err(Error::Convention(format!(
            "the two relations give different ω: {} vs {}",
            x1[1], x2[1]
        )));
    }
    Ok((AWStructure::reduced(pair.q, x1[0], x2[0], x1[1], x1[2], x2[2]), res))
}

/// Componentwise residuals of both AW relations: each entry of the
/// defect is divided by the sum of the moduli of the terms contributing
/// to it, and the maximum is returned.
pub fn aw_residual(pair: &TridiagonalPair, s: &AWStructure) -> Result<(f64, f64)> {
    let keep = pair.block(pair.cubic_margin())?;
    let w = words(pair, keep);
    let e1 = &w.l1 + &w.a_star * s.rho + &w.a * s.omega + &w.id * s.eta;
    let e2 = &w.l2 + &w.a * s.rho_star + &w.a_star * s.omega + &w.id * s.eta_star;
    let (x, y, i) = (abs_mat(&w.a), abs_mat(&w.a_star), abs_mat(&w.id));
    let b1 = &w.s1 + &y * s.rho.norm() + &x * s.omega.norm() + &i * s.eta.norm();
    let b2 = &w.s2 + &x * s.rho_star.norm() + &y * s.omega.norm() + &i * s.eta_star.norm();
    Ok((componentwise(&e1, &b1), componentwise(&e2, &b2)))
}

/// Componentwise residuals of the tridiagonal relations
/// `[A, -β AA*A + A²A* + A*A² - γ{A,A*} - ρA*] = 0` and its starred partner.
pub fn tridiagonal_residual(pair: &TridiagonalPair, s: &AWStructure) -> Result<(f64, f64)> {
    let keep = pair.block(pair.quartic_margin())?;
    let one = |x: &CMat, y: &CMat, beta: C64, gamma: C64, rho: C64| -> f64 {
        let x2 = x * x;
        let inner = &x2 * y + y * &x2 - x * y * x * beta - (x * y + y * x) * gamma - y * rho;
        let full = x * &inner - &inner * x;
        let (ax, ay) = (abs_mat(x), abs_mat(y));
        let ax2 = &ax * &ax;
        let inner_abs = &ax2 * &ay + &ay * &ax2 + &ax * &ay * &ax * beta.norm()
            + (&ax * &ay + &ay * &ax) * gamma.norm()
            + &ay * rho.norm();
        let bound = &ax * &inner_abs + &inner_abs * &ax;
        componentwise(&leading_block(&full, keep), &bound.view((0, 0), (keep, keep)).into_owned())
    };
    Ok((
        one(&pair.a, &pair.a_star, s.beta_aw, s.gamma, s.rho),
        one(&pair.a_star, &pair.a, s.beta_aw, s.gamma_star, s.rho_star),
    ))
}

/// `A -> t A + c'`, `A* -> t* A* + c*`.
pub fn affine_transform(pair: &TridiagonalPair, t: C64, t_star: C64, c_prime: C64, c_star: C64) -> TridiagonalPair {
    let n = pair.dim();
    TridiagonalPair {
        a: &pair.a * t + eye(n) * c_prime,
        a_star: &pair.a_star * t_star + eye(n) * c_star,
        ..pair.clone()
    }
}

/// The polynomial representation truncated to `n` basis vectors `p_0, …, p_{n-1}`:
/// `A` is multiplication by `x` (tridiagonal, `A e_k = b_k e_{k+1} + a_k e_k + c_k e_{k-1}`)
/// and `A*` is the diagonal of eigenvalues `λ*_k` of the divided-difference operator.
pub fn build_basic_representation(n: usize, p: &AWParams) -> Result<TridiagonalPair> {
    if n == 0 {
        return Err(Error::InvalidParameter("basic representation needs N >= 1".into()));
    }
    let mut a = CMat::zeros(n, n);
    let mut a_star = CMat::zeros(n, n);
    for k in 0..n {
        let (ak, bk, _) = recurrence_coeffs(k, p)?;
        a[(k, k)] = ak;
        if k + 1 < n {
            a[(k + 1, k)] = bk;
            let (_, _, cnext) = recurrence_coeffs(k + 1, p)?;
            a[(k, k + 1)] = cnext;
        }
        a_star[(k, k)] = dual_eigenvalue(k, p);
    }
    Ok(TridiagonalPair {
        a,
        a_star,
        bandwidth_a: 1,
        bandwidth_a_star: 0,
        exact_dim: None,
        q: p.q,
    })
}
