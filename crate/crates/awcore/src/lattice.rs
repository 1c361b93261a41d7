//! Trigonometric R-matrix, L-operator and operator-valued K-matrices, with
//! residuals of the Yang-Baxter, RLL, reflection and dual reflection
//! equations.
//!
//! Every equation lives on `C^2 ⊗ C^2 ⊗ V` in Kronecker order: two
//! auxiliary legs, then the quantum space `V` as the fast index.

use crate::awalgebra::{q_commutator, AWStructure, TridiagonalPair};
use crate::error::{Error, Result};
use crate::linalg::{abs_mat, componentwise, cr, eye, fro, kron, CMat, RMat, C64};
use crate::qspecial::QParams;
use crate::quantumrep::SpinRep;

/// 2x2 array of operator entries.
pub type Blocks = [[CMat; 2]; 2];
/// 2x2 array of entrywise magnitude bounds.
pub type AbsBlocks = [[RMat; 2]; 2];

/// Moduli of the entries, the bound for blocks computed without cancellation.
pub fn abs_blocks(k: &Blocks) -> AbsBlocks {
    [[abs_mat(&k[0][0]), abs_mat(&k[0][1])], [abs_mat(&k[1][0]), abs_mat(&k[1][1])]]
}

#[derive(Debug, Clone)]
pub struct RMatrix {
    pub z: C64,
    pub entries: CMat,
    pub q: QParams,
}

/// `R(z)` with `a = q^{1/2} z - q^{-1/2} z^{-1}`, `b = z - z^{-1}`, `c = q^{1/2} - q^{-1/2}`.
pub fn r_matrix(z: C64, q: QParams) -> Result<RMatrix> {
    if z.norm() == 0.0 {
        return Err(Error::InvalidParameter("R(z) needs z != 0".into()));
    }
    let zi = cr(1.0) / z;
    let a = z * q.sqrt_q - zi * q.inv_sqrt_q;
    let b = z - zi;
    let c = cr(q.s());
    let o = cr(0.0);
    #[rustfmt::skip]
    let entries = CMat::from_row_slice(4, 4, &[
        a, o, o, o,
        o, b, c, o,
        o, c, b, o,
        o, o, o, a,
    ]);
    Ok(RMatrix { z, entries, q })
}

fn r_on(z: C64, q: QParams, n: usize) -> Result<CMat> {
    Ok(kron(&r_matrix(z, q)?.entries, &eye(n)))
}

/// Relative residual of `R12(z1/z2) R13(z1) R23(z2) = R23(z2) R13(z1) R12(z1/z2)`.
pub fn ybe_residual(z1: C64, z2: C64, q: QParams) -> Result<f64> {
    ybe_residual_for(z1, z2, |z| r_matrix(z, q).map(|r| r.entries))
}

/// YBE residual for an arbitrary 4x4 family, used for negative controls.
pub fn ybe_residual_for<F>(z1: C64, z2: C64, r: F) -> Result<f64>
where
    F: Fn(C64) -> Result<CMat>,
{
    let i2 = eye(2);
    let r12 = kron(&r(z1 / z2)?, &i2);
    let r23 = kron(&i2, &r(z2)?);
    let r13 = {
        let m = r(z1)?;
        // Conjugate R12 by the swap of legs 2 and 3.
        let swap23 = kron(&i2, &swap());
        &swap23 * kron(&m, &i2) * &swap23
    };
    let lhs = &r12 * &r13 * &r23;
    let rhs = &r23 * &r13 * &r12;
    Ok(fro(&(&lhs - &rhs)) / fro(&lhs).max(fro(&rhs)))
}

fn swap() -> CMat {
    let mut p = CMat::zeros(4, 4);
    p[(0, 0)] = cr(1.0);
    p[(1, 2)] = cr(1.0);
    p[(2, 1)] = cr(1.0);
    p[(3, 3)] = cr(1.0);
    p
}

#[derive(Debug, Clone)]
pub struct LOperator {
    pub z: C64,
    pub blocks: Blocks,
}

/// `L(z) = [[z q^{J3} - z^{-1} q^{-J3}, s J-], [s J+, z q^{-J3} - z^{-1} q^{J3}]]`
/// with `q^{J3} = q^{N/2}`, the deformation parameter of `R` being `q^{1/2}`.
pub fn l_operator(z: C64, rep: &SpinRep) -> Result<LOperator> {
    if z.norm() == 0.0 {
        return Err(Error::InvalidParameter("L(z) needs z != 0".into()));
    }
    let zi = cr(1.0) / z;
    let kp = rep.q_pow_n(0.5);
    let km = rep.q_pow_n(-0.5);
    let s = cr(rep.q.s());
    let blocks = [
        [&kp * z - &km * zi, &rep.a_minus * s],
        [&rep.a_plus * s, &km * z - &kp * zi],
    ];
    Ok(LOperator { z, blocks })
}

/// Embeds a 2x2 operator matrix on auxiliary leg 1 (`leg = 0`) or leg 2.
fn on_leg_abs(k: &AbsBlocks, leg: usize) -> RMat {
    let c = |m: &RMat| m.map(cr);
    abs_mat(&on_leg(&[[c(&k[0][0]), c(&k[0][1])], [c(&k[1][0]), c(&k[1][1])]], leg))
}

fn on_leg(k: &Blocks, leg: usize) -> CMat {
    let n = k[0][0].nrows();
    let mut out = CMat::zeros(4 * n, 4 * n);
    for a in 0..2 {
        for b in 0..2 {
            let mut unit = CMat::zeros(2, 2);
            unit[(a, b)] = cr(1.0);
            let aux = if leg == 0 { kron(&unit, &eye(2)) } else { kron(&eye(2), &unit) };
            out += kron(&aux, &k[a][b]);
        }
    }
    out
}

/// Relative residual of `R(z1/z2) L1(z1) L2(z2) = L2(z2) L1(z1) R(z1/z2)`.
pub fn rll_residual(z1: C64, z2: C64, rep: &SpinRep) -> Result<f64> {
    let n = rep.dim;
    let l1 = on_leg(&l_operator(z1, rep)?.blocks, 0);
    let l2 = on_leg(&l_operator(z2, rep)?.blocks, 1);
    let r = r_on(z1 / z2, rep.q, n)?;
    let lhs = &r * &l1 * &l2;
    let rhs = &l2 * &l1 * &r;
    Ok(fro(&(&lhs - &rhs)) / fro(&lhs).max(fro(&rhs)))
}

/// Candidate readings of the nominal K-matrix, audited side by side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KVariant {
    /// The nominal form, unchanged.
    Nominal,
    /// The `z^2` part of `K^c_21` carries `ρ` like `K^c_12`.
    MirroredRho,
    /// Opposite sign on both operator off-diagonal entries.
    FlippedOffDiagonal,
    /// `q^{1/2}` and `q^{-1/2}` exchanged on the diagonal operator entries.
    ExchangedDiagonal,
}

impl KVariant {
    pub const ALL: [KVariant; 4] =
        [KVariant::Nominal, KVariant::MirroredRho, KVariant::FlippedOffDiagonal, KVariant::ExchangedDiagonal];

    pub fn name(&self) -> &'static str {
        match self {
            KVariant::Nominal => "nominal",
            KVariant::MirroredRho => "mirrored_rho_c21",
            KVariant::FlippedOffDiagonal => "flipped_offdiagonal_sign",
            KVariant::ExchangedDiagonal => "exchanged_diagonal_powers",
        }
    }
}

/// Which of the two K-matrix solutions to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KSolution {
    /// `K(z, ρ)`, weight `√(ρ/ρ*)` on `A*`.
    Rho,
    /// `K(z, ρ*)`, weight `√(ρ*/ρ)` on `A`, constants with `ρ ↔ ρ*`.
    RhoStar,
}

#[derive(Debug, Clone)]
pub struct KMatrixOp {
    pub z: C64,
    pub op: Blocks,
    pub scalar_part: [[C64; 2]; 2],
    pub rho_used: C64,
    pub rho_star_used: C64,
    /// Principal value of the square-root ratio that enters the entries.
    pub sqrt_ratio: C64,
    pub bandwidth: usize,
    /// Entrywise bound on the moduli of the terms summed into each entry
    /// of [`KMatrixOp::assembled`]; used as the scale of the residual.
    pub bound: AbsBlocks,
}

impl KMatrixOp {
    /// `K^op + K^c` with the scalar part expanded to identity multiples.
    pub fn assembled(&self) -> Blocks {
        let n = self.op[0][0].nrows();
        let id = eye(n);
        let e = |a: usize, b: usize| &self.op[a][b] + &id * self.scalar_part[a][b];
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    }
}

/// The nominal K-matrix `K^op(z) + K^c(z)`.
pub fn build_k_matrix(z: C64, pair: &TridiagonalPair, s: &AWStructure) -> Result<KMatrixOp> {
    build_k_matrix_variant(z, pair, s, KSolution::Rho, KVariant::Nominal)
}

pub fn build_k_matrix_variant(
    z: C64,
    pair: &TridiagonalPair,
    s: &AWStructure,
    which: KSolution,
    variant: KVariant,
) -> Result<KMatrixOp> {
    if (s.rho * s.rho_star).norm() == 0.0 {
        return Err(Error::Unsupported("K-matrix needs ρ ρ* != 0".into()));
    }
    if z.norm() == 0.0 {
        return Err(Error::InvalidParameter("K(z) needs z != 0".into()));
    }
    let q = pair.q;
    let (sq, isq) = (cr(q.sqrt_q), cr(q.inv_sqrt_q));
    let zi = cr(1.0) / z;
    let sc = cr(q.s());
    let p = cr(q.sqrt_q + q.inv_sqrt_q);
    // The second solution swaps ρ and ρ*, and moves the ratio onto A.
    let (rho, rho_o) = match which {
        KSolution::Rho => (s.rho, s.rho_star),
        KSolution::RhoStar => (s.rho_star, s.rho),
    };
    let (eta, eta_o) = (s.eta, s.eta_star);
    let r = rho.sqrt() / rho_o.sqrt();
    let (wa, was) = match which {
        KSolution::Rho => (cr(1.0), r),
        KSolution::RhoStar => (r, cr(1.0)),
    };
    let a = &pair.a * wa;
    let a_star = &pair.a_star * was;
    let (d_hi, d_lo) = match variant {
        KVariant::ExchangedDiagonal => (isq, sq),
        _ => (sq, isq),
    };
    let off = if variant == KVariant::FlippedOffDiagonal { cr(1.0) } else { cr(-1.0) };
    let k11 = &a * (d_hi * z) - &a_star * (d_lo * zi);
    let k22 = &a * (-d_lo * zi) + &a_star * (d_hi * z);
    let k12 = q_commutator(&pair.a_star, &pair.a, &q) * (off * r * sc);
    let k21 = q_commutator(&pair.a, &pair.a_star, &q) * (off * r * sc / rho);

    let zz = (sq * z * z + isq * zi * zi) / p;
    let c11 = (sq * z * eta_o - isq * zi * eta) / (rho * p);
    let c22 = (isq * z * eta - sq * zi * eta_o) / (rho * p);
    let c12 = -rho * zz - r * s.omega;
    let c21 = match variant {
        KVariant::MirroredRho => -rho * zz - r * s.omega / rho,
        _ => -zz - r * s.omega / rho,
    };

    let (xa, xs) = (abs_mat(&a), abs_mat(&a_star));
    let (ya, ys) = (abs_mat(&pair.a), abs_mat(&pair.a_star));
    let qc = (&ys * &ya + &ya * &ys) * q.sqrt_q.max(q.inv_sqrt_q);
    let n = pair.dim();
    let id = RMat::identity(n, n);
    let zz_b = (q.sqrt_q * (z * z).norm() + q.inv_sqrt_q * (zi * zi).norm()) / p.norm();
    let rw = (r * s.omega).norm();
    let b11 = (q.sqrt_q * eta_o.norm() * z.norm() + q.inv_sqrt_q * eta.norm() * zi.norm()) / (rho * p).norm();
    let b22 = (q.inv_sqrt_q * eta.norm() * z.norm() + q.sqrt_q * eta_o.norm() * zi.norm()) / (rho * p).norm();
    let b21 = match variant {
        KVariant::MirroredRho => rho.norm() * zz_b + rw / rho.norm(),
        _ => zz_b + rw / rho.norm(),
    };
    let bound = [
        [
            &xa * (d_hi * z).norm() + &xs * (d_lo * zi).norm() + &id * b11,
            &qc * (r * sc).norm() + &id * (rho.norm() * zz_b + rw),
        ],
        [&qc * (r * sc / rho).norm() + &id * b21, &xa * (d_lo * zi).norm() + &xs * (d_hi * z).norm() + &id * b22],
    ];
    Ok(KMatrixOp {
        z,
        op: [[k11, k12], [k21, k22]],
        scalar_part: [[c11, c12], [c21, c22]],
        rho_used: rho,
        rho_star_used: rho_o,
        sqrt_ratio: r,
        bandwidth: pair.bandwidth_a + pair.bandwidth_a_star,
        bound,
    })
}

/// Residual of `R(z1/z2) K1(z1) R(z1 z2) K2(z2) = K2(z2) R(z1 z2) K1(z1) R(z1/z2)`
/// for given operator entries, as a componentwise relative error: each
/// entry of the difference is divided by the same products taken over
/// entrywise moduli. Only the leading `n - margin` rows and columns of
/// every quantum block are compared.
pub fn reflection_residual_blocks(
    z1: C64,
    z2: C64,
    q: QParams,
    k_at_z1: &Blocks,
    k_at_z2: &Blocks,
    margin: usize,
) -> Result<f64> {
    reflection_residual_bounded(z1, z2, q, (k_at_z1, &abs_blocks(k_at_z1)), (k_at_z2, &abs_blocks(k_at_z2)), margin)
}

/// As [`reflection_residual_blocks`], with explicit entrywise bounds for
/// each K. Entries assembled from cancelling terms need bounds built from
/// the terms, otherwise their rounding error is measured against a
/// modulus that may itself be pure rounding.
pub fn reflection_residual_bounded(
    z1: C64,
    z2: C64,
    q: QParams,
    k1: (&Blocks, &AbsBlocks),
    k2: (&Blocks, &AbsBlocks),
    margin: usize,
) -> Result<f64> {
    let n = k1.0[0][0].nrows();
    if margin >= n {
        return Err(Error::InvalidParameter(format!("margin {margin} leaves nothing of dimension {n}")));
    }
    let ka = on_leg(k1.0, 0);
    let kb = on_leg(k2.0, 1);
    let ra = r_on(z1 / z2, q, n)?;
    let rb = r_on(z1 * z2, q, n)?;
    let diff = &ra * &ka * &rb * &kb - &kb * &rb * &ka * &ra;
    let (ak1, ak2) = (on_leg_abs(k1.1, 0), on_leg_abs(k2.1, 1));
    let (ara, arb) = (abs_mat(&ra), abs_mat(&rb));
    let bound = &ara * &ak1 * &arb * &ak2 + &ak2 * &arb * &ak1 * &ara;
    let keep = n - margin;
    let idx: Vec<usize> = (0..4).flat_map(|b| b * n..b * n + keep).collect();
    let d = diff.select_rows(&idx).select_columns(&idx);
    let b = bound.select_rows(&idx).select_columns(&idx);
    Ok(componentwise(&d, &b))
}

fn re_margin(pair: &TridiagonalPair) -> usize {
    if pair.exact_dim.is_some() {
        0
    } else {
        2 * (pair.bandwidth_a + pair.bandwidth_a_star) + 2
    }
}

/// Reflection-equation residual of the nominal K-matrix.
pub fn reflection_residual(z1: C64, z2: C64, pair: &TridiagonalPair, s: &AWStructure) -> Result<f64> {
    reflection_residual_variant(z1, z2, pair, s, KVariant::Nominal)
}

pub fn reflection_residual_variant(
    z1: C64,
    z2: C64,
    pair: &TridiagonalPair,
    s: &AWStructure,
    variant: KVariant,
) -> Result<f64> {
    let k1 = build_k_matrix_variant(z1, pair, s, KSolution::Rho, variant)?;
    let k2 = build_k_matrix_variant(z2, pair, s, KSolution::Rho, variant)?;
    reflection_residual_bounded(
        z1,
        z2,
        pair.q,
        (&k1.assembled(), &k1.bound),
        (&k2.assembled(), &k2.bound),
        re_margin(pair),
    )
}

fn aux_transpose<T>(k: [[T; 2]; 2]) -> [[T; 2]; 2] {
    let [[a, b], [c, d]] = k;
    [[a, c], [b, d]]
}

/// `K*(z) = K^t(z^{-1}, ρ*)`, the dual solution, with the auxiliary-space transpose.
pub fn dual_k_matrix(z: C64, pair: &TridiagonalPair, s: &AWStructure, variant: KVariant) -> Result<Blocks> {
    Ok(dual_k_with_bound(z, pair, s, variant)?.0)
}

fn dual_k_with_bound(z: C64, pair: &TridiagonalPair, s: &AWStructure, variant: KVariant) -> Result<(Blocks, AbsBlocks)> {
    let k = build_k_matrix_variant(cr(1.0) / z, pair, s, KSolution::RhoStar, variant)?;
    Ok((aux_transpose(k.assembled()), aux_transpose(k.bound)))
}

/// Residual of the dual reflection equation, the image of the reflection
/// equation under `z -> q^{-1/2} z^{-1}`, `K -> K^t`: the reflection
/// equation is checked for `F(z) = K*(q^{-1/2} z^{-1})^t`.
pub fn dual_reflection_residual(z1: C64, z2: C64, pair: &TridiagonalPair, s: &AWStructure) -> Result<f64> {
    dual_reflection_residual_variant(z1, z2, pair, s, KVariant::Nominal)
}

pub fn dual_reflection_residual_variant(
    z1: C64,
    z2: C64,
    pair: &TridiagonalPair,
    s: &AWStructure,
    variant: KVariant,
) -> Result<f64> {
    let f = |z: C64| -> Result<(Blocks, AbsBlocks)> {
        let w = cr(pair.q.inv_sqrt_q) / z;
        let (k, b) = dual_k_with_bound(w, pair, s, variant)?;
        Ok((aux_transpose(k), aux_transpose(b)))
    };
    let (k1, b1) = f(z1)?;
    let (k2, b2) = f(z2)?;
    reflection_residual_bounded(z1, z2, pair.q, (&k1, &b1), (&k2, &b2), re_margin(pair))
}

/// The diagonal-plus-`z^2` c-number solution
/// `[[X z - (X z)^{-1}, κ (z^2 - z^{-2})], [κ' (z^2 - z^{-2}), X z^{-1} - z X^{-1}]]`.
/// It satisfies the reflection equation for all `X`, `κ`, `κ'` and is used to
/// validate the harness.
pub fn scalar_k_solution(z: C64, x: C64, kappa: C64, kappa_p: C64) -> Blocks {
    let zi = cr(1.0) / z;
    let w = z * z - zi * zi;
    let one = |v: C64| CMat::from_element(1, 1, v);
    [
        [one(x * z - cr(1.0) / (x * z)), one(kappa * w)],
        [one(kappa_p * w), one(x * zi - z / x)],
    ]
}
