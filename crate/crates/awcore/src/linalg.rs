//! Small dense helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

pub type C64 = nalgebra::Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn diag(d: &[C64]) -> CMat {
    CMat::from_diagonal(&CVec::from_column_slice(d))
}

pub fn diag_real(d: &[f64]) -> CMat {
    CMat::from_fn(d.len(), d.len(), |i, j| if i == j { cr(d[i]) } else { C64::new(0.0, 0.0) })
}

/// Kronecker product; the first factor is the slow index.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn fro(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖diff‖ / scale`, with the scale floored so an exactly vanishing
/// reference does not divide by zero.
pub fn rel(diff: &CMat, scale: f64) -> f64 {
    fro(diff) / scale.max(1e-300)
}

/// Relative distance of two matrices, normalized by the larger norm.
pub fn rel_diff(a: &CMat, b: &CMat) -> f64 {
    rel(&(a - b), fro(a).max(fro(b)))
}

pub fn leading_block(m: &CMat, k: usize) -> CMat {
    m.view((0, 0), (k, k)).into_owned()
}

/// Largest |i - j| over nonzero entries.
pub fn bandwidth(m: &CMat) -> usize {
    let mut bw = 0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if m[(i, j)] != C64::new(0.0, 0.0) {
                bw = bw.max(i.abs_diff(j));
            }
        }
    }
    bw
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Least squares `min ‖M x − b‖` through a thin SVD of the column-equilibrated
/// matrix. Returns the solution, the relative residual `‖M x − b‖/‖b‖` and
/// the numerical rank.
pub fn lstsq(m: &CMat, b: &CVec) -> (CVec, f64, usize) {
    let norms: Vec<f64> = m.column_iter().map(|col| col.norm()).collect();
    let mut scaled = m.clone();
    for (j, n) in norms.iter().enumerate() {
        if *n > 0.0 {
            scaled.column_mut(j).unscale_mut(*n);
        }
    }
    let svd = scaled.svd(true, true);
    let smax = svd.singular_values.max();
    let tol = smax * 1e-12 * (m.nrows().max(m.ncols()) as f64).sqrt();
    let rank = svd.singular_values.iter().filter(|&&s| s > tol).count();
    let mut x = svd.solve(b, tol).expect("svd computed with u and v");
    for (j, n) in norms.iter().enumerate() {
        if *n > 0.0 {
            x[j] /= C64::new(*n, 0.0);
        }
    }
    let r = m * &x - b;
    let bn = b.norm();
    let res = if bn > 0.0 { r.norm() / bn } else { r.norm() };
    (x, res, rank)
}

pub fn to_real_matrix(m: &CMat) -> DMatrix<f64> {
    m.map(|z| z.re)
}

pub type RMat = DMatrix<f64>;

/// Entrywise modulus.
pub fn abs_mat(m: &CMat) -> RMat {
    m.map(|z| z.norm())
}

/// Componentwise relative error `max_ij |e_ij| / s_ij`, where `s` bounds
/// the magnitude of the terms that produced `e`. Entries with `s_ij = 0`
/// are compared against the largest entry of `s` instead.
pub fn componentwise(e: &CMat, s: &RMat) -> f64 {
    let smax = s.max();
    let mut worst: f64 = 0.0;
    for (ez, &sz) in e.iter().zip(s.iter()) {
        let en = ez.norm();
        if en == 0.0 {
            continue;
        }
        let denom = if sz > 0.0 { sz } else { smax.max(1e-300) };
        worst = worst.max(en / denom);
    }
    worst
}
