//! q-series primitives and Askey-Wilson polynomial machinery.
//!
//! Polynomials are written in the variable `x = y + 1/y`, so the
//! orthogonality interval `cos θ ∈ (-1, 1)` corresponds to `x = 2 cos θ`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{cr, CMat, CVec, C64};

/// Truncation threshold for infinite q-products.
pub const EPS_PROD: f64 = 1e-16;
/// Default number of powers `q^m` checked against `abcd`.
pub const M_GUARD: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QParams {
    pub q: f64,
    pub sqrt_q: f64,
    pub inv_sqrt_q: f64,
}

impl QParams {
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidParameter(format!("q must lie in (0,1), got {q}")));
        }
        let sqrt_q = q.sqrt();
        Ok(Self { q, sqrt_q, inv_sqrt_q: 1.0 / sqrt_q })
    }

    /// `q^{1/2} - q^{-1/2}`, the ubiquitous denominator.
    #[inline]
    pub fn s(&self) -> f64 {
        self.sqrt_q - self.inv_sqrt_q
    }

    #[inline]
    pub fn pow(&self, x: f64) -> f64 {
        self.q.powf(x)
    }
}

/// `[x] = (q^{x/2} - q^{-x/2}) / (q^{1/2} - q^{-1/2})`.
pub fn q_number(x: f64, q: &QParams) -> f64 {
    (q.pow(x / 2.0) - q.pow(-x / 2.0)) / q.s()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Terms {
    Finite(usize),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pochhammer {
    pub value: C64,
    /// Bound on `|exact - value|`; zero for finite products.
    pub remainder: f64,
    pub factors: usize,
}

/// `(z; q)_n = Π_{k<n} (1 - z q^k)`.
///
/// The infinite product stops once `|z q^k| < EPS_PROD`. The tail
/// `Π_{j≥k}(1 - z q^j)` then differs from 1 by at most
/// `t = |z q^k|/(1-q)` times `e^t`, which is what `remainder` reports
/// after scaling by the partial product.
pub fn q_pochhammer(z: C64, q: &QParams, n: Terms) -> Pochhammer {
    match n {
        Terms::Finite(n) => {
            let mut p = cr(1.0);
            let mut zq = z;
            for _ in 0..n {
                p *= cr(1.0) - zq;
                zq *= q.q;
            }
            Pochhammer { value: p, remainder: 0.0, factors: n }
        }
        Terms::Infinite => {
            let mut p = cr(1.0);
            let mut zq = z;
            let mut k = 0;
            while zq.norm() >= EPS_PROD {
                p *= cr(1.0) - zq;
                zq *= q.q;
                k += 1;
            }
            let t = zq.norm() / (1.0 - q.q);
            Pochhammer { value: p, remainder: p.norm() * t * t.exp(), factors: k }
        }
    }
}

fn poch(z: C64, q: &QParams, n: usize) -> C64 {
    q_pochhammer(z, q, Terms::Finite(n)).value
}

fn poch_inf(z: C64, q: &QParams) -> C64 {
    q_pochhammer(z, q, Terms::Infinite).value
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AWParams {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
    pub q: QParams,
}

impl AWParams {
    pub fn new(a: C64, b: C64, c: C64, d: C64, q: QParams) -> Result<Self> {
        Self::with_guard(a, b, c, d, q, M_GUARD)
    }

    /// Rejects `abcd = q^m` for `m ≤ m_guard`.
    pub fn with_guard(a: C64, b: C64, c: C64, d: C64, q: QParams, m_guard: usize) -> Result<Self> {
        let p = Self { a, b, c, d, q };
        let abcd = p.abcd();
        let mut qm = 1.0;
        for m in 0..=m_guard {
            if (abcd - qm).norm() <= 1e-12 * qm.max(1e-300).max(abcd.norm()) {
                return Err(Error::InvalidParameter(format!("abcd = q^{m}")));
            }
            qm *= q.q;
        }
        Ok(p)
    }

    pub fn real(a: f64, b: f64, c_: f64, d: f64, q: f64) -> Result<Self> {
        Self::new(cr(a), cr(b), cr(c_), cr(d), QParams::new(q)?)
    }

    #[inline]
    pub fn abcd(&self) -> C64 {
        self.a * self.b * self.c * self.d
    }

    pub fn params(&self) -> [C64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Same polynomial family with the four parameters permuted.
    pub fn permuted(&self, order: [usize; 4]) -> Self {
        let p = self.params();
        Self { a: p[order[0]], b: p[order[1]], c: p[order[2]], d: p[order[3]], q: self.q }
    }
}

/// Root `y` of `y + 1/y = x` with `|y| ≥ 1`. Both roots give the same
/// polynomial value; the choice only matters for conditioning.
pub fn y_from_x(x: C64) -> C64 {
    let disc = (x * x - cr(4.0)).sqrt();
    let y1 = (x + disc) / 2.0;
    let y2 = (x - disc) / 2.0;
    if y1.norm() >= y2.norm() {
        y1
    } else {
        y2
    }
}

/// `p_n(x; a,b,c,d)` normalised so that `p_n(a + 1/a) = 1`.
pub fn aw_poly_eval(n: usize, x: C64, p: &AWParams) -> Result<C64> {
    let mut m = (cr(0.0), cr(1.0));
    for k in 0..n {
        let (al, be) = monic_recurrence(k, p)?;
        m = (m.1, (x - al) * m.1 - be * m.0);
    }
    Ok(leading_coeff(n, p)? * m.1)
}

/// Same as [`aw_poly_eval`] at `x = y + 1/y`.
pub fn aw_poly_eval_y(n: usize, y: C64, p: &AWParams) -> Result<C64> {
    aw_poly_eval(n, y + cr(1.0) / y, p)
}

/// Leading coefficient `a^n (abcd q^{n-1}; q)_n / (ab, ac, ad; q)_n` of `p_n` in `x`.
fn leading_coeff(n: usize, p: &AWParams) -> Result<C64> {
    let q = &p.q;
    let mut den = cr(1.0);
    for (name, prod) in [("ab", p.a * p.b), ("ac", p.a * p.c), ("ad", p.a * p.d)] {
        let f = poch(prod, q, n);
        if f.norm() < 1e-14 {
            return Err(Error::Domain(format!("{name} = q^-k for some k < {n} makes p_n undefined")));
        }
        den *= f;
    }
    Ok(p.a.powi(n as i32) * poch(p.abcd() * q.q.powi(n as i32 - 1), q, n) / den)
}

/// `p_n` summed directly as the terminating 4φ3 series with `n+1` terms.
///
/// The terms cancel heavily on the unit circle once `n` grows, so this is
/// kept as a cross-check for low degrees; [`aw_poly_eval_y`] is the stable path.
pub fn aw_poly_series_y(n: usize, y: C64, p: &AWParams) -> Result<C64> {
    let q = &p.q;
    for (name, prod) in [("ab", p.a * p.b), ("ac", p.a * p.c), ("ad", p.a * p.d)] {
        let mut qk = 1.0;
        for k in 0..n {
            if (cr(1.0) - prod * qk).norm() < 1e-14 {
                return Err(Error::Domain(format!("{name} = q^-{k} makes the 4phi3 denominator vanish")));
            }
            qk *= q.q;
        }
    }
    let qn = q.pow(-(n as f64));
    let abcd = p.abcd();
    let mut sum = cr(0.0);
    let mut term = cr(1.0);
    let mut qk = 1.0;
    for k in 0..=n {
        sum += term;
        if k == n {
            break;
        }
        let num = (cr(1.0) - qn * qk)
            * (cr(1.0) - abcd * q.pow(n as f64 - 1.0) * qk)
            * (cr(1.0) - p.a * y * qk)
            * (cr(1.0) - p.a / y * qk);
        let den = (cr(1.0) - p.a * p.b * qk)
            * (cr(1.0) - p.a * p.c * qk)
            * (cr(1.0) - p.a * p.d * qk)
            * (1.0 - q.q * qk);
        term *= num / den * q.q;
        qk *= q.q;
    }
    Ok(sum)
}

fn check_nonzero(v: C64, what: &str) -> Result<()> {
    if v.norm() < 1e-14 {
        Err(Error::Domain(format!("vanishing factor {what}")))
    } else {
        Ok(())
    }
}

/// Elementary symmetric functions `(e1, e2, e3, e4)` of the four parameters.
fn elementary(p: &AWParams) -> (C64, C64, C64, C64) {
    let [a, b, c_, d] = p.params();
    let e1 = a + b + c_ + d;
    let e2 = a * b + a * c_ + a * d + b * c_ + b * d + c_ * d;
    let e3 = a * b * c_ + a * b * d + a * c_ * d + b * c_ * d;
    (e1, e2, e3, a * b * c_ * d)
}

/// Diagonal recurrence coefficient in the form
/// `Q [-q(q e1 + e3) + (1+q)(e4 e1 + q e3) Q - e4 (e3 + q e1) Q^2] / ((q^2 - e4 Q^2)(e4 Q^2 - 1))`
/// with `Q = q^n`. It carries the factor `q^n` explicitly, so it keeps full
/// relative accuracy where `a + 1/a - b_n - c_n` cancels.
fn diagonal_coeff(n: usize, p: &AWParams) -> Result<C64> {
    let q = p.q.q;
    let big_q = q.powi(n as i32);
    let (e1, _, e3, e4) = elementary(p);
    let d1 = cr(q * q) - e4 * big_q * big_q;
    let d2 = e4 * big_q * big_q - 1.0;
    check_nonzero(d1, "q^2 - abcd q^(2n)")?;
    check_nonzero(d2, "1 - abcd q^(2n)")?;
    let num = (e1 * q + e3) * (-q) + (e4 * e1 + e3 * q) * ((1.0 + q) * big_q) - e4 * (e3 + e1 * q) * (big_q * big_q);
    Ok(num * big_q / (d1 * d2))
}

/// `(a_n, b_n, c_n)` of `x p_n = b_n p_{n+1} + a_n p_n + c_n p_{n-1}`.
pub fn recurrence_coeffs(n: usize, p: &AWParams) -> Result<(C64, C64, C64)> {
    let q = p.q.q;
    let (a, b, c_, d) = (p.a, p.b, p.c, p.d);
    let abcd = p.abcd();
    let nf = n as i32;
    let qn = q.powi(nf);
    check_nonzero(a, "a")?;
    check_nonzero(cr(1.0) - abcd * q.powi(2 * nf - 1), "1 - abcd q^(2n-1)")?;
    check_nonzero(cr(1.0) - abcd * q.powi(2 * nf), "1 - abcd q^(2n)")?;
    let bn = (cr(1.0) - a * b * qn) * (cr(1.0) - a * c_ * qn) * (cr(1.0) - a * d * qn)
        * (cr(1.0) - abcd * q.powi(nf - 1))
        / (a * (cr(1.0) - abcd * q.powi(2 * nf - 1)) * (cr(1.0) - abcd * q.powi(2 * nf)));
    let cn = if n == 0 {
        cr(0.0)
    } else {
        check_nonzero(cr(1.0) - abcd * q.powi(2 * nf - 2), "1 - abcd q^(2n-2)")?;
        a * (1.0 - qn)
            * (cr(1.0) - b * c_ * q.powi(nf - 1))
            * (cr(1.0) - b * d * q.powi(nf - 1))
            * (cr(1.0) - c_ * d * q.powi(nf - 1))
            / ((cr(1.0) - abcd * q.powi(2 * nf - 2)) * (cr(1.0) - abcd * q.powi(2 * nf - 1)))
    };
    let an = diagonal_coeff(n, p)?;
    Ok((an, bn, cn))
}

/// Coefficients `(α_n, β_n)` of the monic recurrence
/// `x m_n = m_{n+1} + α_n m_n + β_n m_{n-1}`, where `α_n = a_n` and `β_n = b_{n-1} c_n`.
///
/// Both are evaluated in forms symmetric in `(a,b,c,d)` that never divide
/// by a parameter, so vanishing parameters (down to the continuous
/// q-Hermite case `α_n = 0`, `β_n = 1 - q^n`) need no special handling.
pub fn monic_recurrence(n: usize, p: &AWParams) -> Result<(C64, C64)> {
    let alpha = diagonal_coeff(n, p)?;
    if n == 0 {
        return Ok((alpha, cr(0.0)));
    }
    let q = p.q.q;
    let nf = n as i32;
    let abcd = p.abcd();
    let [a, b, c_, d] = p.params();
    let mut num = cr(1.0 - q.powi(nf)) * (cr(1.0) - abcd * q.powi(nf - 2));
    for pair in [a * b, a * c_, a * d, b * c_, b * d, c_ * d] {
        num *= cr(1.0) - pair * q.powi(nf - 1);
    }
    let mut den = cr(1.0);
    for (k, power) in [(2 * nf - 3, 1), (2 * nf - 2, 2), (2 * nf - 1, 1)] {
        let f = cr(1.0) - abcd * q.powi(k);
        check_nonzero(f, "1 - abcd q^(2n-k)")?;
        den *= f.powi(power);
    }
    Ok((alpha, num / den))
}

/// `λ*_n = q^{-n} + abcd q^{n-1}`.
pub fn dual_eigenvalue(n: usize, p: &AWParams) -> C64 {
    let q = p.q.q;
    cr(q.powi(-(n as i32))) + p.abcd() * q.powi(n as i32 - 1)
}

/// `f[y] = c_0 + Σ_{k≥1} c_k (y^k + y^{-k})`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymLaurentPoly {
    pub coeffs: Vec<C64>,
}

impl SymLaurentPoly {
    pub fn new(coeffs: Vec<C64>) -> Self {
        assert!(!coeffs.is_empty(), "a symmetric Laurent polynomial needs c_0");
        Self { coeffs }
    }

    pub fn constant(v: C64) -> Self {
        Self { coeffs: vec![v] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Degree after dropping trailing coefficients below `tol` relative to the largest.
    pub fn effective_degree(&self, tol: f64) -> usize {
        let m = self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
        (0..self.coeffs.len()).rev().find(|&k| self.coeffs[k].norm() > tol * m).unwrap_or(0)
    }

    pub fn eval(&self, y: C64) -> C64 {
        let yi = cr(1.0) / y;
        let mut yk = cr(1.0);
        let mut yik = cr(1.0);
        let mut s = self.coeffs[0];
        for ck in &self.coeffs[1..] {
            yk *= y;
            yik *= yi;
            s += ck * (yk + yik);
        }
        s
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &Vec<C64>, k: usize| v.get(k).copied().unwrap_or(cr(0.0));
        Self::new((0..n).map(|k| get(&self.coeffs, k) - get(&other.coeffs, k)).collect())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.coeffs.iter().map(|z| z * s).collect())
    }

    /// Fits degree-`k` coefficients to samples `f(e^{iθ_j})` by least squares.
    /// Returns the polynomial and the relative residual of the fit.
    pub fn fit_unit_circle(thetas: &[f64], values: &[C64], k: usize) -> (Self, f64) {
        let m = CMat::from_fn(thetas.len(), k + 1, |j, col| {
            if col == 0 {
                cr(1.0)
            } else {
                cr(2.0 * (col as f64 * thetas[j]).cos())
            }
        });
        let b = CVec::from_column_slice(values);
        let (x, res, _) = crate::linalg::lstsq(&m, &b);
        (Self::new(x.iter().copied().collect()), res)
    }
}

/// `p_n` expanded in the symmetric Laurent basis, built from the monic
/// recurrence using `x (y^k + y^-k) = (y^{k+1} + y^{-k-1}) + (y^{k-1} + y^{1-k})`.
pub fn aw_poly_laurent(n: usize, p: &AWParams) -> Result<SymLaurentPoly> {
    let times_x = |c: &[C64]| {
        let mut out = vec![cr(0.0); c.len() + 1];
        for (k, &ck) in c.iter().enumerate() {
            out[k + 1] += ck;
            match k {
                0 => {}
                1 => out[0] += ck * 2.0,
                _ => out[k - 1] += ck,
            }
        }
        out
    };
    let mut prev: Vec<C64> = Vec::new();
    let mut cur = vec![cr(1.0)];
    for k in 0..n {
        let (al, be) = monic_recurrence(k, p)?;
        let mut next = times_x(&cur);
        for (j, cj) in cur.iter().enumerate() {
            next[j] -= al * cj;
        }
        for (j, pj) in prev.iter().enumerate() {
            next[j] -= be * pj;
        }
        prev = cur;
        cur = next;
    }
    Ok(SymLaurentPoly::new(cur).scale(leading_coeff(n, p)?))
}

fn d_operator_at(f: &SymLaurentPoly, p: &AWParams, y: C64) -> C64 {
    let q = p.q.q;
    let one = cr(1.0);
    let (a, b, c_, d) = (p.a, p.b, p.c, p.d);
    let fy = f.eval(y);
    let y2 = y * y;
    let up = (one - a * y) * (one - b * y) * (one - c_ * y) * (one - d * y) / ((one - y2) * (one - y2 * q));
    let dn = (a - y) * (b - y) * (c_ - y) * (d - y) / ((one - y2) * (cr(q) - y2));
    (one + p.abcd() / q) * fy + up * (f.eval(y * q) - fy) + dn * (f.eval(y / q) - fy)
}

/// Applies the second-order q-difference operator `D` pointwise on a grid
/// of the unit circle and re-expands the result.
pub fn apply_d(f: &SymLaurentPoly, p: &AWParams) -> Result<SymLaurentPoly> {
    let k = f.degree();
    let m = 2 * k + 5;
    for attempt in 0..4 {
        // Irrational offsets keep y^2 away from 1; |y| = 1 keeps it away from q^{±1}.
        let shift = 0.137 + 0.0713 * attempt as f64;
        let thetas: Vec<f64> = (0..m).map(|j| PI * (j as f64 + shift) / m as f64).collect();
        let vals: Vec<C64> = thetas.iter().map(|&t| d_operator_at(f, p, C64::from_polar(1.0, t))).collect();
        let (g, res) = SymLaurentPoly::fit_unit_circle(&thetas, &vals, k);
        if res < 1e-10 && g.coeffs.iter().all(|z| z.is_finite()) {
            return Ok(g);
        }
    }
    Err(Error::Numerical("interpolation of D f did not close after 4 grid attempts".into()))
}

/// Gauss-Legendre nodes and weights on (-1, 1) via Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 1.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=n {
                let jf = j as f64;
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
            }
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Composite Gauss-Legendre rule on `(lo, hi)` with `panels` panels of `order` nodes.
pub fn composite_gl(lo: f64, hi: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(order);
    let h = (hi - lo) / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let a = lo + p as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            out.push((a + 0.5 * h * (xi + 1.0), 0.5 * h * wi));
        }
    }
    out
}

/// `P_n = a^{-n}(ab, ac, ad; q)_n p_n` at `y`, computed from the monic
/// recurrence so that vanishing parameters are harmless.
pub fn aw_standard_poly(n: usize, y: C64, p: &AWParams) -> Result<C64> {
    let x = y + cr(1.0) / y;
    let (mut m0, mut m1) = (cr(0.0), cr(1.0));
    for k in 0..n {
        let (al, be) = monic_recurrence(k, p)?;
        let m2 = (x - al) * m1 - be * m0;
        m0 = m1;
        m1 = m2;
    }
    let lead = poch(p.abcd() * p.q.q.powi(n as i32 - 1), &p.q, n);
    Ok(lead * m1)
}

/// `h_n` from the closed-form norm, with infinite products truncated at `EPS_PROD`.
pub fn aw_norm(n: usize, p: &AWParams) -> C64 {
    let q = &p.q;
    let qn = q.q.powi(n as i32);
    let abcd = p.abcd();
    let num = poch(abcd * q.q.powi(n as i32 - 1), q, n) * poch_inf(abcd * q.q.powi(2 * n as i32), q);
    let mut den = poch_inf(cr(q.q * qn), q);
    let [a, b, c_, d] = p.params();
    for pair in [a * b, a * c_, a * d, b * c_, b * d, c_ * d] {
        den *= poch_inf(pair * qn, q);
    }
    num / den
}

fn weight(theta: f64, p: &AWParams) -> C64 {
    let q = &p.q;
    let e = C64::from_polar(1.0, theta);
    let h = |mu: C64| poch_inf(mu * e, q) * poch_inf(mu / e, q);
    let num = h(cr(1.0)) * h(cr(-1.0)) * h(cr(q.sqrt_q)) * h(cr(-q.sqrt_q));
    let den = h(p.a) * h(p.b) * h(p.c) * h(p.d);
    num / den
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalityResult {
    pub integral: C64,
    pub h_n_ref: C64,
}

/// Weighted integral of `P_m P_n` over `x = cos θ ∈ (-1, 1)` and the
/// reference norm `h_n`. Only the absolutely continuous regime
/// `|a|,|b|,|c|,|d| < 1` is supported.
pub fn orthogonality_check(m: usize, n: usize, p: &AWParams, quad_points: usize) -> Result<OrthogonalityResult> {
    if p.params().iter().any(|z| z.norm() >= 1.0) {
        return Err(Error::Unsupported(
            "orthogonality requires |a|,|b|,|c|,|d| < 1; discrete masses are not modelled".into(),
        ));
    }
    if quad_points == 0 {
        return Err(Error::InvalidParameter("quad_points must be positive".into()));
    }
    let order = 20.min(quad_points);
    let panels = quad_points.div_ceil(order);
    let mut acc = cr(0.0);
    // dx / sqrt(1 - x^2) = dθ on θ ∈ (0, π).
    for (t, wq) in composite_gl(0.0, PI, panels, order) {
        let y = C64::from_polar(1.0, t);
        let pm = aw_standard_poly(m, y, p)?;
        let pn = aw_standard_poly(n, y, p)?;
        acc += weight(t, p) * pm * pn * wq;
    }
    Ok(OrthogonalityResult { integral: acc / (2.0 * PI), h_n_ref: aw_norm(n, p) })
}
