//! Exact integral LLL reduction.
//!
//! The reduction keeps the Gram-Schmidt data as integers (the sub-determinants
//! `d_i` and the scaled coefficients `lambda_ij = d_j mu_ij`), so no rational or
//! floating arithmetic is involved. A separate rational Gram-Schmidt routine is
//! provided for checking results.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::bareiss_det;
use crate::numerics::ball::round_div;

/// Square integer matrix whose rows generate a lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    rows: Vec<Vec<BigInt>>,
}

impl LatticeBasis {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::InvalidInstance("empty lattice basis".into()));
        }
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidInstance(format!("basis must be a square {k}x{k} matrix")));
        }
        Ok(LatticeBasis { rows })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn identity(k: usize) -> Self {
        let rows = (0..k)
            .map(|i| (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        LatticeBasis { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.rows[i]
    }

    pub fn determinant(&self) -> BigInt {
        bareiss_det(self.rows.clone())
    }
}

fn dot(x: &[BigInt], y: &[BigInt]) -> BigInt {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Squared Euclidean length of an integer vector.
pub fn norm_sq(v: &[BigInt]) -> BigInt {
    dot(v, v)
}

/// The LLL parameter 99/100.
pub fn default_delta() -> BigRational {
    BigRational::new(BigInt::from(99), BigInt::from(100))
}

fn check_delta(delta: &BigRational) -> Result<()> {
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    if delta <= &quarter || delta >= &BigRational::one() {
        return Err(Error::Config(format!("LLL parameter {delta} is outside (1/4, 1)")));
    }
    Ok(())
}

/// LLL-reduce the rows of `basis` with parameter `delta`.
pub fn lll_reduce(basis: &LatticeBasis, delta: &BigRational) -> Result<LatticeBasis> {
    lll_reduce_with_transform(basis, delta).map(|(b, _)| b)
}

/// LLL-reduce and also return the unimodular `U` with `reduced = U * basis`.
pub fn lll_reduce_with_transform(
    basis: &LatticeBasis,
    delta: &BigRational,
) -> Result<(LatticeBasis, Vec<Vec<BigInt>>)> {
    check_delta(delta)?;
    let n = basis.dim();
    let mut u: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let (p, q) = (delta.numer().clone(), delta.denom().clone());
    let mut b = basis.rows.clone();
    // 1-based Gram-Schmidt data; d[0] = 1.
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n + 1]; n + 1];
    d[0] = BigInt::one();
    d[1] = norm_sq(&b[0]);
    if d[1].is_zero() {
        return Err(Error::RankDeficient);
    }
    if n == 1 {
        return Ok((LatticeBasis { rows: b }, u));
    }
    let mut k = 2;
    let mut kmax = 1;
    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&b[k - 1], &b[j - 1]);
                for i in 1..j {
                    u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::RankDeficient);
                    }
                    d[k] = u;
                }
            }
        }
        reduce_pair(&mut b, &mut u, &mut lam, &d, k, k - 1);
        let l = &lam[k][k - 1];
        let lhs = &q * (&d[k] * &d[k - 2] + l * l);
        let rhs = &p * &d[k - 1] * &d[k - 1];
        if lhs < rhs {
            swap_step(&mut b, &mut u, &mut lam, &mut d, k, kmax);
            k = (k - 1).max(2);
        } else {
            for l in (1..=k.saturating_sub(2)).rev() {
                reduce_pair(&mut b, &mut u, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
    Ok((LatticeBasis { rows: b }, u))
}

fn reduce_pair(b: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
    if BigInt::from(2) * lam[k][l].abs() <= d[l] {
        return;
    }
    let r = round_div(&lam[k][l], &d[l]);
    let bl = b[l - 1].clone();
    for (x, y) in b[k - 1].iter_mut().zip(&bl) {
        *x -= &r * y;
    }
    let ul = u[l - 1].clone();
    for (x, y) in u[k - 1].iter_mut().zip(&ul) {
        *x -= &r * y;
    }
    lam[k][l] -= &r * &d[l];
    for i in 1..l {
        let t = &r * &lam[l][i];
        lam[k][i] -= t;
    }
}

fn swap_step(b: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &mut [BigInt], k: usize, kmax: usize) {
    b.swap(k - 1, k - 2);
    u.swap(k - 1, k - 2);
    for j in 1..k - 1 {
        let t = lam[k][j].clone();
        lam[k][j] = lam[k - 1][j].clone();
        lam[k - 1][j] = t;
    }
    let l = lam[k][k - 1].clone();
    let bb = (&d[k - 2] * &d[k] + &l * &l) / &d[k - 1];
    for i in k + 1..=kmax {
        let t = lam[i][k].clone();
        lam[i][k] = (&d[k] * &lam[i][k - 1] - &l * &t) / &d[k - 1];
        lam[i][k - 1] = (&bb * &t + &l * &lam[i][k]) / &d[k];
    }
    d[k - 1] = bb;
}

/// Exact lower bound for the squared length of a shortest non-zero lattice
/// vector, from an LLL-reduced basis: `|b1|^2 (delta - 1/4)^(k-1)`.
pub fn first_vector_lower_bound_sq(reduced: &LatticeBasis, delta: &BigRational) -> BigRational {
    let k = reduced.dim();
    let factor = delta - BigRational::new(BigInt::one(), BigInt::from(4));
    let mut out = BigRational::from_integer(norm_sq(&reduced.rows[0]));
    for _ in 1..k {
        out *= &factor;
    }
    out
}

/// `sqrt` of [`first_vector_lower_bound_sq`] as a double, for reporting.
pub fn first_vector_lower_bound(reduced: &LatticeBasis, delta: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    let sq = first_vector_lower_bound_sq(reduced, delta);
    let bits = sq.numer().bits() as i64 - sq.denom().bits() as i64;
    if bits.abs() < 900 {
        return sq.to_f64().unwrap_or(f64::NAN).sqrt();
    }
    // scale out large exponents before converting
    let shift = (bits - bits.rem_euclid(2)) as i32;
    let scaled = if shift > 0 {
        sq / BigRational::from_integer(BigInt::one() << shift as u32)
    } else {
        sq * BigRational::from_integer(BigInt::one() << (-shift) as u32)
    };
    scaled.to_f64().unwrap_or(f64::NAN).sqrt() * 2f64.powi(shift / 2)
}

/// Exact Gram-Schmidt data of a basis.
#[derive(Clone, Debug)]
pub struct GramSchmidt {
    /// `mu[i][j] = <b_i, b*_j> / <b*_j, b*_j>` for `j < i`.
    pub mu: Vec<Vec<BigRational>>,
    /// `<b*_i, b*_i>`.
    pub norms: Vec<BigRational>,
}

pub fn gram_schmidt(basis: &LatticeBasis) -> GramSchmidt {
    let k = basis.dim();
    let to_q = |v: &[BigInt]| v.iter().map(|x| BigRational::from_integer(x.clone())).collect::<Vec<_>>();
    let mut stars: Vec<Vec<BigRational>> = Vec::with_capacity(k);
    let mut mu = vec![vec![BigRational::zero(); k]; k];
    let mut norms = Vec::with_capacity(k);
    for i in 0..k {
        let bi = to_q(&basis.rows[i]);
        let mut s = bi.clone();
        for j in 0..i {
            if norms[j] == BigRational::zero() {
                continue;
            }
            let num: BigRational = bi.iter().zip(&stars[j]).map(|(a, b)| a * b).sum();
            let m = num / &norms[j];
            for (x, y) in s.iter_mut().zip(&stars[j]) {
                *x -= &m * y;
            }
            mu[i][j] = m;
        }
        let nrm: BigRational = s.iter().map(|x| x * x).sum();
        norms.push(nrm);
        stars.push(s);
    }
    GramSchmidt { mu, norms }
}

/// Check size reduction and the Lovasz condition by exact rational arithmetic.
pub fn is_lll_reduced(basis: &LatticeBasis, delta: &BigRational) -> bool {
    let gs = gram_schmidt(basis);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let k = basis.dim();
    for i in 0..k {
        for j in 0..i {
            if gs.mu[i][j].abs() > half {
                return false;
            }
        }
    }
    for i in 1..k {
        let m = &gs.mu[i][i - 1];
        if gs.norms[i] < (delta - m * m) * &gs.norms[i - 1] {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn identity_is_fixed() {
        let id = LatticeBasis::identity(4);
        assert_eq!(lll_reduce(&id, &default_delta()).unwrap(), id);
        assert_eq!(first_vector_lower_bound_sq(&id, &q(3, 4)), q(1, 8));
    }

    #[test]
    fn one_dimensional() {
        let b = LatticeBasis::from_i64(&[vec![7]]).unwrap();
        let r = lll_reduce(&b, &q(3, 4)).unwrap();
        assert_eq!(first_vector_lower_bound_sq(&r, &q(3, 4)), q(49, 1));
        assert!((first_vector_lower_bound(&r, &q(3, 4)) - 7.0).abs() < 1e-12);
    }

    #[test]
    fn small_example_against_brute_force() {
        let b = LatticeBasis::from_i64(&[vec![1, 1, 1], vec![-1, 0, 2], vec![3, 5, 6]]).unwrap();
        let delta = q(3, 4);
        let r = lll_reduce(&b, &delta).unwrap();
        assert!(is_lll_reduced(&r, &delta));
        assert_eq!(r.determinant().abs(), b.determinant().abs());
        // oracle: exhaustive shortest vector over coefficients in [-5, 5]^3
        let mut best: Option<BigInt> = None;
        for c0 in -5i64..=5 {
            for c1 in -5i64..=5 {
                for c2 in -5i64..=5 {
                    if (c0, c1, c2) == (0, 0, 0) {
                        continue;
                    }
                    let v: Vec<BigInt> = (0..3)
                        .map(|j| {
                            BigInt::from(c0) * &b.rows()[0][j]
                                + BigInt::from(c1) * &b.rows()[1][j]
                                + BigInt::from(c2) * &b.rows()[2][j]
                        })
                        .collect();
                    let n = norm_sq(&v);
                    if best.as_ref().is_none_or(|x| &n < x) {
                        best = Some(n);
                    }
                }
            }
        }
        let lambda_sq = best.unwrap();
        // |b1|^2 <= 2^(k-1) lambda1^2 for delta = 3/4
        assert!(norm_sq(r.row(0)) <= lambda_sq.clone() * 4);
        assert!(first_vector_lower_bound_sq(&r, &delta) <= BigRational::from_integer(lambda_sq));
    }

    #[test]
    fn rank_deficient() {
        let b = LatticeBasis::from_i64(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 0, 1]]).unwrap();
        assert_eq!(lll_reduce(&b, &default_delta()), Err(Error::RankDeficient));
        let z = LatticeBasis::from_i64(&[vec![0, 0], vec![1, 0]]).unwrap();
        assert_eq!(lll_reduce(&z, &default_delta()), Err(Error::RankDeficient));
    }

    #[test]
    fn rejects_bad_delta_and_shape() {
        let id = LatticeBasis::identity(2);
        assert!(lll_reduce(&id, &q(1, 4)).is_err());
        assert!(lll_reduce(&id, &q(1, 1)).is_err());
        assert!(LatticeBasis::from_i64(&[vec![1, 2]]).is_err());
    }

    #[test]
    fn huge_entries() {
        let c = BigInt::from(10).pow(60);
        let rows = vec![
            vec![BigInt::one(), BigInt::zero(), c.clone()],
            vec![BigInt::zero(), BigInt::one(), &c * 1414213562373095i64 / 1000000000000000i64],
            vec![BigInt::zero(), BigInt::zero(), &c * 3],
        ];
        let b = LatticeBasis::new(rows).unwrap();
        let r = lll_reduce(&b, &default_delta()).unwrap();
        assert!(is_lll_reduced(&r, &default_delta()));
        assert_eq!(r.determinant().abs(), b.determinant().abs());
        assert!(first_vector_lower_bound(&r, &default_delta()) > 1.0);
    }
}
