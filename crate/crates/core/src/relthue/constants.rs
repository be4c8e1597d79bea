use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::RelThueEquation;
use crate::error::Result;
use crate::numerics::{complex_roots, ArbComplex};

/// Certified roots of the relative polynomial at a fixed precision.
#[derive(Clone, Debug)]
pub struct RootData {
    pub precision: u32,
    pub roots: Vec<ArbComplex>,
}

impl RootData {
    pub fn compute(eq: &RelThueEquation, precision: u32) -> Result<Self> {
        let roots = complex_roots(eq.poly(), precision)?;
        let precision = roots[0].prec();
        Ok(RootData { precision, roots })
    }
}

/// Constants of the approximation argument.
///
/// If `(X, Y)` is a solution with `Y != 0` and `j0` minimises `|X - rho_j Y|`,
/// then `|X - rho_j0 Y| <= c2[j0] / |Y|^(n-1)`. Rationals are upper bounds
/// (`c2`, `root_abs`) or lower bounds (`min_sep`) of the real quantities.
#[derive(Clone, Debug, Serialize)]
pub struct SmallnessConstants {
    #[serde(skip)]
    pub c2: Vec<BigRational>,
    #[serde(skip)]
    pub min_sep: Vec<BigRational>,
    #[serde(skip)]
    pub root_abs: Vec<BigRational>,
    /// `seps[j0][j] = |rho_j - rho_j0| / 2` (zero on the diagonal).
    pub seps: Vec<Vec<f64>>,
    #[serde(rename = "c2")]
    pub c2_f64: Vec<f64>,
    /// Smallest `s` with `c2 / s^(n-1)` below the minimal separation, over all `j0`.
    pub y_min: u64,
}

const ROUND_BITS: u32 = 96;

fn round_up(q: &BigRational) -> BigRational {
    let scale = BigInt::one() << ROUND_BITS;
    let n = (q * BigRational::from_integer(scale.clone())).ceil().to_integer();
    BigRational::new(n, scale)
}

fn round_down(q: &BigRational) -> BigRational {
    let scale = BigInt::one() << ROUND_BITS;
    let n = (q * BigRational::from_integer(scale.clone())).floor().to_integer();
    BigRational::new(n, scale)
}

pub(crate) fn from_roots(data: &RootData) -> SmallnessConstants {
    let roots = &data.roots;
    let n = roots.len();
    let two = BigRational::from_integer(2.into());
    let mut c2 = Vec::with_capacity(n);
    let mut min_sep = Vec::with_capacity(n);
    let mut seps = vec![vec![0.0; n]; n];
    for j0 in 0..n {
        let mut prod = BigRational::one();
        let mut smallest: Option<BigRational> = None;
        for j in 0..n {
            if j == j0 {
                continue;
            }
            let dist = (&roots[j] - &roots[j0]).abs();
            let sep = round_down(&(dist.lower() / &two));
            seps[j0][j] = dist.to_f64() / 2.0;
            prod *= &sep;
            if smallest.as_ref().is_none_or(|s| &sep < s) {
                smallest = Some(sep);
            }
        }
        let factor = BigRational::from_integer(BigInt::one() << (n - 1));
        c2.push(round_up(&(factor / prod)));
        min_sep.push(smallest.expect("degree at least 2"));
    }
    let root_abs = roots.iter().map(|r| round_up(&r.abs().upper())).collect();
    let e = (n - 1) as u32;
    let mut y_min = 1u64;
    for j0 in 0..n {
        let t = (&c2[j0] / &min_sep[j0]).ceil().to_integer();
        let mut s = t.nth_root(e).max(BigInt::one());
        // shrink then grow to the exact threshold
        while s > BigInt::one() && satisfies(&s - 1u32, e, &c2[j0], &min_sep[j0]) {
            s -= 1u32;
        }
        while !satisfies(s.clone(), e, &c2[j0], &min_sep[j0]) {
            s += 1u32;
        }
        y_min = y_min.max(s.to_u64().unwrap_or(u64::MAX));
    }
    let c2_f64 = c2.iter().map(|q| q.to_f64().unwrap_or(f64::INFINITY)).collect();
    SmallnessConstants { c2, min_sep, root_abs, seps, c2_f64, y_min }
}

fn satisfies(s: BigInt, e: u32, c2: &BigRational, sep: &BigRational) -> bool {
    if s.is_zero() {
        return false;
    }
    c2 < &(sep * BigRational::from_integer(s.pow(e)))
}

/// Separation data and the approximation constant `c2` for every root index.
pub fn smallness_constants(eq: &RelThueEquation, precision: u32) -> Result<SmallnessConstants> {
    Ok(from_roots(&RootData::compute(eq, precision)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RelPoly;
    use crate::qfield::IQField;

    fn binomial(d: u64, m: i64) -> RelThueEquation {
        let f = IQField::natural(d).unwrap();
        RelThueEquation::new(RelPoly::binomial(f, 4, &m.into()).unwrap()).unwrap()
    }

    #[test]
    fn cube_roots_geometry() {
        let f = IQField::natural(7).unwrap();
        let g = RelPoly::new(vec![f.int(-2, 0), f.zero(), f.zero(), f.one()]).unwrap();
        let eq = RelThueEquation::new(g).unwrap();
        let k = smallness_constants(&eq, 256).unwrap();
        let r = 2f64.cbrt();
        let h = r * 3f64.sqrt() / 2.0;
        for j0 in 0..3 {
            for j in 0..3 {
                if j != j0 {
                    assert!((k.seps[j0][j] - h).abs() < 1e-12);
                }
            }
            // 2^2 / h^2
            assert!((k.c2_f64[j0] - 16.0 / (3.0 * r * r)).abs() < 1e-9);
        }
    }

    #[test]
    fn binomial_bound_holds_for_a_solution() {
        // (w, w) solves X^4 - 2 Y^4 = unit over d = 3
        let eq = binomial(3, 2);
        let f = eq.field();
        let x = f.omega();
        let y = f.omega();
        assert!(eq.is_solution(&x, &y));
        let data = RootData::compute(&eq, 512).unwrap();
        let k = from_roots(&data);
        let xc = x.embed(512);
        let yc = y.embed(512);
        let factors: Vec<f64> =
            data.roots.iter().map(|r| (&xc - &(r * &yc)).abs().to_f64()).collect();
        let (j0, small) = factors
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(i, v)| (i, *v))
            .unwrap();
        let size_y = y.size_f64();
        assert!(small <= k.c2_f64[j0] / size_y.powi(3));
    }

    #[test]
    fn y_min_is_small_for_binomials() {
        for m in [2, 5, 10, 17, 39, 82, 145, 150, 257, 410, 455] {
            let k = smallness_constants(&binomial(3, m), 256).unwrap();
            assert!(k.y_min <= 10, "m = {m}: y_min = {}", k.y_min);
        }
    }
}
