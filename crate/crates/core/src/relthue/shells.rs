//! Enumeration for boxes too large to scan point by point.
//!
//! A solution with `Y != 0` has some root `rho_j` with
//! `|X - rho_j Y| <= eps = min(1, c2 / |Y|^(n-1))`. Splitting `|Y|` into
//! dyadic shells `2^k <= |Y| < 2^(k+1)` gives, for each `(j, k)`, a bounded
//! region in the coordinates `(x1, y1, x2, y2)`. After scaling `Y` by
//! `D = K / 2^(k+1)` and `X - rho_j Y` by `C = K / eps` the region fits in a
//! ball of radius about `K sqrt 2`, whose lattice points are listed with
//! Fincke-Pohst on an LLL-reduced basis. Every candidate is checked exactly.

use num_bigint::BigInt;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use super::constants::{from_roots, RootData};
use super::enumeration::Collector;
use super::reduction::scaled_entry;
use super::{RelThueEquation, SearchConfig, SolutionPair};
use crate::error::{Error, Result};
use crate::lattice::{gram_schmidt, lll_reduce_with_transform, LatticeBasis};
use crate::numerics::{ArbComplex, ArbReal};
use crate::smallint::Small;

/// Extra bits of `K` above the rounding error bound.
const GUARD_BITS: u64 = 24;

/// All solutions with `|Y| <= y_bound` and every coordinate at most `b_r`,
/// as sorted canonical orbit representatives.
pub fn enumerate_shells(
    eq: &RelThueEquation,
    y_bound: &BigInt,
    b_r: &BigInt,
    config: &SearchConfig,
) -> Result<Vec<SolutionPair>> {
    let mut hits = Collector::new(eq);
    hits.add_units();
    if !y_bound.is_positive() || b_r.is_negative() {
        return Ok(hits.finish());
    }
    if b_r.bits() > 62 {
        return Err(Error::EnumerationCap { bound: b_r.to_string(), cap: i64::MAX as u64 });
    }
    let field = eq.field();
    let n = eq.degree() as u64;
    let im_w = field.omega_c64().im;
    let k_max = y_bound.bits() - 1;

    let base = RootData::compute(eq, config.precision.max(128))?;
    let consts = from_roots(&base);
    let coef_factor = 1.0 + 1.5 / im_w;
    let rho_abs: Vec<f64> = consts.root_abs.iter().map(|q| q.to_f64().unwrap_or(f64::INFINITY)).collect();
    let r_max = 2f64.powi(k_max as i32 + 1);
    let s_max = rho_abs.iter().map(|r| coef_factor * (r_max * (1.0 + r) + 1.0)).fold(0.0, f64::max);
    let kappa = (s_max.log2().ceil() as u64 + GUARD_BITS).max(k_max + 2);

    // largest C over all shells decides the working precision
    let c2_min = consts.c2_f64.iter().cloned().fold(f64::INFINITY, f64::min);
    let c_bits = kappa + (k_max * (n - 1)) + (1.0 / c2_min).log2().max(0.0).ceil() as u64 + 2;
    let prec = (c_bits + 64) as u32;
    let data = if base.precision >= prec { base } else { RootData::compute(eq, prec)? };
    let p = data.precision;
    let omega = field.omega_ball(p);
    let k_int = BigInt::one() << kappa;

    for (j, rho) in data.roots.iter().enumerate() {
        let c2 = consts.c2_f64[j] * (1.0 + 1e-12);
        for k in 0..=k_max {
            let shrink = 2f64.powi((k * (n - 1)) as i32) / c2;
            let c = if shrink <= 1.0 {
                k_int.clone()
            } else {
                let scaled = BigInt::from_f64((shrink * 2f64.powi(52)).ceil()).expect("finite");
                (&k_int * scaled) >> 52u32
            } + 1u32;
            let d = BigInt::one() << (kappa - k - 1);
            let basis = shell_basis(&omega, rho, &c, &d)?;
            let r = 2f64.powi(k as i32 + 1);
            let s = coef_factor * (r * (1.0 + rho_abs[j]) + 1.0) * 1.001 + 1.0;
            let kf = 2f64.powi(kappa as i32);
            let radius = std::f64::consts::SQRT_2 * (kf + 1.0) + 1.5 * s + 1.0;
            for_each_short_vector(&basis, radius, |v| {
                let (x1, y1, x2, y2) = (&v[0], &v[1], &v[2], &v[3]);
                if x2.is_zero() && y2.is_zero() {
                    return;
                }
                if [x1, y1, x2, y2].iter().any(|t| t.abs() > *b_r) {
                    return;
                }
                let small = |t: &BigInt| t.to_i128().expect("inside the box");
                hits.check(Small { a: small(x1), b: small(y1) }, Small { a: small(x2), b: small(y2) });
            })?;
        }
    }
    Ok(hits.finish())
}

/// Rows for the coefficients `x1, y1, x2, y2` of `X = x1 + y1 w`, `Y = x2 + y2 w`.
fn shell_basis(omega: &ArbComplex, rho: &ArbComplex, c: &BigInt, d: &BigInt) -> Result<LatticeBasis> {
    let p = omega.prec().min(rho.prec());
    let insufficient = || Error::InsufficientPrecision(format!("{p} bits cannot round shell entries"));
    let entry = |x: &ArbReal, s: &BigInt| scaled_entry(x, s).ok_or_else(insufficient);
    let neg_rho = -rho;
    let neg_rho_w: ArbComplex = &neg_rho * omega;
    let z = BigInt::zero;
    LatticeBasis::new(vec![
        vec![z(), z(), c.clone(), z()],
        vec![z(), z(), entry(&omega.re, c)?, entry(&omega.im, c)?],
        vec![d.clone(), z(), entry(&neg_rho.re, c)?, entry(&neg_rho.im, c)?],
        vec![entry(&omega.re, d)?, entry(&omega.im, d)?, entry(&neg_rho_w.re, c)?, entry(&neg_rho_w.im, c)?],
    ])
}

/// Call `f` with the coefficient vector (in the original basis) of every
/// non-zero lattice vector of length at most `radius`, up to sign.
fn for_each_short_vector(basis: &LatticeBasis, radius: f64, mut f: impl FnMut(&[BigInt])) -> Result<()> {
    let (reduced, u) = lll_reduce_with_transform(basis, &crate::lattice::default_delta())?;
    let gs = gram_schmidt(&reduced);
    let dim = reduced.dim();
    let mu: Vec<Vec<f64>> = gs.mu.iter().map(|r| r.iter().map(|q| q.to_f64().unwrap_or(0.0)).collect()).collect();
    let bn: Vec<f64> = gs.norms.iter().map(|q| q.to_f64().unwrap_or(f64::INFINITY)).collect();
    let limit = radius * radius * (1.0 + 1e-9);

    let mut w = vec![0i64; dim];
    let mut partial = vec![0f64; dim + 1];
    let mut centre = vec![0f64; dim];
    let mut coeffs = vec![BigInt::zero(); dim];
    let mut i = dim - 1;
    centre[i] = 0.0;
    let half = (limit / bn[i]).sqrt();
    w[i] = -(half.floor() as i64);
    // depth-first walk, each level scanning its interval upwards
    let mut hi = vec![0i64; dim];
    hi[i] = half.floor() as i64;
    loop {
        if w[i] > hi[i] {
            i += 1;
            if i == dim {
                break;
            }
            w[i] += 1;
            continue;
        }
        let t = w[i] as f64 - centre[i];
        partial[i] = partial[i + 1] + t * t * bn[i];
        if partial[i] > limit {
            w[i] += 1;
            continue;
        }
        if i == 0 {
            // keep one of v and -v: first non-zero entry from the top is positive
            if let Some(&lead) = w.iter().rev().find(|&&x| x != 0) {
                if lead > 0 {
                    for (jdx, cf) in coeffs.iter_mut().enumerate() {
                        *cf = (0..dim).map(|r| &u[r][jdx] * w[r]).sum();
                    }
                    f(&coeffs);
                }
            }
            w[0] += 1;
            continue;
        }
        i -= 1;
        centre[i] = -(i + 1..dim).map(|l| mu[l][i] * w[l] as f64).sum::<f64>();
        let room = ((limit - partial[i + 1]) / bn[i]).max(0.0).sqrt();
        w[i] = (centre[i] - room).ceil() as i64;
        hi[i] = (centre[i] + room).floor() as i64;
    }
    Ok(())
}
