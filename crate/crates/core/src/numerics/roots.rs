//! Certified isolation of the complex roots of a squarefree monic polynomial.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ball::{ArbComplex, ArbReal};
use super::poly::{eval_coeffs, RelPoly};
use crate::error::{Error, Result};

/// Number of times the working precision is doubled before giving up.
pub const MAX_ESCALATIONS: u32 = 4;

const GUARD_BITS: u32 = 32;

/// Isolate all roots of `p`. Each returned ball contains exactly one root, the
/// balls are pairwise disjoint and their radii do not exceed `2^(-precision/2)`.
/// Roots are ordered by real then imaginary midpoint.
pub fn complex_roots(p: &RelPoly, precision: u32) -> Result<Vec<ArbComplex>> {
    if precision < 64 {
        return Err(Error::Config(format!("precision {precision} is below 64 bits")));
    }
    if !p.is_squarefree() {
        return Err(Error::DegeneratePolynomial(format!("{p} has a repeated root")));
    }
    let start = durand_kerner_f64(p);
    let mut prec = precision;
    for _ in 0..=MAX_ESCALATIONS {
        if let Some(mut roots) = isolate_at(p, &start, prec) {
            sort_roots(&mut roots);
            return Ok(roots);
        }
        prec = prec.saturating_mul(2);
    }
    Err(Error::RootIsolation(format!(
        "could not separate the roots of {p} after {MAX_ESCALATIONS} precision escalations"
    )))
}

fn isolate_at(p: &RelPoly, start: &[Complex64], prec: u32) -> Option<Vec<ArbComplex>> {
    let wp = prec + GUARD_BITS;
    let mids = refine(p, start, wp)?;
    let n = p.degree();
    let deriv = p.derivative_coeffs();
    let limit = BigInt::one() << (prec - prec / 2);

    // Disk around z of radius n |p(z)| / |p'(z)| contains a root.
    let mut radii = Vec::with_capacity(n);
    for z in &mids {
        // rational bounds: squaring in fixed point would lose half the bits
        let v = p.eval(z);
        let dv = eval_coeffs(&deriv, z);
        let (vr, vi) = (v.re.abs_upper(), v.im.abs_upper());
        let (dr, di) = (dv.re.abs_lower(), dv.im.abs_lower());
        let den = &dr * &dr + &di * &di;
        if den.is_zero() {
            return None;
        }
        let r_sq = (&vr * &vr + &vi * &vi) * BigRational::from_integer(BigInt::from(n * n)) / den;
        let scaled = r_sq * BigRational::from_integer(BigInt::one() << (2 * prec));
        let r = ceil_rational(&scaled).sqrt() + 2u32;
        if r > limit {
            return None;
        }
        radii.push(r);
    }
    let balls: Vec<ArbComplex> = mids
        .iter()
        .zip(&radii)
        .map(|(z, r)| {
            let z = z.with_prec(prec).mid_ball();
            ArbComplex::new(z.re.inflate(r), z.im.inflate(r))
        })
        .collect();
    // disks of radius sqrt(2) R circumscribe the square balls
    for i in 0..n {
        for j in i + 1..n {
            let dre = balls[i].re.mid_raw() - balls[j].re.mid_raw();
            let dim = balls[i].im.mid_raw() - balls[j].im.mid_raw();
            let dist_sq = &dre * &dre + &dim * &dim;
            let s = &radii[i] + &radii[j];
            if dist_sq <= (&s * &s) * 2u32 {
                return None;
            }
        }
    }
    Some(balls)
}

fn ceil_rational(q: &BigRational) -> BigInt {
    q.ceil().to_integer()
}

/// Weierstrass (Durand-Kerner) iteration at `wp` bits, started from `start`.
fn refine(p: &RelPoly, start: &[Complex64], wp: u32) -> Option<Vec<ArbComplex>> {
    let n = start.len();
    let mut z: Vec<ArbComplex> = start.iter().map(|c| from_c64(*c, wp)).collect();
    let tol = BigInt::one() << (GUARD_BITS / 2);
    let max_iter = 2 * (wp.max(64).ilog2() as usize) + 60;
    let mut converged_rounds = 0;
    for _ in 0..max_iter {
        let mut biggest = BigInt::zero();
        for i in 0..n {
            let mut den = ArbComplex::from_real(ArbReal::from_i64(1, wp));
            for j in 0..n {
                if i != j {
                    den = (&den * &(&z[i] - &z[j])).mid_ball();
                }
            }
            let num = p.eval(&z[i]).mid_ball();
            let step = num.checked_div(&den)?.mid_ball();
            let size = step.re.mid_raw().magnitude().max(step.im.mid_raw().magnitude()).clone();
            biggest = biggest.max(BigInt::from(size));
            z[i] = (&z[i] - &step).mid_ball();
        }
        if biggest <= tol {
            converged_rounds += 1;
            if converged_rounds >= 2 {
                return Some(z);
            }
        }
    }
    Some(z)
}

fn from_c64(c: Complex64, prec: u32) -> ArbComplex {
    ArbComplex::new(f64_ball(c.re, prec), f64_ball(c.im, prec))
}

fn f64_ball(x: f64, prec: u32) -> ArbReal {
    let q = BigRational::from_float(x).unwrap_or_else(|| BigRational::from_integer(BigInt::zero()));
    ArbReal::from_rational(&q, prec).mid_ball()
}

fn durand_kerner_f64(p: &RelPoly) -> Vec<Complex64> {
    let n = p.degree();
    let coeffs: Vec<Complex64> = p.coeffs().iter().map(|c| c.to_c64()).collect();
    let bound = 1.0
        + coeffs[..n]
            .iter()
            .map(|c| c.norm())
            .fold(0.0_f64, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> =
        (0..n).map(|k| seed.powu(k as u32) * (bound / 2.0).max(1.0)).collect();
    let eval = |x: Complex64| coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c);
    for _ in 0..2000 {
        let mut moved = 0.0_f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                z[i] += Complex64::new(1e-3, 1e-3);
                continue;
            }
            let step = eval(z[i]) / den;
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn sort_roots(roots: &mut [ArbComplex]) {
    // quantize so that balls around the same real part compare by imaginary part
    let key = |z: &ArbComplex| {
        let p = z.prec();
        let shift = p - p / 4;
        let q = |x: &BigInt| (x + (BigInt::one() << (shift - 1))) >> shift;
        (q(z.re.mid_raw()), q(z.im.mid_raw()))
    };
    roots.sort_by_key(key);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::{IQField, IQInt};

    fn poly(d: u64, c: &[(i64, i64)]) -> RelPoly {
        let f = IQField::natural(d).unwrap();
        RelPoly::new(c.iter().map(|&(a, b)| f.int(a, b)).collect()).unwrap()
    }

    fn assert_isolated(roots: &[ArbComplex], prec: u32) {
        let limit = BigInt::one() << (prec - prec / 2);
        for r in roots {
            assert!(r.rad_raw() <= limit);
        }
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                let d = (roots[i].to_c64() - roots[j].to_c64()).norm();
                assert!(d > roots[i].rad_f64() + roots[j].rad_f64());
            }
        }
    }

    #[test]
    fn binomial_quartic() {
        let p = poly(3, &[(-2, 0), (0, 0), (0, 0), (0, 0), (1, 0)]);
        let roots = complex_roots(&p, 256).unwrap();
        assert_eq!(roots.len(), 4);
        assert_isolated(&roots, 256);
        let r = 2f64.powf(0.25);
        let expect = [
            Complex64::new(-r, 0.0),
            Complex64::new(0.0, -r),
            Complex64::new(0.0, r),
            Complex64::new(r, 0.0),
        ];
        for (z, e) in roots.iter().zip(expect) {
            assert!((z.to_c64() - e).norm() < 1e-14, "{z} vs {e}");
        }
        // z^4 ball contains 2
        for z in &roots {
            let z2 = z * z;
            let z4 = &z2 * &z2;
            assert!(z4.re.contains(&BigRational::from_integer(2.into())));
            assert!(z4.im.contains_zero());
        }
    }

    #[test]
    fn cube_roots_of_unity() {
        let p = poly(7, &[(-1, 0), (0, 0), (0, 0), (1, 0)]);
        let roots = complex_roots(&p, 128).unwrap();
        let h = 3f64.sqrt() / 2.0;
        let expect = [Complex64::new(-0.5, -h), Complex64::new(-0.5, h), Complex64::new(1.0, 0.0)];
        for (z, e) in roots.iter().zip(expect) {
            assert!((z.to_c64() - e).norm() < 1e-14);
        }
    }

    #[test]
    fn discriminant_matches_root_product() {
        // oracle: exact discriminant via resultant, vs prod_{i<j} (r_i - r_j)^2
        let p = poly(1, &[(-1, -4), (0, 5), (-1, -1), (1, 0)]);
        let disc = p.discriminant().to_c64();
        let roots = complex_roots(&p, 200).unwrap();
        let mut prod = ArbComplex::from_real(ArbReal::from_i64(1, 200));
        for i in 0..3 {
            for j in i + 1..3 {
                let d = &roots[i] - &roots[j];
                prod = &prod * &(&d * &d);
            }
        }
        let num = prod.to_c64();
        assert!((num - disc).norm() < 1e-9 * disc.norm(), "{num} vs {disc}");
    }

    #[test]
    fn rejects_repeated_roots() {
        let p = poly(3, &[(2, 0), (-3, 0), (0, 0), (1, 0)]);
        assert!(matches!(complex_roots(&p, 128), Err(Error::DegeneratePolynomial(_))));
    }

    #[test]
    fn high_precision_default() {
        let p = poly(163, &[(-328, 0), (0, 0), (0, 0), (0, 0), (1, 0)]);
        let roots = complex_roots(&p, 1200).unwrap();
        assert_isolated(&roots, 1200);
        assert!(roots.iter().all(|r| r.prec() == 1200));
    }

    #[test]
    fn nonreal_coefficients() {
        let f = IQField::natural(19).unwrap();
        let w = f.omega();
        let c: Vec<IQInt> = vec![&w * &f.int(3, 0), f.int(-1, 1), f.zero(), f.one()];
        let p = RelPoly::new(c).unwrap();
        let roots = complex_roots(&p, 300).unwrap();
        assert_isolated(&roots, 300);
        for r in &roots {
            assert!(p.eval(r).contains_zero() || p.eval_c64(r.to_c64()).norm() < 1e-12);
        }
    }
}
