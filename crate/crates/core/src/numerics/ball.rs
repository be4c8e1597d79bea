//! Fixed-point ball arithmetic on big integers.
//!
//! A ball at precision `p` stores an integer midpoint `m` and a non-negative
//! integer radius `r`, both in units of `2^-p`. It denotes the closed interval
//! `[(m - r) / 2^p, (m + r) / 2^p]`. Every operation returns a ball that
//! contains the exact result for all points of the input balls. Operands of
//! a binary operation must share the same precision.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Round `x / 2^shift` to the nearest integer (ties toward +inf).
fn round_shift(x: &BigInt, shift: u32) -> BigInt {
    if shift == 0 {
        return x.clone();
    }
    let half = BigInt::one() << (shift - 1);
    (x + half) >> shift
}

/// Ceiling of `x / 2^shift` for non-negative `x`.
fn ceil_shift(x: &BigInt, shift: u32) -> BigInt {
    if shift == 0 {
        return x.clone();
    }
    let mask = (BigInt::one() << shift) - 1u32;
    (x + mask) >> shift
}

fn ceil_div(num: &BigInt, den: &BigInt) -> BigInt {
    num.div_ceil(den)
}

/// Nearest integer to `a / b` (ties toward +inf).
pub(crate) fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (a, b) = if b.is_negative() { (-a, -b) } else { (a.clone(), b.clone()) };
    let num: BigInt = (a << 1u32) + &b;
    let den: BigInt = b << 1u32;
    num.div_floor(&den)
}

/// Real ball `[mid - rad, mid + rad] * 2^-prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArbReal {
    mid: BigInt,
    rad: BigInt,
    prec: u32,
}

impl ArbReal {
    pub fn zero(prec: u32) -> Self {
        ArbReal { mid: BigInt::zero(), rad: BigInt::zero(), prec }
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Self {
        ArbReal { mid: n << prec, rad: BigInt::zero(), prec }
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::from_int(&BigInt::from(n), prec)
    }

    /// Ball around `num / den`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let scaled = num << prec;
        let (q, r) = scaled.div_mod_floor(den);
        if r.is_zero() {
            ArbReal { mid: q, rad: BigInt::zero(), prec }
        } else {
            ArbReal { mid: q, rad: BigInt::one(), prec }
        }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Self::from_ratio(q.numer(), q.denom(), prec)
    }

    /// Ball containing `sqrt(n)` for a non-negative integer `n`.
    pub fn sqrt_int(n: &BigInt, prec: u32) -> Self {
        assert!(!n.is_negative(), "square root of a negative integer");
        let scaled: BigInt = n << (2 * prec);
        let s = scaled.sqrt();
        if &s * &s == scaled {
            ArbReal { mid: s, rad: BigInt::zero(), prec }
        } else {
            ArbReal { mid: s, rad: BigInt::one(), prec }
        }
    }

    /// Build a ball from raw fixed-point parts.
    pub fn from_parts(mid: BigInt, rad: BigInt, prec: u32) -> Self {
        assert!(!rad.is_negative());
        ArbReal { mid, rad, prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Midpoint in units of `2^-prec`.
    pub fn mid_raw(&self) -> &BigInt {
        &self.mid
    }

    /// Radius in units of `2^-prec`.
    pub fn rad_raw(&self) -> &BigInt {
        &self.rad
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn mid_ball(&self) -> Self {
        ArbReal { mid: self.mid.clone(), rad: BigInt::zero(), prec: self.prec }
    }

    fn scale(&self) -> BigInt {
        BigInt::one() << self.prec
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(&self.mid - &self.rad, self.scale())
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(&self.mid + &self.rad, self.scale())
    }

    pub fn mid(&self) -> BigRational {
        BigRational::new(self.mid.clone(), self.scale())
    }

    /// Upper bound on `|x|` over the ball.
    pub fn abs_upper(&self) -> BigRational {
        BigRational::new(self.mid.abs() + &self.rad, self.scale())
    }

    /// Lower bound on `|x|` over the ball (zero if the ball straddles zero).
    pub fn abs_lower(&self) -> BigRational {
        let m = self.mid.abs();
        if m <= self.rad {
            BigRational::zero()
        } else {
            BigRational::new(m - &self.rad, self.scale())
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lower() <= q && q <= &self.upper()
    }

    /// True when every point of the ball is strictly positive.
    pub fn is_positive(&self) -> bool {
        self.mid > self.rad
    }

    pub fn is_negative(&self) -> bool {
        -&self.mid > self.rad
    }

    pub fn to_f64(&self) -> f64 {
        shifted_to_f64(&self.mid, self.prec)
    }

    pub fn rad_f64(&self) -> f64 {
        shifted_to_f64(&self.rad, self.prec)
    }

    /// Re-express the ball at another precision, keeping containment.
    pub fn with_prec(&self, prec: u32) -> Self {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let k = prec - self.prec;
                ArbReal { mid: &self.mid << k, rad: &self.rad << k, prec }
            }
            Ordering::Less => {
                let k = self.prec - prec;
                let mid = round_shift(&self.mid, k);
                let rad = ceil_shift(&self.rad, k) + 1u32;
                ArbReal { mid, rad, prec }
            }
        }
    }

    /// Grow the radius by `extra` units.
    pub fn inflate(&self, extra: &BigInt) -> Self {
        ArbReal { mid: self.mid.clone(), rad: &self.rad + extra.abs(), prec: self.prec }
    }

    pub fn abs(&self) -> Self {
        if self.mid.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn square(&self) -> Self {
        // Tighter than x*x when the ball straddles zero.
        let prod = self * self;
        if self.contains_zero() {
            let hi = prod.upper();
            let hi_raw = ceil_div(&(hi.numer() << self.prec), hi.denom());
            let mid = &hi_raw / 2;
            let rad = &hi_raw - &mid;
            ArbReal { mid, rad, prec: self.prec }
        } else {
            prod
        }
    }

    /// Quotient ball, or `None` when the divisor contains zero.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        assert_eq!(self.prec, other.prec, "precision mismatch");
        let m2 = other.mid.abs();
        if m2 <= other.rad {
            return None;
        }
        let p = self.prec;
        let mid = round_div(&(&self.mid << p), &other.mid);
        // |x/y - m1/m2| <= (r1 |m2| + |m1| r2) / ((|m2| - r2) |m2|), scaled by 2^p
        let num = (&self.rad * &m2 + self.mid.abs() * &other.rad) << p;
        let den = (&m2 - &other.rad) * &m2;
        let rad = ceil_div(&num, &den) + 1u32;
        Some(ArbReal { mid, rad, prec: p })
    }

    /// Square root of the non-negative part of the ball.
    pub fn sqrt(&self) -> Self {
        let p = self.prec;
        let lo = &self.mid - &self.rad;
        let hi = &self.mid + &self.rad;
        assert!(!hi.is_negative(), "square root of a negative ball");
        let lo = if lo.is_negative() { BigInt::zero() } else { lo };
        let lo_s = (lo << p).sqrt();
        let hi_scaled: BigInt = hi << p;
        let mut hi_s = hi_scaled.sqrt();
        if &hi_s * &hi_s != hi_scaled {
            hi_s += 1u32;
        }
        let sum = &lo_s + &hi_s;
        let mid = &sum >> 1;
        let rad = &hi_s - &mid;
        let rad2 = &mid - &lo_s;
        ArbReal { mid, rad: rad.max(rad2), prec: p }
    }

    /// Multiply by `2^k`.
    pub fn mul_pow2(&self, k: u32) -> Self {
        ArbReal { mid: &self.mid << k, rad: &self.rad << k, prec: self.prec }
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        ArbReal { mid: &self.mid * n, rad: &self.rad * n.abs(), prec: self.prec }
    }
}

pub(crate) fn shifted_to_f64(x: &BigInt, prec: u32) -> f64 {
    let drop = x.bits().saturating_sub(64);
    let top = (x >> drop).to_f64().unwrap_or(f64::NAN);
    ldexp(top, drop as i64 - prec as i64)
}

fn ldexp(mut v: f64, mut e: i64) -> f64 {
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
    }
    v * 2f64.powi(e as i32)
}

impl fmt::Display for ArbReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e} +/- {:.3e}]", self.to_f64(), self.rad_f64())
    }
}

impl Neg for &ArbReal {
    type Output = ArbReal;
    fn neg(self) -> ArbReal {
        ArbReal { mid: -&self.mid, rad: self.rad.clone(), prec: self.prec }
    }
}

impl Neg for ArbReal {
    type Output = ArbReal;
    fn neg(self) -> ArbReal {
        ArbReal { mid: -self.mid, rad: self.rad, prec: self.prec }
    }
}

impl Add for &ArbReal {
    type Output = ArbReal;
    fn add(self, o: &ArbReal) -> ArbReal {
        assert_eq!(self.prec, o.prec, "precision mismatch");
        ArbReal { mid: &self.mid + &o.mid, rad: &self.rad + &o.rad, prec: self.prec }
    }
}

impl Sub for &ArbReal {
    type Output = ArbReal;
    fn sub(self, o: &ArbReal) -> ArbReal {
        assert_eq!(self.prec, o.prec, "precision mismatch");
        ArbReal { mid: &self.mid - &o.mid, rad: &self.rad + &o.rad, prec: self.prec }
    }
}

impl Mul for &ArbReal {
    type Output = ArbReal;
    fn mul(self, o: &ArbReal) -> ArbReal {
        assert_eq!(self.prec, o.prec, "precision mismatch");
        let p = self.prec;
        let full = &self.mid * &o.mid;
        let mid = round_shift(&full, p);
        let mut rad = BigInt::zero();
        if !self.rad.is_zero() || !o.rad.is_zero() {
            let err = self.mid.abs() * &o.rad + o.mid.abs() * &self.rad + &self.rad * &o.rad;
            rad = ceil_shift(&err, p);
        }
        // rounding of the midpoint
        if full.sign() != Sign::NoSign && p > 0 {
            rad += 1u32;
        }
        ArbReal { mid, rad, prec: p }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ArbReal {
            type Output = ArbReal;
            fn $m(self, o: ArbReal) -> ArbReal {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Complex ball with independent real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArbComplex {
    pub re: ArbReal,
    pub im: ArbReal,
}

impl ArbComplex {
    pub fn new(re: ArbReal, im: ArbReal) -> Self {
        assert_eq!(re.prec, im.prec, "precision mismatch");
        ArbComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        ArbComplex { re: ArbReal::zero(prec), im: ArbReal::zero(prec) }
    }

    pub fn from_real(re: ArbReal) -> Self {
        let p = re.prec;
        ArbComplex { re, im: ArbReal::zero(p) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec
    }

    pub fn conj(&self) -> Self {
        ArbComplex { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sq(&self) -> ArbReal {
        &self.re.square() + &self.im.square()
    }

    pub fn abs(&self) -> ArbReal {
        self.norm_sq().sqrt()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn is_exact(&self) -> bool {
        self.re.is_exact() && self.im.is_exact()
    }

    pub fn mid_ball(&self) -> Self {
        ArbComplex { re: self.re.mid_ball(), im: self.im.mid_ball() }
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        ArbComplex { re: self.re.with_prec(prec), im: self.im.with_prec(prec) }
    }

    /// Largest of the two component radii, as `f64`.
    pub fn rad_f64(&self) -> f64 {
        self.re.rad_f64().max(self.im.rad_f64())
    }

    /// Largest of the two component radii, in units of `2^-prec`.
    pub fn rad_raw(&self) -> BigInt {
        self.re.rad.clone().max(self.im.rad.clone())
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn checked_div(&self, o: &Self) -> Option<Self> {
        let den = o.norm_sq();
        if !den.is_positive() {
            return None;
        }
        let num = self * &o.conj();
        Some(ArbComplex { re: num.re.checked_div(&den)?, im: num.im.checked_div(&den)? })
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        ArbComplex { re: self.re.mul_int(n), im: self.im.mul_int(n) }
    }

    /// Widen both components so the ball covers a disk of radius `r` (rational) around the midpoint.
    pub fn inflate_rational(&self, r: &BigRational) -> Self {
        let p = self.prec();
        let ulps = ceil_div(&(r.numer() << p), r.denom());
        ArbComplex { re: self.re.inflate(&ulps), im: self.im.inflate(&ulps) }
    }
}

impl fmt::Display for ArbComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re, self.im)
    }
}

impl Add for &ArbComplex {
    type Output = ArbComplex;
    fn add(self, o: &ArbComplex) -> ArbComplex {
        ArbComplex { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &ArbComplex {
    type Output = ArbComplex;
    fn sub(self, o: &ArbComplex) -> ArbComplex {
        ArbComplex { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &ArbComplex {
    type Output = ArbComplex;
    fn mul(self, o: &ArbComplex) -> ArbComplex {
        let re = &(&self.re * &o.re) - &(&self.im * &o.im);
        let im = &(&self.re * &o.im) + &(&self.im * &o.re);
        ArbComplex { re, im }
    }
}

impl Neg for &ArbComplex {
    type Output = ArbComplex;
    fn neg(self) -> ArbComplex {
        ArbComplex { re: -&self.re, im: -&self.im }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn shift_rounds_toward_negative_infinity() {
        assert_eq!(BigInt::from(-3) >> 1u32, BigInt::from(-2));
        assert_eq!(round_shift(&BigInt::from(-3), 1), BigInt::from(-1));
        assert_eq!(round_shift(&BigInt::from(3), 1), BigInt::from(2));
    }

    #[test]
    fn thirds_contain_exact_values() {
        let third = ArbReal::from_ratio(&1.into(), &3.into(), 64);
        assert!(third.contains(&q(1, 3)));
        let one = &(&third + &third) + &third;
        assert!(one.contains(&q(1, 1)));
        let ninth = &third * &third;
        assert!(ninth.contains(&q(1, 9)));
        let back = ninth.checked_div(&third).unwrap();
        assert!(back.contains(&q(1, 3)));
    }

    #[test]
    fn sqrt_two_squared() {
        let s = ArbReal::sqrt_int(&2.into(), 128);
        let two = &s * &s;
        assert!(two.contains(&q(2, 1)));
        assert!(s.rad_f64() < 1e-37);
        let s2 = ArbReal::from_i64(2, 128).sqrt();
        assert!((s2.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!(s2.lower() * s2.lower() <= q(2, 1));
        assert!(s2.upper() * s2.upper() >= q(2, 1));
    }

    #[test]
    fn division_by_ball_with_zero_is_refused() {
        let x = ArbReal::from_i64(1, 32);
        let z = ArbReal::from_parts(BigInt::from(1), BigInt::from(2), 32);
        assert!(x.checked_div(&z).is_none());
        let neg = ArbReal::from_i64(-7, 32);
        let r = x.checked_div(&neg).unwrap();
        assert!(r.contains(&q(-1, 7)));
    }

    #[test]
    fn precision_change_keeps_containment() {
        let third = ArbReal::from_ratio(&1.into(), &3.into(), 200);
        let low = third.with_prec(40);
        assert!(low.contains(&q(1, 3)));
        let high = low.with_prec(300);
        assert!(high.contains(&q(1, 3)));
    }

    #[test]
    fn complex_product_of_i() {
        let p = 64;
        let i = ArbComplex::new(ArbReal::zero(p), ArbReal::from_i64(1, p));
        let m1 = &i * &i;
        assert!(m1.re.contains(&q(-1, 1)));
        assert!(m1.im.contains(&q(0, 1)));
        let inv = ArbComplex::from_real(ArbReal::from_i64(1, p)).checked_div(&i).unwrap();
        assert!(inv.im.contains(&q(-1, 1)));
        assert!(i.abs().contains(&q(1, 1)));
    }
}
