//! Exact arithmetic in the ring of integers of an imaginary quadratic field.
//!
//! Elements are stored as `a + b*w` in the integral basis `{1, w}` where
//! `w = (1 + i*sqrt(d))/2` ("half" kind, used when `-d = 1 mod 4`) or
//! `w = i*sqrt(d)` ("pure" kind, `-d = 2, 3 mod 4`).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numerics::{ArbComplex, ArbReal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OmegaKind {
    /// `w = (1 + i*sqrt(d)) / 2`
    Half,
    /// `w = i*sqrt(d)`
    Pure,
}

/// An imaginary quadratic field `Q(i*sqrt(d))` with a fixed integral basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "FieldRepr", into = "FieldRepr")]
pub struct IQField {
    d: u64,
    kind: OmegaKind,
}

#[derive(Serialize, Deserialize)]
struct FieldRepr {
    d: u64,
    omega: OmegaKind,
}

impl TryFrom<FieldRepr> for IQField {
    type Error = Error;
    fn try_from(r: FieldRepr) -> Result<Self> {
        IQField::new(r.d, r.omega)
    }
}

impl From<IQField> for FieldRepr {
    fn from(f: IQField) -> Self {
        FieldRepr { d: f.d, omega: f.kind }
    }
}

fn is_squarefree(n: u64) -> bool {
    let mut k = 2u64;
    while k * k <= n {
        if n % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

impl IQField {
    pub fn new(d: u64, kind: OmegaKind) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidField("d must be positive".into()));
        }
        if !is_squarefree(d) {
            return Err(Error::InvalidField(format!("d = {d} is not square-free")));
        }
        // -d mod 4
        let r = (4 - d % 4) % 4;
        match kind {
            OmegaKind::Half if r != 1 => Err(Error::InvalidField(format!(
                "w = (1+i*sqrt({d}))/2 requires -d = 1 (mod 4)"
            ))),
            OmegaKind::Pure if r == 1 => Err(Error::InvalidField(format!(
                "w = i*sqrt({d}) is not an integral basis element when -d = 1 (mod 4)"
            ))),
            _ => Ok(IQField { d, kind }),
        }
    }

    /// The field with its standard integral basis.
    pub fn natural(d: u64) -> Result<Self> {
        let kind = if (4 - d % 4) % 4 == 1 { OmegaKind::Half } else { OmegaKind::Pure };
        Self::new(d, kind)
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn kind(&self) -> OmegaKind {
        self.kind
    }

    pub fn discriminant(&self) -> i64 {
        match self.kind {
            OmegaKind::Half => -(self.d as i64),
            OmegaKind::Pure => -4 * self.d as i64,
        }
    }

    /// `(c0, c1)` with `w^2 = c0 + c1*w`.
    fn omega_sq(&self) -> (BigInt, BigInt) {
        match self.kind {
            OmegaKind::Half => (-BigInt::from((1 + self.d) / 4), BigInt::one()),
            OmegaKind::Pure => (-BigInt::from(self.d), BigInt::zero()),
        }
    }

    pub fn int(&self, a: impl Into<BigInt>, b: impl Into<BigInt>) -> IQInt {
        IQInt { a: a.into(), b: b.into(), field: *self }
    }

    pub fn zero(&self) -> IQInt {
        self.int(0, 0)
    }

    pub fn one(&self) -> IQInt {
        self.int(1, 0)
    }

    pub fn omega(&self) -> IQInt {
        self.int(0, 1)
    }

    /// The full (torsion) unit group.
    pub fn units(&self) -> Vec<IQInt> {
        match (self.d, self.kind) {
            (3, OmegaKind::Half) => vec![
                self.int(1, 0),
                self.int(-1, 0),
                self.int(0, 1),
                self.int(0, -1),
                self.int(-1, 1),
                self.int(1, -1),
            ],
            (1, OmegaKind::Pure) => {
                vec![self.int(1, 0), self.int(-1, 0), self.int(0, 1), self.int(0, -1)]
            }
            _ => vec![self.int(1, 0), self.int(-1, 0)],
        }
    }

    /// `w` as a double-precision complex number.
    pub fn omega_c64(&self) -> num_complex::Complex64 {
        let s = (self.d as f64).sqrt();
        match self.kind {
            OmegaKind::Half => num_complex::Complex64::new(0.5, s / 2.0),
            OmegaKind::Pure => num_complex::Complex64::new(0.0, s),
        }
    }

    /// Ball around `w` at the given precision.
    pub fn omega_ball(&self, prec: u32) -> ArbComplex {
        let sq = ArbReal::sqrt_int(&BigInt::from(self.d), prec);
        match self.kind {
            OmegaKind::Half => {
                let half = ArbReal::from_ratio(&1.into(), &2.into(), prec);
                let im = sq.checked_div(&ArbReal::from_i64(2, prec)).expect("nonzero");
                ArbComplex::new(half, im)
            }
            OmegaKind::Pure => ArbComplex::new(ArbReal::zero(prec), sq),
        }
    }

    /// Nearest lattice element (in the `{1, w}` basis) to a complex number.
    pub fn nearest(&self, z: num_complex::Complex64) -> IQInt {
        let w = self.omega_c64();
        let b = (z.im / w.im).round();
        let a = (z.re - b * w.re).round();
        let base = self.int(a as i64, b as i64);
        // the basis is not orthogonal for the half kind: check neighbours
        let mut best = base.clone();
        let mut best_d = (base.to_c64() - z).norm_sqr();
        for da in -1i64..=1 {
            for db in -1i64..=1 {
                let c = self.int(a as i64 + da, b as i64 + db);
                let dist = (c.to_c64() - z).norm_sqr();
                if dist < best_d {
                    best_d = dist;
                    best = c;
                }
            }
        }
        best
    }

    /// Inclusive coordinate bounds `(|a| max, |b| max)` for elements of size at most `s`.
    pub fn size_to_coord_bounds(&self, s: &BigInt) -> (BigInt, BigInt) {
        assert!(s.is_positive(), "size bound must be positive");
        let d = BigInt::from(self.d);
        match self.kind {
            OmegaKind::Half => {
                // Im = b*sqrt(d)/2, Re = a + b/2
                let bb: BigInt = (BigInt::from(4) * s * s / &d).sqrt();
                let aa = s + (&bb >> 1u32);
                (aa, bb)
            }
            OmegaKind::Pure => {
                let bb: BigInt = (s * s / &d).sqrt();
                (s.clone(), bb)
            }
        }
    }

    /// Parse `a+b*w` style text into an element of this field.
    pub fn parse_int(&self, text: &str) -> Result<IQInt> {
        parse_linear(self, text)
    }
}

impl fmt::Display for IQField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            OmegaKind::Half => write!(f, "Q(sqrt(-{})), w=(1+i*sqrt({}))/2", self.d, self.d),
            OmegaKind::Pure => write!(f, "Q(sqrt(-{})), w=i*sqrt({})", self.d, self.d),
        }
    }
}

/// An integer `a + b*w` of an imaginary quadratic field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IQInt {
    a: BigInt,
    b: BigInt,
    field: IQField,
}

impl IQInt {
    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn field(&self) -> IQField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// True when the element lies in `Z`.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn checked_mul(&self, o: &IQInt) -> Result<IQInt> {
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        let (c0, c1) = self.field.omega_sq();
        let bb = &self.b * &o.b;
        let a = &self.a * &o.a + &bb * c0;
        let b = &self.a * &o.b + &self.b * &o.a + &bb * c1;
        Ok(IQInt { a, b, field: self.field })
    }

    pub fn checked_add(&self, o: &IQInt) -> Result<IQInt> {
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        Ok(IQInt { a: &self.a + &o.a, b: &self.b + &o.b, field: self.field })
    }

    pub fn checked_sub(&self, o: &IQInt) -> Result<IQInt> {
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        Ok(IQInt { a: &self.a - &o.a, b: &self.b - &o.b, field: self.field })
    }

    pub fn scale(&self, k: &BigInt) -> IQInt {
        IQInt { a: &self.a * k, b: &self.b * k, field: self.field }
    }

    pub fn pow(&self, mut e: u32) -> IQInt {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn conj(&self) -> IQInt {
        match self.field.kind {
            OmegaKind::Half => IQInt { a: &self.a + &self.b, b: -&self.b, field: self.field },
            OmegaKind::Pure => IQInt { a: self.a.clone(), b: -&self.b, field: self.field },
        }
    }

    /// Absolute norm `x * conj(x)`.
    pub fn norm(&self) -> BigInt {
        let d = BigInt::from(self.field.d);
        match self.field.kind {
            OmegaKind::Half => {
                &self.a * &self.a + &self.a * &self.b + &self.b * &self.b * ((d + 1) / 4)
            }
            OmegaKind::Pure => &self.a * &self.a + d * &self.b * &self.b,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// `q` with `self = q * y`, if it exists in the ring.
    pub fn exact_div(&self, y: &IQInt) -> Result<Option<IQInt>> {
        if self.field != y.field {
            return Err(Error::FieldMismatch);
        }
        if y.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = y.norm();
        let t = self * &y.conj();
        let (qa, ra) = t.a.div_rem(&n);
        if !ra.is_zero() {
            return Ok(None);
        }
        let (qb, rb) = t.b.div_rem(&n);
        if !rb.is_zero() {
            return Ok(None);
        }
        Ok(Some(IQInt { a: qa, b: qb, field: self.field }))
    }

    /// Complex ball containing the embedding `a + b*w`.
    pub fn embed(&self, prec: u32) -> ArbComplex {
        assert!(prec >= 64, "precision must be at least 64 bits");
        if self.b.is_zero() {
            return ArbComplex::from_real(ArbReal::from_int(&self.a, prec));
        }
        let w = self.field.omega_ball(prec);
        let re_a = ArbReal::from_int(&self.a, prec);
        let re = &re_a + &w.re.mul_int(&self.b);
        let im = w.im.mul_int(&self.b);
        ArbComplex::new(re, im)
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        let w = self.field.omega_c64();
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        num_complex::Complex64::new(a + b * w.re, b * w.im)
    }

    /// Size (complex modulus) as a ball: `sqrt(norm)`.
    pub fn size(&self, prec: u32) -> ArbReal {
        ArbReal::sqrt_int(&self.norm(), prec)
    }

    pub fn size_f64(&self) -> f64 {
        self.norm().to_f64().unwrap_or(f64::INFINITY).sqrt()
    }

    /// Largest absolute coordinate.
    pub fn max_coord(&self) -> BigInt {
        self.a.abs().max(self.b.abs())
    }
}

/// Ordering of integers by `(|v|, sign)` with non-negative first.
fn coord_cmp(x: &BigInt, y: &BigInt) -> Ordering {
    x.abs().cmp(&y.abs()).then_with(|| x.is_negative().cmp(&y.is_negative()))
}

fn tuple_cmp(x: &[IQInt], y: &[IQInt]) -> Ordering {
    for (u, v) in x.iter().zip(y) {
        let o = u
            .b
            .abs()
            .cmp(&v.b.abs())
            .then_with(|| coord_cmp(&u.a, &v.a))
            .then_with(|| coord_cmp(&u.b, &v.b));
        if o != Ordering::Equal {
            return o;
        }
    }
    x.len().cmp(&y.len())
}

/// Canonical representative of the orbit `{(e*x1, e*x2, ...) : e torsion unit}`.
///
/// Elements are compared in order, each by `|b|`, then `a`, then `b`, where
/// integers are ordered by absolute value and non-negative values come first.
pub fn canonical_tuple(elems: &[IQInt]) -> Vec<IQInt> {
    assert!(!elems.is_empty());
    let field = elems[0].field;
    let mut best: Option<Vec<IQInt>> = None;
    for u in field.units() {
        let cand: Vec<IQInt> = elems.iter().map(|e| &u * e).collect();
        best = match best {
            Some(b) if tuple_cmp(&b, &cand) != Ordering::Greater => Some(b),
            _ => Some(cand),
        };
    }
    best.expect("unit group is non-empty")
}

/// Total order used for sorting canonical tuples in reports.
pub fn compare_tuples(x: &[IQInt], y: &[IQInt]) -> Ordering {
    tuple_cmp(x, y)
}

impl fmt::Display for IQInt {
    /// Renders as `a+b*w`, omitting zero parts and unit coefficients.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        if !self.a.is_zero() || self.b.is_zero() {
            out.push_str(&self.a.to_string());
        }
        if !self.b.is_zero() {
            let neg = self.b.is_negative();
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let mag = self.b.abs();
            if !mag.is_one() {
                out.push_str(&mag.to_string());
                out.push('*');
            }
            out.push('w');
        }
        f.write_str(&out)
    }
}

impl Serialize for IQInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.a.to_string(), self.b.to_string()].serialize(s)
    }
}

/// Coordinates `[a, b]` as they appear in JSON, before a field is attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coords(pub BigInt, pub BigInt);

impl<'de> Deserialize<'de> for Coords {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Num {
            Int(i64),
            Str(String),
        }
        let [a, b]: [Num; 2] = Deserialize::deserialize(d)?;
        let conv = |n: Num| -> std::result::Result<BigInt, D::Error> {
            match n {
                Num::Int(v) => Ok(BigInt::from(v)),
                Num::Str(s) => BigInt::from_str(s.trim()).map_err(serde::de::Error::custom),
            }
        };
        Ok(Coords(conv(a)?, conv(b)?))
    }
}

impl Serialize for Coords {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.0.to_string(), self.1.to_string()].serialize(s)
    }
}

impl Coords {
    pub fn into_int(self, field: IQField) -> IQInt {
        field.int(self.0, self.1)
    }
}

/// Parse a linear expression in `w` with integer coefficients, e.g. `-2*w+1`.
fn parse_linear(field: &IQField, text: &str) -> Result<IQInt> {
    let s: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::parse(0, "empty element"));
    }
    let mut i = 0;
    let mut a = BigInt::zero();
    let mut b = BigInt::zero();
    let mut end = s.len();
    if s.first() == Some(&'(') && s.last() == Some(&')') {
        i = 1;
        end -= 1;
    }
    let mut first = true;
    while i < end {
        let mut sign = 1i32;
        if s[i] == '+' || s[i] == '-' {
            if s[i] == '-' {
                sign = -1;
            }
            i += 1;
        } else if !first {
            return Err(Error::parse(i, format!("expected '+' or '-', found '{}'", s[i])));
        }
        first = false;
        let digits_start = i;
        while i < end && s[i].is_ascii_digit() {
            i += 1;
        }
        let coeff = if i > digits_start {
            let txt: String = s[digits_start..i].iter().collect();
            Some(BigInt::from_str(&txt).expect("digits"))
        } else {
            None
        };
        let is_w = if i < end && s[i] == '*' {
            i += 1;
            if i < end && s[i] == 'w' {
                i += 1;
                true
            } else {
                return Err(Error::parse(i, "expected 'w' after '*'"));
            }
        } else if i < end && s[i] == 'w' {
            i += 1;
            true
        } else {
            false
        };
        let c = match (coeff, is_w) {
            (Some(c), _) => c,
            (None, true) => BigInt::one(),
            (None, false) => return Err(Error::parse(i, "expected an integer or 'w'")),
        };
        let c = if sign < 0 { -c } else { c };
        if is_w {
            b += c;
        } else {
            a += c;
        }
    }
    Ok(field.int(a, b))
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr for &IQInt {
            type Output = IQInt;
            fn $m(self, o: &IQInt) -> IQInt {
                self.$checked(o).expect("operands must share a field")
            }
        }
        impl $tr for IQInt {
            type Output = IQInt;
            fn $m(self, o: IQInt) -> IQInt {
                (&self).$checked(&o).expect("operands must share a field")
            }
        }
    };
}
binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &IQInt {
    type Output = IQInt;
    fn neg(self) -> IQInt {
        IQInt { a: -&self.a, b: -&self.b, field: self.field }
    }
}

impl Neg for IQInt {
    type Output = IQInt;
    fn neg(self) -> IQInt {
        IQInt { a: -self.a, b: -self.b, field: self.field }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn f(d: u64) -> IQField {
        IQField::natural(d).unwrap()
    }

    #[test]
    fn field_validation() {
        assert!(IQField::new(3, OmegaKind::Half).is_ok());
        assert!(IQField::new(3, OmegaKind::Pure).is_err());
        assert!(IQField::new(2, OmegaKind::Half).is_err());
        assert!(IQField::new(12, OmegaKind::Pure).is_err());
        assert_eq!(f(1).kind(), OmegaKind::Pure);
        assert_eq!(f(163).discriminant(), -163);
        assert_eq!(f(2).discriminant(), -8);
    }

    #[test]
    fn omega_squares() {
        let k = f(3);
        assert_eq!(&k.omega() * &k.omega(), k.int(-1, 1));
        let k2 = f(2);
        assert_eq!(&k2.omega() * &k2.omega(), k2.int(-2, 0));
    }

    #[test]
    fn fourth_power_of_two_minus_omega() {
        // oracle: complex floating evaluation
        let k = f(3);
        let x = k.int(2, -1);
        let p = x.pow(4);
        assert_eq!(p, k.int(0, -9));
        let z = x.to_c64().powi(4);
        let w = p.to_c64();
        assert!((z - w).norm() < 1e-9);
    }

    #[test]
    fn norms() {
        let k = f(3);
        assert_eq!(k.int(1, 1).norm(), BigInt::from(3));
        assert_eq!(k.int(-1, 0).norm(), BigInt::from(1));
        assert_eq!(f(163).int(-1, 2).norm(), BigInt::from(163));
        assert!((k.int(1, 1).to_c64().norm_sqr() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn unit_groups() {
        assert_eq!(f(7).units().len(), 2);
        let u3 = f(3).units();
        assert_eq!(u3.len(), 6);
        assert!(u3.iter().all(|u| u.is_unit()));
        let g = f(1).units();
        assert_eq!(g, vec![f(1).int(1, 0), f(1).int(-1, 0), f(1).int(0, 1), f(1).int(0, -1)]);
        assert!(f(3).int(-1, 1).is_unit());
        assert!(!f(7).omega().is_unit());
        assert!(!f(7).zero().is_unit());
    }

    #[test]
    fn units_are_exactly_the_norm_one_elements() {
        for d in [1u64, 2, 3, 7, 11, 19, 43, 67, 163] {
            let k = f(d);
            let mut found = Vec::new();
            for a in -2..=2 {
                for b in -2..=2 {
                    let x = k.int(a, b);
                    if x.norm().is_one() {
                        found.push(x);
                    }
                }
            }
            let mut units = k.units();
            let key = |x: &IQInt| (x.a.clone(), x.b.clone());
            units.sort_by_key(key);
            found.sort_by_key(key);
            assert_eq!(units, found, "d = {d}");
        }
    }

    #[test]
    fn exact_division() {
        let k = f(3);
        assert_eq!(k.int(3, 3).exact_div(&k.int(1, 1)).unwrap(), Some(k.int(3, 0)));
        let k7 = f(7);
        assert_eq!(k7.one().exact_div(&k7.omega()).unwrap(), None);
        let big = &k.int(2, -1).pow(4) - &k.omega();
        assert_eq!(big.exact_div(&k.one()).unwrap(), Some(big.clone()));
        assert_eq!(k.one().exact_div(&k.zero()), Err(Error::DivisionByZero));
        assert_eq!(k.one().exact_div(&k7.one()), Err(Error::FieldMismatch));
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        assert_eq!(f(3).one().checked_mul(&f(7).one()), Err(Error::FieldMismatch));
    }

    #[test]
    fn embeddings() {
        let w = f(3).omega().embed(128);
        assert!((w.re.to_f64() - 0.5).abs() < 1e-15);
        assert!((w.im.to_f64() - 0.8660254037844386).abs() < 1e-15);
        assert!(w.rad_f64() < 1e-36);
        let z = f(3).zero().embed(200);
        assert!(z.is_exact() && z.re.to_f64() == 0.0);
        let w2 = f(2).omega().embed(128);
        assert!((w2.im.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!(w2.re.contains(&BigRational::zero()));
    }

    #[test]
    fn sizes() {
        let s = f(3).int(2, -1).size(128);
        assert!((s.to_f64() - 3f64.sqrt()).abs() < 1e-15);
        for d in [3u64, 7, 2] {
            assert!(f(d).int(-1, 0).size(64).contains(&BigRational::one()));
        }
    }

    #[test]
    fn coordinate_box_example() {
        let (a, b) = f(3).size_to_coord_bounds(&BigInt::from(10));
        assert_eq!(b, BigInt::from(11));
        assert_eq!(a, BigInt::from(15));
    }

    #[test]
    fn coordinate_box_is_sound() {
        // exhaustive scan of a much larger box
        for d in [1u64, 2, 3, 7, 11, 19, 163] {
            let k = f(d);
            for s in [5i64, 10, 20] {
                let (ba, bb) = k.size_to_coord_bounds(&BigInt::from(s));
                for a in -3 * s..=3 * s {
                    for b in -3 * s..=3 * s {
                        let x = k.int(a, b);
                        if x.norm() <= BigInt::from(s * s) {
                            assert!(x.a.abs() <= ba && x.b.abs() <= bb, "d={d} s={s} x={x}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn text_forms() {
        let k = f(3);
        for (txt, a, b) in [
            ("1-2*w", 1, -2),
            ("-2*w+1", 1, -2),
            ("w", 0, 1),
            ("-w", 0, -1),
            ("3", 3, 0),
            ("(1+4*w)", 1, 4),
            ("0", 0, 0),
            ("2w", 0, 2),
        ] {
            assert_eq!(k.parse_int(txt).unwrap(), k.int(a, b), "{txt}");
        }
        assert_eq!(k.int(1, -2).to_string(), "1-2*w");
        assert_eq!(k.int(0, -1).to_string(), "-w");
        assert_eq!(k.int(0, 0).to_string(), "0");
        assert_eq!(k.int(-3, 2).to_string(), "-3+2*w");
        assert!(k.parse_int("1+x").is_err());
        assert!(k.parse_int("").is_err());
    }

    #[test]
    fn json_forms() {
        let k = f(3);
        let x = k.int(BigInt::from(10).pow(30), -7);
        let js = serde_json::to_string(&x).unwrap();
        assert_eq!(js, "[\"1000000000000000000000000000000\",\"-7\"]");
        let c: Coords = serde_json::from_str(&js).unwrap();
        assert_eq!(c.into_int(k), x);
        let c2: Coords = serde_json::from_str("[1, -2]").unwrap();
        assert_eq!(c2.into_int(k), k.int(1, -2));
        let fj = serde_json::to_string(&k).unwrap();
        assert_eq!(fj, r#"{"d":3,"omega":"half"}"#);
        assert!(serde_json::from_str::<IQField>(r#"{"d":3,"omega":"pure"}"#).is_err());
    }

    #[test]
    fn canonical_orbit_representative() {
        let k = f(3);
        let orbit: Vec<Vec<IQInt>> =
            k.units().iter().map(|u| vec![u * &k.int(3, 0), u * &k.int(2, 0)]).collect();
        let reps: Vec<_> = orbit.iter().map(|t| canonical_tuple(t)).collect();
        assert!(reps.iter().all(|r| r == &reps[0]));
        assert_eq!(reps[0], vec![k.int(3, 0), k.int(2, 0)]);
        assert_eq!(canonical_tuple(&[k.int(-1, 0), k.zero()]), vec![k.one(), k.zero()]);
    }

    #[test]
    fn nearest_point() {
        let k = f(3);
        let x = k.int(5, -7);
        let z = x.to_c64() + num_complex::Complex64::new(0.1, -0.2);
        assert_eq!(k.nearest(z), x);
    }
}
