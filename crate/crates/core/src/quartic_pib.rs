//! Generators `alpha = H + X*xi + Y*xi^2 + Z*xi^3` of relative power integral
//! bases of `K = L(xi)`, `xi^4 = m`, over an imaginary quadratic field `L`.
//!
//! If `alpha` is such a generator then `U = Q1(X, Y, Z)` and `V = Q2(X, Y, Z)`
//! satisfy `N_{K/L}(F(U, V)) = +-1`, which forces `V = 0` and `U` a unit.
//! These necessary conditions lead to `X = X0^2 e`, `Y = +-X0 Y0 e`,
//! `Z = Y0^2 e` for a unit `e` and a solution of `X0^4 - m Y0^4 = zeta`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::Serialize;

use crate::binomial::binomial_value;
use crate::error::{Error, Result};
use crate::qfield::{compare_tuples, IQField, IQInt};

/// `Q1 = X^2 - m Z^2`.
pub fn q1(x: &IQInt, _y: &IQInt, z: &IQInt, m: &BigInt) -> IQInt {
    &(x * x) - &(z * z).scale(m)
}

/// `Q2 = Y^2 - X Z`.
pub fn q2(x: &IQInt, y: &IQInt, z: &IQInt) -> IQInt {
    &(y * y) - &(x * z)
}

/// `F(U, V) = U (U^2 - 4 m V^2)`.
pub fn f_form(u: &IQInt, v: &IQInt, m: &BigInt) -> IQInt {
    let four_m = m * 4;
    u * &(&(u * u) - &(v * v).scale(&four_m))
}

/// One family of generators; `H` ranges over all of `Z_L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PIBGeneratorFamily {
    #[serde(rename = "X")]
    pub x: IQInt,
    #[serde(rename = "Y")]
    pub y: IQInt,
    #[serde(rename = "Z")]
    pub z: IQInt,
    pub epsilon0: IQInt,
    pub sign: i8,
    pub source_pair: (IQInt, IQInt),
    pub m: u64,
    pub d: u64,
}

impl PIBGeneratorFamily {
    pub fn coords(&self) -> [IQInt; 3] {
        [self.x.clone(), self.y.clone(), self.z.clone()]
    }
}

/// All families `(X0^2 e, s X0 Y0 e, Y0^2 e)` over units `e` and signs `s`,
/// with repeats removed (the sign has no effect when `X0 Y0 = 0`).
pub fn generators_from_pair(x0: &IQInt, y0: &IQInt, field: IQField, m: u64) -> Result<Vec<PIBGeneratorFamily>> {
    if x0.field() != field || y0.field() != field {
        return Err(Error::FieldMismatch);
    }
    if !binomial_value(m, x0, y0).is_unit() {
        return Err(Error::InvalidInstance(format!("({x0}, {y0}) does not solve X^4 - {m} Y^4 = unit")));
    }
    let xx = x0 * x0;
    let xy = x0 * y0;
    let yy = y0 * y0;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for e in field.units() {
        for sign in [1i8, -1] {
            let y = if sign > 0 { &xy * &e } else { -&(&xy * &e) };
            let fam = PIBGeneratorFamily {
                x: &xx * &e,
                y,
                z: &yy * &e,
                epsilon0: e.clone(),
                sign,
                source_pair: (x0.clone(), y0.clone()),
                m,
                d: field.d(),
            };
            if seen.insert(key(&fam.coords())) {
                out.push(fam);
            }
        }
    }
    Ok(out)
}

fn key(c: &[IQInt; 3]) -> Vec<(String, String)> {
    c.iter().map(|v| (v.a().to_string(), v.b().to_string())).collect()
}

/// Merge families related by `xi -> -xi`, which sends `(X, Y, Z)` to
/// `(-X, Y, -Z)`. Keeps the first member of each class, in input order.
pub fn dedup_families(fams: &[PIBGeneratorFamily]) -> Vec<PIBGeneratorFamily> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for f in fams {
        let c = f.coords();
        let conj = [-&c[0], c[1].clone(), -&c[2]];
        let rep = if compare_tuples(&c, &conj).is_le() { c } else { conj };
        if seen.insert(key(&rep)) {
            out.push(f.clone());
        }
    }
    out
}

/// The necessary conditions: `Q1(X, Y, Z)` is a unit and `Q2(X, Y, Z) = 0`.
pub fn verify_generator(x: &IQInt, y: &IQInt, z: &IQInt, m: &BigInt, field: IQField) -> bool {
    if [x, y, z].iter().any(|v| v.field() != field) {
        return false;
    }
    q1(x, y, z, m).is_unit() && q2(x, y, z).is_zero()
}
