//! Fixed-width arithmetic for the enumeration hot loops.
//!
//! Values are `a + b*w` with `i128` coordinates. Every operation is checked and
//! returns `None` on overflow so callers can fall back to big integers.

use num_traits::ToPrimitive;

use crate::qfield::{IQField, IQInt, OmegaKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Small {
    pub a: i128,
    pub b: i128,
}

/// Multiplication table of a field: `w^2 = c0 + c1*w`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Ring {
    pub field: IQField,
    c0: i128,
    c1: i128,
}

impl Ring {
    pub fn new(field: IQField) -> Self {
        let d = field.d() as i128;
        let (c0, c1) = match field.kind() {
            OmegaKind::Half => (-(1 + d) / 4, 1),
            OmegaKind::Pure => (-d, 0),
        };
        Ring { field, c0, c1 }
    }

    pub fn mul(&self, x: Small, y: Small) -> Option<Small> {
        let ac = x.a.checked_mul(y.a)?;
        let bd = x.b.checked_mul(y.b)?;
        let ad = x.a.checked_mul(y.b)?;
        let bc = x.b.checked_mul(y.a)?;
        let a = ac.checked_add(bd.checked_mul(self.c0)?)?;
        let b = ad.checked_add(bc)?.checked_add(bd.checked_mul(self.c1)?)?;
        Some(Small { a, b })
    }

    pub fn add(&self, x: Small, y: Small) -> Option<Small> {
        Some(Small { a: x.a.checked_add(y.a)?, b: x.b.checked_add(y.b)? })
    }

    pub fn norm(&self, x: Small) -> Option<i128> {
        // N(a + b w) = a^2 + c1 a b - c0 b^2
        let aa = x.a.checked_mul(x.a)?;
        let ab = x.a.checked_mul(x.b)?.checked_mul(self.c1)?;
        let bb = x.b.checked_mul(x.b)?.checked_mul(self.c0)?;
        aa.checked_add(ab)?.checked_sub(bb)
    }

    pub fn is_unit(&self, x: Small) -> Option<bool> {
        Some(self.norm(x)? == 1)
    }

    pub fn to_big(&self, x: Small) -> IQInt {
        self.field.int(x.a, x.b)
    }

    pub fn from_big(&self, x: &IQInt) -> Option<Small> {
        Some(Small { a: x.a().to_i128()?, b: x.b().to_i128()? })
    }
}

/// Homogeneous form `sum_k g_k X^k Y^(n-k)` with fixed-width coefficients.
#[derive(Clone, Debug)]
pub(crate) struct SmallForm {
    pub ring: Ring,
    pub coeffs: Vec<Small>,
}

impl SmallForm {
    pub fn new(field: IQField, coeffs: &[IQInt]) -> Option<Self> {
        let ring = Ring::new(field);
        let coeffs = coeffs.iter().map(|c| ring.from_big(c)).collect::<Option<Vec<_>>>()?;
        Some(SmallForm { ring, coeffs })
    }

    pub fn value(&self, x: Small, y: Small) -> Option<Small> {
        let n = self.coeffs.len() - 1;
        let r = &self.ring;
        // Horner in X with Y powers: (((g_n X + g_{n-1} Y) X + g_{n-2} Y^2) X ...)
        let mut acc = self.coeffs[n];
        let mut ypow = Small { a: 1, b: 0 };
        for k in (0..n).rev() {
            ypow = r.mul(ypow, y)?;
            acc = r.add(r.mul(acc, x)?, r.mul(self.coeffs[k], ypow)?)?;
        }
        Some(acc)
    }
}
