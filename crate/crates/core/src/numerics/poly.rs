use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ball::ArbComplex;
use crate::error::{Error, Result};
use crate::linalg::bareiss_det;
use crate::qfield::{IQField, IQInt};

/// Monic polynomial with coefficients in the ring of integers of an imaginary
/// quadratic field. Coefficients are stored in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelPoly {
    coeffs: Vec<IQInt>,
    field: IQField,
}

impl RelPoly {
    pub fn new(coeffs: Vec<IQInt>) -> Result<Self> {
        let Some(lead) = coeffs.last() else {
            return Err(Error::DegeneratePolynomial("empty coefficient list".into()));
        };
        let field = lead.field();
        if coeffs.iter().any(|c| c.field() != field) {
            return Err(Error::FieldMismatch);
        }
        if !lead.is_one() {
            return Err(Error::DegeneratePolynomial("polynomial must be monic".into()));
        }
        if coeffs.len() < 3 {
            return Err(Error::DegeneratePolynomial("degree must be at least 2".into()));
        }
        Ok(RelPoly { coeffs, field })
    }

    /// `z^n - m` over the given field.
    pub fn binomial(field: IQField, n: usize, m: &BigInt) -> Result<Self> {
        let mut c = vec![field.zero(); n + 1];
        c[0] = field.int(-m.clone(), 0);
        c[n] = field.one();
        Self::new(c)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[IQInt] {
        &self.coeffs
    }

    pub fn field(&self) -> IQField {
        self.field
    }

    pub fn eval_exact(&self, z: &IQInt) -> IQInt {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    /// Horner evaluation in ball arithmetic.
    pub fn eval(&self, z: &ArbComplex) -> ArbComplex {
        eval_coeffs(&self.coeffs, z)
    }

    pub fn derivative_coeffs(&self) -> Vec<IQInt> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&BigInt::from(k)))
            .collect()
    }

    pub fn eval_derivative(&self, z: &ArbComplex) -> ArbComplex {
        eval_coeffs(&self.derivative_coeffs(), z)
    }

    pub fn eval_c64(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_c64();
        }
        acc
    }

    /// `p(z + s)`.
    pub fn taylor_shift(&self, s: &IQInt) -> RelPoly {
        // Horner with polynomial accumulator
        let mut acc: Vec<IQInt> = vec![self.field.zero()];
        for c in self.coeffs.iter().rev() {
            // acc <- acc * (z + s) + c
            let mut next = vec![self.field.zero(); acc.len() + 1];
            for (k, a) in acc.iter().enumerate() {
                next[k + 1] = &next[k + 1] + a;
                next[k] = &next[k] + &(a * s);
            }
            next[0] = &next[0] + c;
            acc = next;
        }
        while acc.len() > 1 && acc.last().is_some_and(|c| c.is_zero()) {
            acc.pop();
        }
        RelPoly { coeffs: acc, field: self.field }
    }

    /// Homogenised value `sum_k g_k X^k Y^(n-k)`, i.e. `Y^n g(X/Y)`.
    pub fn homogeneous_value(&self, x: &IQInt, y: &IQInt) -> IQInt {
        let n = self.degree();
        let mut xp = Vec::with_capacity(n + 1);
        let mut yp = Vec::with_capacity(n + 1);
        xp.push(self.field.one());
        yp.push(self.field.one());
        for k in 1..=n {
            xp.push(&xp[k - 1] * x);
            yp.push(&yp[k - 1] * y);
        }
        let mut acc = self.field.zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &(&(c * &xp[k]) * &yp[n - k]);
            }
        }
        acc
    }

    /// Exact discriminant `(-1)^(n(n-1)/2) Res(p, p')` (monic `p`).
    pub fn discriminant(&self) -> IQInt {
        let n = self.degree();
        let r = resultant(&self.coeffs, &self.derivative_coeffs());
        if (n * (n - 1) / 2) % 2 == 1 {
            -r
        } else {
            r
        }
    }

    pub fn is_squarefree(&self) -> bool {
        !self.discriminant().is_zero()
    }

    pub fn display_in(&self, var: char) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            let (sign, body) = coeff_text(c, k == 0);
            if out.is_empty() {
                if sign == '-' {
                    out.push('-');
                }
            } else {
                out.push(sign);
            }
            match (body.as_str(), mono.is_empty()) {
                ("", true) => out.push('1'),
                ("", false) => out.push_str(&mono),
                (b, true) => out.push_str(b),
                (b, false) => {
                    out.push_str(b);
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Sign and magnitude text for a coefficient; empty body means a unit coefficient `1`.
fn coeff_text(c: &IQInt, constant: bool) -> (char, String) {
    let (a, b) = (c.a(), c.b());
    if b.is_zero() {
        let sign = if a.is_negative() { '-' } else { '+' };
        let m = a.abs();
        if m.is_one() && !constant {
            return (sign, String::new());
        }
        return (sign, m.to_string());
    }
    if a.is_zero() {
        let sign = if b.is_negative() { '-' } else { '+' };
        let m = b.abs();
        return (sign, if m.is_one() { "w".into() } else { format!("{m}*w") });
    }
    ('+', format!("({c})"))
}

impl fmt::Display for RelPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in('z'))
    }
}

pub(crate) fn eval_coeffs(coeffs: &[IQInt], z: &ArbComplex) -> ArbComplex {
    let p = z.prec();
    let mut acc = ArbComplex::zero(p);
    for c in coeffs.iter().rev() {
        acc = &(&acc * z) + &c.embed(p);
    }
    acc
}

/// Resultant of two polynomials (ascending coefficients, non-zero leading terms)
/// via the Sylvester determinant.
pub fn resultant(p: &[IQInt], q: &[IQInt]) -> IQInt {
    assert!(!p.is_empty() && !q.is_empty());
    let field = p[0].field();
    let m = p.len() - 1;
    let n = q.len() - 1;
    if m == 0 && n == 0 {
        return field.one();
    }
    if m == 0 {
        return p[0].pow(n as u32);
    }
    if n == 0 {
        return q[0].pow(m as u32);
    }
    let size = m + n;
    let mut rows = vec![vec![field.zero(); size]; size];
    for i in 0..n {
        for (k, c) in p.iter().rev().enumerate() {
            rows[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in q.iter().rev().enumerate() {
            rows[n + i][i + k] = c.clone();
        }
    }
    bareiss_det(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn k(d: u64) -> IQField {
        IQField::natural(d).unwrap()
    }

    fn poly(f: IQField, c: &[(i64, i64)]) -> RelPoly {
        RelPoly::new(c.iter().map(|&(a, b)| f.int(a, b)).collect()).unwrap()
    }

    /// f = z^3 - (1+i) z^2 + 5i z - (1+4i) over Q(i).
    fn sextic_f() -> RelPoly {
        poly(k(1), &[(-1, -4), (0, 5), (-1, -1), (1, 0)])
    }

    #[test]
    fn construction_rules() {
        let f = k(3);
        assert!(RelPoly::new(vec![f.one(), f.one()]).is_err());
        assert!(RelPoly::new(vec![f.one(), f.one(), f.int(2, 0)]).is_err());
        assert!(RelPoly::new(vec![]).is_err());
        assert!(RelPoly::new(vec![f.one(), k(7).one(), f.one()]).is_err());
    }

    #[test]
    fn resultant_of_linear_factor_is_evaluation() {
        let f = k(3);
        let g = poly(f, &[(-2, 0), (0, 0), (0, 0), (0, 0), (1, 0)]);
        // Res(g, X - zY) = g-homogenised at (X, Y) for monic g
        let x = f.int(3, 1);
        let y = f.int(-1, 2);
        let lin = vec![x.clone(), -&y];
        let r = resultant(g.coeffs(), &lin);
        assert_eq!(r, g.homogeneous_value(&x, &y));
        let direct = &x.pow(4) - &y.pow(4).scale(&BigInt::from(2));
        assert_eq!(r, direct);
    }

    #[test]
    fn discriminants() {
        let f = k(3);
        // disc(z^2 - 2) = 8, disc(z^3 - 1) = -27
        assert_eq!(poly(f, &[(-2, 0), (0, 0), (1, 0)]).discriminant(), f.int(8, 0));
        assert_eq!(poly(f, &[(-1, 0), (0, 0), (0, 0), (1, 0)]).discriminant(), f.int(-27, 0));
        // (z-1)^2 (z+2)
        let sq = poly(f, &[(2, 0), (-3, 0), (0, 0), (1, 0)]);
        assert!(!sq.is_squarefree());
    }

    #[test]
    fn taylor_shift_identity() {
        let f = sextic_f();
        let s = k(1).int(1, 1);
        let g = f.taylor_shift(&s);
        assert_eq!(g.degree(), 3);
        assert_eq!(g.eval_exact(&-&s), f.coeffs()[0].clone());
        for t in [k(1).int(2, -1), k(1).int(0, 3)] {
            assert_eq!(g.eval_exact(&t), f.eval_exact(&(&t + &s)));
        }
    }

    #[test]
    fn ball_evaluation() {
        let f = k(3);
        let g = poly(f, &[(-2, 0), (0, 0), (0, 0), (0, 0), (1, 0)]);
        let v = g.eval(&ArbComplex::zero(128));
        assert!((v.re.to_f64() + 2.0).abs() < 1e-30);
        let c = poly(f, &[(-1, 0), (0, 0), (0, 0), (1, 0)]);
        let one = f.one().embed(128);
        assert!(c.eval(&one).contains_zero());
    }

    #[test]
    fn sextic_value_at_one_minus_half_i() {
        // oracle: exact rational complex arithmetic, f(1 - i/2) = -i/8
        let f = sextic_f();
        let z = Complex64::new(1.0, -0.5);
        let v = f.eval_c64(z);
        assert!((v - Complex64::new(0.0, -0.125)).norm() < 1e-12);
        let zb = ArbComplex::new(
            crate::numerics::ArbReal::from_i64(1, 128),
            crate::numerics::ArbReal::from_ratio(&(-1).into(), &2.into(), 128),
        );
        let vb = f.eval(&zb);
        let eighth = num_rational::BigRational::new((-1).into(), 8.into());
        assert!(vb.im.contains(&eighth));
        assert!(vb.re.contains_zero());
    }

    #[test]
    fn display() {
        assert_eq!(sextic_f().display_in('x'), "x^3+(-1-w)*x^2+5*w*x+(-1-4*w)");
        let f = k(3);
        assert_eq!(poly(f, &[(-2, 0), (0, 0), (0, 0), (0, 0), (1, 0)]).to_string(), "z^4-2");
        assert_eq!(poly(f, &[(1, 0), (-1, 0), (0, 0), (1, 0)]).display_in('x'), "x^3-x+1");
    }
}
