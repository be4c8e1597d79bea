//! Fraction-free determinants over exact integral domains.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::qfield::IQInt;

/// Minimal ring interface needed by Bareiss elimination.
pub trait ExactDomain: Clone {
    fn is_zero_elem(&self) -> bool;
    fn mul_elem(&self, o: &Self) -> Self;
    fn sub_elem(&self, o: &Self) -> Self;
    fn neg_elem(&self) -> Self;
    /// Division known to be exact.
    fn exact_quo(&self, o: &Self) -> Self;
}

impl ExactDomain for BigInt {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn mul_elem(&self, o: &Self) -> Self {
        self * o
    }
    fn sub_elem(&self, o: &Self) -> Self {
        self - o
    }
    fn neg_elem(&self) -> Self {
        -self
    }
    fn exact_quo(&self, o: &Self) -> Self {
        debug_assert!((self % o).is_zero());
        self / o
    }
}

impl ExactDomain for IQInt {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn mul_elem(&self, o: &Self) -> Self {
        self * o
    }
    fn sub_elem(&self, o: &Self) -> Self {
        self - o
    }
    fn neg_elem(&self) -> Self {
        -self
    }
    fn exact_quo(&self, o: &Self) -> Self {
        self.exact_div(o)
            .expect("same field, nonzero divisor")
            .expect("Bareiss quotient is exact")
    }
}

/// Determinant of a non-empty square matrix by Bareiss elimination.
pub fn bareiss_det<T: ExactDomain>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n), "square non-empty matrix expected");
    let mut negate = false;
    let mut prev: Option<T> = None;
    for k in 0..n {
        if m[k][k].is_zero_elem() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero_elem()) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return m[k][k].clone(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].mul_elem(&m[k][k]).sub_elem(&m[i][k].mul_elem(&m[k][j]));
                m[i][j] = match &prev {
                    Some(p) => t.exact_quo(p),
                    None => t,
                };
            }
        }
        prev = Some(m[k][k].clone());
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        det.neg_elem()
    } else {
        det
    }
}
