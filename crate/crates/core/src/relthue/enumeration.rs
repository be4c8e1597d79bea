//! Phase two: list every solution in a small coordinate box.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};

use super::constants::{from_roots, RootData};
use super::{RelThueEquation, SearchConfig, SolutionPair};
use crate::error::{Error, Result};
use crate::qfield::IQInt;
use crate::smallint::{Small, SmallForm};

/// All solutions with `|x1|, |y1|, |x2|, |y2| <= b_r`, as canonical orbit
/// representatives in sorted order. Refuses boxes larger than `enum_cap`.
pub fn enumerate(eq: &RelThueEquation, b_r: &BigInt, config: &SearchConfig) -> Result<Vec<SolutionPair>> {
    if b_r > &BigInt::from(config.enum_cap) {
        return Err(Error::EnumerationCap { bound: b_r.to_string(), cap: config.enum_cap });
    }
    if b_r.is_negative() {
        return Ok(Vec::new());
    }
    let bound = b_r.to_i64().expect("bounded by enum_cap");
    let data = RootData::compute(eq, config.precision.min(256).max(128))?;
    let consts = from_roots(&data);
    let roots: Vec<Complex64> = data.roots.iter().map(|r| r.to_c64()).collect();
    let c2 = consts.c2_f64.iter().cloned().fold(0.0, f64::max);
    let field = eq.field();
    let w = field.omega_c64();
    let n = eq.degree() as i32;
    let mut hits = Collector::new(eq);
    hits.add_units();

    // (X, Y) and (-X, -Y) are in the same orbit: take Y in a half-plane.
    for x2 in 0..=bound {
        for y2 in -bound..=bound {
            if x2 == 0 && y2 <= 0 {
                continue;
            }
            let y = Small { a: x2 as i128, b: y2 as i128 };
            let yc = Complex64::new(x2 as f64, 0.0) + w * y2 as f64;
            let size = yc.norm();
            let radius = (c2 / size.powi(n - 1) * (1.0 + 1e-9)).max(2.0);
            for rho in &roots {
                let z = rho * yc;
                for_each_point_in_disk(w, z, radius, bound, |a, b| hits.check(Small { a, b }, y));
            }
        }
    }
    Ok(hits.finish())
}

/// Exact solution test with canonical, de-duplicated output.
pub(super) struct Collector<'a> {
    eq: &'a RelThueEquation,
    form: Option<SmallForm>,
    found: BTreeSet<SolutionPair>,
}

impl<'a> Collector<'a> {
    pub(super) fn new(eq: &'a RelThueEquation) -> Self {
        let form = SmallForm::new(eq.field(), eq.poly().coeffs());
        Collector { eq, form, found: BTreeSet::new() }
    }

    /// The pairs `(e, 0)` for torsion units `e`.
    pub(super) fn add_units(&mut self) {
        for u in self.eq.field().units() {
            let x = Small { a: u.a().to_i128().expect("unit"), b: u.b().to_i128().expect("unit") };
            self.check(x, Small { a: 0, b: 0 });
        }
    }

    pub(super) fn check(&mut self, x: Small, y: Small) {
        let exact = self.form.as_ref().and_then(|f| f.value(x, y).and_then(|v| f.ring.is_unit(v)));
        let field = self.eq.field();
        let hit = match exact {
            Some(h) => h,
            None => self.eq.is_solution(&field.int(x.a, x.b), &field.int(y.a, y.b)),
        };
        if hit {
            self.insert(field.int(x.a, x.b), field.int(y.a, y.b));
        }
    }

    fn insert(&mut self, x: IQInt, y: IQInt) {
        let s = self.eq.solution(x, y).expect("verified by exact arithmetic");
        self.found.insert(s.canonical(self.eq));
    }

    pub(super) fn finish(self) -> Vec<SolutionPair> {
        self.found.into_iter().collect()
    }
}

/// Visit the points `a + b*w` within distance `r` of `z`, with `|a|, |b| <= bound`.
fn for_each_point_in_disk(w: Complex64, z: Complex64, r: f64, bound: i64, mut f: impl FnMut(i128, i128)) {
    let eps = 1e-9 * (1.0 + z.norm());
    let r = r + eps;
    let b_lo = (((z.im - r) / w.im).ceil() as i64).max(-bound);
    let b_hi = (((z.im + r) / w.im).floor() as i64).min(bound);
    for b in b_lo..=b_hi {
        let dy = b as f64 * w.im - z.im;
        let h2 = r * r - dy * dy;
        if h2 < 0.0 {
            continue;
        }
        let h = h2.sqrt();
        let centre = z.re - b as f64 * w.re;
        let a_lo = ((centre - h).ceil() as i64).max(-bound);
        let a_hi = ((centre + h).floor() as i64).min(bound);
        for a in a_lo..=a_hi {
            f(a as i128, b as i128);
        }
    }
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
    fn disk_points() {
        let w = IQField::natural(3).unwrap().omega_c64();
        let mut pts = Vec::new();
        for_each_point_in_disk(w, Complex64::new(0.0, 0.0), 1.0, 10, |a, b| pts.push((a, b)));
        pts.sort();
        // 0 and the six units
        assert_eq!(pts.len(), 7);
    }

    #[test]
    fn d3_m2_small_box() {
        let eq = binomial(3, 2);
        let sols = enumerate(&eq, &5.into(), &SearchConfig::default()).unwrap();
        let rendered: Vec<(String, String)> = sols.iter().map(|s| (s.x.to_string(), s.y.to_string())).collect();
        // (w, w) and (1-w, 1-w) lie in the orbit of (1, 1); (1, -1) is a separate orbit
        let expect = [("1", "0"), ("1", "1"), ("1", "-1")];
        assert_eq!(rendered, expect.map(|(a, b)| (a.to_string(), b.to_string())));
        assert!(sols.iter().all(|s| s.unit.is_unit()));
    }

    #[test]
    fn refuses_large_boxes() {
        let eq = binomial(3, 2);
        let cfg = SearchConfig::default();
        assert!(matches!(enumerate(&eq, &5000.into(), &cfg), Err(Error::EnumerationCap { .. })));
    }
}
