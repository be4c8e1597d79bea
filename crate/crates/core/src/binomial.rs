//! The binomial equations `X0^4 - m*Y0^4 = zeta` over the seven imaginary
//! quadratic fields with class number one, for single `m` and for whole
//! ranges of `m`.
//!
//! A range is handled in two passes. Every `m` first gets its own bound
//! reduction; the largest resulting coordinate box is then searched once,
//! solving for `m` from each `X0` instead of testing every `m` separately.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::RelPoly;
use crate::par;
use crate::qfield::{canonical_tuple, compare_tuples, IQField, IQInt};
use crate::relthue::{enumerate, reduction_loop, solve_small, RelThueEquation, SearchConfig, SolutionPair, SolveOutcome, Status};
use crate::smallint::{Ring, Small};
use crate::textual;

/// Values of `d` for which `Q(sqrt(-d))` is handled.
pub const SUPPORTED_D: [u64; 7] = [3, 7, 11, 19, 43, 67, 163];

/// Largest coordinate box the sweep accepts; keeps fourth powers inside `i128`.
const SWEEP_LIMIT: u64 = 1_000_000;

/// Optional restrictions on `m`. All are off by default.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraints {
    pub require_coprime_dm: bool,
    pub require_m_mod4_in_23: bool,
    pub require_squarefree: bool,
}

impl Constraints {
    pub fn all() -> Self {
        Constraints { require_coprime_dm: true, require_m_mod4_in_23: true, require_squarefree: true }
    }

    /// Whether `m` passes every active flag.
    pub fn admits(&self, d: u64, m: u64) -> bool {
        (!self.require_coprime_dm || d.gcd(&m) == 1)
            && (!self.require_m_mod4_in_23 || matches!(m % 4, 2 | 3))
            && (!self.require_squarefree || is_squarefree(m))
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

pub fn supported_field(d: u64) -> Result<IQField> {
    if !SUPPORTED_D.contains(&d) {
        return Err(Error::InvalidField(format!(
            "d = {d} is not one of the supported values {SUPPORTED_D:?}"
        )));
    }
    IQField::natural(d)
}

/// One equation `X0^4 - m*Y0^4 = zeta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinomialInstance {
    pub d: u64,
    pub m: u64,
    pub constraints: Constraints,
}

impl BinomialInstance {
    /// Checks `d`, `m > 1`, the active constraint flags, and that `m` is not
    /// a fourth power in the ring of integers.
    pub fn new(d: u64, m: u64, constraints: Constraints) -> Result<Self> {
        let field = supported_field(d)?;
        if m < 2 {
            return Err(Error::InvalidInstance(format!("m = {m} must be greater than 1")));
        }
        if !constraints.admits(d, m) {
            return Err(Error::InvalidInstance(format!("m = {m} violates the active constraints for d = {d}")));
        }
        if let Some(r) = fourth_root_of_integer(field, m) {
            return Err(Error::InvalidInstance(format!("m = {m} is the fourth power of {r}")));
        }
        Ok(BinomialInstance { d, m, constraints })
    }

    pub fn field(&self) -> IQField {
        IQField::natural(self.d).expect("validated on construction")
    }

    /// The relative Thue equation with `g = z^4 - m`.
    pub fn equation(&self) -> Result<RelThueEquation> {
        RelThueEquation::new(RelPoly::binomial(self.field(), 4, &BigInt::from(self.m))?)
    }

    /// `X0^4 - m*Y0^4`.
    pub fn value(&self, x: &IQInt, y: &IQInt) -> IQInt {
        binomial_value(self.m, x, y)
    }
}

pub fn binomial_value(m: u64, x: &IQInt, y: &IQInt) -> IQInt {
    &x.pow(4) - &y.pow(4).scale(&BigInt::from(m))
}

/// An element of the ring whose fourth power is `m`, if one exists.
pub fn fourth_root_of_integer(field: IQField, m: u64) -> Option<IQInt> {
    let ring = Ring::new(field);
    let q = Small { a: m as i128, b: 0 };
    fourth_roots(&ring, q).into_iter().next().map(|r| ring.to_big(r))
}

/// The trivial solution `(1, 0)`.
fn trivial_pair(field: IQField) -> SolutionPair {
    SolutionPair { x: field.one(), y: field.zero(), unit: field.one() }
}

/// Solve one binomial equation below the configured size bound. The result
/// always contains the orbit of `(1, 0)`, even when the search is incomplete.
pub fn solve_binomial(inst: &BinomialInstance, config: &SearchConfig) -> Result<SolveOutcome> {
    let eq = inst.equation()?;
    let mut out = solve_small(&eq, config)?;
    let t = trivial_pair(inst.field());
    if !out.solutions.contains(&t) {
        out.solutions.push(t);
        out.solutions.sort();
    }
    Ok(out)
}

/// Representative of the larger orbit `{(e*X0, +-e*Y0)}`. The binomial form
/// only sees `Y0^4`, so a sign change of `Y0` alone maps solutions to
/// solutions; published tables list pairs up to this symmetry.
pub fn extended_canonical(x: &IQInt, y: &IQInt) -> (IQInt, IQInt) {
    let a = canonical_tuple(&[x.clone(), y.clone()]);
    let b = canonical_tuple(&[x.clone(), -y]);
    let best = if compare_tuples(&a, &b).is_le() { a } else { b };
    let mut it = best.into_iter();
    (it.next().expect("pair"), it.next().expect("pair"))
}

/// All `Y` with `Y^4 = q`.
fn fourth_roots(ring: &Ring, q: Small) -> Vec<Small> {
    let Some(n) = ring.norm(q) else { return Vec::new() };
    if n < 0 || !is_fourth_power(n) {
        return Vec::new();
    }
    let w = ring.field.omega_c64();
    let z = Complex64::new(q.a as f64, 0.0) + w * q.b as f64;
    let base = z.powf(0.25);
    let mut out = Vec::new();
    let mut rot = Complex64::new(1.0, 0.0);
    for _ in 0..4 {
        let c = base * rot;
        rot *= Complex64::new(0.0, 1.0);
        let b0 = (c.im / w.im).round() as i128;
        let a0 = (c.re - b0 as f64 * w.re).round() as i128;
        for db in -1..=1 {
            for da in -1..=1 {
                let y = Small { a: a0 + da, b: b0 + db };
                let hit = ring.mul(y, y).and_then(|y2| ring.mul(y2, y2)) == Some(q);
                if hit && !out.contains(&y) {
                    out.push(y);
                }
            }
        }
    }
    out
}

fn is_fourth_power(n: i128) -> bool {
    let r = (n as f64).sqrt().sqrt().round() as i128;
    (r.max(1) - 1..=r + 1).any(|s| s.checked_pow(4) == Some(n))
}

fn pair_from_small(ring: &Ring, m: u64, x: Small, y: Small) -> SolutionPair {
    let c = canonical_tuple(&[ring.to_big(x), ring.to_big(y)]);
    let mut it = c.into_iter();
    let x = it.next().expect("pair");
    let y = it.next().expect("pair");
    let unit = binomial_value(m, &x, &y);
    SolutionPair { x, y, unit }
}

/// Whether `m` takes part in a sweep: it must pass the flags and not be a
/// fourth power in the ring.
pub fn sweep_admits(field: IQField, m: u64, constraints: &Constraints) -> bool {
    m >= 2 && constraints.admits(field.d(), m) && fourth_root_of_integer(field, m).is_none()
}

/// Solutions of `X0^4 - m*Y0^4 = zeta` with all four coordinates at most
/// `b_r` in absolute value, for every admissible `m` in `2..=m_max` at once.
///
/// Instead of testing each `m`, every `X0` in the box and every unit `zeta`
/// give `rho = X0^4 - zeta`; each rational divisor `m` of `rho` with `rho/m`
/// a fourth power `Y0^4` yields a solution. Every admissible `m` is present
/// in the map with at least the orbit of `(1, 0)`.
pub fn sweep_m(
    d: u64,
    m_max: u64,
    b_r: u64,
    constraints: &Constraints,
    config: &SearchConfig,
) -> Result<BTreeMap<u64, Vec<SolutionPair>>> {
    let field = supported_field(d)?;
    if m_max < 2 {
        return Err(Error::Config(format!("m_max = {m_max} must be at least 2")));
    }
    if b_r > config.enum_cap || b_r > SWEEP_LIMIT {
        return Err(Error::EnumerationCap { bound: b_r.to_string(), cap: config.enum_cap.min(SWEEP_LIMIT) });
    }
    let ring = Ring::new(field);
    let zetas: Vec<Small> = field.units().iter().map(|u| ring.from_big(u).expect("small")).collect();
    let bound = b_r as i128;
    let admits: Vec<bool> = (0..=m_max).map(|m| sweep_admits(field, m, constraints)).collect();

    // (X0, Y0) and (-X0, -Y0) share an orbit, so X0 runs over a half-plane.
    let shards: Vec<i128> = (0..=bound).collect();
    let hits = par::map(shards, config.workers, |a| {
        let mut found = Vec::new();
        for b in -bound..=bound {
            if a == 0 && b <= 0 {
                continue;
            }
            let x = Small { a, b };
            let x2 = ring.mul(x, x).expect("inside the sweep limit");
            let x4 = ring.mul(x2, x2).expect("inside the sweep limit");
            for z in &zetas {
                let rho = Small { a: x4.a - z.a, b: x4.b - z.b };
                let g = rho.a.unsigned_abs().gcd(&rho.b.unsigned_abs());
                if g < 2 {
                    continue;
                }
                let top = (m_max as u128).min(g);
                for m in 2..=top {
                    if g % m != 0 || !admits[m as usize] {
                        continue;
                    }
                    let mi = m as i128;
                    let q = Small { a: rho.a / mi, b: rho.b / mi };
                    for y in fourth_roots(&ring, q) {
                        if y.a.abs() <= bound && y.b.abs() <= bound {
                            found.push((m as u64, pair_from_small(&ring, m as u64, x, y)));
                        }
                    }
                }
            }
        }
        found
    });

    let mut table: BTreeMap<u64, BTreeSet<SolutionPair>> = BTreeMap::new();
    for m in 2..=m_max {
        if admits[m as usize] {
            table.entry(m).or_default().insert(trivial_pair(field));
        }
    }
    for (m, p) in hits.into_iter().flatten() {
        table.entry(m).or_default().insert(p);
    }
    Ok(table.into_iter().map(|(m, s)| (m, s.into_iter().collect())).collect())
}

/// Per-`m` reduction summary in a batch.
#[derive(Clone, Debug, Serialize)]
pub struct MReduction {
    pub m: u64,
    /// Size bounds from the initial one down to the final one.
    #[serde(serialize_with = "textual::vec_bigint::serialize")]
    pub bounds: Vec<BigInt>,
    /// Coordinate box implied by the final bound.
    #[serde(serialize_with = "textual::opt_bigint::serialize")]
    pub coordinate_box: Option<BigInt>,
    pub rounds: usize,
    pub precision: u32,
    pub failure: Option<String>,
}

impl MReduction {
    pub fn final_bound(&self) -> Option<&BigInt> {
        self.bounds.last()
    }
}

/// An `m` whose range of solutions could not be certified.
#[derive(Clone, Debug, Serialize)]
pub struct IncompleteM {
    pub m: u64,
    pub last_bound: String,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub m: u64,
    /// Nontrivial solutions as canonical orbit representatives.
    pub solutions: Vec<SolutionPair>,
}

/// Counts of final reduced bounds by range.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundHistogram {
    pub below_10: usize,
    pub from_10_to_200: usize,
    pub from_200_to_500: usize,
    pub above_500: usize,
    pub failed: usize,
}

/// Wall-clock figures; kept out of serialized reports so they stay reproducible.
#[derive(Clone, Copy, Debug, Default)]
pub struct Timing {
    pub reduction: Duration,
    pub sweep: Duration,
}

#[derive(Clone, Debug, Serialize)]
pub struct BatchReport {
    pub d: u64,
    pub m_max: u64,
    pub constraints: Constraints,
    /// `m` values skipped because they are fourth powers in the ring.
    pub excluded: Vec<u64>,
    pub enum_box: u64,
    pub histogram: BoundHistogram,
    pub incomplete: Vec<IncompleteM>,
    /// Rows with a nontrivial solution; `(1, 0)` solves every equation.
    pub table: Vec<TableRow>,
    pub reductions: Vec<MReduction>,
    #[serde(skip)]
    pub timing: Timing,
}

impl BatchReport {
    pub fn row(&self, m: u64) -> Option<&TableRow> {
        self.table.iter().find(|r| r.m == m)
    }
}

/// Reduce every admissible `m` in `2..=m_max`, then sweep the largest
/// resulting box once. `progress` is called with `(done, total)` after each
/// reduction.
pub fn batch(
    d: u64,
    m_max: u64,
    constraints: &Constraints,
    config: &SearchConfig,
    progress: &(dyn Fn(usize, usize) + Sync),
) -> Result<BatchReport> {
    config.validate()?;
    let field = supported_field(d)?;
    if m_max < 2 {
        return Err(Error::Config(format!("m_max = {m_max} must be at least 2")));
    }
    let mut excluded = Vec::new();
    let mut ms = Vec::new();
    for m in 2..=m_max {
        if !constraints.admits(d, m) {
            continue;
        }
        if fourth_root_of_integer(field, m).is_some() {
            excluded.push(m);
        } else {
            ms.push(m);
        }
    }

    let start = Instant::now();
    let total = ms.len();
    let done = std::sync::atomic::AtomicUsize::new(0);
    let initial = config.initial_bound();
    let reductions = par::map(ms, config.workers, |m| {
        let r = reduce_one(field, m, &initial, config);
        let k = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
        progress(k, total);
        r
    });
    let reduction_time = start.elapsed();

    let cap = BigInt::from(config.enum_cap.min(SWEEP_LIMIT));
    let mut histogram = BoundHistogram::default();
    let mut incomplete = Vec::new();
    let mut enum_box = BigInt::from(1);
    for r in &reductions {
        let last = r.final_bound().map(|b| b.to_string()).unwrap_or_default();
        if let Some(reason) = &r.failure {
            histogram.failed += 1;
            incomplete.push(IncompleteM { m: r.m, last_bound: last, reason: reason.clone() });
            continue;
        }
        let fb = r.final_bound().expect("reduction succeeded");
        match fb.to_u64() {
            Some(v) if v < 10 => histogram.below_10 += 1,
            Some(v) if v <= 200 => histogram.from_10_to_200 += 1,
            Some(v) if v <= 500 => histogram.from_200_to_500 += 1,
            _ => histogram.above_500 += 1,
        }
        let cb = r.coordinate_box.clone().expect("reduction succeeded");
        if cb > cap {
            let reason = Error::EnumerationCap { bound: cb.to_string(), cap: config.enum_cap }.to_string();
            incomplete.push(IncompleteM { m: r.m, last_bound: last, reason });
        } else {
            enum_box = enum_box.max(cb);
        }
    }
    let enum_box = enum_box.to_u64().expect("capped");

    let start = Instant::now();
    let swept = sweep_m(d, m_max, enum_box, constraints, config)?;
    let sweep_time = start.elapsed();
    let trivial = trivial_pair(field);
    let table = swept
        .into_iter()
        .filter(|(m, _)| !excluded.contains(m))
        .filter_map(|(m, sols)| {
            let nontrivial: Vec<SolutionPair> = sols.into_iter().filter(|s| s != &trivial).collect();
            (!nontrivial.is_empty()).then_some(TableRow { m, solutions: nontrivial })
        })
        .collect();

    Ok(BatchReport {
        d,
        m_max,
        constraints: *constraints,
        excluded,
        enum_box,
        histogram,
        incomplete,
        table,
        reductions,
        timing: Timing { reduction: reduction_time, sweep: sweep_time },
    })
}

fn reduce_one(field: IQField, m: u64, initial: &BigInt, config: &SearchConfig) -> MReduction {
    let failed = |reason: String| MReduction {
        m,
        bounds: vec![initial.clone()],
        coordinate_box: None,
        rounds: 0,
        precision: config.precision,
        failure: Some(reason),
    };
    let eq = match RelPoly::binomial(field, 4, &BigInt::from(m)).and_then(RelThueEquation::new) {
        Ok(eq) => eq,
        Err(e) => return failed(e.to_string()),
    };
    match reduction_loop(&eq, initial, config) {
        Ok(out) => MReduction {
            m,
            coordinate_box: out.failure.is_none().then(|| out.coordinate_box(field)),
            rounds: out.rounds.len(),
            precision: out.precision,
            failure: out.failure.clone(),
            bounds: out.bounds,
        },
        Err(e) => failed(e.to_string()),
    }
}

/// Per-`m` enumeration at a fixed box, used to cross-check [`sweep_m`].
pub fn enumerate_binomial(d: u64, m: u64, b_r: u64, config: &SearchConfig) -> Result<Vec<SolutionPair>> {
    let inst = BinomialInstance::new(d, m, Constraints::default())?;
    enumerate(&inst.equation()?, &BigInt::from(b_r), config)
}

/// Whether an outcome is complete.
pub fn is_complete(out: &SolveOutcome) -> bool {
    out.status == Status::Complete
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(sols: &[SolutionPair]) -> Vec<String> {
        sols.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn constraint_flags() {
        let c = Constraints::all();
        assert!(c.admits(7, 50) == false); // 50 = 2*25
        assert!(c.admits(7, 3));
        assert!(!c.admits(3, 6));
        assert!(!c.admits(7, 5));
        assert!(Constraints::default().admits(3, 5));
    }

    #[test]
    fn fourth_powers_are_rejected() {
        assert!(BinomialInstance::new(7, 16, Constraints::default()).is_err());
        // (2w - 1)^4 = 9 when d = 3
        let r = fourth_root_of_integer(IQField::natural(3).unwrap(), 9).unwrap();
        assert_eq!(r.pow(4), IQField::natural(3).unwrap().int(9, 0));
        assert!(BinomialInstance::new(3, 9, Constraints::default()).is_err());
        assert!(BinomialInstance::new(7, 9, Constraints::default()).is_ok());
        assert!(BinomialInstance::new(4, 5, Constraints::default()).is_err());
        assert!(BinomialInstance::new(3, 1, Constraints::default()).is_err());
    }

    #[test]
    fn extended_orbit_merges_sign_of_y() {
        let f = IQField::natural(3).unwrap();
        let a = extended_canonical(&f.int(-1, 2), &f.one());
        let b = extended_canonical(&f.int(2, -1), &f.omega());
        assert_eq!(a, b);
    }

    #[test]
    fn sweep_small_box_d11() {
        let cfg = SearchConfig::default();
        let f = IQField::natural(11).unwrap();
        let t = sweep_m(11, 2000, 10, &Constraints::default(), &cfg).unwrap();
        let orbits = |m: u64| -> Vec<(IQInt, IQInt)> {
            t[&m].iter().filter(|s| !s.y.is_zero()).map(|s| extended_canonical(&s.x, &s.y)).collect()
        };
        let one = f.one();
        assert!(orbits(122).contains(&extended_canonical(&f.int(-1, 2), &one)));
        assert!(orbits(1937).contains(&extended_canonical(&f.int(-2, 4), &one)));
        assert_eq!(pairs(&t[&7]), vec!["(1, 0)"]);
    }

    #[test]
    fn sweep_agrees_with_per_m_enumeration() {
        let cfg = SearchConfig::default();
        let t = sweep_m(7, 100, 10, &Constraints::default(), &cfg).unwrap();
        for m in [2u64, 3, 5, 15, 17, 39, 50, 82] {
            let direct = enumerate_binomial(7, m, 10, &cfg).unwrap();
            assert_eq!(t[&m], direct, "m = {m}");
        }
    }
}
