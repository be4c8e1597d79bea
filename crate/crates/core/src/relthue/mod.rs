//! Relative Thue equations `N_{K/L}(X - rho*Y) = unit` over an imaginary
//! quadratic field `L`, solved below a size bound in two phases: lattice bound
//! reduction followed by enumeration.

mod constants;
mod enumeration;
mod reduction;
mod shells;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::default_delta;
use crate::numerics::{RelPoly, DEFAULT_PRECISION};
use crate::qfield::{canonical_tuple, compare_tuples, Coords, IQField, IQInt};

pub use constants::{smallness_constants, RootData, SmallnessConstants};
pub use enumeration::enumerate;
pub use shells::enumerate_shells;
pub use reduction::{
    build_reduction_lattice, reduce_bound, reduction_loop, ReductionOutcome, RoundRecord,
};

/// The equation `prod_j (X - rho_j Y) = nu` for some torsion unit `nu`, where
/// `rho_j` runs over the roots of the monic polynomial `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelThueEquation {
    g: RelPoly,
}

impl RelThueEquation {
    pub fn new(g: RelPoly) -> Result<Self> {
        let n = g.degree();
        if !(3..=4).contains(&n) {
            return Err(Error::InvalidInstance(format!("relative degree {n} is not 3 or 4")));
        }
        if !g.is_squarefree() {
            return Err(Error::DegeneratePolynomial(format!("{g} is not squarefree")));
        }
        if let Some(r) = root_in_base_field(&g)? {
            return Err(Error::DegeneratePolynomial(format!("{g} has the root {r} in the base field")));
        }
        Ok(RelThueEquation { g })
    }

    pub fn field(&self) -> IQField {
        self.g.field()
    }

    pub fn poly(&self) -> &RelPoly {
        &self.g
    }

    pub fn degree(&self) -> usize {
        self.g.degree()
    }

    /// `prod_j (X - rho_j Y)`, computed exactly as `sum_k g_k X^k Y^(n-k)`.
    pub fn norm_form_value(&self, x: &IQInt, y: &IQInt) -> IQInt {
        self.g.homogeneous_value(x, y)
    }

    pub fn is_solution(&self, x: &IQInt, y: &IQInt) -> bool {
        self.norm_form_value(x, y).is_unit()
    }

    /// Build a verified solution record, or `None` if `(x, y)` is not a solution.
    pub fn solution(&self, x: IQInt, y: IQInt) -> Option<SolutionPair> {
        let unit = self.norm_form_value(&x, &y);
        unit.is_unit().then_some(SolutionPair { x, y, unit })
    }
}

/// A root of `g` lying in the ring of integers, if any. Such a root makes the
/// linear form vanish identically along a line of `(X, Y)`.
fn root_in_base_field(g: &RelPoly) -> Result<Option<IQInt>> {
    let roots = crate::numerics::complex_roots(g, 128)?;
    for r in roots {
        let cand = g.field().nearest(r.to_c64());
        if g.eval_exact(&cand).is_zero() {
            return Ok(Some(cand));
        }
    }
    Ok(None)
}

/// A solution `(X, Y)` together with the unit it attains.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SolutionPair {
    pub x: IQInt,
    pub y: IQInt,
    #[serde(rename = "achieved_unit")]
    pub unit: IQInt,
}

impl SolutionPair {
    /// Representative of the orbit `(e*X, e*Y)` over torsion units `e`.
    pub fn canonical(&self, eq: &RelThueEquation) -> SolutionPair {
        let c = canonical_tuple(&[self.x.clone(), self.y.clone()]);
        let mut it = c.into_iter();
        let x = it.next().expect("two entries");
        let y = it.next().expect("two entries");
        let unit = eq.norm_form_value(&x, &y);
        SolutionPair { x, y, unit }
    }

    pub fn cmp_key(&self, other: &Self) -> std::cmp::Ordering {
        compare_tuples(&[self.x.clone(), self.y.clone()], &[other.x.clone(), other.y.clone()])
    }
}

impl fmt::Display for SolutionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl PartialOrd for SolutionPair {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SolutionPair {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.cmp_key(other)
    }
}

/// A relative Thue equation as read from JSON:
/// `{"field": {"d": 3, "omega": "half"}, "g": [[a, b], ...], "bound_log10": 250}`
/// with `g` given by ascending coefficients.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquationSpec {
    pub field: IQField,
    pub g: Vec<Coords>,
    #[serde(default)]
    pub bound_log10: Option<u32>,
}

impl EquationSpec {
    pub fn equation(&self) -> Result<RelThueEquation> {
        let coeffs = self.g.iter().cloned().map(|c| c.into_int(self.field)).collect();
        RelThueEquation::new(RelPoly::new(coeffs)?)
    }

    /// Read one spec, a JSON array of specs, or one spec per line.
    pub fn parse_many(text: &str) -> Result<Vec<EquationSpec>> {
        let bad = |e: serde_json::Error| Error::parse(e.column(), format!("line {}: {e}", e.line()));
        let trimmed = text.trim_start();
        if trimmed.is_empty() {
            return Ok(Vec::new());
        }
        if trimmed.starts_with('[') {
            return serde_json::from_str(text).map_err(bad);
        }
        if let Ok(one) = serde_json::from_str::<EquationSpec>(text) {
            return Ok(vec![one]);
        }
        let mut out = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let spec = serde_json::from_str(line)
                .map_err(|e| Error::parse(e.column(), format!("line {}: {e}", i + 1)))?;
            out.push(spec);
        }
        Ok(out)
    }
}

/// Parameters of a search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Solutions of size below `10^size_bound_log10` are sought.
    pub size_bound_log10: u32,
    #[serde(with = "rational_text")]
    pub lll_delta: BigRational,
    /// Extra decimal exponents tried for the lattice scaling constant, in order.
    pub scale_schedule: Vec<u32>,
    /// Largest coordinate box that enumeration accepts.
    pub enum_cap: u64,
    /// Reduction stops once the size bound is at most this value.
    pub enum_threshold: u64,
    /// Working precision in bits.
    pub precision: u32,
    /// Worker count for batch work; 0 picks the rayon default.
    pub workers: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            size_bound_log10: 250,
            lll_delta: default_delta(),
            scale_schedule: vec![1, 2, 3, 5, 8, 13, 21, 34],
            enum_cap: 1000,
            enum_threshold: 100,
            precision: DEFAULT_PRECISION,
            workers: 0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.size_bound_log10 < 1 {
            return Err(Error::Config("size_bound_log10 must be at least 1".into()));
        }
        if self.enum_cap < 10 {
            return Err(Error::Config("enum_cap must be at least 10".into()));
        }
        if self.precision < 64 {
            return Err(Error::Config("precision must be at least 64 bits".into()));
        }
        if self.scale_schedule.is_empty() {
            return Err(Error::Config("scale_schedule must not be empty".into()));
        }
        let quarter = BigRational::new(1.into(), 4.into());
        if self.lll_delta <= quarter || self.lll_delta >= BigRational::from_integer(1.into()) {
            return Err(Error::Config(format!("lll_delta {} is outside (1/4, 1)", self.lll_delta)));
        }
        Ok(())
    }

    pub fn initial_bound(&self) -> BigInt {
        num_traits::pow(BigInt::from(10), self.size_bound_log10 as usize)
    }
}

/// Parse a rational from `p/q`, an integer, or a decimal such as `0.99`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Config(format!("cannot read '{text}' as a rational number"));
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip_abs = ip.trim_start_matches(['-', '+']);
        let whole: BigInt = if ip_abs.is_empty() { 0.into() } else { ip_abs.parse().map_err(|_| bad())? };
        let frac: BigInt = fp.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), fp.len());
        let v = BigRational::new(whole * &den + frac, den);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

mod rational_text {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Outcome of a search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Complete,
    Incomplete,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveOutcome {
    pub status: Status,
    /// Canonical orbit representatives, sorted.
    pub solutions: Vec<SolutionPair>,
    pub reduction: ReductionOutcome,
    /// Coordinate box used for enumeration, when it ran.
    #[serde(serialize_with = "crate::textual::opt_bigint::serialize")]
    pub enum_box: Option<BigInt>,
    pub note: Option<String>,
}

/// Reduce the bound from `10^size_bound_log10`, then enumerate below the
/// reduced bound. A failed reduction yields an `Incomplete` outcome rather
/// than an error; boxes above `enum_cap` are searched shell by shell.
pub fn solve_small(eq: &RelThueEquation, config: &SearchConfig) -> Result<SolveOutcome> {
    config.validate()?;
    let reduction = reduction_loop(eq, &config.initial_bound(), config)?;
    if let Some(reason) = &reduction.failure {
        return Ok(SolveOutcome {
            status: Status::Incomplete,
            solutions: Vec::new(),
            reduction: reduction.clone(),
            enum_box: None,
            note: Some(reason.clone()),
        });
    }
    let b_r = reduction.coordinate_box(eq.field());
    let (solutions, note) = if b_r > BigInt::from(config.enum_cap) {
        let sols = enumerate_shells(eq, reduction.final_bound(), &b_r, config)?;
        (sols, Some(format!("box {b_r} above {}: searched by lattice shells", config.enum_cap)))
    } else {
        (enumerate(eq, &b_r, config)?, None)
    };
    Ok(SolveOutcome { status: Status::Complete, solutions, reduction, enum_box: Some(b_r), note })
}
