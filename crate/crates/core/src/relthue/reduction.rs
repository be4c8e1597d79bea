//! Phase one: shrink the a priori size bound with LLL.
//!
//! For a root index `j0` and a scaling constant `C` the lattice is spanned by
//! the rows
//!
//! ```text
//! (1, 0, C, 0)
//! (0, 1, [C Re w], [C Im w])
//! (0, 0, [C Re(-rho)], [C Im(-rho)])
//! (0, 0, [C Re(-rho w)], [C Im(-rho w)])
//! ```
//!
//! so a solution with coordinates `(x1, y1, x2, y2)` maps to a vector whose
//! last two entries approximate `C (X - rho Y)`. A lower bound `L` on the
//! lattice minimum then gives `|X - rho Y| >= T / C`, and combining with the
//! upper bound `c2 / |Y|^(n-1)` bounds `|Y|`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::constants::{from_roots, RootData, SmallnessConstants};
use super::{RelThueEquation, SearchConfig};
use crate::error::{Error, Result};
use crate::lattice::{first_vector_lower_bound, first_vector_lower_bound_sq, lll_reduce, LatticeBasis};
use crate::numerics::{ArbComplex, ArbReal, MAX_ESCALATIONS};
use crate::qfield::IQField;
use crate::textual;

/// One successful application of the reduction lemma.
#[derive(Clone, Debug, Serialize)]
pub struct RoundRecord {
    pub round: usize,
    pub j0: usize,
    pub precision: u32,
    /// `C = 10^scale_log10`.
    pub scale_log10: u32,
    /// Index of the schedule entry that gave the smallest bound.
    pub retries: usize,
    #[serde(with = "textual::bigint")]
    pub bound_in: BigInt,
    #[serde(with = "textual::bigint")]
    pub bound_out: BigInt,
    pub first_vector_log10: f64,
    pub t_log10: f64,
}

/// Transcript of the reduction loop.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionOutcome {
    /// Size bounds, starting with the initial one; strictly decreasing.
    #[serde(with = "textual::vec_bigint")]
    pub bounds: Vec<BigInt>,
    pub rounds: Vec<RoundRecord>,
    pub precision: u32,
    pub constants: SmallnessConstants,
    /// Set when the loop could not finish soundly.
    pub failure: Option<String>,
}

impl ReductionOutcome {
    pub fn final_bound(&self) -> &BigInt {
        self.bounds.last().expect("initial bound is recorded")
    }

    /// Largest coordinate of any element of size at most the final bound.
    pub fn coordinate_box(&self, field: IQField) -> BigInt {
        let (a, b) = field.size_to_coord_bounds(self.final_bound());
        a.max(b)
    }
}

/// Schedule entries still tried after the first one that succeeds.
const EXTRA_SCALES: usize = 2;
const EXTRA_SCALES_BELOW_BITS: u64 = 64;

fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), e as usize)
}

pub(crate) fn log10_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.abs().to_f64().unwrap_or(f64::INFINITY).log10();
    }
    let shift = bits - 64;
    let top = (x.abs() >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.log10() + shift as f64 * std::f64::consts::LOG10_2
}

/// Nearest integer to `C * x` and whether the ball allows rounding error at most `1/4`.
pub(crate) fn scaled_entry(x: &ArbReal, c: &BigInt) -> Option<BigInt> {
    let p = x.prec();
    let y = x.mul_int(c);
    if (y.rad_raw() << 2u32) > (BigInt::one() << p) {
        return None;
    }
    let half = BigInt::one() << (p - 1);
    Some((y.mid_raw() + half) >> p)
}

fn lattice_from_roots(field: IQField, data: &RootData, j0: usize, c: &BigInt) -> Result<LatticeBasis> {
    let p = data.precision;
    let omega = field.omega_ball(p);
    let rho = data.roots.get(j0).ok_or_else(|| Error::InvalidInstance(format!("no root with index {j0}")))?;
    let neg_rho = -rho;
    let neg_rho_w: ArbComplex = &neg_rho * &omega;
    let insufficient =
        || Error::InsufficientPrecision(format!("{p} bits cannot round C = 10^{:.0} entries", log10_big(c)));
    let entry = |x: &ArbReal| scaled_entry(x, c).ok_or_else(insufficient);
    let z = BigInt::zero;
    let rows = vec![
        vec![BigInt::one(), z(), c.clone(), z()],
        vec![z(), BigInt::one(), entry(&omega.re)?, entry(&omega.im)?],
        vec![z(), z(), entry(&neg_rho.re)?, entry(&neg_rho.im)?],
        vec![z(), z(), entry(&neg_rho_w.re)?, entry(&neg_rho_w.im)?],
    ];
    LatticeBasis::new(rows)
}

/// The reduction lattice for root index `j0` and scaling constant `C`, with
/// roots computed at `precision` bits.
pub fn build_reduction_lattice(
    eq: &RelThueEquation,
    j0: usize,
    c: &BigInt,
    precision: u32,
) -> Result<LatticeBasis> {
    let data = RootData::compute(eq, precision)?;
    lattice_from_roots(eq.field(), &data, j0, c)
}

struct Context<'a> {
    eq: &'a RelThueEquation,
    data: RootData,
    consts: SmallnessConstants,
    escalations: u32,
}

impl<'a> Context<'a> {
    fn new(eq: &'a RelThueEquation, precision: u32) -> Result<Self> {
        let data = RootData::compute(eq, precision)?;
        let consts = from_roots(&data);
        Ok(Context { eq, data, consts, escalations: 0 })
    }

    fn escalate(&mut self) -> Result<()> {
        if self.escalations >= MAX_ESCALATIONS {
            return Err(Error::InsufficientPrecision(format!(
                "still insufficient at {} bits after {MAX_ESCALATIONS} escalations",
                self.data.precision
            )));
        }
        self.escalations += 1;
        self.data = RootData::compute(self.eq, self.data.precision.saturating_mul(2))?;
        self.consts = from_roots(&self.data);
        Ok(())
    }

    /// Scaling exponent for bound `b`: `C^2 |rho|^2 Im(w)` about `B^4 10^(2s)`.
    fn base_exponent(&self, j0: usize, bmax: &BigInt) -> f64 {
        let rho = self.data.roots[j0].to_c64();
        let w = self.eq.field().omega_c64();
        let d2 = (rho.norm_sqr() * w.im).max(1e-300);
        2.0 * log10_big(bmax) - 0.5 * d2.log10()
    }

    /// One application of the lemma for `j0`, keeping the best of the first
    /// successful schedule entries; `Ok(None)` if every entry gives `T <= 0`.
    fn step(&self, j0: usize, bound: &BigInt, config: &SearchConfig, round: usize) -> Result<Option<RoundRecord>> {
        let field = self.eq.field();
        let n = self.eq.degree() as u32;
        let (a, bb) = field.size_to_coord_bounds(bound);
        let bmax = a.clone().max(bb.clone());
        let base = self.base_exponent(j0, &bmax).ceil().max(0.0) as u32;
        let slack = (BigInt::from(11) * (&a + &bb * 2u32)).div_ceil_pos(10);
        let head = BigRational::from_integer(&a * &a + &bb * &bb);
        let mut best: Option<RoundRecord> = None;
        let mut tried_after_success = 0;
        // near the fixed point the choice of C matters; early on it does not
        let extra = if bound.bits() <= EXTRA_SCALES_BELOW_BITS { EXTRA_SCALES } else { 0 };
        for (retries, s) in config.scale_schedule.iter().enumerate() {
            if best.is_some() {
                if tried_after_success == extra {
                    break;
                }
                tried_after_success += 1;
            }
            let e = (base + s).max(1);
            let c = pow10(e);
            let basis = lattice_from_roots(field, &self.data, j0, &c)?;
            let reduced = lll_reduce(&basis, &config.lll_delta)?;
            let l_sq = first_vector_lower_bound_sq(&reduced, &config.lll_delta);
            let rest = &l_sq - &head;
            if !rest.is_positive() {
                continue;
            }
            let t = rest.floor().to_integer().sqrt() - &slack;
            if !t.is_positive() {
                continue;
            }
            let c2 = &self.consts.c2[j0];
            let y_pow = (c2 * BigRational::from_integer(c.clone()) / BigRational::from_integer(t.clone()))
                .ceil()
                .to_integer();
            let b_y = y_pow.nth_root(n - 1) + 1u32;
            let b_x = (&self.consts.root_abs[j0] * BigRational::from_integer(b_y.clone()) + c2)
                .ceil()
                .to_integer();
            let out = b_y.max(b_x).min(bound.clone());
            if best.as_ref().is_some_and(|b| b.bound_out <= out) {
                continue;
            }
            best = Some(RoundRecord {
                round,
                j0,
                precision: self.data.precision,
                scale_log10: e,
                retries,
                bound_in: bound.clone(),
                bound_out: out,
                first_vector_log10: first_vector_lower_bound(&reduced, &config.lll_delta).log10(),
                t_log10: log10_big(&t),
            });
        }
        Ok(best)
    }

    fn step_escalating(
        &mut self,
        j0: usize,
        bound: &BigInt,
        config: &SearchConfig,
        round: usize,
    ) -> Result<Option<RoundRecord>> {
        loop {
            match self.step(j0, bound, config, round) {
                Err(Error::InsufficientPrecision(_)) => self.escalate()?,
                other => return other,
            }
        }
    }
}

trait DivCeilPos {
    fn div_ceil_pos(&self, d: u32) -> BigInt;
}

impl DivCeilPos for BigInt {
    fn div_ceil_pos(&self, d: u32) -> BigInt {
        (self + (d - 1)) / d
    }
}

/// A single reduction step for root index `j0` from size bound `bound`,
/// escalating precision as needed.
pub fn reduce_bound(
    eq: &RelThueEquation,
    j0: usize,
    bound: &BigInt,
    config: &SearchConfig,
) -> Result<RoundRecord> {
    config.validate()?;
    if j0 >= eq.degree() {
        return Err(Error::InvalidInstance(format!("no root with index {j0}")));
    }
    let mut ctx = Context::new(eq, config.precision)?;
    ctx.step_escalating(j0, bound, config, 1)?.ok_or_else(|| {
        Error::ReductionFailed(format!("scale schedule exhausted for j0 = {j0} at bound {bound}"))
    })
}

/// Repeat the reduction step over all root indices until the bound is at most
/// the enumeration threshold or shrinks by less than a factor of two.
pub fn reduction_loop(eq: &RelThueEquation, initial: &BigInt, config: &SearchConfig) -> Result<ReductionOutcome> {
    let mut ctx = Context::new(eq, config.precision)?;
    let mut bounds = vec![initial.clone()];
    let mut rounds = Vec::new();
    let mut failure = None;
    let threshold = BigInt::from(config.enum_threshold);
    let mut round = 0;
    'outer: loop {
        let bound = bounds.last().expect("non-empty").clone();
        if bound <= threshold {
            break;
        }
        round += 1;
        let mut next = BigInt::zero();
        for j0 in 0..eq.degree() {
            match ctx.step_escalating(j0, &bound, config, round) {
                Ok(Some(rec)) => {
                    next = next.max(rec.bound_out.clone());
                    rounds.push(rec);
                }
                Ok(None) => {
                    failure = Some(
                        Error::ReductionFailed(format!(
                            "scale schedule exhausted for j0 = {j0} at bound {bound}"
                        ))
                        .to_string(),
                    );
                    break 'outer;
                }
                Err(e @ Error::InsufficientPrecision(_)) => {
                    failure = Some(Error::ReductionFailed(e.to_string()).to_string());
                    break 'outer;
                }
                Err(e) => return Err(e),
            }
        }
        if next >= bound {
            break;
        }
        let slow = &next * 2u32 > bound;
        bounds.push(next);
        if slow {
            break;
        }
    }
    Ok(ReductionOutcome { bounds, rounds, precision: ctx.data.precision, constants: ctx.consts, failure })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RelPoly;

    fn binomial(d: u64, m: i64) -> RelThueEquation {
        let f = IQField::natural(d).unwrap();
        RelThueEquation::new(RelPoly::binomial(f, 4, &m.into()).unwrap()).unwrap()
    }

    #[test]
    fn lattice_shape_and_determinant() {
        let eq = binomial(3, 2);
        let c = pow10(12);
        let b = build_reduction_lattice(&eq, 0, &c, 256).unwrap();
        assert_eq!(b.row(0), &[BigInt::one(), BigInt::zero(), c.clone(), BigInt::zero()]);
        let det = b.determinant();
        assert!(!det.is_zero());
        // |det| is close to C^2 |rho|^2 Im w = C^2 sqrt(2) sqrt(3)/2
        let expect = 1e24 * 2f64.sqrt() * 3f64.sqrt() / 2.0;
        let got = det.abs().to_f64().unwrap();
        assert!((got - expect).abs() / expect < 1e-9);
    }

    #[test]
    fn rounding_is_stable_under_more_precision() {
        let eq = binomial(7, 50);
        let c = pow10(40);
        let b1 = build_reduction_lattice(&eq, 1, &c, 256).unwrap();
        let b2 = build_reduction_lattice(&eq, 1, &c, 320).unwrap();
        for (r1, r2) in b1.rows().iter().zip(b2.rows()) {
            for (x, y) in r1.iter().zip(r2) {
                assert!((x - y).abs() <= BigInt::one());
            }
        }
    }

    #[test]
    fn insufficient_precision_is_detected() {
        let eq = binomial(3, 5);
        let c = pow10(200);
        assert!(matches!(
            build_reduction_lattice(&eq, 0, &c, 128),
            Err(Error::InsufficientPrecision(_))
        ));
    }

    #[test]
    fn single_step_shrinks() {
        let eq = binomial(3, 5);
        let cfg = SearchConfig::default();
        let rec = reduce_bound(&eq, 0, &cfg.initial_bound(), &cfg).unwrap();
        assert!(rec.bound_out < pow10(100), "{}", rec.bound_out);
    }

    #[test]
    fn loop_is_strictly_decreasing() {
        let eq = binomial(3, 5);
        let cfg = SearchConfig::default();
        let out = reduction_loop(&eq, &cfg.initial_bound(), &cfg).unwrap();
        assert!(out.failure.is_none());
        for w in out.bounds.windows(2) {
            assert!(w[1] < w[0]);
        }
        assert!(out.final_bound() <= &BigInt::from(500));
    }
}
