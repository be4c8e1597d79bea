use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use relthue::binomial::{
    batch, enumerate_binomial, extended_canonical, fourth_root_of_integer, solve_binomial, sweep_m, BinomialInstance,
    Constraints, SUPPORTED_D,
};
use relthue::qfield::{canonical_tuple, IQField, IQInt};
use relthue::quartic_pib::{q1, q2};
use relthue::relthue::{SearchConfig, SolutionPair, Status};
use relthue::sextic::{rho_poly, Published, SexticFieldRecord};

fn small_config() -> SearchConfig {
    SearchConfig { size_bound_log10: 20, workers: 1, ..SearchConfig::default() }
}

fn d_strategy() -> impl Strategy<Value = u64> {
    prop::sample::select(SUPPORTED_D.to_vec())
}

fn admissible(d: u64, m: u64) -> bool {
    fourth_root_of_integer(IQField::natural(d).unwrap(), m).is_none()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn binomial_solutions_are_closed_and_reproducible(d in d_strategy(), m in 2u64..200) {
        prop_assume!(admissible(d, m));
        let cfg = small_config();
        let inst = BinomialInstance::new(d, m, Constraints::default()).unwrap();
        let out = solve_binomial(&inst, &cfg).unwrap();
        prop_assert_eq!(out.status, Status::Complete);

        let bounds = &out.reduction.bounds;
        prop_assert!(bounds.windows(2).all(|w| w[1] < w[0]), "bounds not decreasing: {:?}", bounds);

        let field = inst.field();
        let eq = inst.equation().unwrap();
        let set: BTreeSet<SolutionPair> = out.solutions.iter().cloned().collect();
        for s in &out.solutions {
            let v = inst.value(&s.x, &s.y);
            prop_assert!(v.is_unit());
            prop_assert_eq!(&v, &s.unit);
            for u in field.units() {
                let moved = SolutionPair { x: &u * &s.x, y: &u * &s.y, unit: s.unit.clone() }.canonical(&eq);
                prop_assert!(set.contains(&moved), "orbit of {} not closed", s);
            }
        }

        let again = solve_binomial(&inst, &cfg).unwrap();
        prop_assert_eq!(again.solutions, out.solutions);
        prop_assert_eq!(&again.reduction.bounds, bounds);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn quadratic_relation_vanishes_on_the_parametrization(
        d in d_strategy(),
        seed in (-50i64..=50, -50i64..=50, -50i64..=50, -50i64..=50),
        ui in 0usize..6,
        m in 2u64..5000,
    ) {
        let f = IQField::natural(d).unwrap();
        let (x0, y0) = (f.int(seed.0, seed.1), f.int(seed.2, seed.3));
        let units = f.units();
        let e = &units[ui % units.len()];
        let x = &(&x0 * &x0) * e;
        let y = &(&x0 * &y0) * e;
        let z = &(&y0 * &y0) * e;
        prop_assert!(q2(&x, &y, &z).is_zero());
        let mb = BigInt::from(m);
        let expected = &(e * e) * &(&x0.pow(4) - &y0.pow(4).scale(&mb));
        prop_assert_eq!(q1(&x, &y, &z, &mb), expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn shifted_cubic_matches_at_the_shift(
        d in prop::sample::select(vec![1u64, 3, 7, 11]),
        raw in (-9i64..=9, -9i64..=9, -9i64..=9, -9i64..=9, -9i64..=9, -9i64..=9),
    ) {
        let field = if d == 1 {
            IQField::new(1, relthue::qfield::OmegaKind::Pure).unwrap()
        } else {
            IQField::natural(d).unwrap()
        };
        let c = [field.int(raw.0, raw.1), field.int(raw.2, raw.3), field.int(raw.4, raw.5)];
        let rec = SexticFieldRecord { d_k: -1, field, f_coeffs: c.clone(), published: Published::Unlisted };
        let g = rho_poly(&rec);
        prop_assert_eq!(g.degree(), 3);
        let minus_s1 = c[2].clone();
        prop_assert_eq!(g.eval_exact(&minus_s1), c[0].clone());
        // g(z) = f(z - c2), checked at a few more points
        for t in [field.int(2, -1), field.int(-3, 4)] {
            let shifted = &t - &c[2];
            prop_assert_eq!(g.eval_exact(&t), rec.f().eval_exact(&shifted));
        }
    }

    #[test]
    fn sweep_agrees_with_per_m_enumeration(d in d_strategy(), m in 2u64..120) {
        prop_assume!(admissible(d, m));
        let cfg = small_config();
        let b = 12;
        let swept = sweep_m(d, m, b, &Constraints::default(), &cfg).unwrap();
        let mut direct: BTreeSet<SolutionPair> = enumerate_binomial(d, m, b, &cfg).unwrap().into_iter().collect();
        let f = IQField::natural(d).unwrap();
        direct.insert(SolutionPair { x: f.one(), y: f.zero(), unit: f.one() });
        let from_sweep: BTreeSet<SolutionPair> = swept[&m].iter().cloned().collect();
        prop_assert_eq!(from_sweep, direct);
    }
}

#[test]
fn near_fourth_powers_always_appear() {
    let cfg = small_config();
    for d in [3u64, 7, 19] {
        let table = sweep_m(d, 700, 6, &Constraints::default(), &cfg).unwrap();
        let f = IQField::natural(d).unwrap();
        for k in 2i64..=5 {
            let want = extended_canonical(&f.int(k, 0), &f.one());
            for m in [k.pow(4) - 1, k.pow(4) + 1] {
                let m = m as u64;
                if !admissible(d, m) {
                    continue;
                }
                let got: Vec<_> = table[&m].iter().map(|s| extended_canonical(&s.x, &s.y)).collect();
                assert!(got.contains(&want), "d={d} m={m}: ({k}, 1) missing");
            }
        }
    }
}

#[test]
fn constraint_flags_filter_the_range() {
    let cfg = SearchConfig { size_bound_log10: 30, workers: 1, ..SearchConfig::default() };
    let c = Constraints::all();
    let report = batch(7, 60, &c, &cfg, &|_, _| {}).unwrap();
    let reduced: Vec<u64> = report.reductions.iter().map(|r| r.m).collect();
    let expected: Vec<u64> = (2..=60u64)
        .filter(|&m| m % 7 != 0 && matches!(m % 4, 2 | 3) && (2..=7u64).all(|p| m % (p * p) != 0))
        .collect();
    assert_eq!(reduced, expected);
    assert!(report.table.iter().all(|r| expected.contains(&r.m)));

    let open = batch(7, 60, &Constraints::default(), &cfg, &|_, _| {}).unwrap();
    assert_eq!(open.reductions.len() + open.excluded.len(), 59);
}

#[test]
fn canonical_representative_is_orbit_invariant() {
    for d in SUPPORTED_D {
        let f = IQField::natural(d).unwrap();
        let pair = [f.int(3, -2), f.int(-1, 5)];
        let c = canonical_tuple(&pair);
        for u in f.units() {
            let moved: Vec<IQInt> = pair.iter().map(|e| &u * e).collect();
            assert_eq!(canonical_tuple(&moved), c);
        }
    }
}
