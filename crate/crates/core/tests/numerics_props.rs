use num_rational::BigRational;
use proptest::prelude::*;
use relthue::numerics::{complex_roots, ArbComplex, RelPoly};
use relthue::qfield::IQField;

fn field_strategy() -> impl Strategy<Value = IQField> {
    prop::sample::select(vec![3u64, 7, 11, 19, 43]).prop_map(|d| IQField::natural(d).unwrap())
}

fn poly_strategy() -> impl Strategy<Value = RelPoly> {
    (field_strategy(), 3usize..=4)
        .prop_flat_map(|(f, n)| (Just(f), prop::collection::vec((-20i64..=20, -20i64..=20), n)))
        .prop_filter_map("squarefree", |(f, low)| {
            let mut coeffs: Vec<_> = low.iter().map(|&(a, b)| f.int(a, b)).collect();
            coeffs.push(f.one());
            let p = RelPoly::new(coeffs).ok()?;
            p.is_squarefree().then_some(p)
        })
}

/// Real and imaginary parts of `inner` lie within those of `outer`.
fn inside(inner: &ArbComplex, outer: &ArbComplex) -> bool {
    let within = |i: &relthue::numerics::ArbReal, o: &relthue::numerics::ArbReal| {
        let (il, iu): (BigRational, BigRational) = (i.lower(), i.upper());
        il >= o.lower() && iu <= o.upper()
    };
    within(&inner.re, &outer.re) && within(&inner.im, &outer.im)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn roots_are_certified(p in poly_strategy()) {
        let roots = complex_roots(&p, 128).unwrap();
        prop_assert_eq!(roots.len(), p.degree());
        for (i, r) in roots.iter().enumerate() {
            prop_assert!(p.eval(r).contains_zero());
            for s in &roots[i + 1..] {
                prop_assert!(!(r - s).contains_zero(), "balls overlap");
            }
            // one Newton step from the centre of a widened ball stays inside it
            let widened = r.inflate_rational(&BigRational::new(1.into(), num_bigint::BigInt::from(1u64) << 60u32));
            let mid = r.mid_ball();
            let step = p.eval(&mid).checked_div(&p.eval_derivative(&widened));
            prop_assert!(step.is_some());
            let newton = &mid - &step.unwrap();
            prop_assert!(inside(&newton, &widened));
        }
    }
}
