use num_bigint::BigInt;
use proptest::prelude::*;
use relthue::qfield::{IQField, IQInt, OmegaKind};

fn fields() -> Vec<IQField> {
    let mut out: Vec<IQField> = [3u64, 7, 11, 19, 43, 67, 163].iter().map(|&d| IQField::natural(d).unwrap()).collect();
    for d in [1u64, 2, 5] {
        out.push(IQField::new(d, OmegaKind::Pure).unwrap());
    }
    out
}

/// Norm from the coordinates, written out independently of the library:
/// `N(a + b w) = a^2 + a b tr(w) + b^2 N(w)`.
fn norm_oracle(f: IQField, a: &BigInt, b: &BigInt) -> BigInt {
    let d = BigInt::from(f.d());
    match f.kind() {
        OmegaKind::Half => a * a + a * b + b * b * (&d + 1) / 4,
        OmegaKind::Pure => a * a + b * b * d,
    }
}

fn coord() -> impl Strategy<Value = i64> {
    -1_000_000i64..=1_000_000
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn norm_is_multiplicative(a in coord(), b in coord(), c in coord(), e in coord()) {
        for f in fields() {
            let x = f.int(a, b);
            let y = f.int(c, e);
            let xy = &x * &y;
            prop_assert_eq!(xy.norm(), x.norm() * y.norm());
            prop_assert_eq!(x.norm(), norm_oracle(f, &BigInt::from(a), &BigInt::from(b)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn exact_division_inverts_multiplication(a in coord(), b in coord(), c in coord(), e in coord()) {
        prop_assume!(c != 0 || e != 0);
        for f in fields() {
            let x = f.int(a, b);
            let y = f.int(c, e);
            prop_assert_eq!(&(&x * &y).exact_div(&y).unwrap(), &Some(x.clone()));
        }
    }

    #[test]
    fn embedding_respects_products(a in -1000i64..1000, b in -1000i64..1000, c in -1000i64..1000, e in -1000i64..1000) {
        for f in fields() {
            let x = f.int(a, b);
            let y = f.int(c, e);
            let lhs = (&x * &y).embed(128);
            let rhs = &x.embed(128) * &y.embed(128);
            prop_assert!((&lhs - &rhs).contains_zero());
        }
    }
}

#[test]
fn units_are_norm_one_in_a_small_box() {
    for f in fields() {
        let units: Vec<IQInt> = f.units();
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                let x = f.int(a, b);
                let by_norm = norm_oracle(f, &BigInt::from(a), &BigInt::from(b)) == BigInt::from(1);
                assert_eq!(units.contains(&x), by_norm, "{f}: {x}");
            }
        }
    }
}

#[test]
fn coordinate_box_covers_every_small_element() {
    for f in fields() {
        let w = f.omega_c64();
        for s in [5i64, 10, 20] {
            let (ba, bb) = f.size_to_coord_bounds(&BigInt::from(s));
            // |Im| = |b| Im(w) <= s bounds b, then |a| <= s + |b| |Re w|
            let b_lim = (s as f64 / w.im).ceil() as i64 + 1;
            let a_lim = s + (b_lim as f64 * w.re).ceil() as i64 + 1;
            for a in -a_lim..=a_lim {
                for b in -b_lim..=b_lim {
                    let z = num_complex::Complex64::new(a as f64, 0.0) + w * b as f64;
                    if z.norm() <= s as f64 {
                        assert!(BigInt::from(a.abs()) <= ba && BigInt::from(b.abs()) <= bb, "{f} s={s} ({a}, {b})");
                    }
                }
            }
        }
    }
}
