use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

use super::*;
use crate::omega::QOmega;

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn exact(n: i64, d: i64) -> Measurable {
    Measurable::from_rational(Rat::frac(n, d))
}

fn sqrt2() -> Measurable {
    Measurable::from_int(2).sqrt(20).unwrap()
}

fn eps() -> QOmega {
    QOmega::epsilon()
}

/// Independent oracle: every `p ≥ 1` with `|√n − p/q| ≤ 1/q`, i.e. `(p−1)² ≤ n·q² ≤ (p+1)²`.
fn sqrt_admissible(n: i64, q: i64) -> Vec<BigInt> {
    let t = n * q * q;
    (1..=4 * q * (n + 1))
        .filter(|p| (p - 1) * (p - 1) <= t && t <= (p + 1) * (p + 1))
        .map(BigInt::from)
        .collect()
}

/// The 1/3-series `1/2 − 1/4 + 1/8 − …` as a genuine oracle with Leibniz tail `|t(N+1)|`.
fn alternating_third() -> Measurable {
    CertifiedSeries::new(
        1,
        Arc::new(|k| {
            let t = Rat::frac(1, 2).pow(k as i64).unwrap();
            if k % 2 == 1 {
                t
            } else {
                -t
            }
        }),
        Arc::new(|n| Rat::frac(1, 2).pow(n as i64 + 1).unwrap()),
    )
    .to_measurable("alt-third")
}

#[test]
fn from_rational_examples() {
    let a = exact(2, 3);
    assert!(a.is_exact());
    assert_eq!(a.approx_at(3), big(2));
    for q in 1..50 {
        assert_eq!(Measurable::zero().approx_at(q), big(0));
        assert_eq!(Measurable::one().approx_at(q), big(q as i64));
    }
}

#[test]
fn from_qomega_examples() {
    let e = Measurable::from_qomega(eps()).unwrap();
    let one_minus = Measurable::from_qomega(QOmega::one().sub(&eps())).unwrap();
    for q in 1..100 {
        assert_eq!(e.approx_at(q), big(0));
        assert_eq!(one_minus.approx_at(q), big(q as i64 - 1));
    }
    assert_eq!(one_minus.approx_at(5), big(4));
    assert_eq!(
        Measurable::from_qomega(QOmega::omega()).unwrap_err(),
        Error::InfinitelyLargeInput
    );
}

#[test]
fn sqrt_examples() {
    assert_eq!(sqrt_admissible(2, 10), vec![big(14), big(15)]);
    let p = sqrt2().approx_at(10);
    assert!(sqrt_admissible(2, 10).contains(&p));
    assert_eq!(p, big(14));
    let z = Measurable::zero().sqrt(10).unwrap();
    for q in 1..20 {
        assert_eq!(z.approx_at(q), big(0));
    }
    assert_eq!(exact(9, 4).sqrt(5).unwrap().as_exact().unwrap().as_rat(), Some(Rat::frac(3, 2)));
    assert_eq!(exact(-1, 3).sqrt(5).unwrap_err(), Error::NegativeInput);
    let sq = sqrt2().mul(&sqrt2());
    let q = big(1 << 20);
    assert!((sq.approx_rat(&q) - Rat::int(2)).abs() <= Rat::new(2, q).unwrap());
    assert!(sq.new_equal_within(&Measurable::from_int(2), 21));
}

#[test]
fn add_examples() {
    assert_eq!(exact(1, 3).add(&exact(1, 3)).approx_at(3), big(2));
    assert_eq!(sqrt_admissible(8, 10), vec![big(28), big(29)]);
    let p = sqrt2().add(&sqrt2()).approx_at(10);
    assert!(sqrt_admissible(8, 10).contains(&p), "{p}");
    let one = Measurable::one();
    let e = Measurable::from_qomega(eps()).unwrap();
    let s = one.add(&e);
    assert_eq!(s.as_exact().unwrap(), &QOmega::one().add(&eps()));
    assert!(s.new_equal_within(&one, 10));
}

#[test]
fn neg_examples() {
    assert_eq!(exact(2, 3).neg().approx_at(3), big(-2));
    let p = sqrt2().neg().approx_at(10);
    assert!(p == big(-14) || p == big(-15));
    assert!(sqrt2().neg().neg().new_equal_within(&sqrt2(), 20));
}

#[test]
fn mul_examples() {
    let one = exact(2, 3).mul(&exact(3, 2));
    assert_eq!(one.as_exact().unwrap(), &QOmega::one());
    assert!(sqrt2().mul(&Measurable::zero()).new_equal_within(&Measurable::zero(), 20));
}

#[test]
fn recip_and_div_examples() {
    assert_eq!(exact(1, 3).recip(4).unwrap().as_exact().unwrap().as_rat(), Some(Rat::int(3)));
    let zero = Measurable::from_oracle("zero", |_| big(0));
    assert_eq!(zero.recip(12).unwrap_err(), Error::NotApartFromZero(12));
    let e = Measurable::from_qomega(eps()).unwrap();
    assert_eq!(e.recip(5).unwrap_err(), Error::InfinitelyLargeResult);
    assert_eq!(Measurable::zero().recip(5).unwrap_err(), Error::DivisionByZero);
    let r = sqrt2().recip(30).unwrap();
    assert!(r.mul(&sqrt2()).new_equal_within(&Measurable::one(), 21));
    let third = Measurable::one().div(&exact(3, 1), 5).unwrap();
    assert_eq!(third.as_exact().unwrap().as_rat(), Some(Rat::frac(1, 3)));
    assert!(sqrt2().div(&sqrt2(), 20).unwrap().new_equal_within(&Measurable::one(), 21));
    let a = exact(5, 7).to_oracle();
    let b = sqrt2();
    assert!(a.div(&b, 20).unwrap().mul(&b).new_equal_within(&a, 21));
}

#[test]
fn sign_search_examples() {
    let e = Measurable::from_qomega(eps()).unwrap();
    assert_eq!(e.sign_search(5), SignResult::Positive(Witness::Exact));
    let zero = Measurable::from_oracle("zero", |_| big(0));
    assert_eq!(zero.sign_search(7), SignResult::Undetermined(Rat::new(2, 128).unwrap()));
    match sqrt2().sign_search(3) {
        SignResult::Positive(Witness::Scale(q)) => assert!(q <= big(8)),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(sqrt2().neg().sign_search(3), SignResult::Negative(Witness::Scale(_))));
}

#[test]
fn compare_examples() {
    assert_eq!(exact(1, 3).compare(&exact(1, 2), 5), Comparison::Less(Witness::Exact));
    let one_minus = Measurable::from_qomega(QOmega::one().sub(&eps())).unwrap();
    assert_eq!(Measurable::one().compare(&one_minus, 5), Comparison::Greater(Witness::Exact));
    assert!(matches!(sqrt2().compare(&exact(3, 2), 20), Comparison::Less(Witness::Scale(_))));
    assert!(matches!(
        alternating_third().compare(&exact(1, 3), 20),
        Comparison::EqualWithin(_)
    ));
}

#[test]
fn new_equal_examples() {
    let one_minus = Measurable::from_qomega(QOmega::one().sub(&eps())).unwrap();
    assert!(Measurable::one().new_equal_within(&one_minus, 1));
    for depth in [1, 5, 20, 30] {
        assert!(exact(1, 3).new_equal_within(&alternating_third(), depth));
    }
    let e2 = Measurable::from_qomega(eps().mul(&eps())).unwrap();
    assert!(Measurable::zero().new_equal_within(&e2, 3));
    assert!(!exact(1, 3).new_equal_within(&exact(1, 2), 3));
    assert!(!exact(1, 3).to_oracle().new_equal_within(&exact(1, 2), 10));
}

#[test]
fn abs_max_min_examples() {
    assert!(exact(-2, 3).abs().new_equal_within(&exact(2, 3), 10));
    assert_eq!(exact(1, 3).to_oracle().max(&exact(1, 2)).approx_at(2), big(1));
    assert_eq!(exact(1, 3).max(&exact(1, 2)).approx_at(2), big(1));
    assert!(sqrt2().min(&Measurable::from_int(2)).new_equal_within(&sqrt2(), 20));
    assert!(sqrt2().neg().abs().new_equal_within(&sqrt2(), 20));
}

#[test]
fn limit_examples() {
    let five = limit(
        Arc::new(|_| Measurable::from_int(5)),
        Arc::new(|k| k.clone()),
        "const-5",
    );
    for q in 1..50 {
        assert_eq!(five.approx_at(q), big(5 * q as i64));
    }
    let telescoping = limit(
        Arc::new(|n| Measurable::from_rational(Rat::new(n.clone(), n + 1).unwrap())),
        Arc::new(|k| k.clone()),
        "n/(n+1)",
    );
    assert!(telescoping.new_equal_within(&Measurable::one(), 31));
    // partial sums of the 1/3-series; |S_n − S_m| ≤ 2^-min(n,m)
    let partial = |n: &BigInt| {
        let n: u32 = n.try_into().unwrap();
        let s = (1..=n).fold(Rat::zero(), |acc, k| {
            let t = Rat::frac(1, 2).pow(k as i64).unwrap();
            if k % 2 == 1 {
                acc + t
            } else {
                acc - t
            }
        });
        Measurable::from_rational(s)
    };
    let third = limit(Arc::new(partial), Arc::new(|k| BigInt::from(k.bits())), "alt");
    assert!(third.new_equal_within(&exact(1, 3), 31));
}

#[test]
fn bc_sequence_examples() {
    let inv = BcSequence::new(|n| Rat::new(1, n.clone()).unwrap(), |k| k + 1);
    let m = Measurable::from_bc_sequence(&inv);
    for q in 1..=200 {
        assert_eq!(m.approx_at(q), big(0));
    }
    let above = BcSequence::new(|n| Rat::new(n + 1, n.clone()).unwrap(), |k| k + 1);
    let m = Measurable::from_bc_sequence(&above);
    for q in 1..=200 {
        assert_eq!(m.approx_at(q), big(q as i64));
    }
    let constant = BcSequence::new(|_| Rat::frac(2, 3), |_| BigInt::one());
    assert_eq!(Measurable::from_bc_sequence(&constant).approx_at(3), big(2));
}

#[test]
fn to_bc_sequence_examples() {
    let s = exact(1, 3).to_bc_sequence();
    assert_eq!(s.term(&big(4)), Rat::frac(1, 4));
    assert_eq!(s.modulus(&big(5)), big(11));
    let t = sqrt2().to_bc_sequence().term(&big(10));
    assert!(t == Rat::frac(14, 10) || t == Rat::frac(15, 10));
    for a in [exact(1, 3), sqrt2(), alternating_third()] {
        let back = Measurable::from_bc_sequence(&a.to_bc_sequence());
        assert!(back.new_equal_within(&a, 21));
        let ks: Vec<BigInt> = (1..40).map(big).collect();
        let offs: Vec<BigInt> = [0, 1, 2, 5, 17, 100].into_iter().map(big).collect();
        assert_eq!(a.to_bc_sequence().modulus_violation(&ks, &offs), None);
    }
}

#[test]
fn archimedean_examples() {
    assert_eq!(Measurable::one().archimedean_witness(&Measurable::one(), 10).unwrap(), big(2));
    let n = sqrt2().archimedean_witness(&exact(3, 10), 20).unwrap();
    assert!(n <= big(16), "{n}");
    assert!(n >= big(5));
    let n = Measurable::from_int(100).archimedean_witness(&exact(1, 100), 20).unwrap();
    assert!(n >= big(10001));
    let e = Measurable::from_qomega(eps()).unwrap();
    assert!(e.archimedean_witness(&Measurable::one(), 10).is_err());
    let zero = Measurable::from_oracle("zero", |_| big(0));
    assert_eq!(
        zero.archimedean_witness(&sqrt2(), 8).unwrap_err(),
        Error::NoWitnessWithinDepth(8)
    );
}

#[test]
fn between_examples() {
    assert!(Measurable::zero().between(&Measurable::one()).new_equal_within(&exact(1, 2), 10));
    let mid = Measurable::one().between(&sqrt2());
    assert!(Measurable::one().compare(&mid, 20).is_less());
    assert!(mid.compare(&sqrt2(), 20).is_less());
    assert!(sqrt2().between(&sqrt2()).new_equal_within(&sqrt2(), 20));
}

#[test]
fn window_examples() {
    let r = exact(1, 3).check_window(2, &[big(3)]);
    assert_eq!(r, vec![(big(3), WindowCheck::CertifiedWith(big(0)))]);
    let r = sqrt2().check_window(2, &[big(10)]);
    assert_eq!(r, vec![(big(10), WindowCheck::CertifiedWith(big(13)))]);
    let qs: Vec<BigInt> = (1..=100).map(big).collect();
    for a in [exact(1, 3), sqrt2(), alternating_third(), exact(-7, 5)] {
        for (_, v) in a.check_window(2, &qs) {
            assert!(matches!(v, WindowCheck::CertifiedWith(_)));
        }
    }
    assert!(exact(1, 3)
        .check_window(0, &[big(3)])
        .iter()
        .all(|(_, v)| *v == WindowCheck::NoCertificate));
}

#[test]
fn memoized_answers_are_stable() {
    let a = sqrt2().add(&alternating_third());
    let qs: Vec<BigInt> = (1..300).map(big).collect();
    let first: Vec<BigInt> = qs.iter().map(|q| a.approx(q)).collect();
    let second: Vec<BigInt> = qs.iter().map(|q| a.approx(q)).collect();
    assert_eq!(first, second);
    let handles: Vec<_> = (0..4)
        .map(|_| {
            let a = a.clone();
            let qs = qs.clone();
            std::thread::spawn(move || qs.iter().map(|q| a.approx(q)).collect::<Vec<_>>())
        })
        .collect();
    for h in handles {
        assert_eq!(h.join().unwrap(), first);
    }
}

/// Exact catalog used for contract checks: values with known exact S.
fn exact_values() -> Vec<QOmega> {
    vec![
        QOmega::zero(),
        QOmega::one(),
        QOmega::from_rat(Rat::frac(-1, 1)),
        QOmega::from_rat(Rat::frac(1, 3)),
        QOmega::from_rat(Rat::frac(2, 3)),
        QOmega::from_rat(Rat::frac(-22, 7)),
        QOmega::one().sub(&eps()),
        eps(),
        QOmega::from_rat(Rat::frac(3, 2)).sub(&eps()),
    ]
}

fn sample_scales() -> Vec<BigInt> {
    let mut qs: Vec<BigInt> = (1..=64).map(big).collect();
    qs.extend([97, 100, 255, 256, 1000, 1023, 4096, 9999, 65535, 65536].into_iter().map(big));
    qs
}

#[test]
fn contract_preserved_by_every_operation() {
    let vals = exact_values();
    let qs = sample_scales();
    for a in &vals {
        for b in &vals {
            let (ma, mb) = (
                Measurable::from_qomega(a.clone()).unwrap().to_oracle(),
                Measurable::from_qomega(b.clone()).unwrap().to_oracle(),
            );
            let mut cases = vec![
                (ma.add(&mb), a.add(b)),
                (ma.sub(&mb), a.sub(b)),
                (ma.mul(&mb), a.mul(b)),
                (ma.abs(), a.abs()),
                (ma.max(&mb), a.clone().max(b.clone())),
                (ma.min(&mb), a.clone().min(b.clone())),
                (ma.scale(&Rat::frac(-5, 3)), a.scale(&Rat::frac(-5, 3))),
                (ma.between(&mb), a.add(b).scale(&Rat::frac(1, 2))),
            ];
            if b.std_part().unwrap() != Rat::zero() {
                cases.push((ma.div(&mb, 12).unwrap(), a.div(b).unwrap()));
            }
            for (m, s) in cases {
                // oracle inputs only see standard parts
                let s = QOmega::from_rat(s.std_part().unwrap());
                for q in &qs {
                    assert!(m.contract_holds_for(&s, q), "{m:?} vs {s} at q={q}");
                }
            }
        }
        // exact path: stricter floor convention
        let m = Measurable::from_qomega(a.clone()).unwrap();
        for q in &qs {
            let p = m.approx(q);
            let lo = QOmega::from_rat(Rat::new(p.clone(), q.clone()).unwrap());
            let hi = QOmega::from_rat(Rat::new(p + 1, q.clone()).unwrap());
            assert!(lo <= *a && *a < hi);
        }
    }
}

#[test]
fn sqrt_contract_against_integer_search() {
    for n in [2i64, 3, 5, 10, 99] {
        let r = Measurable::from_int(n).sqrt(10).unwrap();
        for q in 1..=60 {
            assert!(sqrt_admissible(n, q).contains(&r.approx_at(q as u64)), "sqrt({n}) at {q}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn consistency_of_constructed_oracles(
        a in (-50i64..50, 1i64..20),
        b in (-50i64..50, 1i64..20),
        qs in prop::collection::vec(1u64..65536, 2..12),
    ) {
        let x = exact(a.0, a.1).to_oracle();
        let y = exact(b.0, b.1).add(&sqrt2());
        let qs: Vec<BigInt> = qs.into_iter().map(BigInt::from).collect();
        for m in [x.add(&y), x.mul(&y), y.sqrt(10).unwrap_or_else(|_| x.clone()), x.max(&y), y.scale(&Rat::frac(7, 3))] {
            prop_assert_eq!(m.consistency_violation(&qs), None);
        }
    }

    #[test]
    fn exact_to_oracle_round_trip(n in -100i64..100, d in 1i64..50, q in 1u64..100000) {
        let e = exact(n, d);
        prop_assert_eq!(e.approx_at(q), e.to_oracle().approx_at(q));
        prop_assert!(e.to_oracle().new_equal_within(&e, 16));
    }
}
