use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::catalog::{alternating_third, Catalog, Entry};
use super::report::{PropertyReport, Report};
use crate::expr::{self, original_check_with, OriginalCheck, PartialSide, Tail};
use crate::measurable::{limit, BcSequence, CertifiedSeries, Measurable, SignResult, WindowCheck};
use crate::omega::QOmega;
use crate::rational::Rat;

fn scales(depth: u32) -> Vec<BigInt> {
    let mut qs: Vec<BigInt> = (1..=16).map(BigInt::from).collect();
    qs.extend((5..=depth).map(|k| BigInt::one() << k));
    qs
}

fn pick<'a>(rng: &mut ChaCha8Rng, catalog: &'a Catalog) -> &'a Entry {
    &catalog.entries[rng.gen_range(0..catalog.len())]
}

fn consistency(catalog: &Catalog, depth: u32) -> PropertyReport {
    let mut prop = PropertyReport::new("catalog consistency");
    let qs = scales(depth);
    for e in &catalog.entries {
        prop.check(e.value.consistency_violation(&qs).is_none(), 0, &[e.name], || {
            "answers at two scales disagree".into()
        });
    }
    prop
}

/// Positive, and apart from zero at some scale (infinitesimals are not).
fn apart_positive(m: &Measurable, depth: u32) -> bool {
    matches!(m.to_oracle().sign_search(depth), SignResult::Positive(_))
}

fn apart(m: &Measurable, depth: u32) -> bool {
    !matches!(m.to_oracle().sign_search(depth), SignResult::Undetermined(_))
}

fn less(a: &Measurable, b: &Measurable, depth: u32) -> bool {
    a.compare(b, depth).is_less()
}

/// Order properties at the level of certified comparisons.
pub fn run_order_suite(catalog: &Catalog, depth: u32, trials: u64, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut transitivity = PropertyReport::new("transitivity");
    let mut linearity = PropertyReport::new("linearity");
    let mut unbounded = PropertyReport::new("unboundedness");
    let mut density = PropertyReport::new("density");
    let mut archimedes = PropertyReport::new("archimedean witness");
    let mut monotone = PropertyReport::new("additive monotonicity");

    let half = Measurable::from_rational(Rat::frac(1, 2));
    let third = Measurable::from_rational(Rat::frac(1, 3));
    let root2 = catalog.get("sqrt(2)").cloned().unwrap_or_else(|| Measurable::from_int(2).sqrt(depth).unwrap());
    transitivity.check(
        less(&third, &half, depth) && less(&half, &root2, depth) && less(&third, &root2, depth),
        seed,
        &["1/3", "1/2", "sqrt(2)"],
        || "certified chain 1/3 < 1/2 < sqrt(2) not reproduced".into(),
    );
    let mid = Measurable::one().between(&root2);
    density.check(
        less(&Measurable::one(), &mid, depth) && less(&mid, &root2, depth),
        seed,
        &["1", "sqrt(2)"],
        || "between(1, sqrt(2)) not strictly inside".into(),
    );
    let tenth3 = Measurable::from_rational(Rat::frac(3, 10));
    match root2.archimedean_witness(&tenth3, depth) {
        Ok(n) => {
            archimedes.note(format!("witness for (sqrt(2), 3/10): n = {n}"));
            archimedes.pass();
        }
        Err(e) => archimedes.fail(seed, &["sqrt(2)", "3/10"], e.to_string()),
    }

    for _ in 0..trials {
        let (a, b, c) = (pick(&mut rng, catalog), pick(&mut rng, catalog), pick(&mut rng, catalog));
        let names = [a.name, b.name, c.name];
        let (av, bv, cv) = (&a.value, &b.value, &c.value);
        let ab = av.compare(bv, depth);
        let bc = bv.compare(cv, depth);

        // conclusions are checked two doublings deeper: gaps only add up
        if ab.is_less() && bc.is_less() {
            transitivity.check(less(av, cv, depth + 2), seed, &names, || "A < B < C but not A < C".into());
        } else if ab.is_greater() && bc.is_greater() {
            transitivity.check(cv.compare(av, depth + 2).is_less(), seed, &names, || {
                "A > B > C but not A > C".into()
            });
        } else if ab.is_less() || ab.is_greater() {
            transitivity.vacuous();
        } else {
            transitivity.undetermined();
        }

        let ba = bv.compare(av, depth);
        let deeper = av.compare(bv, depth + 4);
        let agrees = (ab.is_less() == ba.is_greater()) && (ab.is_greater() == ba.is_less());
        let refines = match (&ab, &deeper) {
            (x, y) if x.is_less() => y.is_less(),
            (x, y) if x.is_greater() => y.is_greater(),
            (_, crate::Comparison::EqualWithin(b2)) => {
                let crate::Comparison::EqualWithin(b1) = &ab else { unreachable!() };
                // a zero bound means exactly equal
                b2 < b1 || b2.is_zero()
            }
            _ => true,
        };
        if !(agrees && refines) {
            linearity.fail(seed, &names[..2], format!("{ab:?} / {ba:?} / deeper {deeper:?}"));
        } else if matches!(deeper, crate::Comparison::EqualWithin(_)) {
            linearity.undetermined();
        } else {
            linearity.pass();
        }

        let below = av.sub(&Measurable::one());
        let above = av.add(&Measurable::one());
        unbounded.check(less(&below, av, depth) && less(av, &above, depth), seed, &names[..1], || {
            "A − 1 < A < A + 1 not certified".into()
        });

        let (lo, hi) = if ab.is_less() {
            (Some(av), Some(bv))
        } else if ab.is_greater() {
            (Some(bv), Some(av))
        } else {
            (None, None)
        };
        match (lo, hi) {
            (Some(lo), Some(hi)) => {
                let m = lo.between(hi);
                density.check(less(lo, &m, depth + 3) && less(&m, hi, depth + 3), seed, &names[..2], || {
                    "midpoint not certified strictly between".into()
                });
            }
            _ => density.undetermined(),
        }

        if apart_positive(av, depth) && apart_positive(bv, depth) {
            match av.archimedean_witness(bv, depth) {
                Ok(n) => {
                    let small = av.scale(&Rat::new(BigInt::one(), n.clone()).unwrap());
                    let large = av.scale(&Rat::int(n.clone()));
                    archimedes.check(less(&small, bv, depth) && less(bv, &large, depth), seed, &names[..2], || {
                        format!("A/{n} < B < {n}·A not certified")
                    });
                }
                Err(e) => archimedes.fail(seed, &names[..2], e.to_string()),
            }
        } else {
            archimedes.vacuous();
        }

        // adding an oracle hides infinitesimal gaps, so the premise must hold at a finite scale
        let premise = if cv.is_exact() {
            ab.clone()
        } else {
            av.to_oracle().compare(&bv.to_oracle(), depth)
        };
        let (ac, bc2) = (av.add(cv), bv.add(cv));
        if premise.is_greater() {
            monotone.check(bc2.compare(&ac, depth + 2).is_less(), seed, &names, || {
                "A > B but not A + C > B + C".into()
            });
        } else if premise.is_less() {
            monotone.check(less(&ac, &bc2, depth + 2), seed, &names, || "A < B but not A + C < B + C".into());
        } else {
            monotone.undetermined();
        }
    }
    Report::new(
        "order",
        vec![
            consistency(catalog, depth),
            transitivity,
            linearity,
            unbounded,
            density,
            archimedes,
            monotone,
        ],
    )
}

/// Field laws up to new-equality within `2/2^depth`.
pub fn run_field_suite(catalog: &Catalog, depth: u32, trials: u64, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = [
        "closure under addition",
        "closure under multiplication",
        "closure under division",
        "property of zero",
        "associativity",
        "commutativity",
        "distributivity",
        "fraction rules",
    ];
    let mut props: Vec<PropertyReport> = names.iter().map(|n| PropertyReport::new(*n)).collect();
    let qs = scales(depth);
    let zero = Measurable::zero();
    let eq = |x: &Measurable, y: &Measurable| x.new_equal_within(y, depth);

    for _ in 0..trials {
        let (a, b, c) = (pick(&mut rng, catalog), pick(&mut rng, catalog), pick(&mut rng, catalog));
        let abc = [a.name, b.name, c.name];
        let (av, bv, cv) = (&a.value, &b.value, &c.value);

        props[0].check(av.add(bv).consistency_violation(&qs).is_none(), seed, &abc[..2], || {
            "A + B inconsistent".into()
        });
        props[1].check(av.mul(bv).consistency_violation(&qs).is_none(), seed, &abc[..2], || {
            "A · B inconsistent".into()
        });
        let quotient = if apart(bv, depth) {
            match av.div(bv, depth) {
                Ok(q) => {
                    props[2].check(q.consistency_violation(&qs).is_none(), seed, &abc[..2], || {
                        "A / B inconsistent".into()
                    });
                    Some(q)
                }
                Err(e) => {
                    props[2].fail(seed, &abc[..2], e.to_string());
                    None
                }
            }
        } else {
            props[2].undetermined();
            None
        };
        props[3].check(eq(&av.mul(&zero), &zero) && eq(&zero.mul(av), &zero), seed, &abc[..1], || {
            "A · 0 differs from 0".into()
        });
        props[4].check(eq(&av.mul(&bv.mul(cv)), &av.mul(bv).mul(cv)), seed, &abc, || {
            "A·(B·C) differs from (A·B)·C".into()
        });
        props[5].check(eq(&av.mul(bv), &bv.mul(av)), seed, &abc[..2], || "A·B differs from B·A".into());
        props[6].check(eq(&av.mul(&bv.add(cv)), &av.mul(bv).add(&av.mul(cv))), seed, &abc, || {
            "A·(B + C) differs from A·B + A·C".into()
        });
        match quotient {
            Some(q) => {
                let back = eq(&q.mul(bv), av);
                let sum = bv
                    .recip(depth)
                    .map(|inv| eq(&q.add(&cv.mul(&inv)), &av.add(cv).mul(&inv)))
                    .unwrap_or(false);
                // A = A′ ⇒ A/B = A′/B, with A′ the same value behind an opaque oracle
                let same = av.to_oracle().div(bv, depth).map(|q2| eq(&q, &q2)).unwrap_or(false);
                props[7].check(back && sum && same, seed, &abc, || {
                    format!("(A/B)·B = A: {back}; A/B + C/B = (A+C)/B: {sum}; A = A′ ⇒ A/B = A′/B: {same}")
                });
            }
            None => props[7].undetermined(),
        }
    }
    let mut all = vec![consistency(catalog, depth)];
    all.extend(props);
    Report::new("field", all)
}

fn bits(k: &BigInt) -> BigInt {
    BigInt::from(k.bits())
}

fn alternating_partial(n: &BigInt) -> Rat {
    let n = n.to_string().parse::<u64>().expect("small index");
    alternating_third().partial(n)
}

fn check_limit(
    prop: &mut PropertyReport,
    value: &Measurable,
    target: &Rat,
    depth: u32,
    samples: &[BigInt],
    seed: u64,
    name: &str,
) {
    let exact = QOmega::from_rat(target.clone());
    let ok = value.new_equal_within(&Measurable::from_rational(target.clone()), depth)
        && samples.iter().all(|q| value.contract_holds_for(&exact, q));
    prop.check(ok, seed, &[name], || format!("limit differs from {target}"));
}

/// Limits of monotone and alternating sequences with explicit moduli.
pub fn run_limit_suite(depth: u32, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<BigInt> = (0..64).map(|_| BigInt::from(rng.gen_range(1u64..1 << 40))).collect();

    let increasing: Arc<dyn Fn(&BigInt) -> Rat + Send + Sync> =
        Arc::new(|n| Rat::new(n.clone(), n + 1).expect("positive"));
    let decreasing: Arc<dyn Fn(&BigInt) -> Rat + Send + Sync> =
        Arc::new(|n| Rat::one() + Rat::new(BigInt::one(), n.clone()).expect("positive"));
    let alternating: Arc<dyn Fn(&BigInt) -> Rat + Send + Sync> = Arc::new(alternating_partial);

    let cases = [
        ("non-decreasing", increasing, Rat::one(), Arc::new(|k: &BigInt| k.clone()) as Arc<dyn Fn(&BigInt) -> BigInt + Send + Sync>),
        ("non-increasing", decreasing, Rat::one(), Arc::new(|k: &BigInt| k.clone())),
        ("alternating", alternating, Rat::frac(1, 3), Arc::new(bits)),
    ];

    let mut props = Vec::new();
    let mut unique = PropertyReport::new("uniqueness");
    let mut moduli = PropertyReport::new("modulus samples");
    let ks: Vec<BigInt> = (1..=64).map(BigInt::from).collect();
    let offsets: Vec<BigInt> = [0, 1, 2, 7, 100].into_iter().map(BigInt::from).collect();
    for (name, seq, target, modulus) in cases {
        let mut prop = PropertyReport::new(name);
        let s = seq.clone();
        let x: Arc<dyn Fn(&BigInt) -> Measurable + Send + Sync> =
            Arc::new(move |n| Measurable::from_rational(s(n)));
        let m = modulus.clone();
        let lim = limit(x, m, name);
        check_limit(&mut prop, &lim, &target, depth, &samples, seed, name);
        props.push(prop);

        let (s2, m2) = (seq.clone(), modulus.clone());
        let bc = BcSequence::new(move |n| s2(n), move |k| m2(k));
        moduli.check(bc.modulus_violation(&ks, &offsets).is_none(), seed, &[name], || {
            "modulus does not hold".into()
        });
        let other = Measurable::from_bc_sequence(&bc);
        unique.check(lim.new_equal_within(&other, depth), seed, &[name], || {
            "limit and parity-rule construction differ".into()
        });
    }
    // a second modulus for the same data gives the same number
    let coarse = limit(
        Arc::new(|n| Measurable::from_rational(Rat::new(n.clone(), n + 1).expect("positive"))),
        Arc::new(|k| k * 3 + 5),
        "non-decreasing, coarse modulus",
    );
    unique.check(coarse.new_equal_within(&Measurable::one(), depth), seed, &["non-decreasing"], || {
        "coarser modulus changes the limit".into()
    });
    props.push(unique);
    props.push(moduli);
    Report::new("limit", props)
}

/// Both directions of the sequence characterisation.
pub fn run_thm4_suite(catalog: &Catalog, depth: u32, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ks: Vec<BigInt> = (0..24).map(|_| BigInt::from(rng.gen_range(1u64..10_000))).collect();
    let offsets: Vec<BigInt> = [0, 1, 3, 50, 1000].into_iter().map(BigInt::from).collect();
    let samples: Vec<BigInt> = (0..32).map(|_| BigInt::from(rng.gen_range(1u64..1 << 30))).collect();
    let qs = scales(depth);

    let mut to_bc = PropertyReport::new("to-bc modulus (q = 2k)");
    let mut from_bc = PropertyReport::new("from-bc contract (k = 2q)");
    let mut round = PropertyReport::new("round trip");
    for e in &catalog.entries {
        let seq = e.value.to_bc_sequence();
        to_bc.check(seq.modulus_violation(&ks, &offsets).is_none(), seed, &[e.name], || {
            "BC modulus violated".into()
        });
        // the proof's step: at q = 2k late terms lie within 1/k of each other
        for k in &ks {
            let q = k * 2;
            let p = e.value.approx(&q);
            let m = seq.modulus(k);
            let ok = offsets.iter().all(|o| {
                let n = &m + o;
                let gap = (seq.term(&n) - Rat::new(p.clone(), q.clone()).unwrap()).abs();
                gap <= Rat::new(BigInt::one(), q.clone()).unwrap() + Rat::new(BigInt::one(), n).unwrap()
            });
            to_bc.check(ok, seed, &[e.name], || format!("terms stray from p(2k)/2k at k = {k}"));
        }
        let back = Measurable::from_bc_sequence(&seq);
        let contract = match e.value.as_exact() {
            Some(s) => samples.iter().all(|q| back.contract_holds_for(s, q)),
            None => back.consistency_violation(&qs).is_none(),
        };
        from_bc.check(contract, seed, &[e.name], || "parity-rule oracle breaks the contract".into());
        round.check(back.new_equal_within(&e.value, depth), seed, &[e.name], || {
            "round trip not new-equal".into()
        });
    }

    let mut harmonic = PropertyReport::new("1/n parity rule");
    let seq = BcSequence::new(|n| Rat::new(BigInt::one(), n.clone()).expect("positive"), |k| k + 1);
    let m = Measurable::from_bc_sequence(&seq);
    for q in 1..=10_000u64 {
        let p = m.approx_at(q);
        harmonic.check(p.is_zero(), seed, &["1/n"], || format!("p({q}) = {p}"));
    }
    harmonic.note("p(q) = 0 for q = 1..10000");
    round.check(m.new_equal_within(&Measurable::zero(), depth), seed, &["1/n"], || {
        "1/n round trip not new-equal 0".into()
    });

    Report::new(
        "thm4",
        vec![consistency(catalog, depth), to_bc, from_bc, round, harmonic],
    )
}

/// `2, −2, 1/2, −1/2, 1/8, −1/8, …`: pairs `±2·4^{-j}`.
pub fn counterexample_a() -> CertifiedSeries {
    let term = |k: u64| {
        let t = Rat::new(BigInt::from(2), BigInt::one() << (2 * (k / 2))).expect("positive");
        if k.is_multiple_of(2) {
            t
        } else {
            -t
        }
    };
    CertifiedSeries::new(0, Arc::new(term), Arc::new(move |n| term(n).abs()))
}

/// `−1 + 1/2 + 1/4 + …`.
pub fn counterexample_b() -> CertifiedSeries {
    CertifiedSeries::new(
        0,
        Arc::new(|k| {
            if k == 0 {
                Rat::int(-1)
            } else {
                Rat::new(BigInt::one(), BigInt::one() << k).expect("positive")
            }
        }),
        Arc::new(|n| {
            if n == 0 {
                Rat::int(2)
            } else {
                Rat::new(BigInt::from(2), BigInt::one() << n).expect("positive")
            }
        }),
    )
}

pub const A_PLUS_B: &str = "1 + series(n, 3*(-1/2)^n)";
pub const ONE_THIRD_SERIES: &str = "series(n, (-1)^(n+1)*(1/2)^n)";

fn describe(check: &OriginalCheck) -> String {
    match check {
        OriginalCheck::SatisfiedWith(p) => format!("SatisfiedWith(p={p})"),
        OriginalCheck::Violated => "Violated".into(),
        OriginalCheck::Unknown(r) => format!("Unknown ({r})"),
    }
}

/// Closure under addition fails for the original reading and holds for the repaired one.
pub fn run_counterexample_suite(depth: u32) -> Report {
    let seed = 0;
    let one = BigInt::one();
    let mut original = PropertyReport::new("original convention");
    let sum = expr::parse(A_PLUS_B).expect("fixed text");
    let third = expr::parse(ONE_THIRD_SERIES).expect("fixed text");
    let c = expr::original_measurability_check(&sum, &one);
    original.note(format!("A+B: {} at q=1", describe(&c)));
    original.check(c == OriginalCheck::Violated, seed, &["A+B", "q=1"], || describe(&c));
    let three = BigInt::from(3);
    let c = expr::original_measurability_check(&third, &three);
    original.note(format!("1/3-series: {} at q=3", describe(&c)));
    original.check(c == OriginalCheck::Violated, seed, &["1/3-series", "q=3"], || describe(&c));

    let (a, b) = (counterexample_a(), counterexample_b());
    for (name, series, side, expected) in [
        ("A", &a, PartialSide::Above, BigInt::zero()),
        ("B", &b, PartialSide::Below, BigInt::from(-1)),
    ] {
        let s = series.clone();
        let tail = Tail {
            bound: s.tail.clone(),
            side,
        };
        let c = original_check_with(&Measurable::zero(), &tail, &|n| Ok(s.partial(n)), &one);
        original.note(format!("{name}: {} at q=1", describe(&c)));
        original.check(c == OriginalCheck::SatisfiedWith(expected), seed, &[name, "q=1"], || describe(&c));
    }

    let mut laugwitz = PropertyReport::new("repaired convention");
    let (am, bm) = (a.to_measurable("A"), b.to_measurable("B"));
    let sum_oracle = am.add(&bm);
    let qs: Vec<BigInt> = (1..=1000).map(BigInt::from).collect();
    for (name, m) in [("A", &am), ("B", &bm), ("A+B", &sum_oracle)] {
        laugwitz.check(m.consistency_violation(&qs).is_none(), seed, &[name], || {
            "inconsistent for q ≤ 1000".into()
        });
    }
    let in_range = qs.iter().all(|q| sum_oracle.approx(q).abs() <= one);
    laugwitz.check(in_range, seed, &["A+B"], || "p(q) outside {−1, 0, 1}".into());
    laugwitz.check(sum_oracle.new_equal_within(&Measurable::zero(), depth), seed, &["A", "B"], || {
        format!("A + B not new-equal 0 within 2/2^{depth}")
    });
    laugwitz.note(format!("A + B new-equal 0 within 2/2^{depth}"));
    match expr::eval(&sum, depth) {
        expr::Classification::MeasurableValue(c) => {
            laugwitz.check(c.value.new_equal_within(&Measurable::zero(), depth), seed, &[A_PLUS_B], || {
                "expression value not new-equal 0".into()
            })
        }
        other => laugwitz.fail(seed, &[A_PLUS_B], format!("{other:?}")),
    }
    Report::new("counterexample", vec![original, laugwitz])
}

/// The widened measurement `p/q ≤ A ≤ (p+2)/q` certified at `q = 1..100`.
pub fn run_window_suite(catalog: &Catalog) -> Report {
    let mut prop = PropertyReport::new("window n=2");
    let qs: Vec<BigInt> = (1..=100).map(BigInt::from).collect();
    for e in &catalog.entries {
        for (q, verdict) in e.value.check_window(2, &qs) {
            prop.check(matches!(verdict, WindowCheck::CertifiedWith(_)), 0, &[e.name], || {
                format!("no certificate at q = {q}")
            });
        }
    }
    Report::new("window", vec![prop])
}
