//! Acceptance gate: one line per criterion, with the time budget it must meet.

use std::process::Command;
use std::time::{Duration, Instant};

use measura::expr::{self, OriginalCheck};
use measura::harness::{self, Catalog, Report};
use measura::measurable::{BcSequence, Measurable};
use measura::nets::{self, Convention, NetMode};
use measura::{QOmega, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;
const ALT: &str = "series(n, (-1)^(n+1)*(1/2)^n)";

type Check = Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cli(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_measura"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn rows(table: &str) -> Vec<(u64, BigInt)> {
    table
        .lines()
        .skip(1)
        .map(|l| {
            let (q, p) = l.split_once(' ').expect("two columns");
            (q.parse().unwrap(), p.parse().unwrap())
        })
        .collect()
}

fn green(r: &Report) -> Result<(), String> {
    ensure(r.failures() == 0, || format!("{} failures\n{}", r.failures(), r.to_table()))
}

fn certified(r: &Report, names: &[&str]) -> Result<(), String> {
    for n in names {
        let p = r.property(n).ok_or_else(|| format!("missing property {n}"))?;
        ensure(p.certified > 0, || format!("{n}: nothing certified"))?;
    }
    Ok(())
}

fn c1_measuring_table() -> Check {
    let t = cli(&["measure", "1 - 1/omega", "--q", "1..1000", "--convention", "floor"])?;
    let r = rows(&t);
    ensure(r.len() == 1000, || "expected 1000 rows".into())?;
    ensure(r.iter().all(|(q, p)| *p == BigInt::from(*q) - 1), || "p = q - 1 fails".into())?;
    let t = cli(&["measure", "1", "--q", "1..1000", "--convention", "floor"])?;
    ensure(rows(&t).iter().all(|(q, p)| *p == BigInt::from(*q)), || "p = q fails for 1".into())?;
    let c = cli(&["compare", "1", "1 - 1/omega"])?;
    ensure(c.contains("old-equal: false; new-equal: true"), || c.clone())?;
    Ok("p = q - 1 for q = 1..1000; old-equal false, new-equal true".into())
}

fn c2_infinitesimal() -> Check {
    let eps = QOmega::epsilon();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut qs: Vec<u64> = (1..=10_000).collect();
    qs.extend((0..10_000).map(|_| rng.gen_range(1..=1_000_000)));
    qs.push(1_000_000);
    for q in &qs {
        let p = eps.measuring_fraction(&BigInt::from(*q)).map_err(|e| e.to_string())?;
        ensure(p.is_zero(), || format!("p({q}) = {p}"))?;
    }
    let t = cli(&["measure", "1/omega", "--q", "999000..1000000", "--convention", "floor"])?;
    ensure(rows(&t).iter().all(|(_, p)| p.is_zero()), || "CLI table not all zero".into())?;
    Ok(format!("p = 0 at {} sampled q up to 10^6", qs.len() + 1001))
}

fn c3_alternating_series() -> Check {
    let s = cli(&["digits", ALT, "12"])?;
    let s = s.trim();
    let digits: BigInt = s.replace('.', "").parse().map_err(|_| format!("bad decimal {s}"))?;
    // |digits/10^12 − 1/3| ≤ 10^-12  ⇔  |3·digits − 10^12| ≤ 3
    let unit = BigInt::from(10).pow(12);
    let gap: BigInt = digits * 3 - unit;
    ensure(gap.abs() <= BigInt::from(3), || format!("{s} not within 1e-12"))?;
    let e = expr::parse(ALT).map_err(|e| e.to_string())?;
    let at3 = expr::original_measurability_check(&e, &BigInt::from(3));
    ensure(at3 == OriginalCheck::Violated, || format!("q=3: {at3:?}"))?;
    let at4 = expr::original_measurability_check(&e, &BigInt::from(4));
    ensure(matches!(at4, OriginalCheck::SatisfiedWith(_)), || format!("q=4: {at4:?}"))?;
    Ok(format!("digits {s}; q=3 Violated; q=4 {at4:?}"))
}

fn c4_counterexample() -> Check {
    let r = harness::run_counterexample_suite(31);
    green(&r)?;
    ensure(r.to_table().contains("A+B: Violated at q=1"), || r.to_table())?;
    let a = harness::counterexample_a().to_measurable("A");
    let b = harness::counterexample_b().to_measurable("B");
    let qs: Vec<BigInt> = (1..=1000).map(BigInt::from).collect();
    let sum = a.add(&b);
    for (n, m) in [("A", &a), ("B", &b), ("A+B", &sum)] {
        ensure(m.consistency_violation(&qs).is_none(), || format!("{n} inconsistent"))?;
    }
    ensure(sum.new_equal_within(&Measurable::zero(), 31), || "A + B not new-equal 0".into())?;
    Ok("A+B Violated at q=1; oracles consistent for q <= 1000; A + B new-equal 0 within 2^-30".into())
}

fn c5_order() -> Check {
    let r = harness::run_order_suite(&Catalog::standard(), 20, 200, SEED);
    green(&r)?;
    certified(
        &r,
        &["transitivity", "density", "unboundedness", "additive monotonicity", "archimedean witness"],
    )?;
    Ok("200 seeded triples, zero failures".into())
}

fn c6_field() -> Check {
    let r = harness::run_field_suite(&Catalog::standard(), 20, 200, SEED);
    green(&r)?;
    certified(&r, &["associativity", "distributivity", "fraction rules", "closure under division"])?;
    Ok("200 seeded trials within 2^-19, zero failures".into())
}

fn c7_limits() -> Check {
    let r = harness::run_limit_suite(31, SEED);
    green(&r)?;
    certified(&r, &["non-decreasing", "non-increasing", "alternating", "uniqueness"])?;
    Ok("limits 1, 1, 1/3 within 2^-30; uniqueness holds".into())
}

fn c8_sequences() -> Check {
    let catalog = Catalog::standard();
    let r = harness::run_thm4_suite(&catalog, 20, SEED);
    green(&r)?;
    certified(&r, &["to-bc modulus (q = 2k)", "from-bc contract (k = 2q)", "round trip"])?;
    let seq = BcSequence::new(|n| Rat::new(BigInt::one(), n.clone()).unwrap(), |k| k + 1);
    let m = Measurable::from_bc_sequence(&seq);
    ensure((1..=10_000u64).all(|q| m.approx_at(q).is_zero()), || "1/n: p(q) != 0".into())?;
    for e in &catalog.entries {
        let back = Measurable::from_bc_sequence(&e.value.to_bc_sequence());
        ensure(back.new_equal_within(&e.value, 20), || format!("{} round trip", e.name))?;
    }
    Ok("1/n gives p = 0 for q <= 10^4; catalog round trips within 2^-19".into())
}

/// `a ≥ 0` with `a/b ≤ √2` (resp. `≥`), by integer squares.
fn below_root2(x: &Rat) -> bool {
    x.signum() <= 0 || x.numer() * x.numer() <= BigInt::from(2) * x.denom() * x.denom()
}

fn above_root2(x: &Rat) -> bool {
    x.signum() > 0 && x.numer() * x.numer() >= BigInt::from(2) * x.denom() * x.denom()
}

fn c9_nets() -> Check {
    let two_thirds = Measurable::from_rational(Rat::frac(2, 3));
    let expected = [(2, (1, 2), (1, 1)), (4, (1, 2), (3, 4)), (8, (5, 8), (3, 4))];
    let mut prev: Option<nets::ApproxInterval> = None;
    for (q, lo, hi) in expected {
        let iv = nets::bolzano_interval(&two_thirds, &BigInt::from(q));
        ensure(iv.convention == Convention::FloorHalfOpen, || "not half-open".into())?;
        ensure(iv.lo() == Rat::frac(lo.0, lo.1) && iv.hi() == Rat::frac(hi.0, hi.1), || {
            format!("q={q}: [{}, {})", iv.lo(), iv.hi())
        })?;
        if let Some(p) = &prev {
            ensure(iv.is_subset_of(p), || format!("q={q} not nested"))?;
        }
        prev = Some(iv);
    }
    let net = nets::net_from_measurable(&two_thirds, &BigInt::from(2), NetMode::DoublingMultiples)
        .map_err(|e| e.to_string())?;
    ensure(net.nesting_violation(40).is_none(), || "doubling net not nested".into())?;

    let naive = nets::naive_multiples_violation(&two_thirds, &BigInt::from(2), 10);
    ensure(naive == Some((BigInt::from(4), BigInt::from(6))), || format!("{naive:?}"))?;

    let root2 = Measurable::from_int(2).sqrt(20).map_err(|e| e.to_string())?;
    let net = nets::net_from_measurable(&root2, &BigInt::one(), NetMode::CumulativeIntersection)
        .map_err(|e| e.to_string())?;
    for n in 1..=50 {
        let iv = net.interval(n);
        ensure(below_root2(&iv.lo) && above_root2(&iv.hi), || format!("n={n} misses sqrt(2)"))?;
    }
    ensure(net.nesting_violation(50).is_none(), || "sqrt(2) net not nested".into())?;
    let back = nets::net_to_measurable(&net);
    ensure(back.new_equal_within(&root2, 20), || "net round trip".into())?;
    Ok("[1/2,1) > [1/2,3/4) > [5/8,3/4); naive multiples: I(6) not inside I(4); sqrt(2) net to depth 50".into())
}

fn c10_dually_directed() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..100 {
        let v = Rat::frac(rng.gen_range(-1000..=1000), rng.gen_range(1..=100));
        let (q, q2) = (BigInt::from(rng.gen_range(1..=1000u64)), BigInt::from(rng.gen_range(1..=1000u64)));
        let a = Measurable::from_rational(v.clone());
        let (q3, ok) = nets::dually_directed_witness(&a, &q, &q2);
        ensure(ok, || format!("{v} at ({q}, {q2}) not certified"))?;
        // [f/s, (f+1)/s) with f = floor(s·v), compared by cross-multiplication
        let cell = |s: &BigInt| (v.floor_scaled(s), s.clone());
        let (f3, s3) = cell(&q3);
        for s in [&q, &q2] {
            let (f, s) = cell(s);
            let inside = &f * &s3 <= &f3 * &s && (&f3 + 1) * &s <= (&f + 1) * &s3;
            ensure(inside, || format!("{v}: I({q3}) not inside I({s})"))?;
        }
    }
    Ok("100 seeded triples certified exactly".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "measuring table of 1 - 1/omega", Duration::from_secs(1), c1_measuring_table),
        (2, "infinitesimal 1/omega", Duration::from_secs(1), c2_infinitesimal),
        (3, "alternating series", Duration::from_secs(1), c3_alternating_series),
        (4, "closure counterexample", Duration::from_secs(5), c4_counterexample),
        (5, "order suite", Duration::from_secs(60), c5_order),
        (6, "field suite", Duration::from_secs(60), c6_field),
        (7, "limit suite", Duration::from_secs(10), c7_limits),
        (8, "sequence suite", Duration::from_secs(30), c8_sequences),
        (9, "nets", Duration::from_secs(10), c9_nets),
        (10, "dually-directed witness", Duration::from_secs(5), c10_dually_directed),
    ];
    let mut failed = 0;
    for (n, name, budget, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let verdict = match result {
            Ok(detail) if elapsed < budget => format!("PASS {name}: {detail}"),
            Ok(_) => format!("FAIL {name}: over time budget"),
            Err(why) => format!("FAIL {name}: {why}"),
        };
        if verdict.starts_with("FAIL") {
            failed += 1;
        }
        println!(
            "criterion {n:>2} {verdict} [{} ms, budget {} ms]",
            elapsed.as_millis(),
            budget.as_millis()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
