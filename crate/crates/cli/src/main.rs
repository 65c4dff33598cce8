use std::io::{self, BufRead, BufWriter, Write};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use measura::expr::{self, Certified, Classification, Expr};
use measura::harness::{self, SuiteConfig};
use measura::measurable::Witness;
use measura::nets::{self, NetMode};
use measura::{Comparison, Measurable, Rat};
use num_bigint::BigInt;
use num_traits::Signed;

const EXIT_PARSE: u8 = 1;
const EXIT_NOT_MEASURABLE: u8 = 2;
const EXIT_CONVENTION: u8 = 3;
const EXIT_VERIFY: u8 = 4;

/// Exact measurement of infinite number expressions.
#[derive(Parser)]
#[command(name = "measura", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a decimal with exactly D fractional digits.
    ///
    /// The printed value is within 10^-D of the true value. This is a distance
    /// bound; the last digit is not guaranteed to be the correctly rounded one.
    Digits {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        d: u32,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
        depth: u32,
    },
    /// Table of measuring fractions p/q for a range of q.
    Measure {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// A..B (inclusive) or a single q.
        #[arg(long)]
        q: QRange,
        #[arg(long, value_enum, default_value_t = ConventionArg::Laugwitz)]
        convention: ConventionArg,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
        depth: u32,
    },
    /// Compare two values by certified sign search.
    Compare {
        #[arg(allow_hyphen_values = true)]
        e1: String,
        #[arg(allow_hyphen_values = true)]
        e2: String,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
        depth: u32,
    },
    /// Dump a nested interval net.
    Net {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        q0: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        depth: u64,
        #[arg(long, value_enum)]
        mode: ModeArg,
    },
    /// Classify an expression as measurable, infinitely large or unknown.
    Classify {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
        depth: u32,
    },
    /// Run a property suite: order, field, limit, thm4, counterexample, window or all.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
        depth: u32,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Read expressions line by line and classify them.
    Repl,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Floor,
    Laugwitz,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Doubling,
    Cumulative,
}

#[derive(Clone, Debug)]
struct QRange {
    lo: u64,
    hi: u64,
}

impl FromStr for QRange {
    type Err = String;

    fn from_str(s: &str) -> Result<QRange, String> {
        let parse = |t: &str| {
            t.trim()
                .parse::<u64>()
                .ok()
                .filter(|q| *q >= 1)
                .ok_or_else(|| format!("'{t}' is not a positive integer"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b)?),
            None => {
                let q = parse(s)?;
                (q, q)
            }
        };
        if lo > hi {
            return Err(format!("empty range {s}"));
        }
        Ok(QRange { lo, hi })
    }
}

/// Reason for stopping, with its exit code.
struct Halt {
    code: u8,
    message: String,
}

impl Halt {
    fn new(code: u8, message: impl Into<String>) -> Halt {
        Halt {
            code,
            message: message.into(),
        }
    }
}

type Outcome = Result<(), Halt>;

fn parse(text: &str) -> Result<Expr, Halt> {
    expr::parse(text).map_err(|e| Halt::new(EXIT_PARSE, e.to_string()))
}

fn measurable(text: &str, depth: u32) -> Result<Certified, Halt> {
    match expr::eval(&parse(text)?, depth) {
        Classification::MeasurableValue(c) => Ok(c),
        Classification::InfinitelyLargeValue(rule) => Err(Halt::new(
            EXIT_NOT_MEASURABLE,
            format!("not measurable: infinitely large ({rule})"),
        )),
        Classification::Unknown(reason) => {
            Err(Halt::new(EXIT_NOT_MEASURABLE, format!("not measurable: unknown ({reason})")))
        }
    }
}

/// Nearest `d`-digit decimal to `p(10^{d+1})/10^{d+1}`; within `0.6·10^{-d}` of the value.
fn decimal(value: &Measurable, d: u32) -> String {
    let q = BigInt::from(10).pow(d + 1);
    let p = value.approx(&q);
    let r = Rat::new(p, BigInt::from(10)).expect("nonzero").round_nearest();
    let unit = BigInt::from(10).pow(d);
    let mag = r.abs();
    let sign = if r.is_negative() { "-" } else { "" };
    let frac = (&mag % &unit).to_string();
    format!("{sign}{}.{}{frac}", &mag / &unit, "0".repeat(d as usize - frac.len()))
}

fn describe(c: &Classification) -> String {
    match c {
        Classification::MeasurableValue(cert) => {
            let rules = cert.rules.join(", ");
            match cert.value.as_exact() {
                Some(v) => format!(
                    "MeasurableValue, Exact {v}, std {} (rule: {rules})",
                    v.std_part().expect("finite")
                ),
                None => format!("MeasurableValue, Oracle (rule: {rules})"),
            }
        }
        Classification::InfinitelyLargeValue(rule) => format!("InfinitelyLargeValue (rule: {rule})"),
        Classification::Unknown(reason) => format!("Unknown ({reason})"),
    }
}

fn json_int(n: &BigInt) -> serde_json::Value {
    serde_json::Value::Number(n.to_string().parse().expect("integer literal"))
}

fn run(cmd: Command, out: &mut impl Write) -> Outcome {
    let io_err = |e: io::Error| Halt::new(1, e.to_string());
    match cmd {
        Command::Digits { expr, d, depth } => {
            let c = measurable(&expr, depth)?;
            writeln!(out, "{}", decimal(&c.value, d)).map_err(io_err)
        }
        Command::Measure {
            expr,
            q,
            convention,
            format,
            depth,
        } => {
            let c = measurable(&expr, depth)?;
            let exact = c.value.as_exact();
            if convention == ConventionArg::Floor && exact.is_none() {
                return Err(Halt::new(EXIT_CONVENTION, "floor convention requires exact value"));
            }
            let p_of = |q: u64| -> BigInt {
                let q = BigInt::from(q);
                match (convention, exact) {
                    (ConventionArg::Floor, Some(v)) => v.measuring_fraction(&q).expect("finite"),
                    _ => c.value.approx(&q),
                }
            };
            let name = match convention {
                ConventionArg::Floor => "floor",
                ConventionArg::Laugwitz => "laugwitz",
            };
            match format {
                Format::Table => {
                    writeln!(out, "q p").map_err(io_err)?;
                    for q in q.lo..=q.hi {
                        writeln!(out, "{q} {}", p_of(q)).map_err(io_err)?;
                    }
                    Ok(())
                }
                Format::Json => {
                    let rows: Vec<serde_json::Value> = (q.lo..=q.hi)
                        .map(|q| serde_json::json!({ "q": q, "p": json_int(&p_of(q)) }))
                        .collect();
                    let doc = serde_json::json!({ "expr": expr, "convention": name, "rows": rows });
                    writeln!(out, "{doc}").map_err(io_err)
                }
            }
        }
        Command::Compare { e1, e2, depth } => {
            let a = measurable(&e1, depth)?.value;
            let b = measurable(&e2, depth)?.value;
            let within = format!("equal within 2^-{}", depth - 1);
            let line = match (a.as_exact(), b.as_exact()) {
                (Some(x), Some(y)) => {
                    let verdict = match x.cmp(y) {
                        std::cmp::Ordering::Less => "Less".to_string(),
                        std::cmp::Ordering::Greater => "Greater".to_string(),
                        std::cmp::Ordering::Equal => within,
                    };
                    format!(
                        "{verdict} (exact); old-equal: {}; new-equal: {}",
                        x.old_equal(y).expect("finite"),
                        x.new_equal(y).expect("finite")
                    )
                }
                _ => {
                    let witness = |w: &Witness| match w {
                        Witness::Scale(q) => format!("witness q={q}"),
                        Witness::Exact => "exact".to_string(),
                    };
                    match a.compare(&b, depth) {
                        Comparison::Less(w) => format!("Less, {}", witness(&w)),
                        Comparison::Greater(w) => format!("Greater, {}", witness(&w)),
                        Comparison::EqualWithin(_) => within,
                    }
                }
            };
            writeln!(out, "{line}").map_err(io_err)
        }
        Command::Net { expr, q0, depth, mode } => {
            let c = measurable(&expr, 20)?;
            let mode = match mode {
                ModeArg::Doubling => NetMode::DoublingMultiples,
                ModeArg::Cumulative => NetMode::CumulativeIntersection,
            };
            let net = nets::net_from_measurable(&c.value, &BigInt::from(q0), mode)
                .map_err(|_| Halt::new(EXIT_CONVENTION, "doubling net requires exact value"))?;
            write!(out, "{}", net.dump(depth)).map_err(io_err)?;
            let mut nested = true;
            for n in 2..=depth {
                let ok = net.interval(n).is_subset_of(&net.interval(n - 1));
                nested &= ok;
                writeln!(out, "# {n} subset-of {}: {}", n - 1, if ok { "ok" } else { "FAILED" }).map_err(io_err)?;
            }
            if nested {
                Ok(())
            } else {
                Err(Halt::new(EXIT_VERIFY, "net is not nested"))
            }
        }
        Command::Classify { expr, depth } => {
            let c = expr::eval(&parse(&expr)?, depth);
            writeln!(out, "{}", describe(&c)).map_err(io_err)
        }
        Command::Verify {
            suite,
            depth,
            trials,
            seed,
            format,
        } => {
            let reports = harness::run(&suite, SuiteConfig { depth, trials, seed }).ok_or_else(|| {
                Halt::new(
                    EXIT_PARSE,
                    format!("unknown suite '{suite}'; expected one of {}, all", harness::SUITES.join(", ")),
                )
            })?;
            let failures: usize = reports.iter().map(|r| r.failures()).sum();
            match format {
                Format::Table => {
                    for r in &reports {
                        write!(out, "{}", r.to_table()).map_err(io_err)?;
                    }
                    writeln!(out, "failures: {failures}").map_err(io_err)?;
                }
                Format::Json if reports.len() == 1 => writeln!(out, "{}", reports[0].to_json()).map_err(io_err)?,
                Format::Json => {
                    let doc = serde_json::to_string_pretty(&reports).expect("plain data");
                    writeln!(out, "{doc}").map_err(io_err)?;
                }
            }
            if failures == 0 {
                Ok(())
            } else {
                Err(Halt::new(EXIT_VERIFY, format!("{failures} property failure(s)")))
            }
        }
        Command::Repl => {
            let stdin = io::stdin();
            for line in stdin.lock().lines() {
                let line = line.map_err(io_err)?;
                let text = line.trim();
                if text.is_empty() {
                    continue;
                }
                if text == ":q" {
                    break;
                }
                match expr::parse(text) {
                    Ok(e) => {
                        let c = expr::eval(&e, 20);
                        writeln!(out, "{}", describe(&c)).map_err(io_err)?;
                    }
                    Err(err) => writeln!(out, "error: {err}").map_err(io_err)?,
                }
                out.flush().map_err(io_err)?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_PARSE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let outcome = run(cli.command, &mut out);
    let _ = out.flush();
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(halt) => {
            eprintln!("error: {}", halt.message);
            ExitCode::from(halt.code)
        }
    }
}
