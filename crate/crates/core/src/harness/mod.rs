//! Property suites over a catalog of measurable values.

mod catalog;
mod report;
mod suites;

pub use catalog::{alternating_third, e_series, Catalog, Entry};
pub use report::{Failure, PropertyReport, Report};
pub use suites::{
    counterexample_a, counterexample_b, run_counterexample_suite, run_field_suite, run_limit_suite,
    run_order_suite, run_thm4_suite, run_window_suite, A_PLUS_B, ONE_THIRD_SERIES,
};

pub const SUITES: &[&str] = &["order", "field", "limit", "thm4", "counterexample", "window"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub depth: u32,
    pub trials: u64,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> SuiteConfig {
        SuiteConfig {
            depth: 20,
            trials: 200,
            seed: 0,
        }
    }
}

/// Runs one suite by name, or every suite for `"all"`. `None` for unknown names.
pub fn run(name: &str, config: SuiteConfig) -> Option<Vec<Report>> {
    let catalog = Catalog::standard();
    let SuiteConfig { depth, trials, seed } = config;
    let one = |suite: &str| match suite {
        "order" => run_order_suite(&catalog, depth, trials, seed),
        "field" => run_field_suite(&catalog, depth, trials, seed),
        "limit" => run_limit_suite(depth, seed),
        "thm4" => run_thm4_suite(&catalog, depth, seed),
        "counterexample" => run_counterexample_suite(depth),
        "window" => run_window_suite(&catalog),
        _ => unreachable!(),
    };
    match name {
        "all" => Some(SUITES.iter().map(|s| one(s)).collect()),
        s if SUITES.contains(&s) => Some(vec![one(s)]),
        _ => None,
    }
}
