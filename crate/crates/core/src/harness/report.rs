use std::fmt::Write as _;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// Suite seed; rerunning with it reproduces the failure.
    pub seed: u64,
    pub trial: u64,
    pub inputs: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub name: String,
    pub trials: u64,
    pub certified: u64,
    pub undetermined: u64,
    pub failures: Vec<Failure>,
    pub notes: Vec<String>,
}

impl PropertyReport {
    pub fn new(name: impl Into<String>) -> PropertyReport {
        PropertyReport {
            name: name.into(),
            trials: 0,
            certified: 0,
            undetermined: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn pass(&mut self) {
        self.trials += 1;
        self.certified += 1;
    }

    pub fn undetermined(&mut self) {
        self.trials += 1;
        self.undetermined += 1;
    }

    /// Counts a trial whose premise did not apply.
    pub fn vacuous(&mut self) {
        self.trials += 1;
    }

    pub fn check(&mut self, ok: bool, seed: u64, inputs: &[&str], detail: impl FnOnce() -> String) {
        if ok {
            self.pass();
        } else {
            self.fail(seed, inputs, detail());
        }
    }

    pub fn fail(&mut self, seed: u64, inputs: &[&str], detail: impl Into<String>) {
        self.trials += 1;
        self.failures.push(Failure {
            seed,
            trial: self.trials,
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            detail: detail.into(),
        });
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: String,
    pub properties: Vec<PropertyReport>,
}

impl Report {
    pub fn new(suite: impl Into<String>, mut properties: Vec<PropertyReport>) -> Report {
        properties.sort_by(|a, b| a.name.cmp(&b.name));
        Report {
            suite: suite.into(),
            properties,
        }
    }

    pub fn failures(&self) -> usize {
        self.properties.iter().map(|p| p.failures.len()).sum()
    }

    pub fn property(&self, name: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let width = self.properties.iter().map(|p| p.name.len()).max().unwrap_or(8).max(8);
        writeln!(out, "suite {}", self.suite).unwrap();
        writeln!(
            out,
            "  {:<width$}  {:>7}  {:>9}  {:>12}  {:>8}",
            "property", "trials", "certified", "undetermined", "failures"
        )
        .unwrap();
        for p in &self.properties {
            writeln!(
                out,
                "  {:<width$}  {:>7}  {:>9}  {:>12}  {:>8}",
                p.name,
                p.trials,
                p.certified,
                p.undetermined,
                p.failures.len()
            )
            .unwrap();
            for n in &p.notes {
                writeln!(out, "    {n}").unwrap();
            }
            for f in &p.failures {
                writeln!(
                    out,
                    "    FAIL seed={} trial={} inputs=[{}]: {}",
                    f.seed,
                    f.trial,
                    f.inputs.join(", "),
                    f.detail
                )
                .unwrap();
            }
        }
        out
    }
}
