//! Shared plumbing for the acceptance harness: one verdict line per criterion and an exit
//! status that reflects every criterion.

use std::fmt::Write as _;
use std::time::Instant;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub id: u32,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Verdict {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:>2} {:<34} {} ({:.1}s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.seconds
        )
    }
}

/// Collects verdicts, printing each as soon as it is known.
#[derive(Debug, Default)]
pub struct Scoreboard {
    verdicts: Vec<Verdict>,
}

impl Scoreboard {
    pub fn new() -> Self {
        Self::default()
    }

    /// Run `check`, which returns `(pass, detail)`, and record the result under `id`.
    pub fn run(&mut self, id: u32, title: &'static str, check: impl FnOnce() -> (bool, String)) {
        let start = Instant::now();
        let (pass, detail) = check();
        let verdict = Verdict {
            id,
            title,
            pass,
            detail,
            seconds: start.elapsed().as_secs_f64(),
        };
        println!("{}", verdict.line());
        self.verdicts.push(verdict);
    }

    pub fn verdicts(&self) -> &[Verdict] {
        &self.verdicts
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn summary(&self) -> String {
        let passed = self.verdicts.iter().filter(|v| v.pass).count();
        let mut out = format!("acceptance: {passed}/{} criteria pass", self.verdicts.len());
        let failed: Vec<String> = self
            .verdicts
            .iter()
            .filter(|v| !v.pass)
            .map(|v| v.id.to_string())
            .collect();
        if !failed.is_empty() {
            let _ = write!(out, "; failing: {}", failed.join(", "));
        }
        out
    }
}

/// Running maximum that remembers where it was attained.
#[derive(Debug, Clone, Default)]
pub struct Worst {
    pub value: f64,
    pub at: String,
}

impl Worst {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn update(&mut self, value: f64, at: impl FnOnce() -> String) {
        if value > self.value || value.is_nan() {
            self.value = value;
            self.at = at();
        }
    }

    pub fn below(&self, bound: f64) -> bool {
        self.value < bound
    }

    pub fn describe(&self) -> String {
        if self.at.is_empty() {
            format!("{:.2e}", self.value)
        } else {
            format!("{:.2e} at {}", self.value, self.at)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scoreboard_summarises_failures() {
        let mut board = Scoreboard::new();
        board.run(1, "always", || (true, "ok".into()));
        board.run(2, "never", || (false, "bad".into()));
        assert!(!board.all_pass());
        assert_eq!(board.summary(), "acceptance: 1/2 criteria pass; failing: 2");
        assert!(board.verdicts()[1]
            .line()
            .starts_with("[FAIL] criterion  2"));
    }

    #[test]
    fn worst_tracks_location() {
        let mut w = Worst::new();
        w.update(1e-12, || "a".into());
        w.update(1e-14, || "b".into());
        assert_eq!(w.at, "a");
        assert!(w.below(1e-9));
        w.update(f64::NAN, || "nan".into());
        assert!(!w.below(1e-9));
    }
}
