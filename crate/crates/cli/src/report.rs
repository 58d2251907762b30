use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        })
    }
}

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// A value printed in the source tables.
    Published,
    /// Computed independently (an oracle, a congruence, an identity).
    Derived,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub group: String,
    pub name: String,
    pub status: Status,
    pub expected: String,
    pub computed: String,
    pub basis: Basis,
    /// Command line that reruns this check.
    pub reproduce: String,
    pub note: String,
}

impl Check {
    pub fn new(group: &str, name: impl Into<String>, reproduce: impl Into<String>) -> CheckBuilder {
        CheckBuilder(Check {
            group: group.into(),
            name: name.into(),
            status: Status::Info,
            expected: String::new(),
            computed: String::new(),
            basis: Basis::Derived,
            reproduce: reproduce.into(),
            note: String::new(),
        })
    }
}

pub struct CheckBuilder(Check);

impl CheckBuilder {
    pub fn published(mut self) -> Self {
        self.0.basis = Basis::Published;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.0.note = note.into();
        self
    }

    /// PASS when the two renderings agree, FAIL otherwise.
    pub fn compare(mut self, expected: impl fmt::Display, computed: impl fmt::Display) -> Check {
        self.0.expected = expected.to_string();
        self.0.computed = computed.to_string();
        self.0.status = if self.0.expected == self.0.computed {
            Status::Pass
        } else {
            Status::Fail
        };
        self.0
    }

    pub fn verdict(
        mut self,
        ok: bool,
        expected: impl fmt::Display,
        computed: impl fmt::Display,
    ) -> Check {
        self.0.expected = expected.to_string();
        self.0.computed = computed.to_string();
        self.0.status = if ok { Status::Pass } else { Status::Fail };
        self.0
    }

    pub fn info(mut self, computed: impl fmt::Display) -> Check {
        self.0.computed = computed.to_string();
        self.0.status = Status::Info;
        self.0
    }

    /// An error raised while running the check counts as a failure.
    pub fn error(mut self, expected: impl fmt::Display, err: impl fmt::Display) -> Check {
        self.0.expected = expected.to_string();
        self.0.computed = format!("error: {err}");
        self.0.status = Status::Fail;
        self.0
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
    }

    pub fn count(&self, s: Status) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }

    pub fn passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    pub fn summary(&self) -> String {
        format!(
            "{} checks: {} PASS, {} FAIL, {} INFO",
            self.checks.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Info)
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!("{:4}  {:<12} {}", c.status, c.group, c.name));
            match c.status {
                Status::Pass if !c.computed.is_empty() => {
                    out.push_str(&format!(" = {}", c.computed))
                }
                Status::Info => out.push_str(&format!(": {}", c.computed)),
                Status::Fail => {
                    out.push_str(&format!(
                        "\n      expected {}\n      computed {}",
                        c.expected, c.computed
                    ));
                    out.push_str(&format!("\n      rerun: {}", c.reproduce));
                }
                _ => {}
            }
            if !c.note.is_empty() {
                out.push_str(&format!("\n      note: {}", c.note));
            }
            out.push('\n');
        }
        out.push_str(&self.summary());
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fail_carries_both_values_and_command() {
        let c = Check::new("g", "n", "cy8 x").compare(1, 2);
        assert_eq!(c.status, Status::Fail);
        let mut r = VerificationReport::default();
        r.extend([c, Check::new("g", "m", "cy8 y").compare("a", "a")]);
        assert!(!r.passed());
        let t = r.to_text();
        assert!(t.contains("expected 1") && t.contains("computed 2") && t.contains("rerun: cy8 x"));
        assert!(t.ends_with("2 checks: 1 PASS, 1 FAIL, 0 INFO\n"));
    }

    #[test]
    fn info_never_fails() {
        let mut r = VerificationReport::default();
        r.extend([Check::new("g", "n", "").info("whatever")]);
        assert!(r.passed());
    }
}
