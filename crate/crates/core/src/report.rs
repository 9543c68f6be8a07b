//! The stable report format shared by the command-line front end and
//! the golden-file tests.
//!
//! A report is `{schema, command, config, claims, certificates,
//! verdict}`. Field order is fixed by the struct, maps are ordered,
//! and nothing time- or machine-dependent is recorded, so equal runs
//! produce byte-identical JSON.

use serde::Serialize;
use serde_json::Value;

use crate::ktheory::Claim;

pub const SCHEMA: &str = "freek-report/1";

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub config: Value,
    pub claims: Vec<Claim>,
    pub certificates: Vec<Value>,
    pub verdict: String,
}

impl Report {
    pub fn new(command: &str, config: Value) -> Report {
        Report {
            schema: SCHEMA,
            command: command.to_string(),
            config,
            claims: Vec::new(),
            certificates: Vec::new(),
            verdict: String::new(),
        }
    }

    pub fn push_claim(&mut self, claim: Claim) {
        self.claims.push(claim);
    }

    pub fn extend_claims<I: IntoIterator<Item = Claim>>(&mut self, claims: I) {
        self.claims.extend(claims);
    }

    pub fn push_certificate<T: Serialize>(&mut self, certificate: &T) {
        self.certificates
            .push(serde_json::to_value(certificate).expect("certificates serialize"));
    }

    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    /// Fixes the verdict from the collected claims.
    pub fn seal(mut self) -> Report {
        self.verdict = if self.passed() { "pass" } else { "fail" }.to_string();
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {} — {}\n", self.command, self.verdict));
        for c in &self.claims {
            let mark = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("[{mark}] {}: {}\n", c.name, c.details));
        }
        if !self.certificates.is_empty() {
            out.push_str(&format!(
                "{} certificate(s) attached; use --format json to export them\n",
                self.certificates.len()
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_json() {
        let mut r = Report::new("demo", serde_json::json!({"depth": 2, "example": 1}));
        r.push_claim(Claim::new("alpha", true, "first".into()));
        r.push_claim(Claim::new("beta", false, "second".into()));
        let r = r.seal();
        assert_eq!(r.verdict, "fail");
        assert_eq!(r.to_json(), r.clone().seal().to_json());
        assert!(r.render_text().contains("[FAIL] beta"));
    }
}
