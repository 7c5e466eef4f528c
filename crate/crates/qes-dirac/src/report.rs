//! Pass/fail reports for the algebraic verification suite, renderable as
//! plain text or JSON.

use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckLevel {
    /// Must hold for the suite to pass.
    Required,
    /// Extra sanity checks beyond the core relation list.
    Supplementary,
    /// Documented facts reported for visibility; still checked exactly.
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationEntry {
    pub name: String,
    /// Canonical rendering of the evaluated left-hand side.
    pub lhs: String,
    pub pass: bool,
    /// Canonical rendering of lhs - rhs; present only when the check failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    pub level: CheckLevel,
}

impl RelationEntry {
    pub fn status(&self) -> &'static str {
        match (self.pass, self.level) {
            (true, CheckLevel::Info) => "INFO",
            (true, _) => "PASS",
            (false, _) => "FAIL",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub title: String,
    pub entries: Vec<RelationEntry>,
    /// Conjunction of all entries.
    pub overall_pass: bool,
}

impl RelationReport {
    pub fn new(title: impl Into<String>, entries: Vec<RelationEntry>) -> RelationReport {
        let overall_pass = entries.iter().all(|e| e.pass);
        RelationReport { title: title.into(), entries, overall_pass }
    }

    pub fn render_text(&self, out: &mut String) {
        out.push_str(&format!("== {} ==\n", self.title));
        for e in &self.entries {
            out.push_str(&format!("  {:<4}  {}\n", e.status(), e.name));
            if e.level == CheckLevel::Info {
                out.push_str(&format!("          value: {}\n", e.lhs));
            }
            if let Some(r) = &e.residual {
                out.push_str(&format!("          lhs: {}\n          residual: {}\n", e.lhs, r));
            }
        }
        out.push_str(&format!(
            "  => {}: {}\n",
            self.title,
            if self.overall_pass { "all checks pass" } else { "FAILURES PRESENT" }
        ));
    }
}

/// A bundle of reports, e.g. everything `verify-algebra` produces.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyDocument {
    pub reports: Vec<RelationReport>,
    pub overall_pass: bool,
}

impl VerifyDocument {
    pub fn new(reports: Vec<RelationReport>) -> VerifyDocument {
        let overall_pass = reports.iter().all(|r| r.overall_pass);
        VerifyDocument { reports, overall_pass }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            r.render_text(&mut out);
            out.push('\n');
        }
        out.push_str(&format!(
            "overall: {}\n",
            if self.overall_pass { "PASS" } else { "FAIL" }
        ));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
