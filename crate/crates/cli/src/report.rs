//! Deterministic command reports: named sections of table lines plus a
//! list of pass/fail checks. Text and JSON renderings share the same
//! data; output never depends on wall-clock time or iteration order of
//! unordered containers.

use cqv_core::linops::C64;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub tolerance: f64,
    pub sections: Vec<Section>,
    pub checks: Vec<Check>,
}

#[derive(Debug, Serialize)]
pub struct Section {
    pub title: String,
    pub lines: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Report {
    pub fn new(
        command: impl Into<String>,
        input_digest: impl Into<String>,
        tolerance: f64,
    ) -> Self {
        Report {
            command: command.into(),
            input_digest: input_digest.into(),
            tolerance,
            sections: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn section(&mut self, title: impl Into<String>, lines: Vec<String>) {
        self.sections.push(Section {
            title: title.into(),
            lines,
        });
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, residual: Option<f64>) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            residual,
            detail: None,
        });
    }

    pub fn check_detail(
        &mut self,
        name: impl Into<String>,
        pass: bool,
        residual: Option<f64>,
        detail: impl Into<String>,
    ) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            residual,
            detail: Some(detail.into()),
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("== {} ==\n", self.command));
        out.push_str(&format!("input digest: {}\n", self.input_digest));
        out.push_str(&format!("tolerance: {}\n", fmt_f(self.tolerance)));
        for s in &self.sections {
            out.push_str(&format!("\n-- {} --\n", s.title));
            for l in &s.lines {
                out.push_str(l);
                out.push('\n');
            }
        }
        out.push_str("\n-- checks --\n");
        for c in &self.checks {
            let verdict = if c.pass { "pass" } else { "FAIL" };
            let mut line = format!("[{verdict}] {}", c.name);
            if let Some(r) = c.residual {
                line.push_str(&format!(" (residual {:.3e})", r));
            }
            if let Some(d) = &c.detail {
                line.push_str(&format!(" — {d}"));
            }
            out.push_str(&line);
            out.push('\n');
        }
        out.push_str(&format!(
            "\nresult: {}\n",
            if self.all_pass() {
                "all checks passed"
            } else {
                "CHECKS FAILED"
            }
        ));
        out
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// Shortest stable rendering of a float: integers without a decimal
/// point, everything else through Rust's round-trip formatter.
pub fn fmt_f(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.fract() == 0.0 && x.abs() < 1e15 {
        return format!("{}", x as i64);
    }
    format!("{x}")
}

/// Complex rendering in the `a+bi` style used throughout the tables.
pub fn fmt_c(z: C64) -> String {
    let re = fmt_f(z.re);
    let im = fmt_f(z.im.abs());
    if z.im == 0.0 {
        re
    } else if z.re == 0.0 {
        if z.im < 0.0 {
            format!("-{im}i")
        } else {
            format!("{im}i")
        }
    } else if z.im < 0.0 {
        format!("{re}-{im}i")
    } else {
        format!("{re}+{im}i")
    }
}

/// One matrix row per line, entries separated by double spaces.
pub fn fmt_matrix(m: &cqv_core::linops::ComplexMatrix, indent: &str) -> Vec<String> {
    (0..m.dim())
        .map(|i| {
            let row: Vec<String> = (0..m.dim()).map(|j| fmt_c(m.get(i, j))).collect();
            format!("{indent}[ {} ]", row.join("  "))
        })
        .collect()
}
