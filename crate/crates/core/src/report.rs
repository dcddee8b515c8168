//! Tabular results shared by the reproduction cases, the property suites and the CLI.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// A counterexample reproduced: the payoff falls short of half the prophet value.
    BelowHalf,
    Info,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::BelowHalf => "below-half",
            Verdict::Info => "info",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub case_id: String,
    pub quantity: String,
    pub value: f64,
    pub reference: String,
    pub verdict: Verdict,
}

/// Rows produced by one case or suite, plus the source it reproduces.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseReport {
    pub case_id: String,
    pub location: String,
    pub rows: Vec<Row>,
    headline: Option<usize>,
}

impl CaseReport {
    pub fn new(case_id: &str, location: &str) -> Self {
        Self {
            case_id: case_id.into(),
            location: location.into(),
            rows: Vec::new(),
            headline: None,
        }
    }

    fn push(&mut self, quantity: &str, value: f64, reference: String, verdict: Verdict) -> &mut Self {
        self.rows.push(Row {
            case_id: self.case_id.clone(),
            quantity: quantity.into(),
            value,
            reference,
            verdict,
        });
        self
    }

    /// `|value - reference| <= tol`.
    pub fn close(&mut self, quantity: &str, value: f64, reference: f64, tol: f64) -> &mut Self {
        let ok = (value - reference).abs() <= tol;
        let reference = if tol == 0.0 {
            format!("= {}", sig6(reference))
        } else {
            format!("{} ± {:.0e}", sig6(reference), tol)
        };
        self.push(quantity, value, reference, verdict(ok))
    }

    pub fn check(&mut self, quantity: &str, value: f64, reference: impl Into<String>, ok: bool) -> &mut Self {
        self.push(quantity, value, reference.into(), verdict(ok))
    }

    pub fn info(&mut self, quantity: &str, value: f64, reference: impl Into<String>) -> &mut Self {
        self.push(quantity, value, reference.into(), Verdict::Info)
    }

    /// Payoff over half the prophet value; the counterexample holds when this is below one.
    pub fn below_half(&mut self, ratio: f64) -> &mut Self {
        let v = if ratio < 1.0 { Verdict::BelowHalf } else { Verdict::Fail };
        self.push("ratio_vs_half_opt", ratio, "< 1".into(), v).headline()
    }

    /// Marks the most recent row as the one summarizing the case.
    pub fn headline(&mut self) -> &mut Self {
        self.headline = self.rows.len().checked_sub(1);
        self
    }

    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.verdict != Verdict::Fail)
    }

    pub fn failures(&self) -> Vec<&Row> {
        self.rows.iter().filter(|r| r.verdict == Verdict::Fail).collect()
    }

    /// One row standing for the whole case, carrying its source location.
    pub fn summary_row(&self) -> Row {
        let base = self.headline.and_then(|i| self.rows.get(i)).or(self.rows.last());
        let (quantity, value, v) = match base {
            Some(r) => (r.quantity.clone(), r.value, r.verdict),
            None => ("rows".into(), 0.0, Verdict::Info),
        };
        Row {
            case_id: self.case_id.clone(),
            quantity,
            value,
            reference: self.location.clone(),
            verdict: if self.holds() { v } else { Verdict::Fail },
        }
    }
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Six significant digits, trailing zeros trimmed.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&mag) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(0.25), "0.25");
        assert_eq!(sig6(0.50530123), "0.505301");
        assert_eq!(sig6(123456.78), "123457");
        assert_eq!(sig6(1.0 / 24.0), "0.0416667");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(-2.5), "-2.5");
    }

    #[test]
    fn summary_uses_headline_and_location() {
        let mut r = CaseReport::new("x", "somewhere");
        r.close("a", 1.0, 1.0, 1e-12);
        r.below_half(0.9);
        r.info("b", 2.0, "");
        let s = r.summary_row();
        assert_eq!(s.quantity, "ratio_vs_half_opt");
        assert_eq!(s.reference, "somewhere");
        assert_eq!(s.verdict, Verdict::BelowHalf);
        r.close("c", 1.0, 2.0, 1e-3);
        assert_eq!(r.summary_row().verdict, Verdict::Fail);
    }
}
