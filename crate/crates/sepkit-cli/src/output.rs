//! Tagged value rendering: every number leaving the CLI is either exact
//! ("p/q") or approximate (decimal plus certified digit count).

use rug::Rational;
use sepkit::PrecReal;
use serde_json::json;

/// A value ready for emission.
#[derive(Debug, Clone)]
pub enum Tagged {
    Exact(Rational),
    Approx { decimal: String, certified_digits: Option<u32> },
}

impl Tagged {
    pub fn from_prec(v: &PrecReal) -> Self {
        let digits = v.certified_digits();
        Tagged::Approx {
            decimal: v.to_decimal_string(digits.unwrap_or(6)),
            certified_digits: digits,
        }
    }

    /// Plain one-line rendering.
    pub fn plain(&self) -> String {
        match self {
            Tagged::Exact(q) => q.to_string(),
            Tagged::Approx { decimal, certified_digits } => match certified_digits {
                Some(d) => format!("{} (certified {} digits)", decimal, d),
                None => format!("{} (uncertified)", decimal),
            },
        }
    }

    pub fn json(&self) -> serde_json::Value {
        match self {
            Tagged::Exact(q) => json!({ "exact": q.to_string() }),
            Tagged::Approx { decimal, certified_digits } => json!({
                "decimal": decimal,
                "certified_digits": certified_digits,
            }),
        }
    }

    /// CSV cell pair (value, certified-digits column; the latter empty for
    /// exact values, whose "p/q" form is self-tagging).
    pub fn csv_cells(&self) -> (String, String) {
        match self {
            Tagged::Exact(q) => (q.to_string(), "exact".to_string()),
            Tagged::Approx { decimal, certified_digits } => (
                decimal.clone(),
                certified_digits.map(|d| d.to_string()).unwrap_or_default(),
            ),
        }
    }
}

/// Minimal RFC-4180-style CSV escaping (fields here never contain quotes,
/// but commas can appear in rational strings only if callers misuse this).
pub fn csv_row(cells: &[String]) -> String {
    cells
        .iter()
        .map(|c| {
            if c.contains(',') || c.contains('"') || c.contains('\n') {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.clone()
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}
