//! Report rows and their CSV / JSON encodings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flag::Method;

pub const CSV_HEADER: &str =
    "flag_id,admissible,K_general,K_thm31,K_natred,K_biinv,g_YY,g_UU,g_UY,eqn_n,max_residual";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Parse(format!("unknown format `{other}`"))),
        }
    }
}

/// One flag's results. `None` marks a method that was not requested or could
/// not be evaluated (see `notes`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ReportRow {
    pub flag_id: String,
    pub admissible: bool,
    #[serde(rename = "K_general")]
    pub k_general: Option<f64>,
    #[serde(rename = "K_thm31")]
    pub k_thm31: Option<f64>,
    #[serde(rename = "K_natred")]
    pub k_natred: Option<f64>,
    #[serde(rename = "K_biinv")]
    pub k_biinv: Option<f64>,
    #[serde(rename = "g_YY")]
    pub g_yy: Option<f64>,
    #[serde(rename = "g_UU")]
    pub g_uu: Option<f64>,
    #[serde(rename = "g_UY")]
    pub g_uy: Option<f64>,
    pub eqn_n: Option<f64>,
    /// Largest pairwise spread of the computed `K` values.
    pub max_residual: Option<f64>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl ReportRow {
    pub fn k(&self, method: Method) -> Option<f64> {
        match method {
            Method::General => self.k_general,
            Method::Thm31 => self.k_thm31,
            Method::Natred => self.k_natred,
            Method::Biinv => self.k_biinv,
        }
    }

    pub fn set_k(&mut self, method: Method, k: f64) {
        let slot = match method {
            Method::General => &mut self.k_general,
            Method::Thm31 => &mut self.k_thm31,
            Method::Natred => &mut self.k_natred,
            Method::Biinv => &mut self.k_biinv,
        };
        *slot = Some(k);
    }

    /// Recomputes `max_residual` from the `K` values present.
    pub fn update_spread(&mut self) {
        let ks: Vec<f64> = Method::ALL.iter().filter_map(|&m| self.k(m)).collect();
        self.max_residual = if ks.is_empty() {
            None
        } else {
            let lo = ks.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = ks.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Some(hi - lo)
        };
    }
}

/// 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn emit_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            csv_field(&r.flag_id),
            r.admissible,
            opt(r.k_general),
            opt(r.k_thm31),
            opt(r.k_natred),
            opt(r.k_biinv),
            opt(r.g_yy),
            opt(r.g_uu),
            opt(r.g_uy),
            opt(r.eqn_n),
            opt(r.max_residual),
        );
    }
    out
}

/// serde_json writes the shortest string that round-trips each `f64` exactly.
pub fn emit_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report values serialize");
    s.push('\n');
    s
}

pub fn emit_report(rows: &[ReportRow], format: Format) -> String {
    match format {
        Format::Csv => emit_csv(rows),
        Format::Json => emit_json(rows),
    }
}

pub fn parse_json_rows(text: &str) -> Result<Vec<ReportRow>> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}
