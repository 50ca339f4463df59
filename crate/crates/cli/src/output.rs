//! The result document and its JSON, CSV and text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cache::CacheStatus;
use crate::config::{Format, RunConfig};
use crate::error::CliError;

/// Results for one arity. Absent fields do not apply to the command.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArityResult {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<BTreeMap<i64, usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betti: Option<BTreeMap<i64, usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torsion: Option<BTreeMap<i64, Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<bool>,
    /// Cycle type (parts joined by '+') to character value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub characters: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total_ms: f64,
    pub operad_ms: f64,
    pub compute_ms: f64,
    pub cache: CacheStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub version: String,
    pub config: RunConfig,
    /// Keyed by arity.
    pub results: BTreeMap<String, ArityResult>,
    pub timings: Timings,
}

impl ResultDocument {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => serde_json::to_string_pretty(self)
                .map(|s| s + "\n")
                .map_err(|e| CliError::Failure(e.to_string())),
            Format::Csv => self.to_csv(),
            Format::Text => Ok(self.to_text()),
        }
    }

    /// Entries in increasing arity.
    pub fn ordered(&self) -> Vec<(usize, &ArityResult)> {
        let mut v: Vec<(usize, &ArityResult)> =
            self.results.iter().map(|(k, r)| (k.parse().unwrap_or(usize::MAX), r)).collect();
        v.sort_by_key(|&(n, _)| n);
        v
    }

    /// One row per (arity, degree), then one per (arity, conjugacy class).
    fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| CliError::Failure(e.to_string());
        w.write_record(["arity", "degree", "dim", "betti", "torsion", "class", "character", "verdict"])
            .map_err(fail)?;
        for (n, r) in self.ordered() {
            let verdict = r.verdict.map(|v| v.to_string()).unwrap_or_default();
            let mut degrees: Vec<i64> = Vec::new();
            for m in [r.dims.as_ref().map(|m| m.keys().copied().collect::<Vec<_>>()), r.betti.as_ref().map(|m| m.keys().copied().collect())]
                .into_iter()
                .flatten()
            {
                degrees.extend(m);
            }
            if let Some(t) = &r.torsion {
                degrees.extend(t.keys());
            }
            degrees.sort_unstable();
            degrees.dedup();
            for d in &degrees {
                let dim = r.dims.as_ref().map(|m| m.get(d).copied().unwrap_or(0).to_string()).unwrap_or_default();
                let betti = r.betti.as_ref().map(|m| m.get(d).copied().unwrap_or(0).to_string()).unwrap_or_default();
                let torsion = r
                    .torsion
                    .as_ref()
                    .and_then(|m| m.get(d))
                    .map(|f| f.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
                    .unwrap_or_default();
                w.write_record([&n.to_string(), &d.to_string(), &dim, &betti, &torsion, "", "", &verdict])
                    .map_err(fail)?;
            }
            if let Some(chars) = &r.characters {
                for (class, value) in chars {
                    w.write_record([&n.to_string(), "", "", "", "", class, value, &verdict]).map_err(fail)?;
                }
            }
            if degrees.is_empty() && r.characters.is_none() {
                w.write_record([&n.to_string(), "", "", "", "", "", "", &verdict]).map_err(fail)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| CliError::Failure(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Failure(e.to_string()))
    }

    fn to_text(&self) -> String {
        let mut s = String::new();
        let c = &self.config;
        let operad = match &c.operad {
            Some(crate::config::OperadSource::Preset(p)) => format!(" {p}"),
            Some(crate::config::OperadSource::Presentation(p)) => format!(" {}", p.display()),
            None => String::new(),
        };
        let _ = writeln!(s, "opk {} {}{} over {}", self.version, c.command, operad, c.ring);
        let graded = |m: &BTreeMap<i64, usize>| {
            if m.is_empty() {
                "0".to_string()
            } else {
                m.iter().map(|(d, x)| format!("{d}:{x}")).collect::<Vec<_>>().join(" ")
            }
        };
        for (n, r) in self.ordered() {
            let _ = writeln!(s, "arity {n}");
            if let Some(m) = &r.dims {
                let _ = writeln!(s, "  dims      {}", graded(m));
            }
            if let Some(m) = &r.betti {
                let _ = writeln!(s, "  betti     {}", graded(m));
            }
            if let Some(t) = &r.torsion {
                let line = if t.is_empty() {
                    "none".to_string()
                } else {
                    t.iter().map(|(d, f)| format!("{d}:{f:?}")).collect::<Vec<_>>().join(" ")
                };
                let _ = writeln!(s, "  torsion   {line}");
            }
            if let Some(chars) = &r.characters {
                let line = chars.iter().map(|(k, v)| format!("[{k}]={v}")).collect::<Vec<_>>().join(" ");
                let _ = writeln!(s, "  character {line}");
            }
            if let Some(v) = r.verdict {
                let _ = writeln!(s, "  verdict   {v}");
            }
            if let Some(serde_json::Value::Object(map)) = &r.details {
                for (k, v) in map {
                    let _ = writeln!(s, "  {k}: {v}");
                }
            }
        }
        let t = &self.timings;
        let _ = writeln!(
            s,
            "time {:.1} ms (operad {:.1} ms, cache {})",
            t.total_ms,
            t.operad_ms,
            serde_json::to_value(t.cache).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
        );
        s
    }
}
