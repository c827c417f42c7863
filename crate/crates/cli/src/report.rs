//! Machine-readable and human-readable run reports.

use cwsolve_core::{Extended, Stats};
use serde::Serialize;

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum Optimum {
    Value(u64),
    Infeasible(&'static str),
}

impl From<Extended> for Optimum {
    fn from(e: Extended) -> Self {
        match e {
            Extended::Finite(w) => Optimum::Value(w),
            _ => Optimum::Infeasible("infeasible"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct ReportStats {
    pub dp_nodes: usize,
    pub max_cell_entries: usize,
    pub reduce_calls: usize,
    pub elapsed_ms: u128,
}

impl From<Stats> for ReportStats {
    fn from(s: Stats) -> Self {
        ReportStats {
            dp_nodes: s.dp_nodes,
            max_cell_entries: s.max_cell_entries,
            reduce_calls: s.reduce_calls,
            elapsed_ms: s.elapsed_ms,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub problem: String,
    pub optimum: Optimum,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    pub stats: ReportStats,
}

impl RunReport {
    pub fn render(&self, json: bool) -> String {
        if json {
            return serde_json::to_string(self).expect("plain data serializes");
        }
        let optimum = match &self.optimum {
            Optimum::Value(w) => w.to_string(),
            Optimum::Infeasible(s) => s.to_string(),
        };
        let mut rows = vec![("problem", self.problem.clone()), ("optimum", optimum)];
        if let Some(w) = &self.witness {
            rows.push(("witness", if w.is_empty() { "(empty)".into() } else { w.join(" ") }));
        }
        rows.extend([
            ("dp_nodes", self.stats.dp_nodes.to_string()),
            ("max_cell_entries", self.stats.max_cell_entries.to_string()),
            ("reduce_calls", self.stats.reduce_calls.to_string()),
            ("elapsed_ms", self.stats.elapsed_ms.to_string()),
        ]);
        rows.iter().map(|(k, v)| format!("{k:<18}{v}")).collect::<Vec<_>>().join("\n")
    }
}
