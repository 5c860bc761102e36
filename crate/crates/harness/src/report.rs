use serde::{Deserialize, Serialize};

use crate::matches::MatchReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableFormat {
    Csv,
    Markdown,
}

pub const COLUMNS: [&str; 8] = ["label", "vl", "B", "batch", "nodes", "inference", "winrate", "stderr"];

fn row(r: &MatchReport) -> [String; 8] {
    [
        r.engine_a.label.clone(),
        r.vl.to_string(),
        r.num_batches.to_string(),
        r.batch_size.to_string(),
        format!("{:.2}", r.engine_a.mean_nodes),
        format!("{:.2}", r.engine_a.inferences_per_batch),
        format!("{:.4}", r.winrate_a),
        format!("{:.4}", r.stderr),
    ]
}

/// One row per report, from engine A's side.
pub fn report_table(reports: &[MatchReport], format: TableFormat) -> String {
    assert!(!reports.is_empty(), "report_table needs at least one report");
    match format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(COLUMNS).expect("in-memory write");
            for r in reports {
                w.write_record(row(r)).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
        }
        TableFormat::Markdown => {
            let mut out = format!("| {} |\n", COLUMNS.join(" | "));
            out.push_str(&format!("|{}\n", "---|".repeat(COLUMNS.len())));
            for r in reports {
                // Pipes would split the cell.
                let cells = row(r).map(|c| c.replace('|', "/"));
                out.push_str(&format!("| {} |\n", cells.join(" | ")));
            }
            out
        }
    }
}
