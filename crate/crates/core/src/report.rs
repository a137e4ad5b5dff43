//! Rendering of benchmark reports as CSV, markdown or JSON.
//!
//! All latency figures are gate-delay units, not nanoseconds.

use crate::metrics::BenchmarkReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
    StructuredText,
}

impl ReportFormat {
    pub fn from_name(name: &str) -> Option<ReportFormat> {
        match name {
            "csv" => Some(ReportFormat::Csv),
            "md" => Some(ReportFormat::Markdown),
            "structured-text" => Some(ReportFormat::StructuredText),
            _ => None,
        }
    }
}

/// Fixed column order shared by the CSV and markdown renderings.
const COLUMNS: [&str; 11] = [
    "arch",
    "fwd_worst",
    "fwd_mean",
    "rev_worst",
    "rev_mean",
    "rev_stddev",
    "cycle_worst",
    "cycle_mean",
    "area",
    "transitions",
    "pass",
];

fn row(r: &BenchmarkReport) -> Vec<String> {
    vec![
        r.arch.clone(),
        r.fwd_worst.to_string(),
        format!("{:.3}", r.fwd_mean),
        r.rev_worst.to_string(),
        format!("{:.3}", r.rev_mean),
        format!("{:.3}", r.rev_stddev),
        r.cycle_worst.to_string(),
        format!("{:.3}", r.cycle_mean),
        r.area.to_string(),
        format!("{:.3}", r.transitions_mean),
        r.pass.to_string(),
    ]
}

pub fn render(reports: &[BenchmarkReport], format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => {
            let mut out = String::new();
            out.push_str(&COLUMNS.join(","));
            out.push('\n');
            for r in reports {
                out.push_str(&row(r).join(","));
                out.push('\n');
            }
            out
        }
        ReportFormat::Markdown => {
            let mut out = String::from("Latency and cycle time in gate-delay units.\n\n");
            out.push_str(&format!("| {} |\n", COLUMNS.join(" | ")));
            out.push_str(&format!("|{}\n", "---|".repeat(COLUMNS.len())));
            for r in reports {
                out.push_str(&format!("| {} |\n", row(r).join(" | ")));
            }
            out
        }
        ReportFormat::StructuredText => {
            let mut out = serde_json::to_string_pretty(reports).expect("reports serialize");
            out.push('\n');
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> BenchmarkReport {
        BenchmarkReport {
            arch: "rca".to_string(),
            width: 4,
            block_size: 4,
            lsb_rca_span: 0,
            n_vectors: 3,
            fwd_worst: 12,
            fwd_mean: 9.5,
            fwd_min: 4,
            rev_worst: 8,
            rev_mean: 8.0,
            rev_stddev: 0.0,
            cycle_worst: 20,
            cycle_mean: 17.5,
            rtz_settle_worst: 9,
            rtz_settle_mean: 6.0,
            transitions_mean: 40.25,
            area: 152,
            pass: 3,
        }
    }

    #[test]
    fn csv_column_order() {
        let text = render(&[sample()], ReportFormat::Csv);
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "arch,fwd_worst,fwd_mean,rev_worst,rev_mean,rev_stddev,cycle_worst,cycle_mean,area,transitions,pass"
        );
        assert_eq!(
            lines.next().unwrap(),
            "rca,12,9.500,8,8.000,0.000,20,17.500,152,40.250,3"
        );
    }

    #[test]
    fn markdown_mentions_units() {
        let text = render(&[sample()], ReportFormat::Markdown);
        assert!(text.contains("gate-delay units"));
        assert!(text.contains("| rca |"));
    }

    #[test]
    fn json_parses_back() {
        let text = render(&[sample()], ReportFormat::StructuredText);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value[0]["arch"], "rca");
    }
}
