//! Machine-readable run reports: deterministic for fixed inputs and seed,
//! apart from the timing fields.

use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub name: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct DimRow {
    pub degree: usize,
    pub dim: usize,
    pub truncated: bool,
}

#[derive(Debug, Serialize)]
pub struct DimTable {
    pub label: String,
    pub rows: Vec<DimRow>,
}

#[derive(Debug, Serialize)]
pub struct CheckLine {
    pub label: String,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct NodeDefect {
    pub node: String,
    pub dim: usize,
    pub defect: usize,
}

#[derive(Debug, Serialize, Default)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub field: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    pub tables: Vec<DimTable>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckLine>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub defects: Option<Vec<NodeDefect>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis_lines: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub category_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notes: Option<Vec<String>>,
    pub timings_ms: Timings,
}

#[derive(Debug, Serialize, Default)]
pub struct Timings {
    pub load: u128,
    pub compute: u128,
}

impl RunReport {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
            && self
                .defects
                .as_ref()
                .map_or(true, |d| d.iter().all(|n| n.defect == 0))
    }

    pub fn print_human(&self) {
        println!("command: {}", self.command);
        for input in &self.inputs {
            println!("input: {} ({})", input.name, &input.sha256[..16]);
        }
        println!("field: {}", self.field);
        if let Some(conv) = &self.convention {
            println!("convention: {conv}");
        }
        for table in &self.tables {
            println!("{}:", table.label);
            println!("  degree  dim  flags");
            for row in &table.rows {
                let flag = if row.truncated { "truncated" } else { "" };
                println!("  {:<7} {:<4} {}", row.degree, row.dim, flag);
            }
        }
        if let Some(defects) = &self.defects {
            println!("exactness defects:");
            println!("  node     dim  defect");
            for d in defects {
                println!("  {:<8} {:<4} {}", d.node, d.dim, d.defect);
            }
        }
        for check in &self.checks {
            println!(
                "check: {} ... {}",
                check.label,
                if check.pass { "ok" } else { "FAIL" }
            );
        }
        if let Some(lines) = &self.basis_lines {
            for line in lines {
                println!("{line}");
            }
        }
        if let Some(notes) = &self.notes {
            for note in notes {
                println!("note: {note}");
            }
        }
        if let Some(file) = &self.category_file {
            println!("--- category ---");
            print!("{file}");
        }
        println!(
            "timings: load {} ms, compute {} ms",
            self.timings_ms.load, self.timings_ms.compute
        );
    }
}
