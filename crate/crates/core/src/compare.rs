//! Side-by-side resource comparison of the baseline and waterfall schedules.

use std::fmt::Write as _;

use crate::circuit::{analyze_decomposed, ResourceReport};
use crate::flt::{build_pair, FltError};
use crate::gf2x::FieldSpec;

/// Externally reported reference counts for the two schedules. `prev` is
/// the register-reuse schedule, `this` the waterfall one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReferenceRow {
    pub n: usize,
    pub width_prev: u64,
    pub width_this: u64,
    pub cnot_prev: u64,
    pub cnot_this: u64,
    pub depth_prev: u64,
    pub depth_this: u64,
}

const fn row(n: usize, w: [u64; 2], c: [u64; 2], d: [u64; 2]) -> ReferenceRow {
    ReferenceRow {
        n,
        width_prev: w[0],
        width_this: w[1],
        cnot_prev: c[0],
        cnot_this: c[1],
        depth_prev: d[0],
        depth_this: d[1],
    }
}

pub const REFERENCE: [ReferenceRow; 8] = [
    row(8, [73, 89], [1856, 1804], [810, 805]),
    row(16, [209, 257], [10014, 9966], [2565, 2561]),
    row(127, [2922, 3684], [1074196, 1073434], [31267, 31237]),
    row(163, [3098, 4239], [1484366, 1483225], [53730, 53718]),
    row(233, [4894, 6525], [3306274, 3304643], [58999, 58915]),
    row(283, [6510, 8774], [5431582, 5429318], [161071, 161057]),
    row(409, [9408, 12680], [11148086, 11144814], [111151, 111123]),
    row(571, [15418, 20557], [25778322, 25773183], [200641, 200217]),
];

pub fn reference_for(n: usize) -> Option<ReferenceRow> {
    REFERENCE.iter().copied().find(|r| r.n == n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonRow {
    pub n: usize,
    pub field: String,
    pub baseline: ResourceReport,
    pub waterfall: ResourceReport,
    pub reference: Option<ReferenceRow>,
}

fn delta(a: u64, b: u64) -> i64 {
    a as i64 - b as i64
}

impl ComparisonRow {
    pub fn delta_width(&self) -> i64 {
        delta(self.baseline.width as u64, self.waterfall.width as u64)
    }

    pub fn delta_cnot(&self) -> i64 {
        delta(self.baseline.cnot_count, self.waterfall.cnot_count)
    }

    pub fn delta_depth(&self) -> i64 {
        delta(self.baseline.overall_depth, self.waterfall.overall_depth)
    }

    pub fn delta_t_count(&self) -> i64 {
        delta(self.baseline.t_count, self.waterfall.t_count)
    }

    pub fn delta_t_depth(&self) -> i64 {
        delta(self.baseline.t_depth, self.waterfall.t_depth)
    }
}

/// Builds both schedules for `field` and analyzes their decomposed forms.
pub fn compare_field(field: &FieldSpec) -> Result<ComparisonRow, FltError> {
    let (waterfall, baseline) = build_pair(field)?;
    let (w, b) = rayon::join(
        || analyze_decomposed(&waterfall.circuit),
        || analyze_decomposed(&baseline.circuit),
    );
    Ok(ComparisonRow {
        n: field.n(),
        field: field.label(),
        baseline: b,
        waterfall: w,
        reference: reference_for(field.n()),
    })
}

pub const CSV_HEADER: &str = "n,field,\
width_baseline,width_waterfall,cnot_baseline,cnot_waterfall,\
depth_baseline,depth_waterfall,t_count_baseline,t_count_waterfall,\
t_depth_baseline,t_depth_waterfall,\
delta_width,delta_cnot,delta_depth,delta_t_count,delta_t_depth,\
ref_width_prev,ref_width_this,ref_cnot_prev,ref_cnot_this,ref_depth_prev,ref_depth_this";

fn opt(v: Option<u64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn to_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let (b, w) = (&r.baseline, &r.waterfall);
        let re = r.reference;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.n,
            r.field,
            b.width,
            w.width,
            b.cnot_count,
            w.cnot_count,
            b.overall_depth,
            w.overall_depth,
            b.t_count,
            w.t_count,
            b.t_depth,
            w.t_depth,
            r.delta_width(),
            r.delta_cnot(),
            r.delta_depth(),
            r.delta_t_count(),
            r.delta_t_depth(),
            opt(re.map(|x| x.width_prev)),
            opt(re.map(|x| x.width_this)),
            opt(re.map(|x| x.cnot_prev)),
            opt(re.map(|x| x.cnot_this)),
            opt(re.map(|x| x.depth_prev)),
            opt(re.map(|x| x.depth_this)),
        );
    }
    out
}

/// Plot-ready deltas against n, measured and reference.
pub fn deltas_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from("n,delta_cnot,delta_depth,ref_delta_cnot,ref_delta_depth\n");
    for r in rows {
        let refd = r.reference.map(|x| {
            (
                delta(x.cnot_prev, x.cnot_this),
                delta(x.depth_prev, x.depth_this),
            )
        });
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.n,
            r.delta_cnot(),
            r.delta_depth(),
            refd.map(|d| d.0.to_string()).unwrap_or_default(),
            refd.map(|d| d.1.to_string()).unwrap_or_default(),
        );
    }
    out
}

/// Aligned plain-text table.
pub fn text_table(rows: &[ComparisonRow]) -> String {
    let header = [
        "n",
        "field",
        "width b/w",
        "cnot b/w",
        "depth b/w",
        "T b/w",
        "T-depth b/w",
        "dCNOT",
        "dDepth",
        "ref cnot p/t",
        "ref depth p/t",
    ];
    let mut cells: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    for r in rows {
        let (b, w) = (&r.baseline, &r.waterfall);
        let pair = |x: u64, y: u64| format!("{x}/{y}");
        cells.push(vec![
            r.n.to_string(),
            r.field.clone(),
            pair(b.width as u64, w.width as u64),
            pair(b.cnot_count, w.cnot_count),
            pair(b.overall_depth, w.overall_depth),
            pair(b.t_count, w.t_count),
            pair(b.t_depth, w.t_depth),
            r.delta_cnot().to_string(),
            r.delta_depth().to_string(),
            r.reference
                .map(|x| pair(x.cnot_prev, x.cnot_this))
                .unwrap_or_else(|| "-".into()),
            r.reference
                .map(|x| pair(x.depth_prev, x.depth_this))
                .unwrap_or_else(|| "-".into()),
        ]);
    }
    let widths: Vec<usize> = (0..header.len())
        .map(|c| cells.iter().map(|row| row[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &cells {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:>w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_lookup() {
        let r = reference_for(8).unwrap();
        assert_eq!(
            (r.cnot_prev, r.cnot_this, r.depth_prev, r.depth_this),
            (1856, 1804, 810, 805)
        );
        assert_eq!((r.width_prev, r.width_this), (73, 89));
        assert!(reference_for(2).is_none());
        // every reference delta is positive for CNOTs and depth
        assert!(REFERENCE
            .iter()
            .all(|r| r.cnot_prev > r.cnot_this && r.depth_prev > r.depth_this));
    }

    #[test]
    fn degenerate_field_collapses() {
        let f = FieldSpec::default_for_degree(2).unwrap();
        let row = compare_field(&f).unwrap();
        assert_eq!(row.delta_t_count(), 0);
        assert_eq!(row.delta_t_depth(), 0);
        assert_eq!(row.delta_cnot(), 0);
        assert_eq!(row.waterfall.t_count, 0);
        assert!(row.reference.is_none());
    }

    #[test]
    fn csv_is_stable_and_well_formed() {
        let f = FieldSpec::default_for_degree(5).unwrap();
        let rows = vec![compare_field(&f).unwrap()];
        let a = to_csv(&rows);
        assert_eq!(a, to_csv(&[compare_field(&f).unwrap()]));
        let cols = CSV_HEADER.split(',').count();
        for line in a.lines() {
            assert_eq!(line.split(',').count(), cols);
        }
        assert_eq!(deltas_csv(&rows).lines().count(), 2);
        assert_eq!(text_table(&rows).lines().count(), 2);
    }
}
