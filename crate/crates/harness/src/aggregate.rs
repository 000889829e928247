//! Per-(subject, difficulty) summary tables.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use topobench_core::{Difficulty, MetricReport, Subject};

use crate::HarnessError;

/// Percentages are in `[.., 100]`; ratio columns can go negative. `None`
/// means no record in the group had a value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRow {
    /// Subject name, or `average` for the per-difficulty summary row.
    pub subject: String,
    pub difficulty: Difficulty,
    pub n: usize,
    pub exact_match: Option<f64>,
    pub diff_ratio: Option<f64>,
    pub rel_diff_ratio: Option<f64>,
    pub pen_diff_ratio: Option<f64>,
    pub dwcs: Option<f64>,
    pub dw_diff_ratio: Option<f64>,
    pub dw_rel_diff_ratio: Option<f64>,
    pub valid_grid: Option<f64>,
    pub ls_conn: Option<f64>,
    pub dir_ls_conn: Option<f64>,
    pub islands: Option<f64>,
    pub fpceff: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportTable {
    pub rows: Vec<GroupRow>,
}

fn mean(xs: impl IntoIterator<Item = f64>) -> Option<f64> {
    let (s, n) = xs
        .into_iter()
        .fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| s / n as f64)
}

fn pct(b: bool) -> f64 {
    if b {
        100.0
    } else {
        0.0
    }
}

fn group(subject: Subject, difficulty: Difficulty, rs: &[&MetricReport]) -> GroupRow {
    let valid: Vec<&&MetricReport> = rs.iter().filter(|r| r.valid_grid).collect();
    let ratio = |f: fn(&MetricReport) -> Option<f64>| {
        mean(valid.iter().filter_map(|r| f(r)).map(|x| 100.0 * x))
    };
    GroupRow {
        subject: subject.name().into(),
        difficulty,
        n: rs.len(),
        exact_match: mean(rs.iter().map(|r| pct(r.exact_match))),
        diff_ratio: ratio(|r| r.diff_ratio),
        rel_diff_ratio: ratio(|r| r.rel_diff_ratio),
        pen_diff_ratio: ratio(|r| r.pen_diff_ratio),
        dwcs: mean(rs.iter().filter_map(|r| r.dwcs)),
        dw_diff_ratio: ratio(|r| r.dw_diff_ratio),
        dw_rel_diff_ratio: ratio(|r| r.dw_rel_diff_ratio),
        valid_grid: mean(rs.iter().map(|r| pct(r.valid_grid))),
        ls_conn: mean(valid.iter().filter_map(|r| r.ls_conn).map(pct)),
        dir_ls_conn: mean(valid.iter().filter_map(|r| r.dir_ls_conn).map(pct)),
        islands: mean(valid.iter().filter_map(|r| r.islands).map(|k| k as f64)),
        fpceff: ratio(|r| r.fpceff),
    }
}

fn average(difficulty: Difficulty, rows: &[GroupRow]) -> GroupRow {
    let col = |f: fn(&GroupRow) -> Option<f64>| mean(rows.iter().filter_map(f));
    GroupRow {
        subject: "average".into(),
        difficulty,
        n: rows.iter().map(|r| r.n).sum(),
        exact_match: col(|r| r.exact_match),
        diff_ratio: col(|r| r.diff_ratio),
        rel_diff_ratio: col(|r| r.rel_diff_ratio),
        pen_diff_ratio: col(|r| r.pen_diff_ratio),
        dwcs: col(|r| r.dwcs),
        dw_diff_ratio: col(|r| r.dw_diff_ratio),
        dw_rel_diff_ratio: col(|r| r.dw_rel_diff_ratio),
        valid_grid: col(|r| r.valid_grid),
        ls_conn: col(|r| r.ls_conn),
        dir_ls_conn: col(|r| r.dir_ls_conn),
        islands: col(|r| r.islands),
        fpceff: col(|r| r.fpceff),
    }
}

/// Groups reports by difficulty and subject. Each difficulty block ends
/// with an unweighted average of its subject rows.
pub fn aggregate<'a>(
    items: impl IntoIterator<Item = (Subject, Difficulty, &'a MetricReport)>,
) -> Result<ReportTable, HarnessError> {
    let mut groups: BTreeMap<(Difficulty, Subject), Vec<&MetricReport>> = BTreeMap::new();
    for (s, d, r) in items {
        groups.entry((d, s)).or_default().push(r);
    }
    if groups.is_empty() {
        return Err(HarnessError::EmptyGroup);
    }
    let mut rows = Vec::new();
    for d in Difficulty::ALL {
        let block: Vec<GroupRow> = Subject::ALL
            .iter()
            .filter_map(|&s| groups.get(&(d, s)).map(|rs| group(s, d, rs)))
            .collect();
        if block.is_empty() {
            continue;
        }
        let avg = average(d, &block);
        rows.extend(block);
        rows.push(avg);
    }
    Ok(ReportTable { rows })
}

const HEADERS: [&str; 15] = [
    "subject", "diff", "n", "EM%", "Diff%", "Rel%", "Pen%", "DWCS", "DwDiff%", "DwRel%", "Valid%",
    "LSConn%", "DirLS%", "Islands", "FPCEff%",
];

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.2}"))
}

/// Fixed-width text table.
pub fn render_table(table: &ReportTable) -> String {
    let body: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| {
            let mut v = vec![r.subject.clone(), r.difficulty.to_string(), r.n.to_string()];
            v.extend(
                [
                    r.exact_match,
                    r.diff_ratio,
                    r.rel_diff_ratio,
                    r.pen_diff_ratio,
                    r.dwcs,
                    r.dw_diff_ratio,
                    r.dw_rel_diff_ratio,
                    r.valid_grid,
                    r.ls_conn,
                    r.dir_ls_conn,
                    r.islands,
                    r.fpceff,
                ]
                .map(cell),
            );
            v
        })
        .collect();
    let widths: Vec<usize> = (0..HEADERS.len())
        .map(|k| {
            body.iter()
                .map(|r| r[k].len())
                .chain([HEADERS[k].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    let line = |out: &mut String, cols: &[&str]| {
        for (k, c) in cols.iter().enumerate() {
            let sep = if k == 0 { "" } else { "  " };
            if k == 0 {
                let _ = write!(out, "{sep}{c:<w$}", w = widths[k]);
            } else {
                let _ = write!(out, "{sep}{c:>w$}", w = widths[k]);
            }
        }
        out.push('\n');
    };
    line(&mut out, &HEADERS);
    for r in &body {
        line(&mut out, &r.iter().map(String::as_str).collect::<Vec<_>>());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(
            aggregate(std::iter::empty()),
            Err(HarnessError::EmptyGroup)
        ));
    }

    #[test]
    fn table_has_header_and_one_line_per_row() {
        let r = MetricReport {
            valid_grid: true,
            exact_match: true,
            ..MetricReport::default()
        };
        let t = aggregate([(Subject::Full, Difficulty::Easy, &r)]).unwrap();
        let text = render_table(&t);
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().nth(1).unwrap().starts_with("full"));
        assert!(text.lines().nth(2).unwrap().starts_with("average"));
    }
}
