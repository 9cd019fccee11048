//! Embedded reference tables, regression comparison against them,
//! error-curve data files, and the self-verification suite.
//!
//! The reference data transcribes the published comparison tables verbatim,
//! including absent cells. Only the two closed-form columns (the
//! gamma-prefactored family and the conformable one) are recomputable; the
//! external-method columns are carried as context.

pub mod verify;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::odesolve::{abs_rel_error_curve, riccati_closed, OperatorFamily, RiccatiKind};
use crate::specfun::FracOrder;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("grid must have at least 2 points, got {n}")]
    GridTooSmall { n: usize },
    #[error("generalized-family error is not strictly below the conformable error at x = {x}")]
    OrderingViolated { x: f64 },
    #[error("failed writing {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Identifier of an embedded reference table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableId {
    One,
    Two,
    Three,
}

impl TableId {
    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Self::One),
            2 => Some(Self::Two),
            3 => Some(Self::Three),
            _ => None,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Self::One => 1,
            Self::Two => 2,
            Self::Three => 3,
        }
    }
}

/// One column of a reference table: a method name, optional alias used in
/// the surrounding text, the closed-form family it can be recomputed from
/// (if any), and the six printed cells (absent cells stay absent).
pub struct RefColumn {
    pub method: &'static str,
    pub alias: Option<&'static str>,
    pub recompute: Option<OperatorFamily>,
    pub cells: [Option<&'static str>; 6],
}

/// An embedded reference table.
pub struct ReferenceTable {
    pub id: TableId,
    pub kind: RiccatiKind,
    pub alpha: FracOrder,
    pub t_values: [f64; 6],
    pub columns: Vec<RefColumn>,
    pub default_tolerance: f64,
}

const T_GRID: [f64; 6] = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];

/// Returns the embedded reference data for a table.
pub fn reference_table(id: TableId) -> ReferenceTable {
    match id {
        TableId::One => ReferenceTable {
            id,
            kind: RiccatiKind::First,
            alpha: FracOrder::new(0.75).expect("valid order"),
            t_values: T_GRID,
            default_tolerance: 5e-5,
            columns: vec![
                RefColumn {
                    method: "Present",
                    alias: None,
                    recompute: Some(OperatorFamily::Generalized),
                    cells: cells(["0", "0.31439", "0.49848", "0.63022", "0.72609", "0.79618"]),
                },
                RefColumn {
                    method: "BPM",
                    alias: None,
                    recompute: None,
                    cells: cells([
                        "0",
                        "0.30996891",
                        "0.48162749",
                        "0.59777979",
                        "0.67884745",
                        "0.73684181",
                    ]),
                },
                RefColumn {
                    method: "EHPM",
                    alias: None,
                    recompute: None,
                    cells: cells(["0", "0.3214", "0.5077", "0.6259", "0.7028", "0.7542"]),
                },
                RefColumn {
                    method: "IABMM",
                    alias: None,
                    recompute: None,
                    cells: cells(["0", "0.3117", "0.4855", "0.6045", "0.6880", "0.7478"]),
                },
                RefColumn {
                    method: "CD",
                    alias: None,
                    recompute: Some(OperatorFamily::Conformable),
                    cells: cells(["0", "0.37889", "0.58539", "0.72064", "0.81029", "0.87006"]),
                },
            ],
        },
        TableId::Two => ReferenceTable {
            id,
            kind: RiccatiKind::First,
            alpha: FracOrder::new(0.9).expect("valid order"),
            t_values: T_GRID,
            default_tolerance: 5e-5,
            columns: vec![
                RefColumn {
                    method: "Present",
                    alias: None,
                    recompute: Some(OperatorFamily::Generalized),
                    cells: cells(["0", "0.23952", "0.42667", "0.57607", "0.69138", "0.7778"]),
                },
                RefColumn {
                    method: "BPM",
                    alias: None,
                    recompute: None,
                    cells: cells([
                        "0",
                        "0.23878798",
                        "0.42258214",
                        "0.56617082",
                        "0.67462642",
                        "0.75460256",
                    ]),
                },
                RefColumn {
                    // Header says MHPM, the surrounding text says EHPM.
                    method: "MHPM",
                    alias: Some("EHPM"),
                    recompute: None,
                    cells: cells(["0", "0.2391", "0.4229", "0.5653", "0.6740", "0.7569"]),
                },
                RefColumn {
                    method: "IABMM",
                    alias: None,
                    recompute: None,
                    cells: cells(["0", "0.2393", "0.4234", "0.5679", "0.6774", "0.7584"]),
                },
                RefColumn {
                    method: "CD",
                    alias: None,
                    recompute: Some(OperatorFamily::Conformable),
                    cells: cells(["0", "0.25526", "0.45191", "0.60539", "0.72063", "0.80445"]),
                },
            ],
        },
        TableId::Three => ReferenceTable {
            id,
            kind: RiccatiKind::Second,
            alpha: FracOrder::new(0.9).expect("valid order"),
            t_values: T_GRID,
            default_tolerance: 5e-4,
            columns: vec![
                RefColumn {
                    method: "Present",
                    alias: None,
                    recompute: Some(OperatorFamily::Generalized),
                    cells: cells(["0", "0.30718", "0.67131", "1.0666", "1.4397", "1.7485"]),
                },
                RefColumn {
                    method: "BPM",
                    alias: None,
                    recompute: None,
                    cells: cells([
                        "0",
                        "0.31488815",
                        "0.69756771",
                        "1.10789047",
                        "1.47772823",
                        "1.76542008",
                    ]),
                },
                RefColumn {
                    method: "FTBM",
                    alias: None,
                    recompute: None,
                    cells: cells([
                        "0",
                        "0.31485423",
                        "0.69751826",
                        "0.90364539",
                        "1.47768008",
                        "1.76525852",
                    ]),
                },
                RefColumn {
                    method: "IABMM",
                    alias: None,
                    recompute: None,
                    cells: [Some("0"), None, None, None, None, Some("1.7356")],
                },
                RefColumn {
                    method: "CD",
                    alias: None,
                    recompute: Some(OperatorFamily::Conformable),
                    cells: cells(["0", "0.33295", "0.73105", "1.1561", "1.5422", "1.8457"]),
                },
            ],
        },
    }
}

fn cells(values: [&'static str; 6]) -> [Option<&'static str>; 6] {
    values.map(Some)
}

/// One recomputed cell compared against its printed reference.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub t: f64,
    pub method: &'static str,
    pub reference_text: &'static str,
    pub reference: f64,
    pub computed: f64,
    pub deviation: f64,
}

/// Outcome of recomputing a table's closed-form columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ReproductionReport {
    pub id: TableId,
    pub tolerance: f64,
    pub rows: Vec<ComparisonRow>,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Recomputes the closed-form columns of a table and compares each cell to
/// the embedded reference at the table's default tolerance.
pub fn reproduce_table(id: TableId) -> ReproductionReport {
    reproduce_table_with(id, None, OperatorFamily::Generalized)
}

/// [`reproduce_table`] with a tolerance override and a prefactor-family
/// override for the recomputed primary column (used to demonstrate that the
/// regression actually discriminates between the two families).
pub fn reproduce_table_with(
    id: TableId,
    tolerance: Option<f64>,
    present_family: OperatorFamily,
) -> ReproductionReport {
    let table = reference_table(id);
    let tolerance = tolerance.unwrap_or(table.default_tolerance);
    let mut rows = Vec::new();
    let mut max_deviation: f64 = 0.0;
    for column in &table.columns {
        let Some(family) = column.recompute else {
            continue;
        };
        let family = match family {
            OperatorFamily::Generalized => present_family,
            OperatorFamily::Conformable => OperatorFamily::Conformable,
        };
        for (i, cell) in column.cells.iter().enumerate() {
            let Some(text) = cell else { continue };
            let reference: f64 = text.parse().expect("embedded cells are numeric");
            let t = table.t_values[i];
            let computed = riccati_closed(table.kind, family, t, table.alpha);
            let deviation = (computed - reference).abs();
            max_deviation = max_deviation.max(deviation);
            rows.push(ComparisonRow {
                t,
                method: column.method,
                reference_text: text,
                reference,
                computed,
                deviation,
            });
        }
    }
    ReproductionReport {
        id,
        tolerance,
        rows,
        max_deviation,
        pass: max_deviation <= tolerance,
    }
}

fn decimals_of(text: &str) -> usize {
    text.split_once('.').map_or(0, |(_, frac)| frac.len())
}

impl ReproductionReport {
    /// Machine-readable CSV: recomputed rows plus echoed context columns.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,method,reference,computed,abs_deviation\n");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{:.12e},{:.3e}",
                row.t, row.method, row.reference_text, row.computed, row.deviation
            );
        }
        let table = reference_table(self.id);
        for column in table.columns.iter().filter(|c| c.recompute.is_none()) {
            for (i, cell) in column.cells.iter().enumerate() {
                let text = cell.unwrap_or("absent");
                let _ = writeln!(out, "{},{},{},,", table.t_values[i], column.method, text);
            }
        }
        out
    }

    /// Human-readable summary. Computed values are printed with the same
    /// number of decimals as the matching reference cell; comparisons are
    /// done on full-precision values.
    pub fn render_text(&self) -> String {
        let table = reference_table(self.id);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "Table {} (alpha = {}, tolerance {:.1e})",
            self.id.number(),
            table.alpha.value(),
            self.tolerance
        );
        let _ = writeln!(
            out,
            "  {:<5} {:<8} {:>12} {:>12} {:>10}",
            "t", "method", "reference", "computed", "dev"
        );
        for row in &self.rows {
            let d = decimals_of(row.reference_text).max(1);
            let _ = writeln!(
                out,
                "  {:<5} {:<8} {:>12} {:>12} {:>10.1e}",
                row.t,
                row.method,
                row.reference_text,
                format!("{:.*}", d, row.computed),
                row.deviation
            );
        }
        let context: Vec<&str> = table
            .columns
            .iter()
            .filter(|c| c.recompute.is_none())
            .map(|c| c.method)
            .collect();
        if !context.is_empty() {
            let _ = writeln!(out, "  context columns (not recomputed): {}", context.join(", "));
            for column in table.columns.iter().filter(|c| c.recompute.is_none()) {
                let rendered: Vec<String> = column
                    .cells
                    .iter()
                    .enumerate()
                    .map(|(i, cell)| {
                        format!("t={} {}", table.t_values[i], cell.unwrap_or("\u{2014}"))
                    })
                    .collect();
                let _ = writeln!(out, "    {:<6} {}", column.method, rendered.join("  "));
            }
        }
        let _ = writeln!(
            out,
            "  {}: max deviation {:.3e} (tolerance {:.1e})",
            if self.pass { "PASS" } else { "FAIL" },
            self.max_deviation,
            self.tolerance
        );
        out
    }
}

/// `(x, err_generalized, err_conformable)` rows on a uniform grid over
/// (0, 1], checking the strict pointwise ordering for orders below 1.
pub fn error_curve_rows(
    kind: RiccatiKind,
    order: FracOrder,
    grid_size: usize,
) -> Result<Vec<(f64, f64, f64)>, ReportError> {
    if grid_size < 2 {
        return Err(ReportError::GridTooSmall { n: grid_size });
    }
    let grid: Vec<f64> = (1..=grid_size)
        .map(|i| i as f64 / grid_size as f64)
        .collect();
    let gfd = abs_rel_error_curve(kind, OperatorFamily::Generalized, order, &grid);
    let cd = abs_rel_error_curve(kind, OperatorFamily::Conformable, order, &grid);
    let mut rows = Vec::with_capacity(grid.len());
    for (&(x, eg), &(_, ec)) in gfd.points.iter().zip(&cd.points) {
        if order.value() < 1.0 && eg >= ec {
            return Err(ReportError::OrderingViolated { x });
        }
        rows.push((x, eg, ec));
    }
    Ok(rows)
}

/// Writes the error-curve CSV for one problem/order pair; returns the
/// number of data rows.
pub fn emit_error_curves(
    kind: RiccatiKind,
    order: FracOrder,
    grid_size: usize,
    path: &Path,
) -> Result<usize, ReportError> {
    let rows = error_curve_rows(kind, order, grid_size)?;
    let mut out = String::from("x,err_gfd,err_cd\n");
    for (x, eg, ec) in &rows {
        let _ = writeln!(out, "{x:.12e},{eg:.12e},{ec:.12e}");
    }
    std::fs::write(path, out).map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(rows.len())
}

/// The three published error figures: which problem and order each shows.
/// The third figure is bound to the second Riccati problem.
pub fn figure_spec(figure: u8) -> Option<(RiccatiKind, FracOrder)> {
    let order = |alpha| FracOrder::new(alpha).expect("valid order");
    match figure {
        1 => Some((RiccatiKind::First, order(0.75))),
        2 => Some((RiccatiKind::First, order(0.9))),
        3 => Some((RiccatiKind::Second, order(0.9))),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_pass_at_default_tolerances() {
        for id in [TableId::One, TableId::Two, TableId::Three] {
            let report = reproduce_table(id);
            assert!(
                report.pass,
                "table {} max deviation {}",
                id.number(),
                report.max_deviation
            );
            // 6 rows for Present + 6 for CD.
            assert_eq!(report.rows.len(), 12);
        }
    }

    #[test]
    fn frozen_reference_cells_match_recomputation() {
        let report = reproduce_table(TableId::One);
        let row = report
            .rows
            .iter()
            .find(|r| r.method == "Present" && r.t == 0.4)
            .unwrap();
        assert_eq!(row.reference_text, "0.49848");
        assert!(row.deviation <= 5e-5);

        let report = reproduce_table(TableId::Two);
        let row = report
            .rows
            .iter()
            .find(|r| r.method == "Present" && r.t == 0.6)
            .unwrap();
        assert_eq!(row.reference_text, "0.57607");
        assert!(row.deviation <= 5e-5);

        let report = reproduce_table(TableId::Three);
        let row = report
            .rows
            .iter()
            .find(|r| r.method == "CD" && r.t == 0.4)
            .unwrap();
        assert_eq!(row.reference_text, "0.73105");
        assert!(row.deviation <= 5e-4);
    }

    #[test]
    fn conformable_injection_breaks_the_primary_column() {
        let report = reproduce_table_with(TableId::One, None, OperatorFamily::Conformable);
        assert!(!report.pass);
        // A huge tolerance trivially passes.
        let report = reproduce_table_with(TableId::One, Some(1.0), OperatorFamily::Conformable);
        assert!(report.pass);
    }

    #[test]
    fn table3_keeps_absent_cells_absent() {
        let table = reference_table(TableId::Three);
        let iabmm = table
            .columns
            .iter()
            .find(|c| c.method == "IABMM")
            .unwrap();
        assert_eq!(iabmm.cells.iter().filter(|c| c.is_none()).count(), 4);
        let report = reproduce_table(TableId::Three);
        let csv = report.to_csv();
        assert!(csv.contains("IABMM,absent"));
        assert!(report.render_text().contains('\u{2014}'));
    }

    #[test]
    fn table2_alias_is_recorded() {
        let table = reference_table(TableId::Two);
        let col = table.columns.iter().find(|c| c.method == "MHPM").unwrap();
        assert_eq!(col.alias, Some("EHPM"));
    }

    #[test]
    fn error_curves_are_ordered_and_deterministic() {
        let (kind, order) = figure_spec(1).unwrap();
        let rows = error_curve_rows(kind, order, 100).unwrap();
        assert_eq!(rows.len(), 100);
        for &(x, eg, ec) in &rows {
            assert!(eg < ec, "ordering violated at x = {x}");
        }

        let dir = std::env::temp_dir();
        let p1 = dir.join("gfd_report_curve_a.csv");
        let p2 = dir.join("gfd_report_curve_b.csv");
        emit_error_curves(kind, order, 100, &p1).unwrap();
        emit_error_curves(kind, order, 100, &p2).unwrap();
        let b1 = std::fs::read(&p1).unwrap();
        let b2 = std::fs::read(&p2).unwrap();
        assert_eq!(b1, b2);
        let _ = std::fs::remove_file(p1);
        let _ = std::fs::remove_file(p2);
    }

    #[test]
    fn error_curve_rejects_tiny_grid() {
        let (kind, order) = figure_spec(2).unwrap();
        assert!(matches!(
            error_curve_rows(kind, order, 1),
            Err(ReportError::GridTooSmall { .. })
        ));
    }

    #[test]
    fn csv_is_stable() {
        let csv = reproduce_table(TableId::One).to_csv();
        let again = reproduce_table(TableId::One).to_csv();
        assert_eq!(csv, again);
        assert!(csv.starts_with("t,method,reference,computed,abs_deviation\n"));
        assert!(csv.contains("0.2,Present,0.31439,"));
    }
}
