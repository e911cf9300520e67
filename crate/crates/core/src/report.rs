//! Supplier by destination matrix view, derived from the lane table.
//!
//! The report is a read-only pivot: rows are suppliers and columns are
//! destinations in table order, cells are present exactly where a lane
//! exists, and margins come from [`crate::eval`].

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::eval::{self, Evaluation};
use crate::model::{Scenario, Units};
use crate::money::Money;

/// Shown in text output for prohibited supplier/destination pairs.
pub const BLOCKED: &str = "—";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixReport {
    pub row_labels: Vec<String>,
    pub column_labels: Vec<String>,
    /// `None` marks a blocked pair.
    pub cost_cells: Vec<Vec<Option<Money>>>,
    pub plan_cells: Vec<Vec<Option<Units>>>,
    pub supplied_margin: Vec<Units>,
    pub delivered_margin: Vec<Units>,
    pub capacity_margin: Vec<Units>,
    pub required_margin: Vec<Units>,
    pub total_cost: Money,
}

/// One present cell of a report.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub supplier: String,
    pub destination: String,
    pub unit_cost: Money,
    pub quantity: Units,
}

pub fn matrix_report(scenario: &Scenario) -> MatrixReport {
    let rows = scenario.suppliers().len();
    let cols = scenario.destinations().len();
    let mut cost_cells = vec![vec![None; cols]; rows];
    let mut plan_cells = vec![vec![None; cols]; rows];
    for lane in scenario.lanes() {
        let i = scenario.supplier_position(&lane.supplier).expect("valid scenario");
        let j = scenario.destination_position(&lane.destination).expect("valid scenario");
        cost_cells[i][j] = Some(lane.unit_cost);
        plan_cells[i][j] = Some(scenario.quantity(&lane.supplier, &lane.destination));
    }

    let Evaluation {
        supplied,
        delivered,
        total_cost,
        ..
    } = eval::evaluate(scenario);

    MatrixReport {
        row_labels: scenario.suppliers().iter().map(|s| s.name.clone()).collect(),
        column_labels: scenario.destinations().iter().map(|d| d.name.clone()).collect(),
        cost_cells,
        plan_cells,
        supplied_margin: supplied.into_values().collect(),
        delivered_margin: delivered.into_values().collect(),
        capacity_margin: scenario.suppliers().iter().map(|s| s.capacity).collect(),
        required_margin: scenario.destinations().iter().map(|d| d.required).collect(),
        total_cost,
    }
}

impl MatrixReport {
    pub fn present_cells(&self) -> usize {
        self.cost_cells.iter().flatten().filter(|c| c.is_some()).count()
    }

    pub fn blocked_cells(&self) -> usize {
        self.row_labels.len() * self.column_labels.len() - self.present_cells()
    }

    /// Unpivots the present cells back into lane/plan tuples, row-major.
    pub fn flatten(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for (i, supplier) in self.row_labels.iter().enumerate() {
            for (j, destination) in self.column_labels.iter().enumerate() {
                if let (Some(unit_cost), Some(quantity)) = (self.cost_cells[i][j], self.plan_cells[i][j]) {
                    out.push(Cell {
                        supplier: supplier.clone(),
                        destination: destination.clone(),
                        unit_cost,
                        quantity,
                    });
                }
            }
        }
        out
    }
}

fn grid_to_text(rows: &[Vec<String>], out: &mut String) {
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut widths = vec![0; width];
    for row in rows {
        for (k, cell) in row.iter().enumerate() {
            widths[k] = widths[k].max(cell.chars().count());
        }
    }
    for row in rows {
        let mut line = String::new();
        for (k, cell) in row.iter().enumerate() {
            if k == 0 {
                let _ = write!(line, "{cell:<w$}", w = widths[0]);
            } else {
                let _ = write!(line, "  {cell:>w$}", w = widths[k]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
}

fn cell_text<T: ToString>(cell: &Option<T>) -> String {
    cell.as_ref().map_or_else(|| BLOCKED.to_string(), T::to_string)
}

/// Aligned plain-text rendering: a cost block with a Capacity column and a
/// Required row, a plan block with a Supplied column and a Delivered row,
/// then the total cost.
pub fn render_text(report: &MatrixReport) -> String {
    let header = |last: &str| {
        let mut row = vec!["Supplier".to_string()];
        row.extend(report.column_labels.iter().cloned());
        row.push(last.to_string());
        row
    };

    let mut costs = vec![header("Capacity")];
    for (i, label) in report.row_labels.iter().enumerate() {
        let mut row = vec![label.clone()];
        row.extend(report.cost_cells[i].iter().map(cell_text));
        row.push(report.capacity_margin[i].to_string());
        costs.push(row);
    }
    let mut required = vec!["Required".to_string()];
    required.extend(report.required_margin.iter().map(ToString::to_string));
    costs.push(required);

    let mut plan = vec![header("Supplied")];
    for (i, label) in report.row_labels.iter().enumerate() {
        let mut row = vec![label.clone()];
        row.extend(report.plan_cells[i].iter().map(cell_text));
        row.push(report.supplied_margin[i].to_string());
        plan.push(row);
    }
    let mut delivered = vec!["Delivered".to_string()];
    delivered.extend(report.delivered_margin.iter().map(ToString::to_string));
    plan.push(delivered);

    let mut out = String::from("Costs ($/unit)\n");
    grid_to_text(&costs, &mut out);
    out.push_str("\nSourcing Plan (Units Shipped)\n");
    grid_to_text(&plan, &mut out);
    let _ = writeln!(out, "\nTotal Sourcing Cost  {}", report.total_cost);
    out
}

fn csv_block(title: &str, header: &[String], labels: &[String], cells: Vec<Vec<String>>) -> String {
    let mut writer = csv::WriterBuilder::new()
        .flexible(true)
        .from_writer(Vec::new());
    let mut write = |record: &[String]| writer.write_record(record).expect("in-memory write");
    write(&[title.to_string()]);
    write(header);
    for (label, row) in labels.iter().zip(cells) {
        let mut record = vec![label.clone()];
        record.extend(row);
        write(&record);
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// Two CSV blocks with the same header row, separated by a blank line: unit
/// costs, then units shipped. Blocked cells are empty.
pub fn render_csv(report: &MatrixReport) -> String {
    let mut header = vec!["Supplier".to_string()];
    header.extend(report.column_labels.iter().cloned());
    let costs = report
        .cost_cells
        .iter()
        .map(|r| r.iter().map(|c| c.map(|m| m.to_string()).unwrap_or_default()).collect())
        .collect();
    let plan = report
        .plan_cells
        .iter()
        .map(|r| r.iter().map(|c| c.map(|q| q.to_string()).unwrap_or_default()).collect())
        .collect();
    let mut out = csv_block("Unit Cost", &header, &report.row_labels, costs);
    out.push('\n');
    out.push_str(&csv_block("Units Shipped", &header, &report.row_labels, plan));
    out
}

/// Plain-text summary of an evaluation.
pub fn render_evaluation_text(evaluation: &Evaluation) -> String {
    let mut rows = vec![vec!["Supplier".to_string(), "Supplied".into(), "Excess Capacity".into()]];
    for (name, units) in &evaluation.supplied {
        rows.push(vec![
            name.clone(),
            units.to_string(),
            evaluation.excess_capacity[name].to_string(),
        ]);
    }
    let mut out = String::new();
    grid_to_text(&rows, &mut out);
    out.push('\n');
    let mut rows = vec![vec!["Destination".to_string(), "Delivered".into()]];
    rows.extend(
        evaluation
            .delivered
            .iter()
            .map(|(name, units)| vec![name.clone(), units.to_string()]),
    );
    grid_to_text(&rows, &mut out);
    let _ = writeln!(out, "\nTotal Sourcing Cost  {}", evaluation.total_cost);
    if !evaluation.diagnostics.is_empty() {
        out.push_str("\nDiagnostics\n");
        for d in &evaluation.diagnostics {
            let kind = match d.kind {
                eval::DiagnosticKind::CapacityExceeded => "capacity exceeded",
                eval::DiagnosticKind::Shortfall => "shortfall",
                eval::DiagnosticKind::Surplus => "surplus",
            };
            let _ = writeln!(out, "  {kind}: {} by {}", d.subject, d.amount);
        }
    }
    out
}
