//! Raw supplier data ingestion.
//!
//! The raw dialect is CSV as it usually arrives from whoever generated it:
//!
//! ```text
//! Supplier,Destination,Shipping Cost/Unit,Supplier Capacity
//! Johnson,Abbot,$ 42.00,"27,000"
//! ,Bone,$ 41.60,
//! ,Chest,$ 45.60,
//! Total Required By Destination,,,
//! Abbot,"32,422"
//! ```
//!
//! A blank supplier cell continues the group above it, and the capacity is
//! given once on the first row of each group. [`parse_raw`] splits the
//! document into rows without interpreting numbers; [`normalize`] applies
//! fill-down, cleans currency text and builds a validated [`Scenario`].

use std::collections::HashMap;

use thiserror::Error;

use crate::model::{
    DestinationRecord, InvalidScenario, Lane, LaneKey, Plan, Scenario, SupplierRecord, Units,
    MAX_UNITS, MAX_UNIT_COST,
};
use crate::money::{Money, ParseMoneyError};

pub const HEADER: [&str; 4] = ["Supplier", "Destination", "Shipping Cost/Unit", "Supplier Capacity"];

/// First cell of the line that starts the requirements section.
pub const REQUIREMENTS_MARKER: &str = "Total Required By Destination";

/// Placeholder quantity given to every lane when none is specified.
pub const DEFAULT_PLAN_QUANTITY: u32 = 1000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRow {
    /// 1-based line in the source document.
    pub line: usize,
    /// `None` continues the previous supplier group.
    pub supplier: Option<String>,
    pub destination: String,
    pub unit_cost: String,
    pub capacity: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequirementRow {
    pub line: usize,
    pub destination: String,
    pub required: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing header row")]
    MissingHeader,
    #[error("unexpected header {0:?}")]
    BadHeader(Vec<String>),
    #[error("missing {REQUIREMENTS_MARKER:?} section marker")]
    MissingMarker,
    #[error("expected {expected} columns, found {found}")]
    ColumnCount { expected: &'static str, found: usize },
    #[error("first data row has no supplier to continue")]
    NoGroupToContinue,
    #[error("destination is blank")]
    BlankDestination,
    #[error("malformed CSV: {0}")]
    Csv(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

/// Splits a raw document into supplier rows and requirement rows, in file
/// order. Numeric cells are kept verbatim; names are trimmed.
pub fn parse_raw(document: &str) -> Result<(Vec<RawRow>, Vec<RequirementRow>), ParseError> {
    let document = document.strip_prefix('\u{feff}').unwrap_or(document);
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(document.as_bytes());

    let mut header_seen = false;
    let mut in_requirements = false;
    let mut last_line = 0;
    let mut rows = Vec::new();
    let mut reqs = Vec::new();

    for record in reader.records() {
        let record = record.map_err(|e| ParseError {
            line: e.position().map_or(last_line + 1, |p| p.line() as usize),
            kind: ParseErrorKind::Csv(e.to_string()),
        })?;
        let line = record.position().map_or(last_line + 1, |p| p.line() as usize);
        last_line = line;
        let cells: Vec<&str> = record.iter().map(str::trim).collect();
        if cells.iter().all(|c| c.is_empty()) {
            continue;
        }
        let err = |kind| ParseError { line, kind };

        if !header_seen {
            if !is_header(&cells) {
                return Err(err(ParseErrorKind::BadHeader(
                    cells.iter().map(|c| c.to_string()).collect(),
                )));
            }
            header_seen = true;
            continue;
        }

        if !in_requirements && cells[0] == REQUIREMENTS_MARKER {
            if cells.len() > 4 || cells[1..].iter().any(|c| !c.is_empty()) {
                return Err(err(ParseErrorKind::ColumnCount {
                    expected: "1 to 4 (marker only)",
                    found: cells.len(),
                }));
            }
            in_requirements = true;
            continue;
        }

        if in_requirements {
            // Two cells, optionally padded with blanks up to the data width.
            if cells.len() < 2 || cells.len() > 4 || cells[2..].iter().any(|c| !c.is_empty()) {
                return Err(err(ParseErrorKind::ColumnCount {
                    expected: "2",
                    found: cells.len(),
                }));
            }
            if cells[0].is_empty() {
                return Err(err(ParseErrorKind::BlankDestination));
            }
            reqs.push(RequirementRow {
                line,
                destination: cells[0].to_string(),
                required: record[1].to_string(),
            });
            continue;
        }

        if cells.len() != 4 {
            return Err(err(ParseErrorKind::ColumnCount {
                expected: "4",
                found: cells.len(),
            }));
        }
        let supplier = (!cells[0].is_empty()).then(|| cells[0].to_string());
        if supplier.is_none() && rows.is_empty() {
            return Err(err(ParseErrorKind::NoGroupToContinue));
        }
        if cells[1].is_empty() {
            return Err(err(ParseErrorKind::BlankDestination));
        }
        rows.push(RawRow {
            line,
            supplier,
            destination: cells[1].to_string(),
            unit_cost: record[2].to_string(),
            capacity: (!cells[3].is_empty()).then(|| record[3].to_string()),
        });
    }

    if !header_seen {
        return Err(ParseError {
            line: 1,
            kind: ParseErrorKind::MissingHeader,
        });
    }
    if !in_requirements {
        return Err(ParseError {
            line: last_line + 1,
            kind: ParseErrorKind::MissingMarker,
        });
    }
    Ok((rows, reqs))
}

fn is_header(cells: &[&str]) -> bool {
    // The cost column may carry a currency suffix, e.g. "Shipping Cost/Unit ($)".
    cells.len() == 4
        && cells[0] == HEADER[0]
        && cells[1] == HEADER[1]
        && (cells[2] == HEADER[2] || cells[2] == "Shipping Cost/Unit ($)")
        && cells[3] == HEADER[3]
}

/// Strips currency symbols, thousands separators and whitespace.
pub fn clean_numeric(text: &str) -> String {
    text.chars()
        .filter(|c| *c != '$' && *c != ',' && !c.is_whitespace())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    UnitCost,
    Capacity,
    Required,
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Field::UnitCost => "unit cost",
            Field::Capacity => "capacity",
            Field::Required => "requirement",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RowError {
    #[error("supplier {0:?} has no capacity on the first row of its group")]
    MissingCapacity(String),
    #[error("supplier {supplier:?} capacity {found} conflicts with {expected} given earlier")]
    ConflictingCapacity {
        supplier: String,
        expected: Units,
        found: Units,
    },
    #[error("{field} {text:?} is not a valid number")]
    NotNumeric { field: Field, text: String },
    #[error("{field} {text:?} is negative")]
    Negative { field: Field, text: String },
    #[error("{field} {text:?} is too large")]
    TooLarge { field: Field, text: String },
    #[error("lane ({supplier}, {destination}) already defined on line {first_line}")]
    DuplicateLane {
        supplier: String,
        destination: String,
        first_line: usize,
    },
    #[error("requirement for {destination:?} already given on line {first_line}")]
    DuplicateRequirement { destination: String, first_line: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("line {line}: {error}")]
    Row { line: usize, error: RowError },
    #[error(transparent)]
    Invalid(#[from] InvalidScenario),
}

fn parse_cost(text: &str) -> Result<Money, RowError> {
    let cleaned = clean_numeric(text);
    let field = Field::UnitCost;
    if cleaned.starts_with('-') {
        return Err(RowError::Negative { field, text: text.into() });
    }
    match cleaned.parse::<Money>() {
        Ok(m) if m > MAX_UNIT_COST => Err(RowError::TooLarge { field, text: text.into() }),
        Ok(m) => Ok(m),
        Err(ParseMoneyError::OutOfRange(_)) => Err(RowError::TooLarge { field, text: text.into() }),
        Err(_) => Err(RowError::NotNumeric { field, text: text.into() }),
    }
}

fn parse_units(text: &str, field: Field) -> Result<Units, RowError> {
    let cleaned = clean_numeric(text);
    let digits = cleaned.strip_prefix('-').unwrap_or(&cleaned);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(RowError::NotNumeric { field, text: text.into() });
    }
    if cleaned.starts_with('-') {
        return Err(RowError::Negative { field, text: text.into() });
    }
    match digits.parse::<Units>() {
        Ok(n) if n <= MAX_UNITS => Ok(n),
        _ => Err(RowError::TooLarge { field, text: text.into() }),
    }
}

/// Builds a validated scenario from parsed raw rows.
///
/// Suppliers appear in first-appearance order and lanes in file order.
/// Destinations follow the requirements section, then any destination that
/// only appears on lanes (with a requirement of zero). Every lane ships
/// `plan_default` units.
pub fn normalize(
    raw: &[RawRow],
    reqs: &[RequirementRow],
    plan_default: u32,
) -> Result<Scenario, NormalizeError> {
    let row_err = |line, error| NormalizeError::Row { line, error };

    let mut suppliers: Vec<SupplierRecord> = Vec::new();
    let mut supplier_pos: HashMap<String, usize> = HashMap::new();
    let mut lanes: Vec<Lane> = Vec::new();
    let mut lane_lines: HashMap<LaneKey, usize> = HashMap::new();
    let mut current: Option<usize> = None;

    for row in raw {
        let group = match &row.supplier {
            Some(name) => {
                let capacity = match &row.capacity {
                    Some(text) => parse_units(text, Field::Capacity).map_err(|e| row_err(row.line, e))?,
                    None => return Err(row_err(row.line, RowError::MissingCapacity(name.clone()))),
                };
                let pos = match supplier_pos.get(name) {
                    Some(&pos) => {
                        check_capacity(&suppliers[pos], capacity).map_err(|e| row_err(row.line, e))?;
                        pos
                    }
                    None => {
                        suppliers.push(SupplierRecord {
                            name: name.clone(),
                            capacity,
                        });
                        supplier_pos.insert(name.clone(), suppliers.len() - 1);
                        suppliers.len() - 1
                    }
                };
                current = Some(pos);
                pos
            }
            None => {
                // parse_raw guarantees the first row names a supplier.
                let pos = current.expect("continuation row without a group");
                if let Some(text) = &row.capacity {
                    let capacity = parse_units(text, Field::Capacity).map_err(|e| row_err(row.line, e))?;
                    check_capacity(&suppliers[pos], capacity).map_err(|e| row_err(row.line, e))?;
                }
                pos
            }
        };

        let unit_cost = parse_cost(&row.unit_cost).map_err(|e| row_err(row.line, e))?;
        let supplier = suppliers[group].name.clone();
        let key = LaneKey::new(&supplier, &row.destination);
        if let Some(&first_line) = lane_lines.get(&key) {
            return Err(row_err(
                row.line,
                RowError::DuplicateLane {
                    supplier,
                    destination: row.destination.clone(),
                    first_line,
                },
            ));
        }
        lane_lines.insert(key, row.line);
        lanes.push(Lane {
            supplier,
            destination: row.destination.clone(),
            unit_cost,
        });
    }

    let mut destinations: Vec<DestinationRecord> = Vec::new();
    let mut req_lines: HashMap<&str, usize> = HashMap::new();
    for req in reqs {
        if let Some(&first_line) = req_lines.get(req.destination.as_str()) {
            return Err(row_err(
                req.line,
                RowError::DuplicateRequirement {
                    destination: req.destination.clone(),
                    first_line,
                },
            ));
        }
        let required = parse_units(&req.required, Field::Required).map_err(|e| row_err(req.line, e))?;
        req_lines.insert(&req.destination, req.line);
        destinations.push(DestinationRecord {
            name: req.destination.clone(),
            required,
        });
    }
    for lane in &lanes {
        if !destinations.iter().any(|d| d.name == lane.destination) {
            destinations.push(DestinationRecord {
                name: lane.destination.clone(),
                required: 0,
            });
        }
    }

    let plan: Plan = lanes
        .iter()
        .map(|l| (LaneKey::new(&l.supplier, &l.destination), Units::from(plan_default)))
        .collect();
    Ok(Scenario::new(suppliers, destinations, lanes, plan)?)
}

fn check_capacity(existing: &SupplierRecord, found: Units) -> Result<(), RowError> {
    if existing.capacity == found {
        Ok(())
    } else {
        Err(RowError::ConflictingCapacity {
            supplier: existing.name.clone(),
            expected: existing.capacity,
            found,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IngestError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
}

/// [`parse_raw`] followed by [`normalize`].
pub fn ingest(document: &str, plan_default: u32) -> Result<Scenario, IngestError> {
    let (rows, reqs) = parse_raw(document)?;
    Ok(normalize(&rows, &reqs, plan_default)?)
}
