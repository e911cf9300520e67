//! Value-to-value edits of a scenario.
//!
//! Each edit takes a scenario by reference and returns a new, validated
//! scenario; the input is never touched. Additions go to the end of their
//! table. Removing a supplier or destination also removes its lanes and
//! their shipments.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    DestinationRecord, InvalidScenario, Lane, LaneKey, Plan, Scenario, SupplierRecord, Units,
};
use crate::money::Money;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MutationError {
    #[error("unknown supplier {0:?}")]
    UnknownSupplier(String),
    #[error("unknown destination {0:?}")]
    UnknownDestination(String),
    #[error("no lane {0}")]
    UnknownLane(LaneKey),
    #[error("supplier {0:?} already exists")]
    DuplicateSupplier(String),
    #[error("destination {0:?} already exists")]
    DuplicateDestination(String),
    #[error("lane {0} already exists")]
    DuplicateLane(LaneKey),
    #[error("{field} must not be negative (got {value})")]
    NegativeValue { field: &'static str, value: String },
    #[error("cannot ship on {0}: no such lane")]
    ShipmentWithoutLane(LaneKey),
    #[error(transparent)]
    Invalid(#[from] InvalidScenario),
}

type Result<T> = std::result::Result<T, MutationError>;

/// The tables of a scenario, unlocked for editing.
struct Draft {
    suppliers: Vec<SupplierRecord>,
    destinations: Vec<DestinationRecord>,
    lanes: Vec<Lane>,
    plan: Plan,
}

impl Draft {
    fn of(s: &Scenario) -> Self {
        Draft {
            suppliers: s.suppliers().to_vec(),
            destinations: s.destinations().to_vec(),
            lanes: s.lanes().to_vec(),
            plan: s.plan().clone(),
        }
    }

    fn finish(self) -> Result<Scenario> {
        Ok(Scenario::new(self.suppliers, self.destinations, self.lanes, self.plan)?)
    }
}

fn non_negative(field: &'static str, value: Units) -> Result<()> {
    if value < 0 {
        return Err(MutationError::NegativeValue {
            field,
            value: value.to_string(),
        });
    }
    Ok(())
}

fn non_negative_cost(value: Money) -> Result<()> {
    if value.is_negative() {
        return Err(MutationError::NegativeValue {
            field: "unit_cost",
            value: value.to_string(),
        });
    }
    Ok(())
}

fn require_supplier(s: &Scenario, name: &str) -> Result<usize> {
    s.supplier_position(name)
        .ok_or_else(|| MutationError::UnknownSupplier(name.into()))
}

fn require_destination(s: &Scenario, name: &str) -> Result<usize> {
    s.destination_position(name)
        .ok_or_else(|| MutationError::UnknownDestination(name.into()))
}

fn require_lane(s: &Scenario, supplier: &str, destination: &str) -> Result<LaneKey> {
    require_supplier(s, supplier)?;
    require_destination(s, destination)?;
    let key = LaneKey::new(supplier, destination);
    match s.lane(supplier, destination) {
        Some(_) => Ok(key),
        None => Err(MutationError::UnknownLane(key)),
    }
}

pub fn add_supplier(s: &Scenario, name: &str, capacity: Units) -> Result<Scenario> {
    if s.supplier(name).is_some() {
        return Err(MutationError::DuplicateSupplier(name.into()));
    }
    non_negative("capacity", capacity)?;
    let mut d = Draft::of(s);
    d.suppliers.push(SupplierRecord {
        name: name.into(),
        capacity,
    });
    d.finish()
}

pub fn add_destination(s: &Scenario, name: &str, required: Units) -> Result<Scenario> {
    if s.destination(name).is_some() {
        return Err(MutationError::DuplicateDestination(name.into()));
    }
    non_negative("required", required)?;
    let mut d = Draft::of(s);
    d.destinations.push(DestinationRecord {
        name: name.into(),
        required,
    });
    d.finish()
}

/// Opens a lane and records `initial_quantity` on it in the plan.
pub fn add_lane(
    s: &Scenario,
    supplier: &str,
    destination: &str,
    unit_cost: Money,
    initial_quantity: Units,
) -> Result<Scenario> {
    require_supplier(s, supplier)?;
    require_destination(s, destination)?;
    let key = LaneKey::new(supplier, destination);
    if s.lane(supplier, destination).is_some() {
        return Err(MutationError::DuplicateLane(key));
    }
    non_negative_cost(unit_cost)?;
    non_negative("quantity", initial_quantity)?;
    let mut d = Draft::of(s);
    d.lanes.push(Lane {
        supplier: supplier.into(),
        destination: destination.into(),
        unit_cost,
    });
    d.plan.set(key, initial_quantity);
    d.finish()
}

pub fn remove_lane(s: &Scenario, supplier: &str, destination: &str) -> Result<Scenario> {
    let key = require_lane(s, supplier, destination)?;
    let mut d = Draft::of(s);
    d.lanes
        .retain(|l| !(l.supplier == key.supplier && l.destination == key.destination));
    d.plan.remove(&key);
    d.finish()
}

/// What removing a supplier or destination would take with it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cascade {
    pub lanes: Vec<LaneKey>,
    /// Units currently planned on those lanes.
    pub shipped: Units,
}

fn cascade_where(s: &Scenario, hit: impl Fn(&Lane) -> bool) -> Cascade {
    let lanes: Vec<LaneKey> = s
        .lanes()
        .iter()
        .filter(|l| hit(l))
        .map(|l| LaneKey::new(&l.supplier, &l.destination))
        .collect();
    let shipped = lanes.iter().map(|k| s.plan().get_key(k)).sum();
    Cascade { lanes, shipped }
}

/// Dry run of [`remove_supplier`].
pub fn supplier_cascade(s: &Scenario, name: &str) -> Result<Cascade> {
    require_supplier(s, name)?;
    Ok(cascade_where(s, |l| l.supplier == name))
}

/// Dry run of [`remove_destination`].
pub fn destination_cascade(s: &Scenario, name: &str) -> Result<Cascade> {
    require_destination(s, name)?;
    Ok(cascade_where(s, |l| l.destination == name))
}

pub fn remove_supplier(s: &Scenario, name: &str) -> Result<Scenario> {
    require_supplier(s, name)?;
    let mut d = Draft::of(s);
    d.suppliers.retain(|r| r.name != name);
    d.lanes.retain(|l| l.supplier != name);
    d.plan.retain(|k, _| k.supplier != name);
    d.finish()
}

pub fn remove_destination(s: &Scenario, name: &str) -> Result<Scenario> {
    require_destination(s, name)?;
    let mut d = Draft::of(s);
    d.destinations.retain(|r| r.name != name);
    d.lanes.retain(|l| l.destination != name);
    d.plan.retain(|k, _| k.destination != name);
    d.finish()
}

pub fn set_shipment(s: &Scenario, supplier: &str, destination: &str, quantity: Units) -> Result<Scenario> {
    require_supplier(s, supplier)?;
    require_destination(s, destination)?;
    let key = LaneKey::new(supplier, destination);
    if s.lane(supplier, destination).is_none() {
        return Err(MutationError::ShipmentWithoutLane(key));
    }
    non_negative("quantity", quantity)?;
    let mut d = Draft::of(s);
    d.plan.set(key, quantity);
    d.finish()
}

pub fn set_capacity(s: &Scenario, supplier: &str, capacity: Units) -> Result<Scenario> {
    let at = require_supplier(s, supplier)?;
    non_negative("capacity", capacity)?;
    let mut d = Draft::of(s);
    d.suppliers[at].capacity = capacity;
    d.finish()
}

pub fn set_required(s: &Scenario, destination: &str, required: Units) -> Result<Scenario> {
    let at = require_destination(s, destination)?;
    non_negative("required", required)?;
    let mut d = Draft::of(s);
    d.destinations[at].required = required;
    d.finish()
}

pub fn set_unit_cost(s: &Scenario, supplier: &str, destination: &str, unit_cost: Money) -> Result<Scenario> {
    let key = require_lane(s, supplier, destination)?;
    non_negative_cost(unit_cost)?;
    let mut d = Draft::of(s);
    let lane = d
        .lanes
        .iter_mut()
        .find(|l| l.supplier == key.supplier && l.destination == key.destination)
        .expect("lane checked above");
    lane.unit_cost = unit_cost;
    d.finish()
}

fn zero() -> Units {
    0
}

/// One step of a mutation script.
///
/// Serialized as `{"op": "<name>", "args": {...}}`, e.g.
/// `{"op": "add_lane", "args": {"supplier": "Paulucci", "destination": "Abbot", "unit_cost": "43.00", "initial_quantity": 1000}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", content = "args", rename_all = "snake_case", deny_unknown_fields)]
pub enum Mutation {
    AddSupplier {
        name: String,
        capacity: Units,
    },
    AddDestination {
        name: String,
        required: Units,
    },
    AddLane {
        supplier: String,
        destination: String,
        unit_cost: Money,
        #[serde(default = "zero")]
        initial_quantity: Units,
    },
    RemoveLane {
        supplier: String,
        destination: String,
    },
    RemoveSupplier {
        name: String,
    },
    RemoveDestination {
        name: String,
    },
    SetShipment {
        supplier: String,
        destination: String,
        quantity: Units,
    },
    SetCapacity {
        supplier: String,
        capacity: Units,
    },
    SetRequired {
        destination: String,
        required: Units,
    },
    SetUnitCost {
        supplier: String,
        destination: String,
        unit_cost: Money,
    },
}

impl Mutation {
    pub fn apply(&self, s: &Scenario) -> Result<Scenario> {
        match self {
            Mutation::AddSupplier { name, capacity } => add_supplier(s, name, *capacity),
            Mutation::AddDestination { name, required } => add_destination(s, name, *required),
            Mutation::AddLane {
                supplier,
                destination,
                unit_cost,
                initial_quantity,
            } => add_lane(s, supplier, destination, *unit_cost, *initial_quantity),
            Mutation::RemoveLane { supplier, destination } => remove_lane(s, supplier, destination),
            Mutation::RemoveSupplier { name } => remove_supplier(s, name),
            Mutation::RemoveDestination { name } => remove_destination(s, name),
            Mutation::SetShipment {
                supplier,
                destination,
                quantity,
            } => set_shipment(s, supplier, destination, *quantity),
            Mutation::SetCapacity { supplier, capacity } => set_capacity(s, supplier, *capacity),
            Mutation::SetRequired { destination, required } => set_required(s, destination, *required),
            Mutation::SetUnitCost {
                supplier,
                destination,
                unit_cost,
            } => set_unit_cost(s, supplier, destination, *unit_cost),
        }
    }

    /// Lanes a removal would drop; empty for every other edit.
    pub fn cascade(&self, s: &Scenario) -> Result<Cascade> {
        match self {
            Mutation::RemoveSupplier { name } => supplier_cascade(s, name),
            Mutation::RemoveDestination { name } => destination_cascade(s, name),
            _ => Ok(Cascade::default()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {index}: {source}")]
pub struct ScriptError {
    /// 0-based position of the failing step.
    pub index: usize,
    #[source]
    pub source: MutationError,
}

/// Applies every step in order. Any failure discards all steps.
pub fn apply_script(s: &Scenario, script: &[Mutation]) -> std::result::Result<Scenario, ScriptError> {
    let mut current = s.clone();
    for (index, step) in script.iter().enumerate() {
        current = step
            .apply(&current)
            .map_err(|source| ScriptError { index, source })?;
    }
    Ok(current)
}
