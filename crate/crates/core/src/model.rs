//! Relational scenario model: supplier, destination and lane tables plus the
//! sourcing plan, with the validation rules that tie them together.
//!
//! [`ScenarioDoc`] is the unchecked, serializable shape of a scenario (what a
//! file or request body contains). [`Scenario`] is the validated, immutable
//! value every other module works on; the only way to obtain one is through
//! [`Scenario::try_from`] / [`Scenario::new`], which run [`validate`].

use std::collections::{HashMap, HashSet};
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::money::Money;

/// Whole units of product.
pub type Units = i64;

/// Largest capacity, requirement or shipment accepted by validation.
pub const MAX_UNITS: Units = 1_000_000_000_000;

/// Largest unit cost accepted by validation (one billion per unit).
pub const MAX_UNIT_COST: Money = Money::from_cents(100_000_000_000);

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SupplierRecord {
    pub name: String,
    pub capacity: Units,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DestinationRecord {
    pub name: String,
    pub required: Units,
}

/// A permitted supplier to destination pair and its unit shipping cost.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lane {
    pub supplier: String,
    pub destination: String,
    pub unit_cost: Money,
}

/// One row of the serialized plan.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shipment {
    pub supplier: String,
    pub destination: String,
    pub quantity: Units,
}

/// Identifies a lane by its endpoint names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LaneKey {
    pub supplier: String,
    pub destination: String,
}

impl LaneKey {
    pub fn new(supplier: impl Into<String>, destination: impl Into<String>) -> Self {
        LaneKey {
            supplier: supplier.into(),
            destination: destination.into(),
        }
    }
}

impl fmt::Display for LaneKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.supplier, self.destination)
    }
}

/// Quantity shipped per lane. Lanes without an entry ship nothing.
///
/// Entry order is insertion order and survives serialization; equality
/// ignores order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<Shipment>", into = "Vec<Shipment>")]
pub struct Plan {
    shipments: IndexMap<LaneKey, Units>,
}

impl Plan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, supplier: &str, destination: &str) -> Units {
        // IndexMap lookups need an owned key; plans are small enough.
        self.shipments
            .get(&LaneKey::new(supplier, destination))
            .copied()
            .unwrap_or(0)
    }

    pub fn get_key(&self, key: &LaneKey) -> Units {
        self.shipments.get(key).copied().unwrap_or(0)
    }

    pub fn contains(&self, key: &LaneKey) -> bool {
        self.shipments.contains_key(key)
    }

    /// Sets a quantity, keeping the position of an existing entry.
    pub fn set(&mut self, key: LaneKey, quantity: Units) {
        self.shipments.insert(key, quantity);
    }

    pub fn remove(&mut self, key: &LaneKey) -> Option<Units> {
        self.shipments.shift_remove(key)
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&LaneKey, Units) -> bool) {
        self.shipments.retain(|k, q| keep(k, *q));
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LaneKey, Units)> + '_ {
        self.shipments.iter().map(|(k, q)| (k, *q))
    }

    pub fn len(&self) -> usize {
        self.shipments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shipments.is_empty()
    }

    pub fn total_units(&self) -> i128 {
        self.shipments.values().map(|q| *q as i128).sum()
    }

    pub fn to_shipments(&self) -> Vec<Shipment> {
        self.iter()
            .map(|(k, quantity)| Shipment {
                supplier: k.supplier.clone(),
                destination: k.destination.clone(),
                quantity,
            })
            .collect()
    }
}

impl From<Vec<Shipment>> for Plan {
    /// Later duplicates overwrite earlier ones; use [`validate`] on a
    /// [`ScenarioDoc`] to detect duplicates instead.
    fn from(rows: Vec<Shipment>) -> Self {
        let shipments = rows
            .into_iter()
            .map(|s| (LaneKey::new(s.supplier, s.destination), s.quantity))
            .collect();
        Plan { shipments }
    }
}

impl From<Plan> for Vec<Shipment> {
    fn from(plan: Plan) -> Self {
        plan.to_shipments()
    }
}

impl FromIterator<(LaneKey, Units)> for Plan {
    fn from_iter<I: IntoIterator<Item = (LaneKey, Units)>>(iter: I) -> Self {
        Plan {
            shipments: iter.into_iter().collect(),
        }
    }
}

/// Unchecked scenario tables, exactly as serialized.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioDoc {
    pub suppliers: Vec<SupplierRecord>,
    pub destinations: Vec<DestinationRecord>,
    pub lanes: Vec<Lane>,
    pub plan: Vec<Shipment>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Table {
    Suppliers,
    Destinations,
    Lanes,
    Plan,
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Table::Suppliers => "suppliers",
            Table::Destinations => "destinations",
            Table::Lanes => "lanes",
            Table::Plan => "plan",
        })
    }
}

/// Position of a row in one of the scenario tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RecordRef {
    pub table: Table,
    pub index: usize,
}

impl RecordRef {
    fn new(table: Table, index: usize) -> Self {
        RecordRef { table, index }
    }
}

impl fmt::Display for RecordRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.table, self.index)
    }
}

/// Validation rules, in the order they are checked for each record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    EmptyName,
    DuplicateSupplier,
    DuplicateDestination,
    NegativeCapacity,
    NegativeRequired,
    DuplicateLane,
    UnknownSupplier,
    UnknownDestination,
    NegativeUnitCost,
    DuplicateShipment,
    ShipmentWithoutLane,
    NegativeQuantity,
    ValueTooLarge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    pub records: Vec<RecordRef>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let refs: Vec<String> = self.records.iter().map(ToString::to_string).collect();
        write!(f, "{} [{}]: {}", refs.join(", "), rule_name(self.rule), self.message)
    }
}

fn rule_name(rule: Rule) -> String {
    serde_json::to_value(rule)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

/// Checks every scenario invariant and reports each breach.
///
/// Never fails: an empty result means `candidate` is a valid scenario.
/// Violations come out in table order (suppliers, destinations, lanes,
/// plan), rows in order within a table, and rules in [`Rule`] order within
/// a row.
pub fn validate(candidate: &ScenarioDoc) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |rule, records: Vec<RecordRef>, message: String| {
        out.push(Violation {
            rule,
            records,
            message,
        })
    };

    let mut seen: HashMap<&str, usize> = HashMap::new();
    for (i, s) in candidate.suppliers.iter().enumerate() {
        let at = RecordRef::new(Table::Suppliers, i);
        if s.name.is_empty() {
            push(Rule::EmptyName, vec![at], "supplier name is empty".into());
        }
        if let Some(&first) = seen.get(s.name.as_str()) {
            push(
                Rule::DuplicateSupplier,
                vec![RecordRef::new(Table::Suppliers, first), at],
                format!("supplier {:?} is listed more than once", s.name),
            );
        } else {
            seen.insert(&s.name, i);
        }
        if s.capacity < 0 {
            push(
                Rule::NegativeCapacity,
                vec![at],
                format!("supplier {:?} has negative capacity {}", s.name, s.capacity),
            );
        } else if s.capacity > MAX_UNITS {
            push(
                Rule::ValueTooLarge,
                vec![at],
                format!("supplier {:?} capacity {} exceeds {MAX_UNITS}", s.name, s.capacity),
            );
        }
    }
    let suppliers: HashSet<&str> = seen.into_keys().collect();

    let mut seen: HashMap<&str, usize> = HashMap::new();
    for (i, d) in candidate.destinations.iter().enumerate() {
        let at = RecordRef::new(Table::Destinations, i);
        if d.name.is_empty() {
            push(Rule::EmptyName, vec![at], "destination name is empty".into());
        }
        if let Some(&first) = seen.get(d.name.as_str()) {
            push(
                Rule::DuplicateDestination,
                vec![RecordRef::new(Table::Destinations, first), at],
                format!("destination {:?} is listed more than once", d.name),
            );
        } else {
            seen.insert(&d.name, i);
        }
        if d.required < 0 {
            push(
                Rule::NegativeRequired,
                vec![at],
                format!("destination {:?} has negative requirement {}", d.name, d.required),
            );
        } else if d.required > MAX_UNITS {
            push(
                Rule::ValueTooLarge,
                vec![at],
                format!("destination {:?} requirement {} exceeds {MAX_UNITS}", d.name, d.required),
            );
        }
    }
    let destinations: HashSet<&str> = seen.into_keys().collect();

    let mut lanes: HashMap<(&str, &str), usize> = HashMap::new();
    for (i, l) in candidate.lanes.iter().enumerate() {
        let at = RecordRef::new(Table::Lanes, i);
        let pair = (l.supplier.as_str(), l.destination.as_str());
        if let Some(&first) = lanes.get(&pair) {
            push(
                Rule::DuplicateLane,
                vec![RecordRef::new(Table::Lanes, first), at],
                format!("lane ({}, {}) is listed more than once", l.supplier, l.destination),
            );
        } else {
            lanes.insert(pair, i);
        }
        if !suppliers.contains(pair.0) {
            push(
                Rule::UnknownSupplier,
                vec![at],
                format!("lane references unknown supplier {:?}", l.supplier),
            );
        }
        if !destinations.contains(pair.1) {
            push(
                Rule::UnknownDestination,
                vec![at],
                format!("lane references unknown destination {:?}", l.destination),
            );
        }
        if l.unit_cost.is_negative() {
            push(
                Rule::NegativeUnitCost,
                vec![at],
                format!(
                    "lane ({}, {}) has negative unit cost {}",
                    l.supplier, l.destination, l.unit_cost
                ),
            );
        } else if l.unit_cost > MAX_UNIT_COST {
            push(
                Rule::ValueTooLarge,
                vec![at],
                format!(
                    "lane ({}, {}) unit cost {} exceeds {MAX_UNIT_COST}",
                    l.supplier, l.destination, l.unit_cost
                ),
            );
        }
    }

    let mut shipments: HashMap<(&str, &str), usize> = HashMap::new();
    for (i, s) in candidate.plan.iter().enumerate() {
        let at = RecordRef::new(Table::Plan, i);
        let pair = (s.supplier.as_str(), s.destination.as_str());
        if let Some(&first) = shipments.get(&pair) {
            push(
                Rule::DuplicateShipment,
                vec![RecordRef::new(Table::Plan, first), at],
                format!("shipment ({}, {}) is listed more than once", s.supplier, s.destination),
            );
        } else {
            shipments.insert(pair, i);
        }
        if !lanes.contains_key(&pair) {
            push(
                Rule::ShipmentWithoutLane,
                vec![at],
                format!(
                    "shipment on ({}, {}) but no such lane exists",
                    s.supplier, s.destination
                ),
            );
        }
        if s.quantity < 0 {
            push(
                Rule::NegativeQuantity,
                vec![at],
                format!(
                    "shipment ({}, {}) has negative quantity {}",
                    s.supplier, s.destination, s.quantity
                ),
            );
        } else if s.quantity > MAX_UNITS {
            push(
                Rule::ValueTooLarge,
                vec![at],
                format!(
                    "shipment ({}, {}) quantity {} exceeds {MAX_UNITS}",
                    s.supplier, s.destination, s.quantity
                ),
            );
        }
    }

    out
}

/// A candidate failed validation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid scenario: {}", summarize(.0))]
pub struct InvalidScenario(pub Vec<Violation>);

fn summarize(violations: &[Violation]) -> String {
    let mut text: Vec<String> = violations.iter().take(3).map(ToString::to_string).collect();
    if violations.len() > 3 {
        text.push(format!("and {} more", violations.len() - 3));
    }
    text.join("; ")
}

/// A validated, immutable scenario.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "ScenarioDoc", into = "ScenarioDoc")]
pub struct Scenario {
    suppliers: Vec<SupplierRecord>,
    destinations: Vec<DestinationRecord>,
    lanes: Vec<Lane>,
    plan: Plan,
    supplier_index: HashMap<String, usize>,
    destination_index: HashMap<String, usize>,
    lane_index: HashMap<LaneKey, usize>,
}

impl PartialEq for Scenario {
    fn eq(&self, other: &Self) -> bool {
        self.suppliers == other.suppliers
            && self.destinations == other.destinations
            && self.lanes == other.lanes
            && self.plan.to_shipments() == other.plan.to_shipments()
    }
}

impl Eq for Scenario {}

impl Default for Scenario {
    fn default() -> Self {
        Scenario::empty()
    }
}

impl Scenario {
    pub fn empty() -> Self {
        Scenario {
            suppliers: Vec::new(),
            destinations: Vec::new(),
            lanes: Vec::new(),
            plan: Plan::new(),
            supplier_index: HashMap::new(),
            destination_index: HashMap::new(),
            lane_index: HashMap::new(),
        }
    }

    pub fn new(
        suppliers: Vec<SupplierRecord>,
        destinations: Vec<DestinationRecord>,
        lanes: Vec<Lane>,
        plan: Plan,
    ) -> Result<Self, InvalidScenario> {
        Scenario::try_from(ScenarioDoc {
            suppliers,
            destinations,
            lanes,
            plan: plan.to_shipments(),
        })
    }

    pub fn suppliers(&self) -> &[SupplierRecord] {
        &self.suppliers
    }

    pub fn destinations(&self) -> &[DestinationRecord] {
        &self.destinations
    }

    pub fn lanes(&self) -> &[Lane] {
        &self.lanes
    }

    pub fn plan(&self) -> &Plan {
        &self.plan
    }

    pub fn supplier(&self, name: &str) -> Option<&SupplierRecord> {
        self.supplier_index.get(name).map(|&i| &self.suppliers[i])
    }

    pub fn destination(&self, name: &str) -> Option<&DestinationRecord> {
        self.destination_index.get(name).map(|&i| &self.destinations[i])
    }

    pub fn supplier_position(&self, name: &str) -> Option<usize> {
        self.supplier_index.get(name).copied()
    }

    pub fn destination_position(&self, name: &str) -> Option<usize> {
        self.destination_index.get(name).copied()
    }

    pub fn lane(&self, supplier: &str, destination: &str) -> Option<&Lane> {
        self.lane_index
            .get(&LaneKey::new(supplier, destination))
            .map(|&i| &self.lanes[i])
    }

    /// Quantity shipped on a lane; zero for lanes absent from the plan.
    pub fn quantity(&self, supplier: &str, destination: &str) -> Units {
        self.plan.get(supplier, destination)
    }

    pub fn to_doc(&self) -> ScenarioDoc {
        ScenarioDoc {
            suppliers: self.suppliers.clone(),
            destinations: self.destinations.clone(),
            lanes: self.lanes.clone(),
            plan: self.plan.to_shipments(),
        }
    }

    /// Same tables, different plan.
    pub fn with_plan(&self, plan: Plan) -> Result<Self, InvalidScenario> {
        Scenario::new(
            self.suppliers.clone(),
            self.destinations.clone(),
            self.lanes.clone(),
            plan,
        )
    }
}

impl TryFrom<ScenarioDoc> for Scenario {
    type Error = InvalidScenario;

    fn try_from(doc: ScenarioDoc) -> Result<Self, Self::Error> {
        let violations = validate(&doc);
        if !violations.is_empty() {
            return Err(InvalidScenario(violations));
        }
        let supplier_index = doc
            .suppliers
            .iter()
            .enumerate()
            .map(|(i, s)| (s.name.clone(), i))
            .collect();
        let destination_index = doc
            .destinations
            .iter()
            .enumerate()
            .map(|(i, d)| (d.name.clone(), i))
            .collect();
        let lane_index = doc
            .lanes
            .iter()
            .enumerate()
            .map(|(i, l)| (LaneKey::new(&l.supplier, &l.destination), i))
            .collect();
        Ok(Scenario {
            suppliers: doc.suppliers,
            destinations: doc.destinations,
            lanes: doc.lanes,
            plan: Plan::from(doc.plan),
            supplier_index,
            destination_index,
            lane_index,
        })
    }
}

impl From<Scenario> for ScenarioDoc {
    fn from(s: Scenario) -> Self {
        ScenarioDoc {
            plan: s.plan.to_shipments(),
            suppliers: s.suppliers,
            destinations: s.destinations,
            lanes: s.lanes,
        }
    }
}

/// The lane for a supplier/destination pair, if that pair is permitted.
pub fn lane_lookup<'a>(scenario: &'a Scenario, supplier: &str, destination: &str) -> Option<&'a Lane> {
    scenario.lane(supplier, destination)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;

    fn rules(v: &[Violation]) -> Vec<Rule> {
        v.iter().map(|v| v.rule).collect()
    }

    #[test]
    fn base_scenario_is_valid() {
        let doc = sample::base_scenario(0).to_doc();
        assert_eq!(validate(&doc), vec![]);
        assert_eq!(validate(&ScenarioDoc::default()), vec![]);
    }

    #[test]
    fn duplicate_lane_reported_once() {
        let mut doc = sample::base_scenario(0).to_doc();
        let johnson_abbot = doc
            .lanes
            .iter()
            .position(|l| l.supplier == "Johnson" && l.destination == "Abbot")
            .unwrap();
        let dup = doc.lanes[johnson_abbot].clone();
        doc.lanes.push(dup);
        let v = validate(&doc);
        assert_eq!(rules(&v), vec![Rule::DuplicateLane]);
        assert_eq!(
            v[0].records,
            vec![
                RecordRef::new(Table::Lanes, johnson_abbot),
                RecordRef::new(Table::Lanes, 13)
            ]
        );
    }

    #[test]
    fn shipment_on_grayed_cell_is_a_violation() {
        let mut doc = sample::base_scenario(0).to_doc();
        doc.plan.push(Shipment {
            supplier: "Georgican".into(),
            destination: "Abbot".into(),
            quantity: 0,
        });
        let v = validate(&doc);
        assert_eq!(rules(&v), vec![Rule::ShipmentWithoutLane]);
        assert!(v[0].message.contains("Georgican"));
    }

    #[test]
    fn negative_capacity_is_a_violation() {
        let mut doc = sample::base_scenario(0).to_doc();
        let lincoln = doc.suppliers.iter_mut().find(|s| s.name == "Lincoln").unwrap();
        lincoln.capacity = -6000;
        assert_eq!(rules(&validate(&doc)), vec![Rule::NegativeCapacity]);
    }

    #[test]
    fn names_are_case_sensitive() {
        let doc = ScenarioDoc {
            suppliers: vec![
                SupplierRecord { name: "ocean".into(), capacity: 1 },
                SupplierRecord { name: "Ocean".into(), capacity: 1 },
            ],
            destinations: vec![DestinationRecord { name: "Abbot".into(), required: 0 }],
            lanes: vec![Lane {
                supplier: "OCEAN".into(),
                destination: "Abbot".into(),
                unit_cost: Money::ZERO,
            }],
            plan: vec![],
        };
        assert_eq!(rules(&validate(&doc)), vec![Rule::UnknownSupplier]);
    }

    #[test]
    fn violations_follow_table_then_rule_order() {
        let doc = ScenarioDoc {
            suppliers: vec![
                SupplierRecord { name: "A".into(), capacity: 1 },
                SupplierRecord { name: "A".into(), capacity: -1 },
                SupplierRecord { name: "".into(), capacity: MAX_UNITS + 1 },
            ],
            destinations: vec![DestinationRecord { name: "X".into(), required: -2 }],
            lanes: vec![
                Lane { supplier: "B".into(), destination: "Y".into(), unit_cost: Money::from_cents(-1) },
                Lane { supplier: "A".into(), destination: "X".into(), unit_cost: Money::ZERO },
            ],
            plan: vec![
                Shipment { supplier: "A".into(), destination: "X".into(), quantity: -3 },
                Shipment { supplier: "A".into(), destination: "X".into(), quantity: 1 },
                Shipment { supplier: "A".into(), destination: "Y".into(), quantity: 1 },
            ],
        };
        assert_eq!(
            rules(&validate(&doc)),
            vec![
                Rule::DuplicateSupplier,
                Rule::NegativeCapacity,
                Rule::EmptyName,
                Rule::ValueTooLarge,
                Rule::NegativeRequired,
                Rule::UnknownSupplier,
                Rule::UnknownDestination,
                Rule::NegativeUnitCost,
                Rule::NegativeQuantity,
                Rule::DuplicateShipment,
                Rule::ShipmentWithoutLane,
            ]
        );
        assert!(Scenario::try_from(doc).is_err());
    }

    #[test]
    fn lane_lookup_finds_permitted_pairs_only() {
        let s = sample::base_scenario(1000);
        let lane = lane_lookup(&s, "Georgican", "Chest").unwrap();
        assert_eq!(lane.unit_cost, Money::from_cents(3080));
        assert!(lane_lookup(&s, "Georgican", "Abbot").is_none());
        assert!(lane_lookup(&Scenario::empty(), "Georgican", "Chest").is_none());
    }

    #[test]
    fn serialization_field_names_and_order() {
        let s = sample::base_scenario(1000);
        let json = serde_json::to_value(&s).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let at = |k: &str| text.find(&format!("\"{k}\":[")).unwrap();
        assert!(at("suppliers") < at("destinations") && at("destinations") < at("lanes"));
        assert!(at("lanes") < at("plan"));
        assert_eq!(json["lanes"][0]["unit_cost"], "30.80");
        assert_eq!(json["suppliers"][3]["name"], "Johnson");
        assert_eq!(json["plan"][0]["quantity"], 1000);
        let back: Scenario = serde_json::from_value(json).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_doc(), s.to_doc());
    }

    #[test]
    fn deserializing_invalid_scenario_fails() {
        let text = r#"{"suppliers":[{"name":"A","capacity":-1}],"destinations":[],"lanes":[],"plan":[]}"#;
        let err = serde_json::from_str::<Scenario>(text).unwrap_err();
        assert!(err.to_string().contains("negative capacity"));
    }
}
