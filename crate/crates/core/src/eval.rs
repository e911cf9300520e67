//! Derived quantities of a scenario: per-supplier and per-destination totals,
//! total cost and plan diagnostics.
//!
//! Every aggregate is a grouped sum over the lane/plan table keyed by name,
//! so adding suppliers, destinations or lanes never touches this code.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::model::{Scenario, Units};
use crate::money::Money;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticKind {
    CapacityExceeded,
    Shortfall,
    Surplus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub subject: String,
    /// Always positive.
    pub amount: Units,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluation {
    pub supplied: IndexMap<String, Units>,
    pub delivered: IndexMap<String, Units>,
    /// Capacity minus supplied; negative when a supplier is over capacity.
    pub excess_capacity: IndexMap<String, Units>,
    pub total_cost: Money,
    pub diagnostics: Vec<Diagnostic>,
}

impl Evaluation {
    pub fn has_shortfall(&self) -> bool {
        self.diagnostics.iter().any(|d| d.kind == DiagnosticKind::Shortfall)
    }

    pub fn has_capacity_violation(&self) -> bool {
        self.diagnostics
            .iter()
            .any(|d| d.kind == DiagnosticKind::CapacityExceeded)
    }
}

/// Units shipped by each supplier, in supplier table order.
pub fn supplied(scenario: &Scenario) -> IndexMap<String, Units> {
    let mut out: IndexMap<String, Units> = scenario
        .suppliers()
        .iter()
        .map(|s| (s.name.clone(), 0))
        .collect();
    for (key, quantity) in scenario.plan().iter() {
        *out.get_mut(&key.supplier).expect("plan keys reference known suppliers") += quantity;
    }
    out
}

/// Units received by each destination, in destination table order.
pub fn delivered(scenario: &Scenario) -> IndexMap<String, Units> {
    let mut out: IndexMap<String, Units> = scenario
        .destinations()
        .iter()
        .map(|d| (d.name.clone(), 0))
        .collect();
    for (key, quantity) in scenario.plan().iter() {
        *out.get_mut(&key.destination).expect("plan keys reference known destinations") += quantity;
    }
    out
}

/// Sum of quantity times unit cost over the plan.
pub fn total_cost(scenario: &Scenario) -> Money {
    scenario
        .plan()
        .iter()
        .map(|(key, quantity)| {
            let lane = scenario
                .lane(&key.supplier, &key.destination)
                .expect("plan keys reference lanes");
            lane.unit_cost * quantity
        })
        .sum()
}

pub fn evaluate(scenario: &Scenario) -> Evaluation {
    let supplied = supplied(scenario);
    let delivered = delivered(scenario);
    let mut diagnostics = Vec::new();

    let excess_capacity: IndexMap<String, Units> = scenario
        .suppliers()
        .iter()
        .map(|s| {
            let shipped = supplied[&s.name];
            if shipped > s.capacity {
                diagnostics.push(Diagnostic {
                    kind: DiagnosticKind::CapacityExceeded,
                    subject: s.name.clone(),
                    amount: shipped - s.capacity,
                });
            }
            (s.name.clone(), s.capacity - shipped)
        })
        .collect();

    for d in scenario.destinations() {
        let received = delivered[&d.name];
        let (kind, amount) = match received.cmp(&d.required) {
            std::cmp::Ordering::Less => (DiagnosticKind::Shortfall, d.required - received),
            std::cmp::Ordering::Greater => (DiagnosticKind::Surplus, received - d.required),
            std::cmp::Ordering::Equal => continue,
        };
        diagnostics.push(Diagnostic {
            kind,
            subject: d.name.clone(),
            amount,
        });
    }

    Evaluation {
        supplied,
        delivered,
        excess_capacity,
        total_cost: total_cost(scenario),
        diagnostics,
    }
}
