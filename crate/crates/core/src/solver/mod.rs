//! Minimum-cost sourcing plans.
//!
//! The scenario is solved as an uncapacitated transportation problem with a
//! primal network simplex. Every requirement must be met exactly; unused
//! capacity drains into a zero-cost dummy destination. Costs are integer
//! hundredths throughout, so the objective is exact.

mod network_simplex;
pub mod oracle;

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{LaneKey, Plan, Scenario, Units};
use crate::money::Money;

use network_simplex::{Network, Outcome};

pub use oracle::{oracle_solve, OracleError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    /// Positive shipments only, in lane table order. Empty when infeasible.
    pub plan: Plan,
    pub objective: Money,
    pub status: SolveStatus,
}

impl SolveResult {
    pub fn infeasible() -> Self {
        SolveResult {
            plan: Plan::new(),
            objective: Money::ZERO,
            status: SolveStatus::Infeasible,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    /// The scenario with its plan replaced by this result: every lane gets
    /// an entry, zero where the result ships nothing.
    pub fn apply_to(&self, scenario: &Scenario) -> Scenario {
        let plan: Plan = scenario
            .lanes()
            .iter()
            .map(|l| {
                let key = LaneKey::new(&l.supplier, &l.destination);
                let q = self.plan.get_key(&key);
                (key, q)
            })
            .collect();
        scenario
            .with_plan(plan)
            .expect("solver plans only use existing lanes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("solve cancelled")]
pub struct Cancelled;

/// Cooperative cancellation flag shared between a solve and its caller.
#[derive(Debug, Clone, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }
}

/// Finds a minimum-cost plan that meets every requirement exactly without
/// exceeding any capacity. The scenario's current plan is ignored.
pub fn solve_min_cost(scenario: &Scenario) -> SolveResult {
    solve_min_cost_with(scenario, &CancelToken::new()).expect("token is never cancelled")
}

pub fn solve_min_cost_with(scenario: &Scenario, cancel: &CancelToken) -> Result<SolveResult, Cancelled> {
    let suppliers = scenario.suppliers();
    let destinations = scenario.destinations();
    let total_capacity: i128 = suppliers.iter().map(|s| s.capacity as i128).sum();
    let total_required: i128 = destinations.iter().map(|d| d.required as i128).sum();

    if total_required == 0 {
        return Ok(SolveResult {
            plan: Plan::new(),
            objective: Money::ZERO,
            status: SolveStatus::Optimal,
        });
    }
    if total_capacity < total_required {
        return Ok(SolveResult::infeasible());
    }

    // Nodes: suppliers, then destinations, then the dummy destination.
    let n_sup = suppliers.len();
    let dummy = n_sup + destinations.len();
    let mut supply: Vec<i128> = suppliers.iter().map(|s| s.capacity as i128).collect();
    supply.extend(destinations.iter().map(|d| -(d.required as i128)));
    supply.push(total_required - total_capacity);

    let mut net = Network::new(supply);
    for lane in scenario.lanes() {
        let u = scenario.supplier_position(&lane.supplier).expect("valid scenario");
        let v = n_sup + scenario.destination_position(&lane.destination).expect("valid scenario");
        net.add_arc(u, v, lane.unit_cost.cents());
    }
    for u in 0..n_sup {
        net.add_arc(u, dummy, 0);
    }

    let flows = match net.solve(cancel)? {
        Outcome::Optimal(flows) => flows,
        Outcome::Infeasible => return Ok(SolveResult::infeasible()),
    };

    let mut plan = Plan::new();
    let mut objective = Money::ZERO;
    for (lane, &flow) in scenario.lanes().iter().zip(&flows) {
        if flow > 0 {
            let quantity = Units::try_from(flow).expect("flow bounded by a capacity");
            plan.set(LaneKey::new(&lane.supplier, &lane.destination), quantity);
            objective += lane.unit_cost * quantity;
        }
    }
    Ok(SolveResult {
        plan,
        objective,
        status: SolveStatus::Optimal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{evaluate, total_cost};
    use crate::model::{DestinationRecord, Lane, SupplierRecord};
    use crate::sample;

    fn single_lane(capacity: Units, required: Units, cents: i128) -> Scenario {
        Scenario::new(
            vec![SupplierRecord { name: "S".into(), capacity }],
            vec![DestinationRecord { name: "D".into(), required }],
            vec![Lane { supplier: "S".into(), destination: "D".into(), unit_cost: Money::from_cents(cents) }],
            Plan::new(),
        )
        .unwrap()
    }

    #[test]
    fn forced_single_lane() {
        let r = solve_min_cost(&single_lane(10, 5, 200));
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.objective, Money::from_dollars(10));
        assert_eq!(r.plan.get("S", "D"), 5);
    }

    #[test]
    fn aggregate_shortage_is_infeasible() {
        let r = solve_min_cost(&single_lane(3, 5, 200));
        assert_eq!(r, SolveResult::infeasible());
    }

    #[test]
    fn lane_bottleneck_is_infeasible() {
        // Enough capacity in total, but B cannot reach Y.
        let s = Scenario::new(
            vec![
                SupplierRecord { name: "A".into(), capacity: 5 },
                SupplierRecord { name: "B".into(), capacity: 50 },
            ],
            vec![
                DestinationRecord { name: "X".into(), required: 1 },
                DestinationRecord { name: "Y".into(), required: 10 },
            ],
            vec![
                Lane { supplier: "A".into(), destination: "Y".into(), unit_cost: Money::from_cents(1) },
                Lane { supplier: "B".into(), destination: "X".into(), unit_cost: Money::from_cents(1) },
            ],
            Plan::new(),
        )
        .unwrap();
        assert_eq!(solve_min_cost(&s).status, SolveStatus::Infeasible);
    }

    #[test]
    fn zero_requirement_is_trivially_optimal() {
        let r = solve_min_cost(&single_lane(10, 0, 200));
        assert!(r.is_optimal());
        assert!(r.plan.is_empty());
        assert_eq!(r.objective, Money::ZERO);
        let r = solve_min_cost(&Scenario::empty());
        assert!(r.is_optimal());
    }

    #[test]
    fn requirement_without_lanes_is_infeasible() {
        let s = crate::mutate::add_destination(&sample::base_scenario(0), "Duluth", 1).unwrap();
        assert_eq!(solve_min_cost(&s).status, SolveStatus::Infeasible);
    }

    #[test]
    fn base_scenario_matches_lp_golden_value() {
        // Written by tests/fixtures/base_golden.py (HiGHS LP on base_raw.csv).
        let golden: Money = include_str!("../../tests/fixtures/base_golden.txt").trim().parse().unwrap();
        assert_eq!(golden, Money::from_cents(313_012_880));
        let s = sample::base_scenario(1000);
        let r = solve_min_cost(&s);
        assert!(r.is_optimal());
        assert_eq!(r.objective, golden);
        let solved = r.apply_to(&s);
        assert_eq!(total_cost(&solved), r.objective);
        let e = evaluate(&solved);
        assert!(!e.has_shortfall() && !e.has_capacity_violation());
        assert_eq!(solved.plan().len(), s.lanes().len());
    }

    #[test]
    fn result_ignores_current_plan_and_is_repeatable() {
        let a = solve_min_cost(&sample::base_scenario(0));
        let b = solve_min_cost(&sample::base_scenario(1000));
        assert_eq!(a, b);
        assert_eq!(a, solve_min_cost(&sample::base_scenario(0)));
    }

    #[test]
    fn cancelled_token_stops_solve() {
        let token = CancelToken::new();
        token.cancel();
        assert_eq!(solve_min_cost_with(&sample::base_scenario(0), &token), Err(Cancelled));
    }

    #[test]
    fn serializes_like_plan() {
        let r = solve_min_cost(&single_lane(10, 5, 200));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "plan": [{"supplier": "S", "destination": "D", "quantity": 5}],
                "objective": "10.00",
                "status": "optimal"
            })
        );
    }
}
