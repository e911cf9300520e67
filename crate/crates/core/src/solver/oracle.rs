//! Exhaustive reference solver for tiny instances.
//!
//! Enumerates, destination by destination, every integral split of each
//! requirement over that destination's lanes that fits the remaining
//! capacities, and keeps the cheapest complete plan. Sub-results are
//! memoized on (destination, remaining capacities), which prunes repeated
//! work without skipping any candidate plan. Shares nothing with the
//! network simplex beyond the scenario types; it exists to check it.

use std::collections::HashMap;

use thiserror::Error;

use super::{SolveResult, SolveStatus};
use crate::model::{LaneKey, Plan, Scenario, Units};
use crate::money::Money;

pub const MAX_SUPPLIERS: usize = 3;
pub const MAX_DESTINATIONS: usize = 3;
pub const MAX_VALUE: Units = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance exceeds oracle bounds: {0}")]
    TooLarge(String),
}

type Memo = HashMap<(usize, Vec<Units>), Option<(i128, Vec<Units>)>>;

struct Search {
    /// For each destination: (lane index, supplier position, unit cost cents).
    lanes_by_destination: Vec<Vec<(usize, usize, i128)>>,
    required: Vec<Units>,
    lane_count: usize,
    memo: Memo,
}

impl Search {
    /// Cheapest completion from destination `d` onward, as (cost, quantity
    /// per lane index) with only destinations `d..` filled in.
    fn best(&mut self, d: usize, remaining: Vec<Units>) -> Option<(i128, Vec<Units>)> {
        if d == self.required.len() {
            return Some((0, vec![0; self.lane_count]));
        }
        if let Some(hit) = self.memo.get(&(d, remaining.clone())) {
            return hit.clone();
        }
        let lanes = self.lanes_by_destination[d].clone();
        let mut splits = Vec::new();
        let mut current = vec![0; lanes.len()];
        enumerate_splits(&lanes, &remaining, self.required[d], 0, &mut current, &mut splits);

        let mut best: Option<(i128, Vec<Units>)> = None;
        for split in splits {
            let mut rest = remaining.clone();
            let mut cost = 0i128;
            for (&(_, s, c), &q) in lanes.iter().zip(&split) {
                rest[s] -= q;
                cost += c * q as i128;
            }
            if let Some((tail_cost, mut quantities)) = self.best(d + 1, rest) {
                let total = cost + tail_cost;
                if best.as_ref().is_none_or(|(b, _)| total < *b) {
                    for (&(lane, _, _), &q) in lanes.iter().zip(&split) {
                        quantities[lane] = q;
                    }
                    best = Some((total, quantities));
                }
            }
        }
        self.memo.insert((d, remaining), best.clone());
        best
    }
}

/// All ways to write `left` as a sum over `lanes[k..]`, each term bounded by
/// its supplier's remaining capacity.
fn enumerate_splits(
    lanes: &[(usize, usize, i128)],
    remaining: &[Units],
    left: Units,
    k: usize,
    current: &mut Vec<Units>,
    out: &mut Vec<Vec<Units>>,
) {
    if k == lanes.len() {
        if left == 0 {
            out.push(current.clone());
        }
        return;
    }
    let cap = remaining[lanes[k].1].min(left);
    for q in 0..=cap {
        current[k] = q;
        enumerate_splits(lanes, remaining, left - q, k + 1, current, out);
    }
    current[k] = 0;
}

/// Exact optimum by exhaustive search. Limited to 3 suppliers, 3
/// destinations and capacities/requirements of at most 20.
pub fn oracle_solve(scenario: &Scenario) -> Result<SolveResult, OracleError> {
    if scenario.suppliers().len() > MAX_SUPPLIERS {
        return Err(OracleError::TooLarge(format!("more than {MAX_SUPPLIERS} suppliers")));
    }
    if scenario.destinations().len() > MAX_DESTINATIONS {
        return Err(OracleError::TooLarge(format!("more than {MAX_DESTINATIONS} destinations")));
    }
    if scenario.suppliers().iter().any(|s| s.capacity > MAX_VALUE)
        || scenario.destinations().iter().any(|d| d.required > MAX_VALUE)
    {
        return Err(OracleError::TooLarge(format!("a capacity or requirement exceeds {MAX_VALUE}")));
    }

    let mut lanes_by_destination = vec![Vec::new(); scenario.destinations().len()];
    for (i, lane) in scenario.lanes().iter().enumerate() {
        let s = scenario.suppliers().iter().position(|r| r.name == lane.supplier).unwrap();
        let d = scenario.destinations().iter().position(|r| r.name == lane.destination).unwrap();
        lanes_by_destination[d].push((i, s, lane.unit_cost.cents()));
    }
    let mut search = Search {
        lanes_by_destination,
        required: scenario.destinations().iter().map(|d| d.required).collect(),
        lane_count: scenario.lanes().len(),
        memo: HashMap::new(),
    };
    let capacities = scenario.suppliers().iter().map(|s| s.capacity).collect();

    Ok(match search.best(0, capacities) {
        None => SolveResult::infeasible(),
        Some((cost, quantities)) => {
            let plan: Plan = scenario
                .lanes()
                .iter()
                .zip(quantities)
                .filter(|(_, q)| *q > 0)
                .map(|(l, q)| (LaneKey::new(&l.supplier, &l.destination), q))
                .collect();
            SolveResult {
                plan,
                objective: Money::from_cents(cost),
                status: SolveStatus::Optimal,
            }
        }
    })
}
