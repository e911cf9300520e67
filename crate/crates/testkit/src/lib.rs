//! Generators and brute-force reference computations shared by the core
//! property tests and the acceptance suite.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use sourcing_core::{
    DestinationRecord, Lane, LaneKey, Money, Mutation, Plan, Scenario, ScenarioDoc, Shipment,
    SupplierRecord, Units,
};

/// Builds a scenario from dense inputs. `costs[i][j] = None` leaves the pair
/// without a lane; every lane ships `quantities[i][j]`.
pub fn from_matrix(
    capacities: &[Units],
    requirements: &[Units],
    costs: &[Vec<Option<i128>>],
    quantities: &[Vec<Units>],
) -> Scenario {
    let suppliers = capacities
        .iter()
        .enumerate()
        .map(|(i, &capacity)| SupplierRecord {
            name: format!("S{i}"),
            capacity,
        })
        .collect();
    let destinations = requirements
        .iter()
        .enumerate()
        .map(|(j, &required)| DestinationRecord {
            name: format!("D{j}"),
            required,
        })
        .collect();
    let mut lanes = Vec::new();
    let mut plan = Plan::new();
    for (i, row) in costs.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            if let Some(cents) = cell {
                lanes.push(Lane {
                    supplier: format!("S{i}"),
                    destination: format!("D{j}"),
                    unit_cost: Money::from_cents(*cents),
                });
                plan.set(LaneKey::new(format!("S{i}"), format!("D{j}")), quantities[i][j]);
            }
        }
    }
    Scenario::new(suppliers, destinations, lanes, plan).expect("generated scenario is valid")
}

/// Random valid scenarios with up to the given table sizes.
pub fn arb_scenario(max_suppliers: usize, max_destinations: usize) -> impl Strategy<Value = Scenario> {
    (0..=max_suppliers, 0..=max_destinations)
        .prop_flat_map(|(ns, nd)| {
            (
                prop::collection::vec(0i64..=2_000, ns),
                prop::collection::vec(0i64..=2_000, nd),
                prop::collection::vec(
                    prop::collection::vec(prop::option::weighted(0.6, 0i128..=10_000), nd),
                    ns,
                ),
                prop::collection::vec(prop::collection::vec(0i64..=500, nd), ns),
            )
        })
        .prop_map(|(caps, reqs, costs, quantities)| from_matrix(&caps, &reqs, &costs, &quantities))
}

/// Raw material for one edit; turned into a concrete [`Mutation`] against
/// whatever scenario it is applied to, so sequences stay mostly valid.
#[derive(Debug, Clone)]
pub struct MutationSeed {
    pub op: u8,
    pub a: usize,
    pub b: usize,
    pub value: i64,
}

pub fn arb_mutation_seeds(max_len: usize) -> impl Strategy<Value = Vec<MutationSeed>> {
    prop::collection::vec(
        (0u8..10, any::<usize>(), any::<usize>(), -5i64..=2_000).prop_map(|(op, a, b, value)| MutationSeed {
            op,
            a,
            b,
            value,
        }),
        0..=max_len,
    )
}

fn pick<'a>(names: &'a [String], k: usize, fallback: &'a str) -> &'a str {
    if names.is_empty() {
        fallback
    } else {
        &names[k % names.len()]
    }
}

impl MutationSeed {
    pub fn concretize(&self, s: &Scenario) -> Mutation {
        let sups: Vec<String> = s.suppliers().iter().map(|r| r.name.clone()).collect();
        let dests: Vec<String> = s.destinations().iter().map(|r| r.name.clone()).collect();
        let lanes: Vec<&Lane> = s.lanes().iter().collect();
        let supplier = pick(&sups, self.a, "S0").to_string();
        let destination = pick(&dests, self.b, "D0").to_string();
        let (lane_s, lane_d) = match lanes.len() {
            0 => (supplier.clone(), destination.clone()),
            n => {
                let l = lanes[self.a % n];
                (l.supplier.clone(), l.destination.clone())
            }
        };
        let value = self.value;
        match self.op {
            0 => Mutation::AddSupplier {
                name: if self.b.is_multiple_of(5) { supplier } else { format!("N{}", self.a % 40) },
                capacity: value,
            },
            1 => Mutation::AddDestination {
                name: if self.a.is_multiple_of(5) { destination } else { format!("M{}", self.b % 40) },
                required: value,
            },
            2 => Mutation::AddLane {
                supplier,
                destination,
                unit_cost: Money::from_cents(value as i128 * 7),
                initial_quantity: value.rem_euclid(300),
            },
            3 => Mutation::RemoveLane {
                supplier: lane_s,
                destination: lane_d,
            },
            4 => Mutation::RemoveSupplier { name: supplier },
            5 => Mutation::RemoveDestination { name: destination },
            6 if self.b.is_multiple_of(3) => Mutation::SetShipment {
                supplier,
                destination,
                quantity: value,
            },
            6 => Mutation::SetShipment {
                supplier: lane_s,
                destination: lane_d,
                quantity: value,
            },
            7 => Mutation::SetCapacity {
                supplier,
                capacity: value,
            },
            8 => Mutation::SetRequired {
                destination,
                required: value,
            },
            _ => Mutation::SetUnitCost {
                supplier: lane_s,
                destination: lane_d,
                unit_cost: Money::from_cents(value as i128 * 3),
            },
        }
    }
}

/// Totals computed cell by cell from the raw tables with linear scans,
/// independent of the evaluation module: (supplied per supplier row,
/// delivered per destination row, total cost in cents).
pub fn naive_totals(doc: &ScenarioDoc) -> (Vec<Units>, Vec<Units>, i128) {
    let mut supplied = vec![0; doc.suppliers.len()];
    let mut delivered = vec![0; doc.destinations.len()];
    let mut cost = 0i128;
    for (i, s) in doc.suppliers.iter().enumerate() {
        for (j, d) in doc.destinations.iter().enumerate() {
            let Some(lane) = doc
                .lanes
                .iter()
                .find(|l| l.supplier == s.name && l.destination == d.name)
            else {
                continue;
            };
            let q = doc
                .plan
                .iter()
                .find(|p| p.supplier == s.name && p.destination == d.name)
                .map_or(0, |p| p.quantity);
            supplied[i] += q;
            delivered[j] += q;
            cost += lane.unit_cost.cents() * q as i128;
        }
    }
    (supplied, delivered, cost)
}

/// A random oracle-sized instance: 1-3 suppliers and destinations, values
/// up to 20, each pair a lane with probability 0.7. Plans are zero.
pub fn random_small_instance<R: Rng>(rng: &mut R) -> Scenario {
    let ns = rng.gen_range(1..=3);
    let nd = rng.gen_range(1..=3);
    let caps: Vec<Units> = (0..ns).map(|_| rng.gen_range(0..=20)).collect();
    let reqs: Vec<Units> = (0..nd).map(|_| rng.gen_range(0..=20)).collect();
    let costs: Vec<Vec<Option<i128>>> = (0..ns)
        .map(|_| {
            (0..nd)
                .map(|_| rng.gen_bool(0.7).then(|| rng.gen_range(0..=5_000)))
                .collect()
        })
        .collect();
    from_matrix(&caps, &reqs, &costs, &vec![vec![0; nd]; ns])
}

/// A large instance with the given lane density; total capacity is about
/// twice total requirement and every destination has at least one lane.
pub fn random_large_instance<R: Rng>(rng: &mut R, ns: usize, nd: usize, density: f64) -> Scenario {
    let reqs: Vec<Units> = (0..nd).map(|_| rng.gen_range(1..=1_000)).collect();
    let total: Units = reqs.iter().sum();
    let per_supplier = 2 * total / ns as Units;
    let caps: Vec<Units> = (0..ns).map(|_| rng.gen_range(per_supplier / 2..=per_supplier * 3 / 2)).collect();
    let mut costs: Vec<Vec<Option<i128>>> = (0..ns)
        .map(|_| {
            (0..nd)
                .map(|_| rng.gen_bool(density).then(|| rng.gen_range(100..=10_000)))
                .collect()
        })
        .collect();
    for j in 0..nd {
        if costs.iter().all(|row| row[j].is_none()) {
            let i = rng.gen_range(0..ns);
            costs[i][j] = Some(rng.gen_range(100..=10_000));
        }
    }
    from_matrix(&caps, &reqs, &costs, &vec![vec![0; nd]; ns])
}

/// Tries to build a random plan that meets every requirement exactly within
/// capacities. Returns `None` if a few random attempts all get stuck.
pub fn random_feasible_plan<R: Rng>(rng: &mut R, s: &Scenario) -> Option<Plan> {
    'attempt: for _ in 0..20 {
        let mut remaining: Vec<Units> = s.suppliers().iter().map(|r| r.capacity).collect();
        let mut plan = Plan::new();
        let mut order: Vec<usize> = (0..s.destinations().len()).collect();
        order.shuffle(rng);
        for j in order {
            let dest = &s.destinations()[j];
            let mut need = dest.required;
            while need > 0 {
                let open: Vec<(usize, &Lane)> = s
                    .lanes()
                    .iter()
                    .filter(|l| l.destination == dest.name)
                    .map(|l| (s.supplier_position(&l.supplier).unwrap(), l))
                    .filter(|(i, _)| remaining[*i] > 0)
                    .collect();
                let Some(&(i, lane)) = open.choose(rng) else {
                    continue 'attempt;
                };
                let q = rng.gen_range(1..=need.min(remaining[i]));
                remaining[i] -= q;
                need -= q;
                let key = LaneKey::new(&lane.supplier, &lane.destination);
                let prev = plan.get_key(&key);
                plan.set(key, prev + q);
            }
        }
        return Some(plan);
    }
    None
}

/// Plain tables edited with linear scans, as a reference for the mutate
/// module: the same edits applied here and there must yield equal tables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ShadowTables {
    pub doc: ScenarioDoc,
}

impl ShadowTables {
    pub fn of(s: &Scenario) -> Self {
        ShadowTables { doc: s.to_doc() }
    }

    fn has_supplier(&self, name: &str) -> bool {
        self.doc.suppliers.iter().any(|r| r.name == name)
    }

    fn has_destination(&self, name: &str) -> bool {
        self.doc.destinations.iter().any(|r| r.name == name)
    }

    fn lane_index(&self, supplier: &str, destination: &str) -> Option<usize> {
        self.doc
            .lanes
            .iter()
            .position(|l| l.supplier == supplier && l.destination == destination)
    }

    fn set_quantity(&mut self, supplier: &str, destination: &str, quantity: Units) {
        match self
            .doc
            .plan
            .iter_mut()
            .find(|p| p.supplier == supplier && p.destination == destination)
        {
            Some(p) => p.quantity = quantity,
            None => self.doc.plan.push(Shipment {
                supplier: supplier.into(),
                destination: destination.into(),
                quantity,
            }),
        }
    }

    /// Applies one edit. Returns false, leaving the tables as they were, if
    /// a name is missing or duplicated or a value is negative.
    pub fn apply(&mut self, m: &Mutation) -> bool {
        match m {
            Mutation::AddSupplier { name, capacity } => {
                if self.has_supplier(name) || *capacity < 0 || name.trim().is_empty() {
                    return false;
                }
                self.doc.suppliers.push(SupplierRecord { name: name.clone(), capacity: *capacity });
            }
            Mutation::AddDestination { name, required } => {
                if self.has_destination(name) || *required < 0 || name.trim().is_empty() {
                    return false;
                }
                self.doc.destinations.push(DestinationRecord { name: name.clone(), required: *required });
            }
            Mutation::AddLane { supplier, destination, unit_cost, initial_quantity } => {
                if !self.has_supplier(supplier)
                    || !self.has_destination(destination)
                    || self.lane_index(supplier, destination).is_some()
                    || unit_cost.is_negative()
                    || *initial_quantity < 0
                {
                    return false;
                }
                self.doc.lanes.push(Lane {
                    supplier: supplier.clone(),
                    destination: destination.clone(),
                    unit_cost: *unit_cost,
                });
                self.set_quantity(supplier, destination, *initial_quantity);
            }
            Mutation::RemoveLane { supplier, destination } => {
                let Some(k) = self.lane_index(supplier, destination) else {
                    return false;
                };
                self.doc.lanes.remove(k);
                self.doc.plan.retain(|p| !(p.supplier == *supplier && p.destination == *destination));
            }
            Mutation::RemoveSupplier { name } => {
                if !self.has_supplier(name) {
                    return false;
                }
                self.doc.suppliers.retain(|r| r.name != *name);
                self.doc.lanes.retain(|l| l.supplier != *name);
                self.doc.plan.retain(|p| p.supplier != *name);
            }
            Mutation::RemoveDestination { name } => {
                if !self.has_destination(name) {
                    return false;
                }
                self.doc.destinations.retain(|r| r.name != *name);
                self.doc.lanes.retain(|l| l.destination != *name);
                self.doc.plan.retain(|p| p.destination != *name);
            }
            Mutation::SetShipment { supplier, destination, quantity } => {
                if self.lane_index(supplier, destination).is_none() || *quantity < 0 {
                    return false;
                }
                self.set_quantity(supplier, destination, *quantity);
            }
            Mutation::SetCapacity { supplier, capacity } => {
                let Some(r) = self.doc.suppliers.iter_mut().find(|r| r.name == *supplier) else {
                    return false;
                };
                if *capacity < 0 {
                    return false;
                }
                r.capacity = *capacity;
            }
            Mutation::SetRequired { destination, required } => {
                let Some(r) = self.doc.destinations.iter_mut().find(|r| r.name == *destination) else {
                    return false;
                };
                if *required < 0 {
                    return false;
                }
                r.required = *required;
            }
            Mutation::SetUnitCost { supplier, destination, unit_cost } => {
                let Some(k) = self.lane_index(supplier, destination) else {
                    return false;
                };
                if unit_cost.is_negative() {
                    return false;
                }
                self.doc.lanes[k].unit_cost = *unit_cost;
            }
        }
        true
    }

    /// The scenario built directly from these tables.
    pub fn build(&self) -> Scenario {
        Scenario::try_from(self.doc.clone()).expect("shadow tables stay valid")
    }
}
