//! The worked example scenario (ten suppliers, three destinations, thirteen
//! lanes) and its one-supplier/one-destination extension, built directly
//! from tables. Used by tests, the acceptance suite and the README walkthrough.

use crate::model::{DestinationRecord, Lane, LaneKey, Plan, Scenario, SupplierRecord, Units};
use crate::money::Money;
use crate::mutate::Mutation;

/// The raw long-format document, with fill-down supplier groups and a
/// requirements section.
pub const RAW_DOCUMENT: &str = include_str!("../tests/fixtures/base_raw.csv");

const SUPPLIERS: [(&str, Units); 10] = [
    ("Georgican", 2_500),
    ("Hickock", 9_000),
    ("India", 3_000),
    ("Johnson", 27_000),
    ("Lincoln", 6_000),
    ("Manister", 3_000),
    ("Ocean", 30_000),
    ("Calais", 3_600),
    ("Robert", 2_700),
    ("Simpson", 2_300),
];

const DESTINATIONS: [(&str, Units); 3] = [("Abbot", 32_422), ("Bone", 21_233), ("Chest", 25_125)];

const LANES: [(&str, &str, i128); 13] = [
    ("Georgican", "Chest", 3080),
    ("Hickock", "Chest", 3680),
    ("India", "Chest", 3400),
    ("Johnson", "Abbot", 4200),
    ("Johnson", "Bone", 4160),
    ("Johnson", "Chest", 4560),
    ("Lincoln", "Abbot", 3315),
    ("Manister", "Abbot", 3200),
    ("Ocean", "Abbot", 4410),
    ("Ocean", "Bone", 4536),
    ("Calais", "Bone", 3500),
    ("Robert", "Bone", 3312),
    ("Simpson", "Bone", 3240),
];

const EXTENSION_SUPPLIER: (&str, Units) = ("Paulucci", 15_000);
const EXTENSION_DESTINATION: (&str, Units) = ("Duluth", 12_555);
const EXTENSION_LANES: [(&str, &str, i128); 3] = [
    ("Paulucci", "Abbot", 4300),
    ("Paulucci", "Bone", 4075),
    ("Paulucci", "Duluth", 3550),
];

fn build(
    suppliers: &[(&str, Units)],
    destinations: &[(&str, Units)],
    lanes: &[(&str, &str, i128)],
    quantity: Units,
) -> Scenario {
    let suppliers = suppliers
        .iter()
        .map(|&(name, capacity)| SupplierRecord {
            name: name.into(),
            capacity,
        })
        .collect();
    let destinations = destinations
        .iter()
        .map(|&(name, required)| DestinationRecord {
            name: name.into(),
            required,
        })
        .collect();
    let plan: Plan = lanes
        .iter()
        .map(|&(s, d, _)| (LaneKey::new(s, d), quantity))
        .collect();
    let lanes = lanes
        .iter()
        .map(|&(s, d, cents)| Lane {
            supplier: s.into(),
            destination: d.into(),
            unit_cost: Money::from_cents(cents),
        })
        .collect();
    Scenario::new(suppliers, destinations, lanes, plan).expect("sample tables are valid")
}

/// The base example with every lane shipping `quantity`.
pub fn base_scenario(quantity: Units) -> Scenario {
    build(&SUPPLIERS, &DESTINATIONS, &LANES, quantity)
}

/// The extended example (Paulucci and Duluth added, three new lanes), with
/// every lane shipping 1000, built from tables rather than by editing.
pub fn extended_scenario() -> Scenario {
    let mut suppliers = SUPPLIERS.to_vec();
    suppliers.push(EXTENSION_SUPPLIER);
    let mut destinations = DESTINATIONS.to_vec();
    destinations.push(EXTENSION_DESTINATION);
    let mut lanes = LANES.to_vec();
    lanes.extend(EXTENSION_LANES);
    build(&suppliers, &destinations, &lanes, 1000)
}

/// Edits that turn `base_scenario(1000)` into `extended_scenario()`.
pub fn extension_script() -> Vec<Mutation> {
    let mut script = vec![
        Mutation::AddDestination {
            name: EXTENSION_DESTINATION.0.into(),
            required: EXTENSION_DESTINATION.1,
        },
        Mutation::AddSupplier {
            name: EXTENSION_SUPPLIER.0.into(),
            capacity: EXTENSION_SUPPLIER.1,
        },
    ];
    script.extend(EXTENSION_LANES.iter().map(|&(s, d, cents)| Mutation::AddLane {
        supplier: s.into(),
        destination: d.into(),
        unit_cost: Money::from_cents(cents),
        initial_quantity: 1000,
    }));
    script
}
