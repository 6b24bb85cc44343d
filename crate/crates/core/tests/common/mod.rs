#![allow(dead_code)]

use gridfloer::GridDiagram;
use proptest::prelude::*;
use std::path::PathBuf;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/grids")
}

pub fn fixture(name: &str) -> GridDiagram {
    let path = fixture_dir().join(format!("{name}.grid"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path:?}: {e}"));
    GridDiagram::parse(&text).unwrap_or_else(|e| panic!("{path:?}: {e}"))
}

/// Name, grid size, front (tb, r), and whether the plus class vanishes.
pub const FIXTURES: &[(&str, usize, i64, i64, bool)] = &[
    ("unknot2", 2, -1, 0, false),
    ("trefoil_rh_tbmax", 5, 1, 0, false),
    ("t25_tbmax", 7, 3, 0, false),
    ("t34_tbmax", 7, 5, 0, false),
    ("t35_tbmax", 8, 7, 0, false),
    ("sixone_tbmax", 8, -5, 0, true),
    ("k1_substitute", 8, 2, -1, false),
    ("l1_substitute", 9, 6, -1, false),
    ("k2_substitute", 16, 2, -1, true),
    ("family1_k1", 6, 0, -1, false),
    ("family1_l1", 8, 4, -1, false),
    ("family1_k2", 15, 0, -1, true),
    ("family2_k1", 3, -2, -1, false),
    ("family2_l1", 8, 2, -1, false),
    ("family2_k2", 15, -2, -1, true),
];

/// Random knot grids of size `2..=max_n`; permutation pairs that describe
/// links or share a cell are rejected.
pub fn arb_grid(max_n: usize) -> impl Strategy<Value = GridDiagram> {
    (2..=max_n)
        .prop_flat_map(|n| {
            let id: Vec<usize> = (0..n).collect();
            (Just(id.clone()).prop_shuffle(), Just(id).prop_shuffle())
        })
        .prop_filter_map("not a knot grid", |(o, x)| GridDiagram::new(o, x).ok())
}
