//! Built-in diagram corpus.

use crate::grid::GridDiagram;

pub const UNKNOT2: &str = include_str!("../fixtures/unknot2.grid");
pub const UNKNOT3: &str = include_str!("../fixtures/unknot3.grid");
pub const UNKNOT4: &str = include_str!("../fixtures/unknot4.grid");
pub const UNKNOT5: &str = include_str!("../fixtures/unknot5.grid");
pub const TREFOIL_RIGHT: &str = include_str!("../fixtures/trefoil_right.grid");
pub const TREFOIL_LEFT: &str = include_str!("../fixtures/trefoil_left.grid");

pub const ALL: [(&str, &str); 6] = [
    ("unknot2", UNKNOT2),
    ("unknot3", UNKNOT3),
    ("unknot4", UNKNOT4),
    ("unknot5", UNKNOT5),
    ("trefoil_right", TREFOIL_RIGHT),
    ("trefoil_left", TREFOIL_LEFT),
];

pub fn diagram(name: &str) -> GridDiagram {
    let text = ALL
        .iter()
        .find(|(n, _)| *n == name)
        .unwrap_or_else(|| panic!("unknown fixture {name}"))
        .1;
    GridDiagram::parse_text(text).expect("fixture parses")
}

pub fn all() -> Vec<(&'static str, GridDiagram)> {
    ALL.iter().map(|&(n, t)| (n, GridDiagram::parse_text(t).expect("fixture parses"))).collect()
}

/// The two summands for a connected sum, normalized.
pub fn connect_pair(left: &str, right: &str) -> (GridDiagram, GridDiagram) {
    let g1 = diagram(left).normalize_left();
    let g2 = diagram(right).normalize_right();
    (g1, g2)
}
