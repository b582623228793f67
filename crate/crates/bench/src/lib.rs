//! Benchmark fixtures shared by the criterion targets.

use omlkit_core::{build_lattice, catalog, parse_diagram, OmlLattice};

pub fn lattice(line: &str) -> OmlLattice {
    build_lattice(&parse_diagram(line).expect("fixture parses")).expect("fixture is an OML")
}

pub fn peterson() -> OmlLattice {
    lattice(catalog::PETERSON)
}
