//! Computation on finite orthomodular lattices given as Greechie diagrams.
//!
//! The crate covers the whole pipeline from a diagram line to a verdict:
//!
//! * [`greechie`] parses and prints diagrams in one-line notation.
//! * [`lattice`] pastes the blocks into an OML and verifies the lattice laws.
//! * [`eqn`] holds lattice equations, their text syntax, the Godowski
//!   families, and an exhaustive checker.
//! * [`godp`] decides every Godowski equation at once by dynamic programming
//!   over sets of partial-chain values.
//! * [`simplex`] is an exact rational two-phase simplex solver.
//! * [`states`] decides whether a lattice admits a strong set of states.
//! * [`mgegen`] turns a lattice without strong states into a Mayet-Godowski
//!   equation that fails on it.

pub mod bits;
pub mod catalog;
pub mod eqn;
pub mod godp;
pub mod greechie;
pub mod lattice;
pub mod mgegen;
pub mod simplex;
pub mod states;

pub use eqn::{check_equation, parse_equation, CheckOptions, CheckResult, Equation, Term, Verdict};
pub use greechie::{parse_diagram, Atom, GreechieDiagram};
pub use lattice::{build_lattice, Elem, ElementId, OmlLattice};
pub use mgegen::{generate_mge, CondensedStateEquation, MgeOptions, MgeResult};
pub use simplex::{solve, LpOutcome, LpProblem, Rational};
pub use states::{
    pair_problem, strong_state_verdict, StateVector, StatesOptions, StrongSetVerdict,
};
