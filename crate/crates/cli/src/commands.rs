use std::fs;
use std::path::Path;

use omlkit_core::eqn::{check_equation, parse_equation, CheckOptions, Equation};
use omlkit_core::godp::{ngo_scan, NGoOutcome, ScanOptions};
use omlkit_core::greechie::{read_diagram_file, Atom, DiagramEntry, DiagramFileError, ReadMode};
use omlkit_core::lattice::{BuildOptions, Elem, OmlLattice};
use omlkit_core::mgegen::{generate_mge, MgeError, MgeOptions};
use omlkit_core::simplex::print_problem;
use omlkit_core::states::{pair_problem, strong_state_verdict, StatesOptions, StrongSetVerdict};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;
use thiserror::Error;

use crate::report::Report;
use crate::{Cli, Command, Input};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] DiagramFileError),
    #[error("{0}")]
    Usage(String),
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Internal(_) => 2,
            _ => 1,
        }
    }
}

type Outcome = Result<Report, CliError>;

/// Runs the command over every diagram and returns the rendered output in
/// input order.
pub fn run(cli: &Cli) -> Result<Vec<String>, CliError> {
    let input = match &cli.command {
        Command::Parse { input }
        | Command::Check { input, .. }
        | Command::Ngo { input, .. }
        | Command::States { input, .. }
        | Command::LpDump { input, .. }
        | Command::Mge { input, .. } => input,
    };
    let entries = read_entries(input)?;
    let equation = match &cli.command {
        Command::Check { eq, eq_file, .. } => {
            Some(load_equation(eq.as_deref(), eq_file.as_deref())?)
        }
        _ => None,
    };
    let options = BuildOptions {
        verify: !input.no_verify,
    };
    let process = |entry: &DiagramEntry| -> Outcome {
        let key = entry.key();
        let l = match OmlLattice::build(&entry.diagram, options) {
            Ok(l) => l,
            Err(e) => return Ok(Report::new(key, "rejected").field("reason", e.to_string())),
        };
        match &cli.command {
            Command::Parse { .. } => Ok(parse_report(key, &l)),
            Command::Check { var_cap, .. } => {
                check_report(key, &l, equation.as_ref().expect("parsed above"), *var_cap)
            }
            Command::Ngo { cutoff, .. } => ngo_report(key, &l, *cutoff),
            Command::States { all_pairs, .. } => Ok(states_report(key, &l, *all_pairs)),
            Command::LpDump { pair, .. } => Ok(lp_report(key, &l, pair)),
            Command::Mge {
                seed_order, pair, ..
            } => mge_report(key, &l, *seed_order, pair.as_deref()),
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build().map_err(|e| CliError::Usage(e.to_string()))?;
    let reports: Vec<Outcome> = pool.install(|| entries.par_iter().map(process).collect());
    reports
        .into_iter()
        .map(|r| r.map(|r| if cli.json { r.json() } else { r.text() }))
        .collect()
}

fn read_entries(input: &Input) -> Result<Vec<DiagramEntry>, CliError> {
    let mode = if input.lenient {
        ReadMode::Lenient
    } else {
        ReadMode::Strict
    };
    Ok(read_diagram_file(&input.path, mode)?)
}

fn load_equation(eq: Option<&str>, file: Option<&Path>) -> Result<Equation, CliError> {
    let text = match (eq, file) {
        (Some(t), _) => t.to_string(),
        (None, Some(path)) => {
            let content = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            content
                .lines()
                .map(str::trim)
                .find(|l| !l.is_empty() && !l.starts_with('#'))
                .ok_or_else(|| CliError::Usage(format!("{}: no equation", path.display())))?
                .to_string()
        }
        (None, None) => return Err(CliError::Usage("an equation is required".into())),
    };
    parse_equation(&text).map_err(|e| CliError::Usage(format!("equation: {e}")))
}

fn parse_report(key: String, l: &OmlLattice) -> Report {
    Report::new(key, "ok")
        .field("atoms", l.diagram().atom_count())
        .field("blocks", l.diagram().blocks().len())
        .field("elements", l.len())
}

fn check_report(key: String, l: &OmlLattice, e: &Equation, var_cap: usize) -> Outcome {
    let options = CheckOptions {
        var_cap,
        ..CheckOptions::default()
    };
    let r = check_equation(l, e, options).map_err(|err| CliError::Usage(err.to_string()))?;
    Ok(match &r.witness {
        None => Report::new(key, "holds").field("assignments", r.assignments_tried),
        Some(w) => Report::new(key, "fails")
            .field("assignments", r.assignments_tried)
            .detail("witness", e.format_assignment(w, |x| l.name(x))),
    })
}

fn ngo_report(key: String, l: &OmlLattice, cutoff: usize) -> Outcome {
    let options = ScanOptions {
        cutoff,
        track_witness: true,
    };
    let v = ngo_scan(l, options).map_err(|e| CliError::Internal(format!("{key}: {e}")))?;
    Ok(match v.outcome {
        NGoOutcome::FailsAt { n, .. } => Report::new(key, "fails").field("n", n),
        NGoOutcome::PassesAll { converged_at } => {
            Report::new(key, "passes").field("converged", converged_at)
        }
        NGoOutcome::Inconclusive { cutoff } => {
            Report::new(key, "inconclusive").field("cutoff", cutoff)
        }
    })
}

fn pair_text(l: &OmlLattice, x: Elem, y: Elem) -> String {
    format!("({},{})", l.name(x), l.name(y))
}

fn states_report(key: String, l: &OmlLattice, all_pairs: bool) -> Report {
    match strong_state_verdict(l, StatesOptions { all_pairs }) {
        StrongSetVerdict::Admits { .. } => Report::new(key, "admits"),
        StrongSetVerdict::Stateless => Report::new(key, "stateless"),
        StrongSetVerdict::Refutes(rs) => {
            let w = &rs[0];
            let r = Report::new(key, "refutes").field("pair", pair_text(l, w.x, w.y));
            if all_pairs {
                r.detail(
                    "refuting",
                    rs.iter()
                        .map(|r| {
                            let kind = if r.incomparable { "" } else { "*" };
                            format!("{}{kind}", pair_text(l, r.x, r.y))
                        })
                        .collect::<Vec<_>>(),
                )
            } else {
                r
            }
        }
    }
}

/// Resolves `a7'`, `7'`, `B:{a1,a2}`, `0` or `I`.
fn element(l: &OmlLattice, name: &str) -> Option<Elem> {
    let name = name.trim();
    if let Some(e) = l.find(name) {
        return Some(e);
    }
    let (body, primed) = match name.strip_suffix('\'') {
        Some(b) => (b, true),
        None => (name, false),
    };
    let mut chars = body.chars();
    let atom = Atom::from_char(chars.next()?)?;
    if chars.next().is_some() || atom.number() > l.diagram().atom_count() {
        return None;
    }
    let e = l.atom(atom);
    Some(if primed { l.ortho(e) } else { e })
}

fn resolve_pair(l: &OmlLattice, text: &str) -> Result<(Elem, Elem), String> {
    // split at the comma outside `B:{..}`
    let mut depth = 0;
    let split = text.char_indices().find_map(|(i, c)| {
        match c {
            '{' => depth += 1,
            '}' => depth -= 1,
            ',' if depth == 0 => return Some(i),
            _ => {}
        }
        None
    });
    let (x, y) = split
        .map(|i| (&text[..i], &text[i + 1..]))
        .ok_or_else(|| format!("pair '{text}' is not X,Y"))?;
    let get = |s: &str| element(l, s).ok_or_else(|| format!("no element '{}'", s.trim()));
    Ok((get(x)?, get(y)?))
}

fn lp_report(key: String, l: &OmlLattice, pair: &str) -> Report {
    let (x, y) = match resolve_pair(l, pair) {
        Ok(p) => p,
        Err(e) => return Report::new(key, "skipped").field("reason", e),
    };
    match pair_problem(l, x, y) {
        Ok(pp) => Report::new(key, "lp")
            .field("pair", pair_text(l, x, y))
            .body("problem", print_problem(&pp.problem)),
        Err(e) => Report::new(key, "skipped").field("reason", e.to_string()),
    }
}

fn mge_report(key: String, l: &OmlLattice, seed: Option<u64>, pair: Option<&str>) -> Outcome {
    let mut options = MgeOptions::default();
    if let Some(seed) = seed {
        let mut order: Vec<usize> = (0..l.diagram().blocks().len()).collect();
        order.shuffle(&mut StdRng::seed_from_u64(seed));
        options.order = Some(order);
    }
    if let Some(text) = pair {
        match resolve_pair(l, text) {
            Ok(p) => options.pair = Some(p),
            Err(e) => return Ok(Report::new(key, "skipped").field("reason", e)),
        }
    }
    let r = match generate_mge(l, &options) {
        Ok(r) => r,
        Err(MgeError::WitnessSurvives) => {
            return Err(CliError::Internal(format!(
                "{key}: generated equation survives its witness"
            )))
        }
        Err(
            e @ (MgeError::AdmitsStrongStates
            | MgeError::Stateless
            | MgeError::NoForcedPair
            | MgeError::NotForced(_)),
        ) => return Ok(Report::new(key, "skipped").field("reason", e.to_string())),
        Err(e) => return Ok(Report::new(key, "failed").field("reason", e.to_string())),
    };
    let singletons = r
        .condensed
        .lhs
        .iter()
        .chain(&r.condensed.rhs)
        .filter(|t| t.len() == 1)
        .count();
    let mut report = Report::new(key, "mge")
        .field("pair", pair_text(l, r.x, r.y))
        .detail("weakened", r.block_labels(l, &r.weakening.weakened))
        .detail("kept", r.block_labels(l, &r.weakening.kept))
        .detail("condensed", r.atom_form())
        .detail("renamed", r.condensed.to_string())
        .detail("equation", r.mge.to_string())
        .detail(
            "witness",
            r.mge
                .format_assignment(&r.witness_assignment, |e| l.name(e)),
        );
    if singletons > 0 {
        report = report.detail("singleton-terms", singletons);
    }
    Ok(report)
}
