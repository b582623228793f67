//! Deciding the whole Godowski family on a finite OML.
//!
//! n-Go is taken in its chain form
//! `(a1 -> a2) ^ (a2 -> a3) ^ ... ^ (an -> a1) =< a1 -> an`.
//! For each ordered pair `(a1, x)` we keep the set of values the partial
//! chain `(a1 -> a2) ^ ... ^ (a_{k} -> x)` can take as the inner variables
//! range over the lattice. Stage `k` holds chains with `k` implications and
//! decides `(k + 1)`-Go. Each stage costs `O(|L|^4)` meets; once a stage
//! reproduces the previous family exactly, no larger n can fail.

use rayon::prelude::*;
use thiserror::Error;

use crate::bits::{ones, words_for};
use crate::eqn::generate_ngo_implicational;
use crate::lattice::{Elem, OrthoStructure};

pub const DEFAULT_CUTOFF: usize = 100;

const NO_PRED: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    /// Largest n to decide before giving up.
    pub cutoff: usize,
    /// Keep predecessor links so a failing chain can be recovered.
    pub track_witness: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            cutoff: DEFAULT_CUTOFF,
            track_witness: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NGoOutcome {
    /// n-Go fails; `chain` is a falsifying `a1..an` when witnesses are tracked.
    FailsAt { n: usize, chain: Option<Vec<Elem>> },
    /// Stage `converged_at` reproduced itself, so every n-Go holds.
    PassesAll { converged_at: usize },
    /// Neither failure nor convergence up to n = `cutoff`.
    Inconclusive { cutoff: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageStats {
    pub stage: usize,
    /// Meet evaluations spent building this stage's family.
    pub meets: u64,
    /// Total number of set members across all pairs.
    pub members: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NGoVerdict {
    pub outcome: NGoOutcome,
    pub stages: Vec<StageStats>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GodpError {
    #[error("witness reconstruction is inconsistent at stage {stage}")]
    BrokenLink { stage: usize },
    #[error("reconstructed {n}-Go chain does not falsify the equation")]
    WitnessRejected { n: usize },
}

/// Value sets `V(a1, x)` for every ordered pair at one stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationFamily {
    stage: usize,
    n: usize,
    wps: usize,
    bits: Vec<u64>,
}

/// Predecessor links of one stage: for each `(a1, y, value)` the `(x, v)`
/// that first produced it (at stage 2, just the middle element).
#[derive(Debug, Clone)]
pub struct StageLinks {
    n: usize,
    links: Vec<u32>,
}

impl StageLinks {
    fn get(&self, a1: usize, y: usize, w: usize) -> Option<(usize, usize)> {
        let p = self.links[(a1 * self.n + y) * self.n + w];
        (p != NO_PRED).then_some(((p >> 16) as usize, (p & 0xFFFF) as usize))
    }
}

/// A stage at which the answer predicate failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Failure {
    pub stage: usize,
    pub first: Elem,
    pub last: Elem,
    /// Member of `V(first, last)` that breaks the bound.
    pub value: Elem,
}

impl ValuationFamily {
    /// Stage 2: `V(a1, a3) = { (a1 -> a2) ^ (a2 -> a3) : a2 }`.
    pub fn initial(l: &OrthoStructure) -> (ValuationFamily, u64) {
        let (fam, _, meets) = Self::initial_tracked(l, false);
        (fam, meets)
    }

    fn initial_tracked(
        l: &OrthoStructure,
        track: bool,
    ) -> (ValuationFamily, Option<StageLinks>, u64) {
        let n = l.len();
        let wps = words_for(n);
        let imp = l.imp_table();
        let meet = l.meet_table();
        let mut bits = vec![0u64; n * n * wps];
        let mut links = if track {
            vec![NO_PRED; n * n * n]
        } else {
            Vec::new()
        };
        let meets: u64 = bits
            .par_chunks_mut(n * wps)
            .zip(link_chunks(&mut links, n).into_par_iter())
            .enumerate()
            .map(|(a1, (row, mut link_row))| {
                for a2 in 0..n {
                    let first = imp[a1 * n + a2] as usize;
                    let meet_first = &meet[first * n..(first + 1) * n];
                    let imp_a2 = &imp[a2 * n..(a2 + 1) * n];
                    for a3 in 0..n {
                        let w = meet_first[imp_a2[a3] as usize] as usize;
                        if insert(row, a3 * wps, w) {
                            if let Some(links) = link_row.as_deref_mut() {
                                links[a3 * n + w] = (a2 as u32) << 16;
                            }
                        }
                    }
                }
                (n * n) as u64
            })
            .sum();
        let fam = ValuationFamily {
            stage: 2,
            n,
            wps,
            bits,
        };
        (fam, track.then_some(StageLinks { n, links }), meets)
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    /// Members of `V(a1, x)` in index order.
    pub fn values(&self, a1: Elem, x: Elem) -> impl Iterator<Item = Elem> + '_ {
        let at = (a1.index() * self.n + x.index()) * self.wps;
        ones(&self.bits[at..at + self.wps]).map(Elem::new)
    }

    /// Total number of members over all pairs.
    pub fn members(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Same sets for every pair, regardless of stage number.
    pub fn same_sets(&self, other: &ValuationFamily) -> bool {
        self.bits == other.bits
    }

    /// `V'(a1, y) = { v ^ (x -> y) : x, v in V(a1, x) }`.
    pub fn step(&self, l: &OrthoStructure) -> (ValuationFamily, u64) {
        let (fam, _, meets) = self.step_tracked(l, false);
        (fam, meets)
    }

    fn step_tracked(
        &self,
        l: &OrthoStructure,
        track: bool,
    ) -> (ValuationFamily, Option<StageLinks>, u64) {
        let (n, wps) = (self.n, self.wps);
        let imp = l.imp_table();
        let meet = l.meet_table();
        let mut bits = vec![0u64; n * n * wps];
        let mut links = if track {
            vec![NO_PRED; n * n * n]
        } else {
            Vec::new()
        };
        let meets: u64 = bits
            .par_chunks_mut(n * wps)
            .zip(link_chunks(&mut links, n).into_par_iter())
            .enumerate()
            .map(|(a1, (row, mut link_row))| {
                let mut meets = 0u64;
                for x in 0..n {
                    let imp_x = &imp[x * n..(x + 1) * n];
                    let at = (a1 * n + x) * wps;
                    for v in ones(&self.bits[at..at + wps]) {
                        let meet_v = &meet[v * n..(v + 1) * n];
                        for y in 0..n {
                            let w = meet_v[imp_x[y] as usize] as usize;
                            if insert(row, y * wps, w) {
                                if let Some(links) = link_row.as_deref_mut() {
                                    links[y * n + w] = (x as u32) << 16 | v as u32;
                                }
                            }
                        }
                        meets += n as u64;
                    }
                }
                meets
            })
            .sum();
        let fam = ValuationFamily {
            stage: self.stage + 1,
            n,
            wps,
            bits,
        };
        (fam, track.then_some(StageLinks { n, links }), meets)
    }

    /// Checks `(stage + 1)`-Go: every `v` in `V(a1, an)` must satisfy
    /// `v ^ (an -> a1) <= a1 -> an`. Returns the first violation.
    pub fn answer(&self, l: &OrthoStructure) -> Option<Failure> {
        for a1 in l.elements() {
            for an in l.elements() {
                let closing = l.sasaki_imp(an, a1);
                let bound = l.sasaki_imp(a1, an);
                for v in self.values(a1, an) {
                    if !l.leq(l.meet(v, closing), bound) {
                        return Some(Failure {
                            stage: self.stage,
                            first: a1,
                            last: an,
                            value: v,
                        });
                    }
                }
            }
        }
        None
    }
}

#[inline]
fn insert(row: &mut [u64], base: usize, w: usize) -> bool {
    let word = &mut row[base + w / 64];
    let mask = 1u64 << (w % 64);
    let fresh = *word & mask == 0;
    *word |= mask;
    fresh
}

/// Per-`a1` chunks of the link table, or `None`s when links are off.
fn link_chunks(links: &mut [u32], n: usize) -> Vec<Option<&mut [u32]>> {
    if links.is_empty() {
        (0..n).map(|_| None).collect()
    } else {
        links.chunks_mut(n * n).map(Some).collect()
    }
}

/// Recovers `a1..an` from the predecessor links of stages `2..=failure.stage`.
pub fn reconstruct_witness(
    history: &[StageLinks],
    failure: &Failure,
) -> Result<Vec<Elem>, GodpError> {
    let n = failure.stage + 1;
    let mut chain = vec![0usize; n];
    chain[0] = failure.first.index();
    chain[n - 1] = failure.last.index();
    let a1 = failure.first.index();
    let (mut y, mut w) = (failure.last.index(), failure.value.index());
    for stage in (2..=failure.stage).rev() {
        let links = history
            .get(stage - 2)
            .ok_or(GodpError::BrokenLink { stage })?;
        let (x, v) = links.get(a1, y, w).ok_or(GodpError::BrokenLink { stage })?;
        chain[stage - 1] = x;
        y = x;
        w = v;
    }
    Ok(chain.into_iter().map(Elem::new).collect())
}

/// Finds the first n at which n-Go fails, or proves that all n-Go hold.
pub fn ngo_scan(l: &OrthoStructure, options: ScanOptions) -> Result<NGoVerdict, GodpError> {
    let track = options.track_witness;
    let (mut fam, links, meets) = ValuationFamily::initial_tracked(l, track);
    let mut history: Vec<StageLinks> = links.into_iter().collect();
    let mut stages = vec![StageStats {
        stage: 2,
        meets,
        members: fam.members(),
    }];
    loop {
        let n = fam.stage + 1;
        if n > options.cutoff {
            return Ok(NGoVerdict {
                outcome: NGoOutcome::Inconclusive {
                    cutoff: options.cutoff,
                },
                stages,
            });
        }
        if let Some(failure) = fam.answer(l) {
            let chain = if track {
                let chain = reconstruct_witness(&history, &failure)?;
                let eq = generate_ngo_implicational(n).expect("n >= 3");
                let point = eq
                    .evaluate_at(l, &chain)
                    .expect("chain covers every variable");
                if !point.is_counterexample() {
                    return Err(GodpError::WitnessRejected { n });
                }
                Some(chain)
            } else {
                None
            };
            return Ok(NGoVerdict {
                outcome: NGoOutcome::FailsAt { n, chain },
                stages,
            });
        }
        let (next, links, meets) = fam.step_tracked(l, track);
        stages.push(StageStats {
            stage: next.stage,
            meets,
            members: next.members(),
        });
        if next.same_sets(&fam) {
            return Ok(NGoVerdict {
                outcome: NGoOutcome::PassesAll {
                    converged_at: fam.stage,
                },
                stages,
            });
        }
        history.extend(links);
        fam = next;
    }
}
