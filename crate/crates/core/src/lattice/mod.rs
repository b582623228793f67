//! Finite orthomodular lattices obtained by pasting the Boolean blocks of a
//! Greechie diagram.
//!
//! Elements are addressed by [`Elem`] indices into dense operation tables.
//! Indices are laid out as `0`, `I`, the atoms `a1..aN`, their complements
//! `a1'..aN'`, and finally the two-atom joins of 4-atom blocks.

mod laws;

use std::fmt;

use thiserror::Error;

use crate::bits::BitSet;
use crate::greechie::{Atom, GreechieDiagram};

pub use laws::{verify_laws, Law, LawCheck, LawReport};

/// Index of an element in a lattice's tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(u16);

impl Elem {
    pub fn new(index: usize) -> Self {
        Elem(u16::try_from(index).expect("element index out of range"))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// What a lattice element is, in terms of the source diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ElementId {
    Zero,
    One,
    Atom(Atom),
    /// Orthocomplement of an atom; the same element in every block holding the atom.
    Complement(Atom),
    /// Join of two atoms of a 4-atom block (block index is 0-based).
    BlockJoin {
        block: usize,
        atoms: Vec<Atom>,
    },
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementId::Zero => f.write_str("0"),
            ElementId::One => f.write_str("I"),
            ElementId::Atom(a) => write!(f, "a{}", a.number()),
            ElementId::Complement(a) => write!(f, "a{}'", a.number()),
            ElementId::BlockJoin { atoms, .. } => {
                f.write_str("B:{")?;
                for (i, a) in atoms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "a{}", a.number())?;
                }
                f.write_str("}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("order is not antisymmetric: elements {0} and {1} are mutually below each other")]
    NotAntisymmetric(usize, usize),
    #[error("order has no least or greatest element")]
    Unbounded,
    #[error("elements {0} and {1} have no greatest lower bound")]
    NoMeet(usize, usize),
    #[error("elements {0} and {1} have no least upper bound")]
    NoJoin(usize, usize),
    #[error("orthocomplement table has {got} entries for {expected} elements")]
    OrthoSize { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("pasting is not a lattice: {a} and {b} have no {which}")]
    NotALattice {
        a: String,
        b: String,
        which: &'static str,
    },
    #[error("pasted order is not antisymmetric between {a} and {b}")]
    NotAPoset { a: String, b: String },
    #[error("{law} fails at ({})", .witness.join(", "))]
    LawViolation { law: Law, witness: Vec<String> },
}

/// A finite bounded lattice with a unary complement, stored as dense tables.
///
/// Whether it is an ortholattice or an OML is a question for
/// [`verify_laws`]; the constructor only guarantees that meets and joins
/// exist.
#[derive(Debug, Clone)]
pub struct OrthoStructure {
    n: usize,
    /// `down[y]` holds every `x` with `x <= y`.
    down: Vec<BitSet>,
    meet: Vec<u16>,
    join: Vec<u16>,
    ortho: Vec<u16>,
    imp: Vec<u16>,
    zero: u16,
    one: u16,
}

impl OrthoStructure {
    /// Builds the tables from a reflexive order relation and a complement map.
    pub fn from_order(
        leq: impl Fn(usize, usize) -> bool,
        n: usize,
        ortho: Vec<usize>,
    ) -> Result<Self, OrderError> {
        if ortho.len() != n {
            return Err(OrderError::OrthoSize {
                expected: n,
                got: ortho.len(),
            });
        }
        let mut down = vec![BitSet::new(n); n];
        let mut up = vec![BitSet::new(n); n];
        #[allow(clippy::needless_range_loop)]
        for x in 0..n {
            for y in 0..n {
                if x == y || leq(x, y) {
                    down[y].insert(x);
                    up[x].insert(y);
                }
            }
        }
        for x in 0..n {
            for y in x + 1..n {
                if down[y].contains(x) && down[x].contains(y) {
                    return Err(OrderError::NotAntisymmetric(x, y));
                }
            }
        }
        let zero = (0..n)
            .find(|&z| up[z].count() == n)
            .ok_or(OrderError::Unbounded)?;
        let one = (0..n)
            .find(|&o| down[o].count() == n)
            .ok_or(OrderError::Unbounded)?;

        let mut meet = vec![0u16; n * n];
        let mut join = vec![0u16; n * n];
        for x in 0..n {
            for y in x..n {
                let mut lower = down[x].clone();
                lower.intersect_with(&down[y]);
                let m = lower
                    .iter()
                    .find(|&z| lower.is_subset(&down[z]))
                    .ok_or(OrderError::NoMeet(x, y))?;
                let mut upper = up[x].clone();
                upper.intersect_with(&up[y]);
                let j = upper
                    .iter()
                    .find(|&z| upper.is_subset(&up[z]))
                    .ok_or(OrderError::NoJoin(x, y))?;
                meet[x * n + y] = m as u16;
                meet[y * n + x] = m as u16;
                join[x * n + y] = j as u16;
                join[y * n + x] = j as u16;
            }
        }
        let ortho: Vec<u16> = ortho.into_iter().map(|o| o as u16).collect();
        let mut imp = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                let ab = meet[a * n + b] as usize;
                imp[a * n + b] = join[ortho[a] as usize * n + ab];
            }
        }
        Ok(OrthoStructure {
            n,
            down,
            meet,
            join,
            ortho,
            imp,
            zero: zero as u16,
            one: one as u16,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.n).map(Elem::new)
    }

    pub fn zero(&self) -> Elem {
        Elem(self.zero)
    }

    pub fn one(&self) -> Elem {
        Elem(self.one)
    }

    #[inline]
    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        self.down[y.index()].contains(x.index())
    }

    #[inline]
    pub fn meet(&self, x: Elem, y: Elem) -> Elem {
        Elem(self.meet[x.index() * self.n + y.index()])
    }

    #[inline]
    pub fn join(&self, x: Elem, y: Elem) -> Elem {
        Elem(self.join[x.index() * self.n + y.index()])
    }

    #[inline]
    pub fn ortho(&self, x: Elem) -> Elem {
        Elem(self.ortho[x.index()])
    }

    /// Sasaki implication `a' v (a ^ b)`.
    #[inline]
    pub fn sasaki_imp(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.imp[a.index() * self.n + b.index()])
    }

    /// `a` commutes with `b` when `a = (a ^ b) v (a ^ b')`.
    pub fn commutes(&self, a: Elem, b: Elem) -> bool {
        let left = self.meet(a, b);
        let right = self.meet(a, self.ortho(b));
        self.join(left, right) == a
    }

    /// `x` is orthogonal to `y` when `x <= y'`.
    #[inline]
    pub fn orthogonal(&self, x: Elem, y: Elem) -> bool {
        self.leq(x, self.ortho(y))
    }

    /// Set of elements below `y` (inclusive).
    pub fn down_set(&self, y: Elem) -> &BitSet {
        &self.down[y.index()]
    }

    /// Row-major meet table, `n * n` entries.
    pub fn meet_table(&self) -> &[u16] {
        &self.meet
    }

    pub fn join_table(&self) -> &[u16] {
        &self.join
    }

    /// Row-major Sasaki implication table: entry `a * n + b` is `a -> b`.
    pub fn imp_table(&self) -> &[u16] {
        &self.imp
    }

    pub fn ortho_table(&self) -> &[u16] {
        &self.ortho
    }

    /// All ordered pairs of mutually incomparable elements, in index order.
    pub fn incomparable_pairs(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for x in self.elements() {
            for y in self.elements() {
                if !self.leq(x, y) && !self.leq(y, x) {
                    out.push((x, y));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Run the exhaustive law checks and reject anything that is not an OML.
    pub verify: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { verify: true }
    }
}

/// The orthomodular lattice pasted together from a Greechie diagram.
#[derive(Debug, Clone)]
pub struct OmlLattice {
    diagram: GreechieDiagram,
    ids: Vec<ElementId>,
    tables: OrthoStructure,
}

impl std::ops::Deref for OmlLattice {
    type Target = OrthoStructure;

    fn deref(&self) -> &OrthoStructure {
        &self.tables
    }
}

/// Pastes the diagram's blocks and verifies the OML laws.
pub fn build_lattice(diagram: &GreechieDiagram) -> Result<OmlLattice, LatticeError> {
    OmlLattice::build(diagram, BuildOptions::default())
}

impl OmlLattice {
    pub fn build(diagram: &GreechieDiagram, options: BuildOptions) -> Result<Self, LatticeError> {
        let atoms = diagram.atom_count();
        let mut ids = vec![ElementId::Zero, ElementId::One];
        ids.extend(diagram.atoms().map(ElementId::Atom));
        ids.extend(diagram.atoms().map(ElementId::Complement));
        let atom_elem = |a: Atom| 2 + a.index();
        let complement_elem = |a: Atom| 2 + atoms + a.index();

        // Every block is a Boolean algebra of subsets; map each subset mask
        // to its element index.
        let mut block_elems: Vec<Vec<usize>> = Vec::with_capacity(diagram.blocks().len());
        for (b, block) in diagram.blocks().iter().enumerate() {
            let size = block.len();
            let full = (1usize << size) - 1;
            let mut by_mask = vec![0usize; 1 << size];
            for (mask, slot) in by_mask.iter_mut().enumerate() {
                let members = mask.count_ones() as usize;
                *slot = if members == 0 {
                    0
                } else if members == size {
                    1
                } else if members == 1 {
                    atom_elem(block[mask.trailing_zeros() as usize])
                } else if members == size - 1 {
                    complement_elem(block[(full & !mask).trailing_zeros() as usize])
                } else {
                    let members: Vec<Atom> = (0..size)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| block[i])
                        .collect();
                    ids.push(ElementId::BlockJoin {
                        block: b,
                        atoms: members,
                    });
                    ids.len() - 1
                };
            }
            block_elems.push(by_mask);
        }
        let n = ids.len();

        let mut leq = vec![BitSet::new(n); n];
        for i in 0..n {
            leq[i].insert(i);
            leq[0].insert(i);
            leq[i].insert(1);
        }
        for (block, by_mask) in diagram.blocks().iter().zip(&block_elems) {
            let masks = 1usize << block.len();
            for s in 0..masks {
                for t in 0..masks {
                    if s & !t == 0 {
                        leq[by_mask[s]].insert(by_mask[t]);
                    }
                }
            }
        }
        // transitive closure (Warshall on rows of successors)
        for k in 0..n {
            let row_k = leq[k].clone();
            for row in leq.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }

        let mut ortho = vec![0usize; n];
        ortho[0] = 1;
        ortho[1] = 0;
        for a in diagram.atoms() {
            ortho[atom_elem(a)] = complement_elem(a);
            ortho[complement_elem(a)] = atom_elem(a);
        }
        for (block, by_mask) in diagram.blocks().iter().zip(&block_elems) {
            let full = (1usize << block.len()) - 1;
            for mask in 0..=full {
                ortho[by_mask[mask]] = by_mask[full & !mask];
            }
        }

        let name = |i: usize| ids[i].to_string();
        let tables = OrthoStructure::from_order(|x, y| leq[x].contains(y), n, ortho).map_err(
            |e| match e {
                OrderError::NoMeet(a, b) => LatticeError::NotALattice {
                    a: name(a),
                    b: name(b),
                    which: "greatest lower bound",
                },
                OrderError::NoJoin(a, b) => LatticeError::NotALattice {
                    a: name(a),
                    b: name(b),
                    which: "least upper bound",
                },
                OrderError::NotAntisymmetric(a, b) => LatticeError::NotAPoset {
                    a: name(a),
                    b: name(b),
                },
                // 0 and I are bounds by construction and the ortho table is full.
                OrderError::Unbounded | OrderError::OrthoSize { .. } => {
                    unreachable!("pasting always has bounds")
                }
            },
        )?;

        let lattice = OmlLattice {
            diagram: diagram.clone(),
            ids,
            tables,
        };
        if options.verify {
            let report = verify_laws(&lattice.tables);
            if let Some(check) = report.first_failure() {
                return Err(LatticeError::LawViolation {
                    law: check.law,
                    witness: check
                        .counterexample
                        .iter()
                        .flatten()
                        .map(|&e| lattice.name(e))
                        .collect(),
                });
            }
        }
        Ok(lattice)
    }

    pub fn diagram(&self) -> &GreechieDiagram {
        &self.diagram
    }

    pub fn structure(&self) -> &OrthoStructure {
        &self.tables
    }

    pub fn id(&self, e: Elem) -> &ElementId {
        &self.ids[e.index()]
    }

    pub fn name(&self, e: Elem) -> String {
        self.ids[e.index()].to_string()
    }

    pub fn atom(&self, a: Atom) -> Elem {
        assert!(a.number() <= self.diagram.atom_count());
        Elem::new(2 + a.index())
    }

    pub fn atoms(&self) -> impl Iterator<Item = Elem> + '_ {
        self.diagram.atoms().map(|a| self.atom(a))
    }

    /// Looks up an element by its rendered name (`0`, `I`, `a7`, `a7'`, `B:{a1,a2}`).
    pub fn find(&self, name: &str) -> Option<Elem> {
        let name = name.trim();
        self.ids
            .iter()
            .position(|id| id.to_string() == name)
            .map(Elem::new)
    }

    /// Exhaustive law report for this lattice.
    pub fn verify_laws(&self) -> LawReport {
        verify_laws(&self.tables)
    }
}
