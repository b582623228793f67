//! Greechie diagrams in the compact one-line notation.
//!
//! A diagram line is a comma-separated list of blocks terminated by `.`,
//! for example `123,345,567,789,9AB,BC1,2E8,4FA,6DC,DEF.`. Each character
//! names an atom: `1`-`9` are atoms 1 to 9, `A`-`Z` are 10 to 35 and
//! `a`-`z` are 36 to 61.

use std::fmt;
use std::path::Path;

use thiserror::Error;

/// Largest atom number expressible in the line notation.
pub const MAX_ATOMS: usize = 61;

/// An atom of a diagram, numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(u16);

impl Atom {
    /// Creates an atom from its 1-based number.
    ///
    /// # Panics
    ///
    /// Panics if `number` is zero.
    pub fn new(number: usize) -> Self {
        assert!(number >= 1, "atoms are numbered from 1");
        Atom(u16::try_from(number).expect("atom number out of range"))
    }

    pub fn number(self) -> usize {
        self.0 as usize
    }

    /// Zero-based position, handy for indexing per-atom tables.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub fn from_char(ch: char) -> Option<Self> {
        let n = match ch {
            '1'..='9' => ch as usize - '0' as usize,
            'A'..='Z' => ch as usize - 'A' as usize + 10,
            'a'..='z' => ch as usize - 'a' as usize + 36,
            _ => return None,
        };
        Some(Atom(n as u16))
    }

    /// The notation character, if the atom number fits the alphabet.
    pub fn to_char(self) -> Option<char> {
        let n = self.0 as u32;
        match n {
            1..=9 => char::from_digit(n, 10),
            10..=35 => char::from_u32('A' as u32 + n - 10),
            36..=61 => char::from_u32('a' as u32 + n - 36),
            _ => None,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_char() {
            Some(c) => write!(f, "{c}"),
            None => write!(f, "#{}", self.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GreechieError {
    #[error("diagram line is not terminated by '.'")]
    Unterminated,
    #[error("illegal character {ch:?} at column {column}")]
    IllegalChar { ch: char, column: usize },
    #[error("unexpected input after the terminating '.' at column {column}")]
    TrailingInput { column: usize },
    #[error("block {block} has {size} atoms; only 3 or 4 are supported")]
    BlockSize { block: usize, size: usize },
    #[error("atom {atom} appears twice in block {block}")]
    RepeatedAtom { block: usize, atom: Atom },
    #[error("blocks {first} and {second} share {shared} atoms (at most one allowed)")]
    SharedAtoms {
        first: usize,
        second: usize,
        shared: usize,
    },
    #[error("atom {atom} is not used by any block")]
    UnusedAtom { atom: Atom },
    #[error("diagram has {count} atoms; the notation supports at most {MAX_ATOMS}")]
    TooManyAtoms { count: usize },
    #[error("diagram has no blocks")]
    Empty,
}

/// Atoms and blocks of a Greechie diagram. Block numbers in errors and
/// reports are 1-based positions in `blocks`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GreechieDiagram {
    atom_count: usize,
    blocks: Vec<Vec<Atom>>,
}

impl GreechieDiagram {
    /// Validates and builds a diagram. `atom_count` is taken to be the
    /// highest atom mentioned.
    pub fn new(blocks: Vec<Vec<Atom>>) -> Result<Self, GreechieError> {
        if blocks.is_empty() {
            return Err(GreechieError::Empty);
        }
        for (i, block) in blocks.iter().enumerate() {
            if !(3..=4).contains(&block.len()) {
                return Err(GreechieError::BlockSize {
                    block: i + 1,
                    size: block.len(),
                });
            }
            for (j, a) in block.iter().enumerate() {
                if block[..j].contains(a) {
                    return Err(GreechieError::RepeatedAtom {
                        block: i + 1,
                        atom: *a,
                    });
                }
            }
        }
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                let shared = blocks[i].iter().filter(|a| blocks[j].contains(a)).count();
                if shared > 1 {
                    return Err(GreechieError::SharedAtoms {
                        first: i + 1,
                        second: j + 1,
                        shared,
                    });
                }
            }
        }
        let atom_count = blocks
            .iter()
            .flatten()
            .map(|a| a.number())
            .max()
            .unwrap_or(0);
        let mut used = vec![false; atom_count];
        for a in blocks.iter().flatten() {
            used[a.index()] = true;
        }
        if let Some(missing) = used.iter().position(|u| !u) {
            return Err(GreechieError::UnusedAtom {
                atom: Atom::new(missing + 1),
            });
        }
        Ok(GreechieDiagram { atom_count, blocks })
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    pub fn blocks(&self) -> &[Vec<Atom>] {
        &self.blocks
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> {
        (1..=self.atom_count).map(Atom::new)
    }

    /// Indices of the blocks containing `atom`, in block order.
    pub fn blocks_of(&self, atom: Atom) -> impl Iterator<Item = usize> + '_ {
        self.blocks
            .iter()
            .enumerate()
            .filter(move |(_, b)| b.contains(&atom))
            .map(|(i, _)| i)
    }

    /// Same diagram with blocks listed in a different order.
    pub fn with_block_order(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.blocks.len());
        GreechieDiagram {
            atom_count: self.atom_count,
            blocks: order.iter().map(|&i| self.blocks[i].clone()).collect(),
        }
    }

    /// Renders the diagram in line notation.
    pub fn serialize(&self) -> Result<String, GreechieError> {
        if self.atom_count > MAX_ATOMS {
            return Err(GreechieError::TooManyAtoms {
                count: self.atom_count,
            });
        }
        Ok(self.to_string())
    }
}

/// Renders one block as its run of atom characters, e.g. `BC1`.
pub fn block_label(block: &[Atom]) -> String {
    block.iter().map(|a| a.to_string()).collect()
}

impl fmt::Display for GreechieDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(&block_label(block))?;
        }
        f.write_str(".")
    }
}

impl std::str::FromStr for GreechieDiagram {
    type Err = GreechieError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_diagram(s)
    }
}

/// Parses one diagram line. Surrounding whitespace is ignored.
pub fn parse_diagram(line: &str) -> Result<GreechieDiagram, GreechieError> {
    let line = line.trim();
    let mut blocks = Vec::new();
    let mut current = Vec::new();
    let mut terminated = false;
    for (column, ch) in line.chars().enumerate().map(|(i, c)| (i + 1, c)) {
        if terminated {
            return Err(GreechieError::TrailingInput { column });
        }
        match ch {
            ',' | '.' => {
                if current.is_empty() {
                    return Err(GreechieError::BlockSize {
                        block: blocks.len() + 1,
                        size: 0,
                    });
                }
                blocks.push(std::mem::take(&mut current));
                terminated = ch == '.';
            }
            _ => match Atom::from_char(ch) {
                Some(atom) => current.push(atom),
                None => return Err(GreechieError::IllegalChar { ch, column }),
            },
        }
    }
    if !terminated {
        return Err(GreechieError::Unterminated);
    }
    GreechieDiagram::new(blocks)
}

/// A diagram together with the 1-based line it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramEntry {
    pub line: usize,
    pub diagram: GreechieDiagram,
}

impl DiagramEntry {
    /// Batch key used in reports, e.g. `L3`.
    pub fn key(&self) -> String {
        format!("L{}", self.line)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReadMode {
    /// Any malformed line fails the whole read.
    #[default]
    Strict,
    /// Malformed lines are logged and skipped.
    Lenient,
}

#[derive(Debug, Error)]
pub enum DiagramFileError {
    #[error("cannot read diagram file: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Line {
        line: usize,
        #[source]
        source: GreechieError,
    },
}

/// Parses a diagram list: one diagram per line, `#` comments and blank
/// lines ignored.
pub fn parse_diagram_list(
    text: &str,
    mode: ReadMode,
) -> Result<Vec<DiagramEntry>, DiagramFileError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        match parse_diagram(trimmed) {
            Ok(diagram) => out.push(DiagramEntry { line, diagram }),
            Err(source) => match mode {
                ReadMode::Strict => return Err(DiagramFileError::Line { line, source }),
                ReadMode::Lenient => log::warn!("skipping line {line}: {source}"),
            },
        }
    }
    Ok(out)
}

pub fn read_diagram_file(
    path: impl AsRef<Path>,
    mode: ReadMode,
) -> Result<Vec<DiagramEntry>, DiagramFileError> {
    let text = std::fs::read_to_string(path)?;
    parse_diagram_list(&text, mode)
}
