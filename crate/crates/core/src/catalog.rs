//! Small Greechie diagrams with known structure, in line notation.

/// The Peterson lattice: 15 atoms, 10 blocks, 32 elements.
pub const PETERSON: &str = "123,345,567,789,9AB,BC1,2E8,4FA,6DC,DEF.";

/// The Boolean algebra with three atoms.
pub const BOOLEAN_3: &str = "123.";

/// The Boolean algebra with four atoms.
pub const BOOLEAN_4: &str = "1234.";

/// Pentagon: a loop of five 3-atom blocks.
pub const PENTAGON: &str = "123,345,567,789,9A1.";

/// Hexagon: a loop of six 3-atom blocks.
pub const HEXAGON: &str = "123,345,567,789,9AB,BC1.";

/// Path of `blocks` 3-atom blocks, each sharing one atom with the next.
pub fn chain3(blocks: usize) -> String {
    let atoms = 2 * blocks + 1;
    line(
        (0..blocks).map(|i| vec![2 * i + 1, 2 * i + 2, 2 * i + 3]),
        atoms,
    )
}

/// Path of `blocks` 4-atom blocks.
pub fn chain4(blocks: usize) -> String {
    let atoms = 3 * blocks + 1;
    line(
        (0..blocks).map(|i| vec![3 * i + 1, 3 * i + 2, 3 * i + 3, 3 * i + 4]),
        atoms,
    )
}

/// Loop of `blocks` 3-atom blocks; an OML for five or more blocks.
pub fn loop3(blocks: usize) -> String {
    let atoms = 2 * blocks;
    line(
        (0..blocks).map(|i| vec![2 * i + 1, 2 * i + 2, (2 * i + 2) % atoms + 1]),
        atoms,
    )
}

/// `blocks` 3-atom blocks all sharing atom 1.
pub fn star3(blocks: usize) -> String {
    let atoms = 2 * blocks + 1;
    line((0..blocks).map(|i| vec![1, 2 * i + 2, 2 * i + 3]), atoms)
}

fn line(blocks: impl Iterator<Item = Vec<usize>>, atoms: usize) -> String {
    assert!(
        atoms <= crate::greechie::MAX_ATOMS,
        "too many atoms for line notation"
    );
    let mut out: Vec<String> = Vec::new();
    for block in blocks {
        out.push(
            block
                .into_iter()
                .map(|a| crate::greechie::Atom::new(a).to_char().unwrap())
                .collect(),
        );
    }
    out.join(",") + "."
}
