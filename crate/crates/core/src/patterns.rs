//! The 17 graphs on 2, 3 and 4 vertices, in canonical order.
//!
//! Canonical order: by vertex count, then edge count, with ties fixed as
//! listed in [`Pattern::ALL`]. Under this order the overlap matrix is
//! block-diagonal and upper triangular with a unit diagonal.

use std::fmt;
use std::sync::OnceLock;

pub const PATTERN_COUNT: usize = 17;

/// Local vertex pairs of a graph on at most four vertices, indexed by bit.
pub(crate) const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)];

/// Number of local pairs among the first `k` vertices (`PAIRS` is laid out so
/// that these come first).
pub(crate) const fn pair_count(k: usize) -> usize {
    k * (k - 1) / 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pattern {
    EdgelessTwo,
    Edge,
    EdgelessThree,
    EdgeIsolated,
    Wedge,
    Triangle,
    EdgelessFour,
    EdgeTwoIsolated,
    TwoDisjointEdges,
    WedgeIsolated,
    TriangleIsolated,
    Claw,
    Path4,
    Cycle4,
    Paw,
    Diamond,
    K4,
}

impl Pattern {
    pub const ALL: [Pattern; PATTERN_COUNT] = [
        Pattern::EdgelessTwo,
        Pattern::Edge,
        Pattern::EdgelessThree,
        Pattern::EdgeIsolated,
        Pattern::Wedge,
        Pattern::Triangle,
        Pattern::EdgelessFour,
        Pattern::EdgeTwoIsolated,
        Pattern::TwoDisjointEdges,
        Pattern::WedgeIsolated,
        Pattern::TriangleIsolated,
        Pattern::Claw,
        Pattern::Path4,
        Pattern::Cycle4,
        Pattern::Paw,
        Pattern::Diamond,
        Pattern::K4,
    ];

    /// Connected patterns whose counts come from the stream rather than from
    /// degree formulas.
    pub const STREAM_ESTIMATED: [Pattern; 6] = [
        Pattern::Triangle,
        Pattern::Path4,
        Pattern::Cycle4,
        Pattern::Paw,
        Pattern::Diamond,
        Pattern::K4,
    ];

    /// Zero-based position in canonical order.
    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    /// One-based id.
    pub fn id(self) -> usize {
        self.index() + 1
    }

    pub fn from_index(i: usize) -> Option<Pattern> {
        Pattern::ALL.get(i).copied()
    }

    pub fn order(self) -> usize {
        match self.index() {
            0..=1 => 2,
            2..=5 => 3,
            _ => 4,
        }
    }

    pub fn edge_count(self) -> usize {
        self.edges().len()
    }

    pub fn is_connected(self) -> bool {
        matches!(
            self,
            Pattern::Edge
                | Pattern::Wedge
                | Pattern::Triangle
                | Pattern::Claw
                | Pattern::Path4
                | Pattern::Cycle4
                | Pattern::Paw
                | Pattern::Diamond
                | Pattern::K4
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Pattern::EdgelessTwo => "edgeless-2",
            Pattern::Edge => "edge",
            Pattern::EdgelessThree => "edgeless-3",
            Pattern::EdgeIsolated => "edge+isolated",
            Pattern::Wedge => "wedge",
            Pattern::Triangle => "triangle",
            Pattern::EdgelessFour => "edgeless-4",
            Pattern::EdgeTwoIsolated => "edge+2-isolated",
            Pattern::TwoDisjointEdges => "two-disjoint-edges",
            Pattern::WedgeIsolated => "wedge+isolated",
            Pattern::TriangleIsolated => "triangle+isolated",
            Pattern::Claw => "claw",
            Pattern::Path4 => "path-4",
            Pattern::Cycle4 => "cycle-4",
            Pattern::Paw => "paw",
            Pattern::Diamond => "diamond",
            Pattern::K4 => "k4",
        }
    }

    /// A representative edge list on local vertices `0..order`.
    pub fn edges(self) -> &'static [(usize, usize)] {
        match self {
            Pattern::EdgelessTwo | Pattern::EdgelessThree | Pattern::EdgelessFour => &[],
            Pattern::Edge | Pattern::EdgeIsolated | Pattern::EdgeTwoIsolated => &[(0, 1)],
            Pattern::Wedge | Pattern::WedgeIsolated => &[(0, 1), (1, 2)],
            Pattern::Triangle | Pattern::TriangleIsolated => &[(0, 1), (1, 2), (0, 2)],
            Pattern::TwoDisjointEdges => &[(0, 1), (2, 3)],
            Pattern::Claw => &[(0, 1), (0, 2), (0, 3)],
            Pattern::Path4 => &[(0, 1), (1, 2), (2, 3)],
            Pattern::Cycle4 => &[(0, 1), (1, 2), (2, 3), (0, 3)],
            Pattern::Paw => &[(0, 1), (1, 2), (0, 2), (2, 3)],
            Pattern::Diamond => &[(0, 1), (1, 2), (0, 2), (1, 3), (2, 3)],
            Pattern::K4 => &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        }
    }

    /// Bitmask over [`PAIRS`] for the representative edge list.
    pub(crate) fn mask(self) -> u8 {
        self.edges()
            .iter()
            .map(|&(a, b)| 1u8 << pair_bit(a, b))
            .fold(0, |acc, bit| acc | bit)
    }

    /// Range of canonical indices holding the patterns of order `k`.
    pub fn order_range(k: usize) -> std::ops::Range<usize> {
        match k {
            2 => 0..2,
            3 => 2..6,
            4 => 6..17,
            _ => 0..0,
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub(crate) fn pair_bit(a: usize, b: usize) -> usize {
    let (a, b) = (a.min(b), a.max(b));
    PAIRS
        .iter()
        .position(|&p| p == (a, b))
        .expect("local vertices must be below 4")
}

/// Degree-sequence plus edge-count fingerprint; distinguishes all graphs on
/// at most four vertices.
fn fingerprint(k: usize, mask: u8) -> (usize, u32, [u8; 4]) {
    let mut deg = [0u8; 4];
    let mut edges = 0;
    for (bit, &(a, b)) in PAIRS.iter().enumerate().take(pair_count(k)) {
        if mask & (1 << bit) != 0 {
            deg[a] += 1;
            deg[b] += 1;
            edges += 1;
        }
    }
    deg[..k].sort_unstable_by(|x, y| y.cmp(x));
    (k, edges, deg)
}

/// `table[k-2][mask]` is the isomorphism class of the graph on `k` local
/// vertices with edge set `mask`.
fn class_table() -> &'static [Vec<Pattern>; 3] {
    static TABLE: OnceLock<[Vec<Pattern>; 3]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let build = |k: usize| {
            let reps: Vec<_> = Pattern::ALL
                .iter()
                .filter(|p| p.order() == k)
                .map(|&p| (fingerprint(k, p.mask()), p))
                .collect();
            (0u16..(1 << pair_count(k)))
                .map(|mask| {
                    let fp = fingerprint(k, mask as u8);
                    reps.iter()
                        .find(|(rfp, _)| *rfp == fp)
                        .map(|&(_, p)| p)
                        .expect("every small graph has a catalog class")
                })
                .collect::<Vec<_>>()
        };
        [build(2), build(3), build(4)]
    })
}

/// Isomorphism class of the graph on local vertices `0..k` whose edges are
/// the set bits of `mask` (see [`PAIRS`]).
#[inline]
pub fn classify(k: usize, mask: u8) -> Pattern {
    class_table()[k - 2][mask as usize]
}

/// Counts, for every pattern, the spanning subgraphs of the `k`-vertex graph
/// `mask` isomorphic to it, by enumerating every edge subset.
pub(crate) fn spanning_subgraph_census(k: usize, mask: u8, out: &mut [u64; PATTERN_COUNT]) {
    // Walk all submasks of `mask`, including 0.
    let mut sub = mask;
    loop {
        out[classify(k, sub).index()] += 1;
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & mask;
    }
}

pub type OverlapMatrix = [[u64; PATTERN_COUNT]; PATTERN_COUNT];

/// `O[i][j]` = number of subgraphs of pattern `j` isomorphic to pattern `i`
/// when both have the same order, 0 otherwise.
pub fn overlap_matrix() -> &'static OverlapMatrix {
    static MATRIX: OnceLock<OverlapMatrix> = OnceLock::new();
    MATRIX.get_or_init(|| {
        let mut o = [[0u64; PATTERN_COUNT]; PATTERN_COUNT];
        for fj in Pattern::ALL {
            let mut census = [0u64; PATTERN_COUNT];
            spanning_subgraph_census(fj.order(), fj.mask(), &mut census);
            for (i, &c) in census.iter().enumerate() {
                o[i][fj.index()] = c;
            }
        }
        o
    })
}

/// Solves `O x = h` by back-substitution (O is upper unit-triangular).
pub fn solve_overlap(h: &[f64; PATTERN_COUNT]) -> [f64; PATTERN_COUNT] {
    let o = overlap_matrix();
    let mut x = [0.0; PATTERN_COUNT];
    for i in (0..PATTERN_COUNT).rev() {
        let mut acc = h[i];
        for j in i + 1..PATTERN_COUNT {
            if o[i][j] != 0 {
                acc -= o[i][j] as f64 * x[j];
            }
        }
        x[i] = acc / o[i][i] as f64;
    }
    x
}
