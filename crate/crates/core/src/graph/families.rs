//! Named graphs used throughout tests, examples and the acceptance corpus.

use super::Graph;

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid")
}

/// `C_n` on `0..n` with edges `{i, i+1 mod n}`; needs `n ≥ 3`.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycles need at least three vertices");
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid")
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid")
}

/// Centre `0` joined to `1..=leaves`.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("valid")
}

/// Hub `0` joined to a rim cycle on `1..=rim`.
pub fn wheel(rim: usize) -> Graph {
    let rim_edges = (0..rim).map(move |i| (1 + i, 1 + (i + 1) % rim));
    Graph::from_edges(rim + 1, (1..=rim).map(|i| (0, i)).chain(rim_edges)).expect("valid")
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    Graph::from_edges(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)))).expect("valid")
}

/// Outer 5-cycle `0..5`, inner pentagram `5..10`, spokes `i ~ i+5`.
pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    Graph::from_edges(10, outer.chain(inner).chain(spokes)).expect("valid")
}

/// Heawood graph: the 14-cycle with chords `i ~ i+5` from every even `i`. Cubic, girth 6.
pub fn heawood() -> Graph {
    let rim = (0..14).map(|i| (i, (i + 1) % 14));
    let chords = (0..14).step_by(2).map(|i| (i, (i + 5) % 14));
    Graph::from_edges(14, rim.chain(chords)).expect("valid")
}
