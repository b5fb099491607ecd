//! Maximal independent sets by Bron–Kerbosch with pivoting on the complement.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// All maximal independent sets of a loopless graph, in discovery order.
///
/// Stops with a resource error once more than `max_sets` have been found.
pub fn maximal_independent_sets(g: &Graph, max_sets: usize) -> Result<Vec<VertexSet>> {
    if g.has_loops() {
        return Err(Error::input(
            "independent sets are only defined for loopless graphs",
        ));
    }
    let n = g.n();
    // non-neighbours of each vertex, itself excluded
    let anti: Vec<FixedBitSet> = (0..n)
        .map(|v| {
            let mut row = g.row(v).clone();
            row.toggle_range(..);
            row.set(v, false);
            row
        })
        .collect();
    let mut out = Vec::new();
    let mut current = FixedBitSet::with_capacity(n);
    let mut candidates = FixedBitSet::with_capacity(n);
    candidates.insert_range(..);
    let excluded = FixedBitSet::with_capacity(n);
    expand(
        &anti,
        &mut current,
        candidates,
        excluded,
        &mut out,
        max_sets,
    )?;
    Ok(out)
}

fn expand(
    anti: &[FixedBitSet],
    current: &mut FixedBitSet,
    mut candidates: FixedBitSet,
    mut excluded: FixedBitSet,
    out: &mut Vec<VertexSet>,
    max_sets: usize,
) -> Result<()> {
    if candidates.is_clear() {
        if excluded.is_clear() {
            if out.len() == max_sets {
                return Err(Error::resource(format!(
                    "more than {max_sets} maximal independent sets; column generation would be needed"
                )));
            }
            out.push(VertexSet::from_bits(current.clone()));
        }
        return Ok(());
    }
    // pivot: the vertex of P ∪ X with the most non-neighbours in P
    let pivot = candidates
        .ones()
        .chain(excluded.ones())
        .max_by_key(|&u| {
            (
                anti[u].intersection(&candidates).count(),
                std::cmp::Reverse(u),
            )
        })
        .expect("nonempty");
    let mut branch = candidates.clone();
    branch.difference_with(&anti[pivot]);
    for v in branch.ones().collect::<Vec<_>>() {
        current.insert(v);
        let mut p = candidates.clone();
        p.intersect_with(&anti[v]);
        let mut x = excluded.clone();
        x.intersect_with(&anti[v]);
        expand(anti, current, p, x, out, max_sets)?;
        current.set(v, false);
        candidates.set(v, false);
        excluded.insert(v);
    }
    Ok(())
}
