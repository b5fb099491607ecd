//! The exponential graph `E_c(Γ)`.
//!
//! Vertices are all mappings `V(Γ) → {1..c}`; distinct `φ, ψ` are adjacent iff
//! `φ(x) ≠ ψ(y)` for every edge `{x, y}` of `Γ`, in both orientations, with a
//! loop at `x` demanding `φ(x) ≠ ψ(x)`. Mappings are indexed in base `c` with
//! vertex 0 as the most significant digit.
//!
//! Small instances can be materialized as a [`Graph`]; everything else goes
//! through the pairwise oracle [`exp_adjacent`].

use std::fmt;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::chromatic::{first_conflict, is_suited, Coloring};
use crate::error::{Error, Result};
use crate::graph::{Graph, Guard};
use crate::products::{strong_product_kq, tensor_product, ProductLayout, ProductVertex};

/// A mapping `V(Γ) → {1..c}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mapping {
    values: Vec<u32>,
}

impl Mapping {
    pub fn new(values: Vec<u32>, c: u32) -> Result<Self> {
        if let Some((v, &x)) = values.iter().enumerate().find(|(_, &x)| x == 0 || x > c) {
            return Err(Error::input(format!(
                "mapping sends vertex {v} to {x}, outside 1..={c}"
            )));
        }
        Ok(Mapping { values })
    }

    pub(crate) fn from_values_unchecked(values: Vec<u32>) -> Self {
        Mapping { values }
    }

    /// The mapping sending every vertex to `color`.
    pub fn constant(n: usize, color: u32) -> Self {
        Mapping {
            values: vec![color; n],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, v: usize) -> u32 {
        self.values[v]
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// `Im φ`, sorted.
    pub fn image(&self) -> Vec<u32> {
        let mut im = self.values.clone();
        im.sort_unstable();
        im.dedup();
        im
    }

    pub fn takes(&self, color: u32) -> bool {
        self.values.contains(&color)
    }
}

impl fmt::Display for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for Mapping {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.values.serialize(s)
    }
}

/// Parameters of `E_c(Γ)`.
#[derive(Debug, Clone)]
pub struct ExponentialContext {
    gamma: Graph,
    c: u32,
    guard: Guard,
}

/// Why two mappings are not adjacent in `E_c(Γ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NonAdjacency {
    /// The mappings are equal.
    Identical,
    /// `φ(x) = ψ(y) = color` on the edge `{x, y}` (0-based vertices of `Γ`).
    Conflict { x: usize, y: usize, color: u32 },
}

impl ExponentialContext {
    pub fn new(gamma: Graph, c: u32, guard: Guard) -> Result<Self> {
        if c == 0 {
            return Err(Error::input("palette size c must be at least 1"));
        }
        Ok(ExponentialContext { gamma, c, guard })
    }

    pub fn gamma(&self) -> &Graph {
        &self.gamma
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn n(&self) -> usize {
        self.gamma.n()
    }

    pub fn guard(&self) -> &Guard {
        &self.guard
    }

    /// `c^n`, or `None` if it overflows `u64`.
    pub fn vertex_count(&self) -> Option<u64> {
        (self.c as u64).checked_pow(u32::try_from(self.n()).ok()?)
    }

    pub fn is_materializable(&self) -> bool {
        self.guard.admits(self.vertex_count())
    }

    pub fn check(&self, phi: &Mapping) -> Result<()> {
        if phi.len() != self.n() {
            return Err(Error::input(format!(
                "mapping has {} values, Γ has {} vertices",
                phi.len(),
                self.n()
            )));
        }
        if let Some(&x) = phi.values.iter().find(|&&x| x == 0 || x > self.c) {
            return Err(Error::input(format!(
                "mapping value {x} outside 1..={}",
                self.c
            )));
        }
        Ok(())
    }

    /// Canonical index of `φ`.
    pub fn encode(&self, phi: &Mapping) -> Result<u64> {
        self.check(phi)?;
        if self.vertex_count().is_none() {
            return Err(Error::resource("c^n overflows 64-bit mapping indices"));
        }
        Ok(phi
            .values
            .iter()
            .fold(0u64, |acc, &x| acc * self.c as u64 + (x - 1) as u64))
    }

    /// Inverse of [`encode`](Self::encode); `index` must be below `c^n`.
    pub fn decode(&self, mut index: u64) -> Mapping {
        let c = self.c as u64;
        let mut values = vec![0u32; self.n()];
        for slot in values.iter_mut().rev() {
            *slot = (index % c) as u32 + 1;
            index /= c;
        }
        Mapping { values }
    }

    /// For each `y`, the colors `ψ(y)` may take if `ψ` is to be adjacent to `φ`:
    /// everything except `φ(N(y))`, with `N(y)` containing `y` when looped.
    pub fn allowed_palettes(&self, phi: &Mapping) -> Vec<Vec<u32>> {
        (0..self.n())
            .map(|y| {
                (1..=self.c)
                    .filter(|&col| self.gamma.neighbors(y).all(|x| phi.values[x] != col))
                    .collect()
            })
            .collect()
    }

    /// Canonical indices of all neighbours of `φ`, ascending.
    pub fn neighbor_indices(&self, phi: &Mapping) -> Vec<u64> {
        let palettes = self.allowed_palettes(phi);
        if palettes.iter().any(Vec::is_empty) {
            return Vec::new();
        }
        let c = self.c as u64;
        let own = self.encode(phi).expect("caller checked size");
        let mut out = Vec::new();
        let mut odometer = vec![0usize; palettes.len()];
        loop {
            let idx = odometer
                .iter()
                .zip(&palettes)
                .fold(0u64, |acc, (&k, pal)| acc * c + (pal[k] - 1) as u64);
            if idx != own {
                out.push(idx);
            }
            // odometer over the palettes, last vertex fastest, so indices ascend
            let mut pos = palettes.len();
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                odometer[pos] += 1;
                if odometer[pos] < palettes[pos].len() {
                    break;
                }
                odometer[pos] = 0;
            }
        }
    }

    /// Materializes `E_c(Γ)` under the guard.
    pub fn materialize(&self) -> Result<Graph> {
        self.guard.check(self.vertex_count(), "exponential graph")?;
        let count = self.vertex_count().unwrap() as usize;
        let rows: Vec<FixedBitSet> = (0..count)
            .into_par_iter()
            .map(|idx| {
                let phi = self.decode(idx as u64);
                let mut row = FixedBitSet::with_capacity(count);
                for nb in self.neighbor_indices(&phi) {
                    row.insert(nb as usize);
                }
                row
            })
            .collect();
        Graph::from_rows(rows)
    }
}

/// Why `φ` and `ψ` are not adjacent, or `None` if they are.
///
/// Edge conflicts are reported before identity, scanning `x` in vertex order.
pub fn nonadjacency(
    ctx: &ExponentialContext,
    phi: &Mapping,
    psi: &Mapping,
) -> Result<Option<NonAdjacency>> {
    ctx.check(phi)?;
    ctx.check(psi)?;
    for x in 0..ctx.n() {
        for y in ctx.gamma.neighbors(x) {
            if phi.values[x] == psi.values[y] {
                return Ok(Some(NonAdjacency::Conflict {
                    x,
                    y,
                    color: phi.values[x],
                }));
            }
        }
    }
    if phi == psi {
        return Ok(Some(NonAdjacency::Identical));
    }
    Ok(None)
}

pub fn exp_adjacent(ctx: &ExponentialContext, phi: &Mapping, psi: &Mapping) -> Result<bool> {
    Ok(nonadjacency(ctx, phi, psi)?.is_none())
}

/// Materialized `E_c(Γ)`.
pub fn exponential_graph(ctx: &ExponentialContext) -> Result<Graph> {
    ctx.materialize()
}

/// The `c` constant mappings, in color order.
pub fn constant_mappings(ctx: &ExponentialContext) -> Vec<Mapping> {
    (1..=ctx.c).map(|i| Mapping::constant(ctx.n(), i)).collect()
}

/// `(h, ψ) ↦ ψ(h)` on `Γ × E_c(Γ)` with layout `h * c^n + index(ψ)`.
///
/// Properness is checked on the materialized product before returning.
pub fn canonical_coloring(ctx: &ExponentialContext) -> Result<Coloring> {
    let exp = ctx.materialize()?;
    let product = tensor_product(&ctx.gamma, &exp, &ctx.guard)?;
    let layout = ProductLayout::new(ctx.n(), exp.n());
    let colors: Vec<u32> = (0..layout.len())
        .map(|i| {
            let ProductVertex { left, right } = layout.vertex(i);
            ctx.decode(right as u64).values[left]
        })
        .collect();
    let coloring = Coloring::new(colors, ctx.c)?;
    if let Some((a, b)) = first_conflict(&product, &coloring)? {
        return Err(Error::precondition(format!(
            "canonical coloring has a monochromatic edge between {} and {}",
            layout.vertex(a),
            layout.vertex(b)
        )));
    }
    Ok(coloring)
}

/// Outcome of checking the canonical coloring on sampled product edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleReport {
    pub seed: u64,
    pub requested: u64,
    pub checked: u64,
    pub violations: u64,
    /// Draws of `ψ` discarded because `ψ` had no neighbour in `E_c(Γ)`.
    pub redraws: u64,
    pub first_violation: Option<String>,
}

/// Checks `(h,ψ) ↦ ψ(h)` on random adjacent pairs of `Γ × E_c(Γ)`.
///
/// Each sample draws an oriented edge `(h, h')` of `Γ` uniformly, a mapping `ψ`
/// uniformly, and `ψ'` uniformly among the neighbours of `ψ` (built from the
/// allowed palettes and confirmed with [`exp_adjacent`]).
pub fn sample_canonical_coloring(
    ctx: &ExponentialContext,
    samples: u64,
    seed: u64,
) -> Result<SampleReport> {
    let mut report = SampleReport {
        seed,
        requested: samples,
        checked: 0,
        violations: 0,
        redraws: 0,
        first_violation: None,
    };
    let oriented: Vec<(usize, usize)> = (0..ctx.n())
        .flat_map(|x| ctx.gamma.neighbors(x).map(move |y| (x, y)))
        .collect();
    if oriented.is_empty() {
        return Ok(report);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_redraws = samples.saturating_mul(100).max(1000);
    while report.checked < samples {
        let psi = Mapping::from_values_unchecked(
            (0..ctx.n()).map(|_| rng.gen_range(1..=ctx.c)).collect(),
        );
        let palettes = ctx.allowed_palettes(&psi);
        let degree_is_zero = palettes.iter().any(Vec::is_empty)
            || (palettes.iter().all(|p| p.len() == 1)
                && palettes.iter().zip(&psi.values).all(|(p, &x)| p[0] == x));
        if degree_is_zero {
            report.redraws += 1;
            if report.redraws > max_redraws {
                return Err(Error::resource(format!(
                    "could not find mappings with neighbours after {max_redraws} draws"
                )));
            }
            continue;
        }
        let other = loop {
            let candidate: Vec<u32> = palettes
                .iter()
                .map(|p| p[rng.gen_range(0..p.len())])
                .collect();
            if candidate != psi.values {
                break Mapping::from_values_unchecked(candidate);
            }
        };
        if !exp_adjacent(ctx, &psi, &other)? {
            return Err(Error::precondition(format!(
                "sampler produced non-adjacent pair {psi}, {other}"
            )));
        }
        let (h, h2) = oriented[rng.gen_range(0..oriented.len())];
        report.checked += 1;
        if psi.values[h] == other.values[h2] {
            report.violations += 1;
            if report.first_violation.is_none() {
                report.first_violation = Some(format!("({},{psi}) ~ ({},{other})", h + 1, h2 + 1));
            }
        }
    }
    Ok(report)
}

/// Lifts a mapping on `V(G)` to the clique-constant mapping `(g,i) ↦ φ(g)` on `G ⊠ K_q`.
pub fn expand(phi: &Mapping, q: usize) -> Mapping {
    Mapping {
        values: phi
            .values
            .iter()
            .flat_map(|&x| std::iter::repeat_n(x, q))
            .collect(),
    }
}

/// Restricts a suited proper coloring `Λ` of `E_c(G ⊠ K_q)` to the clique-constant
/// mappings, read as a coloring of `E_c(Γ_G)` where `Γ_G` is `G` with all loops.
pub fn restrict_to_clique_constant(
    g: &Graph,
    q: usize,
    c: u32,
    lambda: &Coloring,
    guard: &Guard,
) -> Result<Coloring> {
    let big = ExponentialContext::new(strong_product_kq(g, q, guard)?, c, *guard)?;
    let small = ExponentialContext::new(g.add_loops(), c, *guard)?;
    let big_count = big.vertex_count();
    if big_count != Some(lambda.len() as u64) {
        return Err(Error::input(format!(
            "Λ has {} entries, E_c(G⊠K_q) has {} vertices",
            lambda.len(),
            big_count.map_or_else(|| "more than 2^64".into(), |n| n.to_string())
        )));
    }
    if lambda.palette() != c {
        return Err(Error::precondition(format!(
            "Λ uses a palette of {} instead of {c}",
            lambda.palette()
        )));
    }
    if !is_suited(lambda, &big)? {
        return Err(Error::precondition("Λ is not suited"));
    }
    if let Some((a, b)) = first_conflict(&big.materialize()?, lambda)? {
        return Err(Error::precondition(format!(
            "Λ is not proper: adjacent mappings {} and {} both have color {}",
            big.decode(a as u64),
            big.decode(b as u64),
            lambda.color(a)
        )));
    }
    let small_graph = small.materialize()?;
    let count = small.vertex_count().unwrap();
    let mut colors = Vec::with_capacity(count as usize);
    for idx in 0..count {
        let expanded = expand(&small.decode(idx), q);
        colors.push(lambda.color(big.encode(&expanded)? as usize));
    }
    let psi = Coloring::new(colors, c)?;
    if let Some((a, b)) = first_conflict(&small_graph, &psi)? {
        let (pa, pb) = (
            expand(&small.decode(a as u64), q),
            expand(&small.decode(b as u64), q),
        );
        return Err(Error::precondition(format!(
            "restriction is not proper: clique-constant mappings {pa} and {pb} both have color {}",
            psi.color(a)
        )));
    }
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chromatic::is_proper;
    use crate::graph::families::*;

    fn ctx(gamma: Graph, c: u32) -> ExponentialContext {
        ExponentialContext::new(gamma, c, Guard::default()).unwrap()
    }

    fn m(values: &[u32]) -> Mapping {
        Mapping::from_values_unchecked(values.to_vec())
    }

    #[test]
    fn adjacency_examples() {
        let k = ctx(complete(2), 2);
        assert!(exp_adjacent(&k, &m(&[1, 1]), &m(&[2, 2])).unwrap());
        assert_eq!(
            nonadjacency(&k, &m(&[1, 2]), &m(&[2, 1])).unwrap(),
            Some(NonAdjacency::Conflict {
                x: 0,
                y: 1,
                color: 1
            })
        );
        assert_eq!(
            nonadjacency(&k, &m(&[1, 2]), &m(&[1, 2])).unwrap(),
            Some(NonAdjacency::Identical)
        );
        assert!(exp_adjacent(&k, &m(&[1]), &m(&[2, 2])).is_err());
        assert!(exp_adjacent(&k, &m(&[1, 3]), &m(&[2, 2])).is_err());
    }

    #[test]
    fn encode_decode_round_trip() {
        let k = ctx(cycle(5), 3);
        for idx in 0..243 {
            assert_eq!(k.encode(&k.decode(idx)).unwrap(), idx);
        }
        // vertex 0 is the most significant digit
        assert_eq!(k.encode(&m(&[2, 1, 1, 1, 1])).unwrap(), 81);
    }

    #[test]
    fn e2_k2_has_a_single_edge() {
        let g = exponential_graph(&ctx(complete(2), 2)).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 3)]);
    }

    #[test]
    fn degenerate_gammas() {
        let looped = Graph::from_edges(1, [(0, 0)]).unwrap();
        assert_eq!(exponential_graph(&ctx(looped, 4)).unwrap(), complete(4));
        let edgeless = Graph::empty(2).unwrap();
        assert_eq!(exponential_graph(&ctx(edgeless, 3)).unwrap(), complete(9));
    }

    #[test]
    fn materialization_agrees_with_oracle() {
        for (gamma, c) in [
            (cycle(5), 2),
            (petersen(), 2),
            (complete(2).add_loops(), 3),
            (path(3), 3),
        ] {
            let k = ctx(gamma, c);
            let g = k.materialize().unwrap();
            for a in 0..g.n() {
                let phi = k.decode(a as u64);
                for b in 0..g.n() {
                    let psi = k.decode(b as u64);
                    assert_eq!(g.has_edge(a, b), exp_adjacent(&k, &phi, &psi).unwrap());
                }
            }
        }
    }

    #[test]
    fn guard_blocks_large_exponentials() {
        let k = ctx(petersen(), 4);
        assert!(matches!(k.materialize(), Err(Error::Resource(_))));
        let big = ctx(heawood(), 7);
        assert_eq!(big.vertex_count(), Some(678_223_072_849));
        assert!(!big.is_materializable());
        let huge = ctx(heawood(), 24);
        assert_eq!(huge.vertex_count(), None);
        assert!(huge.encode(&Mapping::constant(14, 1)).is_err());
    }

    #[test]
    fn constants_form_a_clique() {
        let k = ctx(complete(2), 2);
        assert_eq!(constant_mappings(&k), vec![m(&[1, 1]), m(&[2, 2])]);
        let k = ctx(cycle(6), 3);
        let cs = constant_mappings(&k);
        for a in &cs {
            for b in &cs {
                assert_eq!(exp_adjacent(&k, a, b).unwrap(), a != b);
            }
        }
        assert_eq!(constant_mappings(&ctx(cycle(6), 1)).len(), 1);
    }

    #[test]
    fn canonical_coloring_examples() {
        let col = canonical_coloring(&ctx(complete(2), 2)).unwrap();
        assert_eq!(col.len(), 8);
        let prod = tensor_product(
            &complete(2),
            &exponential_graph(&ctx(complete(2), 2)).unwrap(),
            &Guard::default(),
        )
        .unwrap();
        assert!(is_proper(&prod, &col).unwrap());
        assert!(canonical_coloring(&ctx(cycle(5), 2)).is_ok());
        let trivial = canonical_coloring(&ctx(Graph::empty(2).unwrap(), 1)).unwrap();
        assert!(trivial.colors().iter().all(|&x| x == 1));
    }

    #[test]
    fn sampled_canonical_coloring_has_no_violations() {
        let k = ctx(petersen(), 4);
        let report = sample_canonical_coloring(&k, 2_000, 7).unwrap();
        assert_eq!(report.checked, 2_000);
        assert_eq!(report.violations, 0);
        assert_eq!(report, sample_canonical_coloring(&k, 2_000, 7).unwrap());
    }

    #[test]
    fn neighbor_enumeration_skips_self() {
        let k = ctx(Graph::empty(1).unwrap(), 3);
        assert_eq!(k.neighbor_indices(&m(&[2])), vec![0, 2]);
    }

    #[test]
    fn expand_constants() {
        assert_eq!(
            expand(&Mapping::constant(3, 2), 4),
            Mapping::constant(12, 2)
        );
        assert_eq!(expand(&m(&[1, 2]), 2), m(&[1, 1, 2, 2]));
    }

    #[test]
    fn expansion_preserves_adjacency() {
        let g = complete(2);
        let small = ctx(g.add_loops(), 2);
        let big = ctx(strong_product_kq(&g, 2, &Guard::default()).unwrap(), 2);
        for a in 0..4 {
            for b in 0..4 {
                let (phi, psi) = (small.decode(a), small.decode(b));
                if exp_adjacent(&small, &phi, &psi).unwrap() {
                    assert!(exp_adjacent(&big, &expand(&phi, 2), &expand(&psi, 2)).unwrap());
                }
            }
        }
    }

    #[test]
    fn restriction_with_q_one_is_reindexing() {
        let g = complete(2);
        // E_2(K_2): only edge (1,1)-(2,2); suited coloring
        let lambda = Coloring::new(vec![1, 2, 1, 2], 2).unwrap();
        let psi = restrict_to_clique_constant(&g, 1, 2, &lambda, &Guard::default()).unwrap();
        assert_eq!(psi, lambda);
        let unsuited = Coloring::new(vec![2, 2, 1, 1], 2).unwrap();
        assert!(matches!(
            restrict_to_clique_constant(&g, 1, 2, &unsuited, &Guard::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn restriction_reports_improper_lambda() {
        // only the constants (2,2) and (3,3) get other colors, so adjacent pairs such as (1,1) ~ (2,3) clash
        let g = complete(2);
        let mut colors = vec![1; 9];
        colors[4] = 2;
        colors[8] = 3;
        let lambda = Coloring::new(colors, 3).unwrap();
        let err = restrict_to_clique_constant(&g, 1, 3, &lambda, &Guard::default()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        assert!(err.to_string().contains("(1,1) and (2,3)"), "{err}");
    }
}
