//! Desk-scale checks of the counterexample argument.
//!
//! Everything that enumerates `E_c(Γ)` needs a materializable instance and a
//! suited proper coloring, wrapped in [`SuitedColoring`]. The constructions of
//! the clique `M` and the mapping `ν` work through the adjacency oracle only,
//! so they run on any size of `G`.

mod report;

use num_bigint::BigUint;
use serde::Serialize;

use crate::chromatic::{first_conflict, is_suited, Coloring};
use crate::error::{Error, Result};
use crate::exponential::{nonadjacency, ExponentialContext, Mapping, NonAdjacency};
use crate::fractional::Rational;
use crate::graph::{Graph, Guard, Length};
use crate::products::{strong_product_kq, ProductLayout, ProductVertex};

pub use report::{
    verify_argument, ClaimReport, StepKind, StepReport, StepStatus, VerifyConfig, SCHEMA_VERSION,
};

/// A proper coloring of a materialized `E_c(Γ)` in which the constant mapping
/// `i` has color `i`.
#[derive(Debug, Clone)]
pub struct SuitedColoring<'a> {
    ctx: &'a ExponentialContext,
    coloring: Coloring,
}

impl<'a> SuitedColoring<'a> {
    /// Checks palette, properness and suitedness.
    pub fn new(ctx: &'a ExponentialContext, coloring: Coloring) -> Result<Self> {
        if coloring.palette() != ctx.c() {
            return Err(Error::precondition(format!(
                "palette {} differs from c = {}",
                coloring.palette(),
                ctx.c()
            )));
        }
        let graph = ctx.materialize()?;
        if let Some((a, b)) = first_conflict(&graph, &coloring)? {
            return Err(Error::precondition(format!(
                "coloring is not proper: {} and {} share a color",
                ctx.decode(a as u64),
                ctx.decode(b as u64)
            )));
        }
        if !is_suited(&coloring, ctx)? {
            return Err(Error::precondition("coloring is not suited"));
        }
        Ok(SuitedColoring { ctx, coloring })
    }

    pub fn ctx(&self) -> &ExponentialContext {
        self.ctx
    }

    pub fn coloring(&self) -> &Coloring {
        &self.coloring
    }

    pub fn color_of(&self, phi: &Mapping) -> Result<u32> {
        Ok(self.coloring.color(self.ctx.encode(phi)? as usize))
    }

    fn mappings(&self) -> impl Iterator<Item = (Mapping, u32)> + '_ {
        (0..self.coloring.len()).map(|i| (self.ctx.decode(i as u64), self.coloring.color(i)))
    }
}

/// `I(u, b)`: mappings of color `b` that send `u` to `b`.
pub fn class_i(psi: &SuitedColoring<'_>, u: usize, b: u32) -> Result<Vec<Mapping>> {
    psi.ctx.gamma().check_vertex(u)?;
    if b == 0 || b > psi.ctx.c() {
        return Err(Error::input(format!(
            "color {b} outside 1..={}",
            psi.ctx.c()
        )));
    }
    Ok(psi
        .mappings()
        .filter(|(phi, col)| *col == b && phi.get(u) == b)
        .map(|(phi, _)| phi)
        .collect())
}

/// A mapping whose color is missing from its image, i.e. a counterexample to
/// `Ψ(φ) ∈ Im φ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImageViolation {
    pub mapping: Mapping,
    pub color: u32,
}

/// Checks `Ψ(φ) ∈ Im φ` for every mapping; returns the first violation.
pub fn color_outside_image(psi: &SuitedColoring<'_>) -> Option<ImageViolation> {
    psi.mappings()
        .find(|(phi, col)| !phi.takes(*col))
        .map(|(mapping, color)| ImageViolation { mapping, color })
}

/// Whether every mapping lies in some `I(u, b)`; returns the first that does not.
pub fn i_classes_cover(psi: &SuitedColoring<'_>) -> Option<Mapping> {
    let n = psi.ctx.n();
    psi.mappings()
        .find(|(phi, col)| !(0..n).any(|u| phi.get(u) == *col))
        .map(|(phi, _)| phi)
}

/// `n² c^(n−2)`; a fraction when `n = 1`.
pub fn large_class_threshold(n: usize, c: u32) -> Rational {
    assert!(n >= 1 && c >= 1);
    let n2 = Rational::from((n * n) as u64);
    if n >= 2 {
        let power = BigUint::from(c).pow((n - 2) as u32);
        &n2 * &Rational::from(num_rational::BigRational::from_integer(power.into()))
    } else {
        &n2 * &Rational::new(1, c as i64)
    }
}

fn robust_rhs(n: usize, c: u32) -> BigUint {
    BigUint::from(n).pow(3) * BigUint::from(c).pow((n - 1) as u32)
}

/// Whether `k ≥ c − (n³ c^(n−1))^(1/n)`, decided exactly through
/// `(c − k)^n ≤ n³ c^(n−1)`.
pub fn robust_bound_met(n: usize, c: u32, k: usize) -> bool {
    assert!(n >= 1 && c >= 1);
    if k as u64 >= c as u64 {
        return true;
    }
    let gap = BigUint::from(c as u64 - k as u64);
    gap.pow(n as u32) <= robust_rhs(n, c)
}

/// Whether the bound is `≤ 0`, i.e. `c ≤ n³`.
pub fn robust_bound_is_vacuous(n: usize, c: u32) -> bool {
    (c as u128) <= (n as u128).pow(3)
}

/// `c − (n³ c^(n−1))^(1/n)`, rounded toward −∞ unless the root is an exact integer.
pub fn robust_count_bound(n: usize, c: u32) -> f64 {
    assert!(n >= 1 && c >= 1);
    let rhs = robust_rhs(n, c);
    let root = ((3.0 * (n as f64).ln() + (n as f64 - 1.0) * (c as f64).ln()) / n as f64).exp();
    let rounded = root.round();
    if rounded >= 0.0 && BigUint::from(rounded as u64).pow(n as u32) == rhs {
        return c as f64 - rounded;
    }
    let bound = c as f64 - root;
    bound - bound.abs().max(1.0) * 1e-9
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobustnessReport {
    /// 0-based vertex of `Γ`.
    pub v: usize,
    pub robust_colors: Vec<u32>,
    pub bound: f64,
    pub satisfied: bool,
    /// The bound is `≤ 0`, so `satisfied` holds for free.
    pub vacuous: bool,
}

/// Colors `b` whose class is `v`-robust: every member sends some vertex of
/// the closed neighbourhood of `v` to `b`. Empty classes count as robust.
pub fn robust_classes(psi: &SuitedColoring<'_>, v: usize) -> Result<RobustnessReport> {
    let gamma = psi.ctx.gamma();
    let closed = gamma.closed_neighborhood(v)?;
    let c = psi.ctx.c();
    let mut robust = vec![true; c as usize];
    for (phi, b) in psi.mappings() {
        if robust[b as usize - 1] && !closed.iter().any(|w| phi.get(w) == b) {
            robust[b as usize - 1] = false;
        }
    }
    let robust_colors: Vec<u32> = (1..=c).filter(|&b| robust[b as usize - 1]).collect();
    let n = gamma.n();
    Ok(RobustnessReport {
        v,
        satisfied: robust_bound_met(n, c, robust_colors.len()),
        robust_colors,
        bound: robust_count_bound(n, c),
        vacuous: robust_bound_is_vacuous(n, c),
    })
}

/// Robustness reports for every vertex of `Γ`.
pub fn robust_sweep(psi: &SuitedColoring<'_>) -> Result<Vec<RobustnessReport>> {
    (0..psi.ctx.n()).map(|v| robust_classes(psi, v)).collect()
}

fn check_construction_params(g: &Graph, q: usize, c: u32, v: usize) -> Result<()> {
    if g.has_loops() {
        return Err(Error::input("G must be a simple graph"));
    }
    g.check_vertex(v)?;
    if q == 0 {
        return Err(Error::input("q must be at least 1"));
    }
    if (c as usize) < 2 * q {
        return Err(Error::input(format!("c = {c} is below 2q = {}", 2 * q)));
    }
    Ok(())
}

/// `μ_t` on `G ⊠ K_q` given the distances from `v`: `i` on distance 0 or 2,
/// `q + i` on distance 1, `t` from distance 3 on (and across components).
fn mu(dist: &[Length], q: usize, t: u32) -> Mapping {
    let mut values = Vec::with_capacity(dist.len() * q);
    for d in dist {
        for i in 1..=q as u32 {
            values.push(match d {
                Length::Finite(0) | Length::Finite(2) => i,
                Length::Finite(1) => q as u32 + i,
                _ => t,
            });
        }
    }
    Mapping::from_values_unchecked(values)
}

/// Two members of `M` that fail to be adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueViolation {
    pub s: u32,
    pub t: u32,
    pub reason: NonAdjacency,
    /// The monochromatic product edge `(x, y)` for conflicts.
    pub edge: Option<(ProductVertex, ProductVertex)>,
}

/// The clique `M = {μ_{q+1}, …, μ_c}` in `E_c(G ⊠ K_q)` with its pairwise check.
#[derive(Debug, Clone, Serialize)]
pub struct CliqueM {
    pub v: usize,
    pub q: usize,
    pub c: u32,
    /// `(t, μ_t)` for `t = q+1..=c`.
    pub mappings: Vec<(u32, Mapping)>,
    pub girth: Length,
    pub warnings: Vec<String>,
    pub pairs_checked: usize,
    pub violation: Option<CliqueViolation>,
}

impl CliqueM {
    pub fn is_clique(&self) -> bool {
        self.violation.is_none()
    }

    pub fn mu(&self, t: u32) -> Option<&Mapping> {
        self.mappings.iter().find(|(s, _)| *s == t).map(|(_, m)| m)
    }
}

fn girth_warnings(g: &Graph) -> Result<(Length, Vec<String>)> {
    let girth = g.girth()?;
    let mut warnings = Vec::new();
    match girth {
        Length::Infinite => {
            warnings.push("G is a forest: the finite-girth hypothesis is unmet".into())
        }
        Length::Finite(k) if k < 6 => {
            warnings.push(format!("girth {k} < 6: the girth hypothesis is unmet"))
        }
        _ => {}
    }
    Ok((girth, warnings))
}

fn conflict_edge(
    reason: &NonAdjacency,
    layout: &ProductLayout,
) -> Option<(ProductVertex, ProductVertex)> {
    match *reason {
        NonAdjacency::Conflict { x, y, .. } => Some((layout.vertex(x), layout.vertex(y))),
        NonAdjacency::Identical => None,
    }
}

/// Builds `M` around `v` and checks all `(c−q)(c−q−1)/2` pairs with the oracle.
pub fn build_clique_m(g: &Graph, q: usize, c: u32, v: usize, guard: &Guard) -> Result<CliqueM> {
    check_construction_params(g, q, c, v)?;
    let (girth, warnings) = girth_warnings(g)?;
    let ctx = ExponentialContext::new(strong_product_kq(g, q, guard)?, c, *guard)?;
    let layout = ProductLayout::new(g.n(), q);
    let dist = g.distances_from(v)?;
    let mappings: Vec<(u32, Mapping)> = (q as u32 + 1..=c).map(|t| (t, mu(&dist, q, t))).collect();
    let mut pairs_checked = 0;
    let mut violation = None;
    'outer: for (a, (s, ms)) in mappings.iter().enumerate() {
        for (t, mt) in &mappings[a + 1..] {
            pairs_checked += 1;
            if let Some(reason) = nonadjacency(&ctx, ms, mt)? {
                violation = Some(CliqueViolation {
                    s: *s,
                    t: *t,
                    edge: conflict_edge(&reason, &layout),
                    reason,
                });
                break 'outer;
            }
        }
    }
    Ok(CliqueM {
        v,
        q,
        c,
        mappings,
        girth,
        warnings,
        pairs_checked,
        violation,
    })
}

/// `ν` together with its oracle check against `μ_τ`.
#[derive(Debug, Clone, Serialize)]
pub struct Nu {
    pub v: usize,
    pub tau: u32,
    pub sigma: u32,
    pub mapping: Mapping,
    /// `None` when `ν ~ μ_τ` in `E_c(G ⊠ K_q)`.
    pub nonadjacent: Option<NonAdjacency>,
    pub edge: Option<(ProductVertex, ProductVertex)>,
}

impl Nu {
    pub fn adjacent_to_mu(&self) -> bool {
        self.nonadjacent.is_none()
    }
}

/// Builds `ν`: `τ` on `N[v] × K_q`, `σ` on the rest.
///
/// Needs `τ ∈ {2q+1..c}`: for `τ ≤ 2q` some neighbour `w` of `v` has
/// `μ_τ(w, τ−q) = τ = ν(v, ·)`, so `ν` and `μ_τ` cannot be adjacent.
/// `σ` must avoid `{1..2q} ∪ {τ}`.
pub fn build_nu(
    g: &Graph,
    q: usize,
    c: u32,
    v: usize,
    tau: u32,
    sigma: u32,
    guard: &Guard,
) -> Result<Nu> {
    check_construction_params(g, q, c, v)?;
    let low = 2 * q as u32;
    if tau <= low || tau > c {
        return Err(Error::input(format!(
            "τ = {tau} must lie in {}..={c}",
            low + 1
        )));
    }
    if sigma <= low || sigma > c || sigma == tau {
        return Err(Error::input(format!(
            "σ = {sigma} must lie in {}..={c} and differ from τ = {tau}",
            low + 1
        )));
    }
    let ctx = ExponentialContext::new(strong_product_kq(g, q, guard)?, c, *guard)?;
    let layout = ProductLayout::new(g.n(), q);
    let dist = g.distances_from(v)?;
    let values = dist
        .iter()
        .flat_map(|d| {
            let col = if matches!(d, Length::Finite(0) | Length::Finite(1)) {
                tau
            } else {
                sigma
            };
            std::iter::repeat_n(col, q)
        })
        .collect();
    let mapping = Mapping::from_values_unchecked(values);
    let mu_tau = mu(&dist, q, tau);
    let nonadjacent = nonadjacency(&ctx, &mapping, &mu_tau)?;
    Ok(Nu {
        v,
        tau,
        sigma,
        edge: nonadjacent.as_ref().and_then(|r| conflict_edge(r, &layout)),
        mapping,
        nonadjacent,
    })
}

/// `μ_t` without the clique bookkeeping; `t` may be any color in `q+1..=c`.
pub fn mu_t(g: &Graph, q: usize, c: u32, v: usize, t: u32) -> Result<Mapping> {
    check_construction_params(g, q, c, v)?;
    if t <= q as u32 || t > c {
        return Err(Error::input(format!("t = {t} must lie in {}..={c}", q + 1)));
    }
    Ok(mu(&g.distances_from(v)?, q, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chromatic::{all_proper_colorings, make_suited};
    use crate::exponential::exp_adjacent;
    use crate::graph::families::*;

    fn looped_vertex() -> Graph {
        Graph::from_edges(1, [(0, 0)]).unwrap()
    }

    fn ctx(gamma: Graph, c: u32) -> ExponentialContext {
        ExponentialContext::new(gamma, c, Guard::default()).unwrap()
    }

    #[test]
    fn thresholds() {
        assert_eq!(large_class_threshold(2, 3), Rational::integer(4));
        assert_eq!(large_class_threshold(3, 10), Rational::integer(90));
        assert_eq!(large_class_threshold(1, 4), Rational::new(1, 4));
        assert_eq!(robust_count_bound(1, 7), 6.0);
        assert_eq!(robust_count_bound(1, 2), 1.0);
        // n = 2, c = 2: 2 − √16 = −2 exactly
        assert_eq!(robust_count_bound(2, 2), -2.0);
        let b = robust_count_bound(2, 100);
        let exact = 100.0 - (800f64).sqrt();
        assert!(b < exact && exact - b < 1e-6);
    }

    #[test]
    fn exact_bound_comparison() {
        // n=2, c=100: bound ≈ 71.72, so 72 robust colors suffice and 71 do not
        assert!(robust_bound_met(2, 100, 72));
        assert!(!robust_bound_met(2, 100, 71));
        assert!(robust_bound_met(1, 5, 4));
        assert!(!robust_bound_met(1, 5, 3));
        assert!(robust_bound_is_vacuous(2, 8));
        assert!(!robust_bound_is_vacuous(2, 9));
        assert!(robust_bound_met(2, 8, 0));
    }

    #[test]
    fn i_class_of_looped_vertex() {
        let k = ctx(looped_vertex(), 2);
        let psi = SuitedColoring::new(&k, Coloring::new(vec![1, 2], 2).unwrap()).unwrap();
        assert_eq!(class_i(&psi, 0, 1).unwrap(), vec![Mapping::constant(1, 1)]);
        assert!(class_i(&psi, 1, 1).is_err());
        assert!(class_i(&psi, 0, 3).is_err());
    }

    #[test]
    fn i_classes_partition_and_cover() {
        let k = ctx(complete(2).add_loops(), 3);
        let found = crate::chromatic::find_proper_coloring(
            &k.materialize().unwrap(),
            3,
            Default::default(),
        )
        .unwrap();
        let crate::chromatic::SearchOutcome::Sat(col) = found else {
            panic!("3-colorable")
        };
        let (suited, _) = make_suited(&col, &k).unwrap();
        let psi = SuitedColoring::new(&k, suited).unwrap();
        assert_eq!(i_classes_cover(&psi), None);
        for b in 1..=3 {
            let class: Vec<Mapping> = psi
                .coloring()
                .class(b)
                .into_iter()
                .map(|i| k.decode(i as u64))
                .collect();
            for u in 0..2 {
                assert!(class_i(&psi, u, b)
                    .unwrap()
                    .iter()
                    .all(|m| class.contains(m)));
            }
        }
    }

    #[test]
    fn robust_single_looped_vertex() {
        let k = ctx(looped_vertex(), 2);
        let psi = SuitedColoring::new(&k, Coloring::new(vec![1, 2], 2).unwrap()).unwrap();
        let r = robust_classes(&psi, 0).unwrap();
        assert_eq!(r.robust_colors, vec![1, 2]);
        assert_eq!(r.bound, 1.0);
        assert!(r.satisfied && !r.vacuous);
    }

    #[test]
    fn robust_two_looped_isolated_vertices() {
        let gamma = Graph::from_edges(2, [(0, 0), (1, 1)]).unwrap();
        let k = ctx(gamma, 2);
        // (1,1)→1, (1,2)→2, (2,1)→1, (2,2)→2
        let psi = SuitedColoring::new(&k, Coloring::new(vec![1, 2, 1, 2], 2).unwrap()).unwrap();
        assert!(!robust_classes(&psi, 0).unwrap().robust_colors.contains(&1));
        assert!(robust_classes(&psi, 1).unwrap().robust_colors.contains(&1));
    }

    #[test]
    fn edgeless_gamma_classes_are_robust() {
        // E_2 of an unlooped single vertex is K_2 on the two constants
        let k = ctx(Graph::empty(1).unwrap(), 2);
        let psi = SuitedColoring::new(&k, Coloring::new(vec![1, 2], 2).unwrap()).unwrap();
        assert_eq!(robust_classes(&psi, 0).unwrap().robust_colors, vec![1, 2]);
    }

    #[test]
    fn colors_lie_in_image_exhaustive_small() {
        for gamma in [looped_vertex(), complete(2).add_loops()] {
            let k = ctx(gamma, 2);
            let graph = k.materialize().unwrap();
            for col in all_proper_colorings(&graph, 2).unwrap() {
                if !is_suited(&col, &k).unwrap() {
                    continue;
                }
                let psi = SuitedColoring::new(&k, col).unwrap();
                assert_eq!(color_outside_image(&psi), None);
            }
        }
    }

    #[test]
    fn clique_m_on_c6() {
        let g = cycle(6);
        let m = build_clique_m(&g, 2, 7, 0, &Guard::default()).unwrap();
        assert_eq!(m.mappings.len(), 5);
        assert_eq!(m.pairs_checked, 10);
        assert!(m.is_clique(), "{:?}", m.violation);
        assert!(m.warnings.is_empty());
        // distance classes {0}, {1,5}, {2,4}, {3}
        let mu7 = m.mu(7).unwrap();
        assert_eq!(mu7.values(), &[1, 2, 3, 4, 1, 2, 7, 7, 1, 2, 3, 4]);
    }

    #[test]
    fn clique_m_on_c5_reports_the_dist_two_edge() {
        let m = build_clique_m(&cycle(5), 2, 7, 0, &Guard::default()).unwrap();
        assert!(!m.warnings.is_empty());
        let violation = m.violation.unwrap();
        assert_eq!((violation.s, violation.t), (3, 4));
        let (x, y) = violation.edge.unwrap();
        assert_eq!((x.left, y.left), (2, 3));
        assert_eq!(x.right, y.right);
        assert!(matches!(
            violation.reason,
            NonAdjacency::Conflict { color: 1, .. }
        ));
    }

    #[test]
    fn clique_m_parameter_errors() {
        assert!(build_clique_m(&cycle(6), 3, 5, 0, &Guard::default()).is_err());
        assert!(build_clique_m(&cycle(6), 0, 5, 0, &Guard::default()).is_err());
        assert!(build_clique_m(&cycle(6), 1, 4, 6, &Guard::default()).is_err());
        assert!(build_clique_m(&cycle(6).add_loops(), 1, 4, 0, &Guard::default()).is_err());
    }

    #[test]
    fn clique_m_size_is_c_minus_q() {
        for (q, c) in [(1, 4), (1, 2), (2, 4), (2, 9)] {
            let m = build_clique_m(&heawood(), q, c, 3, &Guard::default()).unwrap();
            assert_eq!(m.mappings.len(), c as usize - q);
            assert!(m.is_clique());
        }
    }

    #[test]
    fn nu_on_c6() {
        let g = cycle(6);
        let nu = build_nu(&g, 2, 7, 0, 7, 5, &Guard::default()).unwrap();
        assert_eq!(nu.mapping.values(), &[7, 7, 7, 7, 5, 5, 5, 5, 5, 5, 7, 7]);
        assert!(nu.adjacent_to_mu());
        assert_eq!(nu.mapping.image(), vec![5, 7]);
        let mu7 = mu_t(&g, 2, 7, 0, 7).unwrap();
        let k = ExponentialContext::new(
            strong_product_kq(&g, 2, &Guard::default()).unwrap(),
            7,
            Guard::default(),
        )
        .unwrap();
        assert!(exp_adjacent(&k, &nu.mapping, &mu7).unwrap());
    }

    #[test]
    fn nu_image_when_closed_neighbourhood_is_everything() {
        let nu = build_nu(&star(3), 1, 4, 0, 3, 4, &Guard::default()).unwrap();
        assert_eq!(nu.mapping.image(), vec![3]);
        assert!(nu.adjacent_to_mu());
    }

    #[test]
    fn nu_parameter_errors() {
        let g = cycle(6);
        assert!(build_nu(&g, 2, 7, 0, 7, 7, &Guard::default()).is_err());
        assert!(build_nu(&g, 2, 7, 0, 7, 4, &Guard::default()).is_err());
        assert!(build_nu(&g, 2, 7, 0, 8, 5, &Guard::default()).is_err());
        assert!(build_nu(&g, 2, 7, 0, 4, 5, &Guard::default()).is_err());
    }

    #[test]
    fn small_tau_meets_mu_on_a_neighbour() {
        // τ = q+1 ≤ 2q: ν(v,i) = τ = μ_τ(w,1) for a neighbour w of v
        let g = cycle(6);
        let (q, c, tau) = (2, 7, 3);
        let mu = mu_t(&g, q, c, 0, tau).unwrap();
        let mut nu_values = vec![5; 12];
        for g_vertex in [0, 1, 5] {
            nu_values[g_vertex * q] = tau;
            nu_values[g_vertex * q + 1] = tau;
        }
        let nu = Mapping::new(nu_values, c).unwrap();
        let k = ExponentialContext::new(
            strong_product_kq(&g, q, &Guard::default()).unwrap(),
            c,
            Guard::default(),
        )
        .unwrap();
        assert!(!exp_adjacent(&k, &nu, &mu).unwrap());
    }
}
