//! Fractional chromatic number as an exact covering LP over maximal independent sets.
//!
//! `χ_f(G) = min Σ x_S` over maximal independent sets `S` subject to
//! `Σ_{S ∋ v} x_S ≥ 1` for every vertex. The solver works on the packing dual
//! (`max Σ y_v` with `Σ_{v ∈ S} y_v ≤ 1`) and returns both sides, which are
//! re-checked exactly before a certificate is handed out.

pub mod mis;
pub mod rational;
pub mod simplex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

pub use mis::maximal_independent_sets;
pub use rational::Rational;

/// The threshold the theorem asks `χ_f(G)` to exceed, `31/10`.
pub fn default_threshold() -> Rational {
    Rational::new(31, 10)
}

/// Enumeration limits for the LP column universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FractionalLimits {
    pub max_vertices: usize,
    pub max_columns: usize,
}

impl Default for FractionalLimits {
    fn default() -> Self {
        FractionalLimits {
            max_vertices: 256,
            max_columns: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightedSet {
    pub set: VertexSet,
    pub weight: Rational,
}

/// `χ_f` with matching primal and dual solutions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FractionalCertificate {
    pub value: Rational,
    /// Independent sets with positive weight; every vertex is covered with total weight ≥ 1.
    pub primal: Vec<WeightedSet>,
    /// Vertex weights summing to `value`, at most 1 on every independent set.
    pub dual: Vec<Rational>,
    /// Number of maximal independent sets in the LP.
    pub columns: usize,
}

impl FractionalCertificate {
    /// Re-checks feasibility of both sides and equality of their values.
    pub fn verify(&self, g: &Graph, columns: &[VertexSet]) -> Result<()> {
        let fail = |msg: String| Err(Error::precondition(format!("invalid certificate: {msg}")));
        if self.dual.len() != g.n() {
            return fail("dual has the wrong length".into());
        }
        if self.primal.iter().any(|w| w.weight.is_negative())
            || self.dual.iter().any(Rational::is_negative)
        {
            return fail("negative weight".into());
        }
        for w in &self.primal {
            if !g.is_independent(&w.set) {
                return fail(format!("primal set {:?} is not independent", w.set));
            }
        }
        for v in 0..g.n() {
            let cover: Rational = self
                .primal
                .iter()
                .filter(|w| w.set.contains(v))
                .map(|w| w.weight.clone())
                .sum();
            if cover < Rational::one() {
                return fail(format!("vertex {} covered only {cover}", v + 1));
            }
        }
        // nonnegative weights attain their maximum on maximal independent sets
        for s in columns {
            let load: Rational = s.iter().map(|v| self.dual[v].clone()).sum();
            if load > Rational::one() {
                return fail(format!("independent set {s:?} carries {load}"));
            }
        }
        let primal_value: Rational = self.primal.iter().map(|w| w.weight.clone()).sum();
        let dual_value: Rational = self.dual.iter().cloned().sum();
        if primal_value != self.value || dual_value != self.value {
            return fail(format!(
                "primal {primal_value}, dual {dual_value}, claimed {}",
                self.value
            ));
        }
        Ok(())
    }
}

pub fn fractional_chromatic_number(g: &Graph) -> Result<FractionalCertificate> {
    fractional_chromatic_number_with(g, &FractionalLimits::default())
}

pub fn fractional_chromatic_number_with(
    g: &Graph,
    limits: &FractionalLimits,
) -> Result<FractionalCertificate> {
    if g.has_loops() {
        return Err(Error::input(
            "fractional chromatic number needs a loopless graph",
        ));
    }
    if g.n() > limits.max_vertices {
        return Err(Error::resource(format!(
            "{} vertices exceed the enumeration cap of {}",
            g.n(),
            limits.max_vertices
        )));
    }
    let columns = maximal_independent_sets(g, limits.max_columns)?;
    let one = BigRational::one();
    let zero = BigRational::zero();
    let a: Vec<Vec<BigRational>> = columns
        .iter()
        .map(|s| {
            (0..g.n())
                .map(|v| {
                    if s.contains(v) {
                        one.clone()
                    } else {
                        zero.clone()
                    }
                })
                .collect()
        })
        .collect();
    let b = vec![one.clone(); columns.len()];
    let c = vec![one; g.n()];
    let sol = simplex::maximize(&a, &b, &c)?;
    let primal = columns
        .iter()
        .zip(sol.dual)
        .filter(|(_, x)| !x.is_zero())
        .map(|(s, x)| WeightedSet {
            set: s.clone(),
            weight: x.into(),
        })
        .collect();
    let cert = FractionalCertificate {
        value: sol.value.into(),
        primal,
        dual: sol.primal.into_iter().map(Rational::from).collect(),
        columns: columns.len(),
    };
    cert.verify(g, &columns)?;
    Ok(cert)
}

/// `⌈q · χ_f(G)⌉`, a lower bound on `χ(G ⊠ K_q)`.
pub fn strong_product_chi_lower_bound(chi_f: &Rational, q: usize) -> BigInt {
    (&Rational::from(q as u64) * chi_f).ceil()
}

/// Computes `χ_f(G)` first, then the bound.
pub fn strong_product_chi_lower_bound_for(g: &Graph, q: usize) -> Result<BigInt> {
    Ok(strong_product_chi_lower_bound(
        &fractional_chromatic_number(g)?.value,
        q,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    /// For vertex-transitive graphs χ_f = n / α; α by brute force over subsets.
    fn n_over_alpha(g: &Graph) -> Rational {
        let n = g.n();
        let alpha = (0u32..1 << n)
            .filter(|&m| g.edges().all(|(u, v)| m >> u & 1 == 0 || m >> v & 1 == 0))
            .map(|m| m.count_ones())
            .max()
            .unwrap();
        Rational::new(n as i64, alpha as i64)
    }

    #[test]
    fn complete_graphs() {
        for n in 1..=6 {
            assert_eq!(
                fractional_chromatic_number(&complete(n)).unwrap().value,
                Rational::integer(n as i64)
            );
        }
    }

    #[test]
    fn odd_cycles_and_petersen() {
        for k in 1..=3 {
            let g = cycle(2 * k + 1);
            let expected = Rational::new(2 * k as i64 + 1, k as i64);
            assert_eq!(n_over_alpha(&g), expected);
            assert_eq!(fractional_chromatic_number(&g).unwrap().value, expected);
        }
        let p = petersen();
        assert_eq!(n_over_alpha(&p), Rational::new(5, 2));
        assert_eq!(
            fractional_chromatic_number(&p).unwrap().value,
            Rational::new(5, 2)
        );
    }

    #[test]
    fn bipartite_and_edgeless() {
        assert_eq!(
            fractional_chromatic_number(&heawood()).unwrap().value,
            Rational::integer(2)
        );
        assert_eq!(
            fractional_chromatic_number(&Graph::empty(3).unwrap())
                .unwrap()
                .value,
            Rational::integer(1)
        );
    }

    #[test]
    fn tampered_certificates_fail_verification() {
        let g = cycle(5);
        let cols = maximal_independent_sets(&g, 100).unwrap();
        let cert = fractional_chromatic_number(&g).unwrap();
        let mut bad = cert.clone();
        bad.value = Rational::integer(2);
        assert!(bad.verify(&g, &cols).is_err());
        let mut bad = cert.clone();
        bad.dual[0] = Rational::integer(1);
        assert!(bad.verify(&g, &cols).is_err());
        let mut bad = cert;
        bad.primal.pop();
        assert!(bad.verify(&g, &cols).is_err());
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(
            strong_product_chi_lower_bound_for(&cycle(5), 2).unwrap(),
            BigInt::from(5)
        );
        assert_eq!(
            strong_product_chi_lower_bound_for(&complete(3), 4).unwrap(),
            BigInt::from(12)
        );
        assert_eq!(
            strong_product_chi_lower_bound_for(&cycle(7), 3).unwrap(),
            BigInt::from(7)
        );
    }

    #[test]
    fn limits_are_enforced() {
        let tight = FractionalLimits {
            max_vertices: 4,
            max_columns: 100,
        };
        assert!(matches!(
            fractional_chromatic_number_with(&cycle(5), &tight),
            Err(Error::Resource(_))
        ));
        let few = FractionalLimits {
            max_vertices: 100,
            max_columns: 3,
        };
        assert!(matches!(
            fractional_chromatic_number_with(&cycle(5), &few),
            Err(Error::Resource(_))
        ));
        assert!(fractional_chromatic_number(&cycle(5).add_loops()).is_err());
    }
}
