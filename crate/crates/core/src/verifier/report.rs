//! The step-by-step claim report for one input graph.

use num_traits::ToPrimitive;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::{
    build_clique_m, build_nu, color_outside_image, i_classes_cover, robust_sweep, CliqueM,
    SuitedColoring,
};
use crate::chromatic::{
    chromatic_number, find_proper_coloring, make_suited, Budget, SearchOutcome,
};
use crate::error::Error;
use crate::exponential::{
    canonical_coloring, restrict_to_clique_constant, sample_canonical_coloring, ExponentialContext,
};
use crate::fractional::{
    fractional_chromatic_number, strong_product_chi_lower_bound, FractionalCertificate, Rational,
};
use crate::graph::{Graph, Guard, Length};
use crate::products::strong_product_kq;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub q: usize,
    /// Palette size; `⌈threshold · q⌉` when unset.
    pub c: Option<u32>,
    pub threshold: Rational,
    pub budget: Budget,
    pub guard: Guard,
    pub seed: u64,
    /// Oracle-sampled product edges for the canonical coloring check.
    pub samples: u64,
    /// Upper limit on `(v, τ, σ)` triples checked for `ν`; larger sets are sampled.
    pub max_nu_checks: usize,
}

impl VerifyConfig {
    pub fn new(q: usize) -> Self {
        VerifyConfig {
            q,
            c: None,
            threshold: crate::fractional::default_threshold(),
            budget: Budget::nodes(50_000_000),
            guard: Guard::default(),
            seed: 0,
            samples: 100_000,
            max_nu_checks: 10_000,
        }
    }

    pub fn palette(&self) -> u32 {
        self.c.unwrap_or_else(|| {
            (&Rational::from(self.q as u64) * &self.threshold)
                .ceil()
                .to_u32()
                .expect("palette fits in u32")
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StepStatus {
    Pass,
    Fail,
    Skipped,
    Vacuous,
}

/// How a step's outcome bears on the exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    /// A hypothesis of the theorem checked on this input; informational.
    Hypothesis,
    /// A statement that must hold at any parameters; a FAIL is a real violation.
    Claim,
    /// A claim that relies on the girth hypothesis, which this input does not meet.
    Conditional,
    /// A conclusion only asserted for sufficiently large `q`; informational.
    Asymptotic,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepReport {
    pub step: &'static str,
    pub kind: StepKind,
    pub status: StepStatus,
    pub evidence: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimReport {
    pub schema: u32,
    pub params: Value,
    pub seed: u64,
    pub steps: Vec<StepReport>,
}

impl ClaimReport {
    pub fn step(&self, name: &str) -> Option<&StepReport> {
        self.steps.iter().find(|s| s.step == name)
    }

    /// Steps of kind [`StepKind::Claim`] that failed.
    pub fn claim_failures(&self) -> Vec<&StepReport> {
        self.steps
            .iter()
            .filter(|s| s.kind == StepKind::Claim && s.status == StepStatus::Fail)
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Builder {
    steps: Vec<StepReport>,
    girth_ok: bool,
}

impl Builder {
    fn push(&mut self, step: &'static str, kind: StepKind, status: StepStatus, evidence: Value) {
        self.steps.push(StepReport {
            step,
            kind,
            status,
            evidence,
        });
    }

    fn girth_dependent(&self) -> StepKind {
        if self.girth_ok {
            StepKind::Claim
        } else {
            StepKind::Conditional
        }
    }

    fn skip(&mut self, step: &'static str, kind: StepKind, reason: impl Into<String>) {
        self.push(
            step,
            kind,
            StepStatus::Skipped,
            json!({ "reason": reason.into() }),
        );
    }
}

fn pass_fail(ok: bool) -> StepStatus {
    if ok {
        StepStatus::Pass
    } else {
        StepStatus::Fail
    }
}

/// Runs every check the instance allows and records the outcome of each.
///
/// Step names, in order: `girth-hypothesis`, `fractional-hypothesis`,
/// `strong-product-bound`, `clique-m`, `nu-adjacency`, `exponential-coloring`,
/// `color-in-image`, `robust-classes`, `final-implications`, `canonical-coloring`.
pub fn verify_argument(g: &Graph, config: &VerifyConfig) -> ClaimReport {
    let q = config.q;
    let c = config.palette();
    let params = json!({
        "n": g.n(),
        "m": g.edge_count(),
        "q": q,
        "c": c,
        "threshold": config.threshold.to_string(),
        "guard_vertices": config.guard.max_vertices,
        "guard_pair_checks": config.guard.max_pair_checks,
        "node_budget": config.budget.nodes,
        "time_budget_ms": config.budget.time.map(|t| t.as_millis() as u64),
        "samples": config.samples,
    });
    let mut b = Builder {
        steps: Vec::new(),
        girth_ok: false,
    };

    // (a) girth
    match g.girth() {
        Ok(girth) => {
            b.girth_ok = matches!(girth, Length::Finite(k) if k >= 6);
            b.push(
                "girth-hypothesis",
                StepKind::Hypothesis,
                pass_fail(b.girth_ok),
                json!({ "girth": girth, "required": "finite and at least 6" }),
            );
        }
        Err(e) => b.push(
            "girth-hypothesis",
            StepKind::Hypothesis,
            StepStatus::Fail,
            json!({ "error": e.to_string() }),
        ),
    }
    if q == 0 || g.has_loops() {
        let reason = if q == 0 {
            "q must be at least 1"
        } else {
            "G must be simple"
        };
        for step in [
            "fractional-hypothesis",
            "strong-product-bound",
            "clique-m",
            "nu-adjacency",
            "exponential-coloring",
            "color-in-image",
            "robust-classes",
            "final-implications",
            "canonical-coloring",
        ] {
            b.skip(step, StepKind::Claim, reason);
        }
        return ClaimReport {
            schema: SCHEMA_VERSION,
            params,
            seed: config.seed,
            steps: b.steps,
        };
    }

    // (b) fractional chromatic number against the threshold
    let chi_f = fractional_step(&mut b, g, config);

    // (c) χ(G ⊠ K_q) ≥ ⌈q χ_f⌉
    strong_product_step(&mut b, g, q, c, chi_f.as_ref(), config);

    // (d) clique M around every vertex
    let cliques = clique_step(&mut b, g, q, c, config);

    // (e) ν ~ μ_τ
    nu_step(&mut b, g, q, c, config);

    // (f) suited coloring of E_c(G ⊠ K_q) and the sweeps built on it
    exponential_steps(&mut b, g, q, c, config, cliques.as_deref());

    // (g) canonical coloring of (G ⊠ K_q) × E_c(G ⊠ K_q)
    canonical_step(&mut b, g, q, c, config);

    ClaimReport {
        schema: SCHEMA_VERSION,
        params,
        seed: config.seed,
        steps: b.steps,
    }
}

fn fractional_step(
    b: &mut Builder,
    g: &Graph,
    config: &VerifyConfig,
) -> Option<FractionalCertificate> {
    match fractional_chromatic_number(g) {
        Ok(cert) => {
            let exceeds = cert.value > config.threshold;
            b.push(
                "fractional-hypothesis",
                StepKind::Hypothesis,
                pass_fail(exceeds),
                json!({
                    "chi_f": cert.value.to_string(),
                    "threshold": config.threshold.to_string(),
                    "exceeds_threshold": exceeds,
                    "certificate_verified": true,
                    "columns": cert.columns,
                }),
            );
            Some(cert)
        }
        Err(e) => {
            b.skip("fractional-hypothesis", StepKind::Hypothesis, e.to_string());
            None
        }
    }
}

fn strong_product_step(
    b: &mut Builder,
    g: &Graph,
    q: usize,
    c: u32,
    chi_f: Option<&FractionalCertificate>,
    config: &VerifyConfig,
) {
    const STEP: &str = "strong-product-bound";
    let Some(cert) = chi_f else {
        b.skip(
            STEP,
            StepKind::Claim,
            "fractional chromatic number unavailable",
        );
        return;
    };
    let bound = strong_product_chi_lower_bound(&cert.value, q);
    let product = match strong_product_kq(g, q, &config.guard) {
        Ok(p) => p,
        Err(e) => {
            b.skip(STEP, StepKind::Claim, e.to_string());
            return;
        }
    };
    let exceeds_c = bound > num_bigint::BigInt::from(c);
    match chromatic_number(&product, config.budget) {
        Ok(chi) => {
            let ok = num_bigint::BigInt::from(chi.value) >= bound;
            b.push(
                STEP,
                StepKind::Claim,
                pass_fail(ok),
                json!({
                    "lower_bound": bound.to_string(),
                    "chi": chi.value,
                    "lower_bound_exceeds_c": exceeds_c,
                }),
            );
        }
        Err(Error::Timeout { lower, upper }) => {
            // the greedy coloring bounds χ from above, so it must respect the LP bound
            let ok = num_bigint::BigInt::from(upper) >= bound;
            b.push(
                STEP,
                StepKind::Claim,
                pass_fail(ok),
                json!({
                    "lower_bound": bound.to_string(),
                    "chi": "timeout",
                    "search_lower": lower,
                    "search_upper": upper,
                    "lower_bound_exceeds_c": exceeds_c,
                }),
            );
        }
        Err(e) => b.skip(STEP, StepKind::Claim, e.to_string()),
    }
}

fn clique_evidence(m: &CliqueM) -> Value {
    let violation = m.violation.as_ref().map(|v| {
        json!({
            "s": v.s,
            "t": v.t,
            "reason": v.reason,
            "edge": v.edge.map(|(x, y)| [x.to_string(), y.to_string()]),
        })
    });
    json!({
        "v": m.v + 1,
        "size": m.mappings.len(),
        "pairs_checked": m.pairs_checked,
        "clique": m.is_clique(),
        "violation": violation,
    })
}

fn clique_step(
    b: &mut Builder,
    g: &Graph,
    q: usize,
    c: u32,
    config: &VerifyConfig,
) -> Option<Vec<CliqueM>> {
    const STEP: &str = "clique-m";
    let kind = b.girth_dependent();
    if (c as usize) < 2 * q {
        b.skip(STEP, kind, format!("c = {c} is below 2q = {}", 2 * q));
        return None;
    }
    let mut cliques = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        match build_clique_m(g, q, c, v, &config.guard) {
            Ok(m) => cliques.push(m),
            Err(e) => {
                b.skip(STEP, kind, e.to_string());
                return None;
            }
        }
    }
    let all = cliques.iter().all(CliqueM::is_clique);
    let first_failure = cliques.iter().find(|m| !m.is_clique()).map(clique_evidence);
    b.push(
        STEP,
        kind,
        pass_fail(all),
        json!({
            "warnings": cliques[0].warnings,
            "per_vertex": cliques.iter().map(clique_evidence).collect::<Vec<_>>(),
            "first_failure": first_failure,
        }),
    );
    Some(cliques)
}

fn nu_step(b: &mut Builder, g: &Graph, q: usize, c: u32, config: &VerifyConfig) {
    const STEP: &str = "nu-adjacency";
    let kind = b.girth_dependent();
    let low = 2 * q as u32;
    if c < low + 2 {
        b.skip(
            STEP,
            kind,
            format!("needs two colors above 2q = {low}, but c = {c}"),
        );
        return;
    }
    let colors: Vec<u32> = (low + 1..=c).collect();
    let mut triples = Vec::new();
    for v in 0..g.n() {
        for &tau in &colors {
            for &sigma in colors.iter().filter(|&&s| s != tau) {
                triples.push((v, tau, sigma));
            }
        }
    }
    let total = triples.len();
    let sampled = total > config.max_nu_checks;
    if sampled {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut picked = sample(&mut rng, total, config.max_nu_checks).into_vec();
        picked.sort_unstable();
        triples = picked.into_iter().map(|i| triples[i]).collect();
    }
    let mut adjacent = 0usize;
    let mut first_failure = None;
    for &(v, tau, sigma) in &triples {
        match build_nu(g, q, c, v, tau, sigma, &config.guard) {
            Ok(nu) if nu.adjacent_to_mu() => adjacent += 1,
            Ok(nu) => {
                first_failure.get_or_insert_with(|| {
                    json!({
                        "v": v + 1, "tau": tau, "sigma": sigma,
                        "reason": nu.nonadjacent,
                        "edge": nu.edge.map(|(x, y)| [x.to_string(), y.to_string()]),
                    })
                });
            }
            Err(e) => {
                b.skip(STEP, kind, e.to_string());
                return;
            }
        }
    }
    b.push(
        STEP,
        kind,
        pass_fail(adjacent == triples.len()),
        json!({
            "triples_total": total,
            "checked": triples.len(),
            "sampled": sampled,
            "adjacent": adjacent,
            "first_failure": first_failure,
        }),
    );
}

fn exponential_steps(
    b: &mut Builder,
    g: &Graph,
    q: usize,
    c: u32,
    config: &VerifyConfig,
    cliques: Option<&[CliqueM]>,
) {
    const FOLLOWERS: [&str; 3] = ["color-in-image", "robust-classes", "final-implications"];
    let skip_rest = |b: &mut Builder, reason: &str| {
        for step in FOLLOWERS {
            let kind = if step == "final-implications" {
                b.girth_dependent()
            } else {
                StepKind::Claim
            };
            b.skip(step, kind, reason);
        }
    };
    let product = match strong_product_kq(g, q, &config.guard) {
        Ok(p) => p,
        Err(e) => {
            b.skip("exponential-coloring", StepKind::Asymptotic, e.to_string());
            skip_rest(b, "no coloring of E_c(G⊠K_q) available");
            return;
        }
    };
    let big = ExponentialContext::new(product, c, config.guard).expect("c ≥ 1");
    if !big.is_materializable() {
        let size = big
            .vertex_count()
            .map_or_else(|| "more than 2^64".to_string(), |n| n.to_string());
        b.skip(
            "exponential-coloring",
            StepKind::Asymptotic,
            format!("E_c(G⊠K_q) has {size} vertices, beyond the materialization guard"),
        );
        skip_rest(b, "no coloring of E_c(G⊠K_q) available");
        return;
    }
    let graph = match big.materialize() {
        Ok(graph) => graph,
        Err(e) => {
            b.skip("exponential-coloring", StepKind::Asymptotic, e.to_string());
            skip_rest(b, "no coloring of E_c(G⊠K_q) available");
            return;
        }
    };
    let lambda = match find_proper_coloring(&graph, c, config.budget) {
        Ok(SearchOutcome::Unsat) => {
            b.push(
                "exponential-coloring",
                StepKind::Asymptotic,
                StepStatus::Pass,
                json!({ "vertices": graph.n(), "result": "unsat", "chi_exceeds_c": true }),
            );
            skip_rest(b, "E_c(G⊠K_q) has no proper c-coloring");
            return;
        }
        Ok(SearchOutcome::Timeout) | Err(_) => {
            b.skip(
                "exponential-coloring",
                StepKind::Asymptotic,
                "search budget exhausted",
            );
            skip_rest(b, "no coloring of E_c(G⊠K_q) available");
            return;
        }
        Ok(SearchOutcome::Sat(coloring)) => coloring,
    };
    let (suited, perm) = make_suited(&lambda, &big).expect("solver colorings are proper");
    b.push(
        "exponential-coloring",
        StepKind::Asymptotic,
        StepStatus::Fail,
        json!({
            "vertices": graph.n(),
            "result": "sat",
            "chi_exceeds_c": false,
            "relabeling": perm,
            "class_sizes": suited.class_sizes(),
        }),
    );
    let lambda = SuitedColoring::new(&big, suited).expect("suited by construction");

    let image = color_outside_image(&lambda);
    let uncovered = i_classes_cover(&lambda);
    b.push(
        "color-in-image",
        StepKind::Claim,
        pass_fail(image.is_none() && uncovered.is_none()),
        json!({
            "mappings_checked": graph.n(),
            "violation": image,
            "uncovered_by_i_classes": uncovered,
        }),
    );

    let small = ExponentialContext::new(g.add_loops(), c, config.guard).expect("c ≥ 1");
    let psi = restrict_to_clique_constant(g, q, c, lambda.coloring(), &config.guard)
        .and_then(|psi| SuitedColoring::new(&small, psi));
    let psi = match psi {
        Ok(psi) => psi,
        Err(e) => {
            b.push(
                "robust-classes",
                StepKind::Claim,
                StepStatus::Fail,
                json!({ "error": e.to_string() }),
            );
            b.skip(
                "final-implications",
                b.girth_dependent(),
                "restriction failed",
            );
            return;
        }
    };
    let reports = match robust_sweep(&psi) {
        Ok(r) => r,
        Err(e) => {
            b.skip("robust-classes", StepKind::Claim, e.to_string());
            b.skip(
                "final-implications",
                b.girth_dependent(),
                "no robustness data",
            );
            return;
        }
    };
    let satisfied: Vec<usize> = reports
        .iter()
        .filter(|r| r.satisfied)
        .map(|r| r.v)
        .collect();
    let vacuous = reports[0].vacuous;
    let status = if satisfied.is_empty() {
        StepStatus::Fail
    } else if vacuous {
        StepStatus::Vacuous
    } else {
        StepStatus::Pass
    };
    b.push(
        "robust-classes",
        StepKind::Claim,
        status,
        json!({
            "n": g.n(),
            "c": c,
            "bound": reports[0].bound,
            "vacuous": vacuous,
            "per_vertex": reports.iter().map(|r| json!({
                "v": r.v + 1,
                "robust_colors": r.robust_colors,
                "satisfied": r.satisfied,
            })).collect::<Vec<_>>(),
            "satisfied_vertices": satisfied.iter().map(|v| v + 1).collect::<Vec<_>>(),
            "restriction_color_outside_image": color_outside_image(&psi),
        }),
    );

    let kind = b.girth_dependent();
    let Some(&v) = satisfied.first() else {
        b.skip(
            "final-implications",
            kind,
            "no vertex attains the robustness bound",
        );
        return;
    };
    let Some(m) = cliques.and_then(|cl| cl.get(v)) else {
        b.skip("final-implications", kind, "clique M unavailable");
        return;
    };
    final_implications(
        b,
        g,
        q,
        c,
        config,
        &lambda,
        &reports[v].robust_colors,
        m,
        kind,
    );
}

#[allow(clippy::too_many_arguments)]
fn final_implications(
    b: &mut Builder,
    g: &Graph,
    q: usize,
    c: u32,
    config: &VerifyConfig,
    lambda: &SuitedColoring<'_>,
    robust_colors: &[u32],
    m: &CliqueM,
    kind: StepKind,
) {
    const STEP: &str = "final-implications";
    let low = 2 * q as u32;
    let mut mu_colors = Vec::new();
    for (t, mu) in &m.mappings {
        let col = lambda.color_of(mu).expect("materialized");
        mu_colors.push(json!({ "t": t, "color": col, "in_image": mu.takes(col) }));
    }
    let tau = m
        .mappings
        .iter()
        .find(|(_, mu)| lambda.color_of(mu).expect("materialized") > low)
        .map(|(t, mu)| (*t, lambda.color_of(mu).expect("materialized")));
    let Some((tau, tau_color)) = tau else {
        b.push(
            STEP,
            kind,
            StepStatus::Skipped,
            json!({
                "reason": "every μ_t has a color in 1..=2q, so no τ is available",
                "v": m.v + 1,
                "mu_colors": mu_colors,
            }),
        );
        return;
    };
    let mut ok = tau == tau_color;
    let mut per_sigma = Vec::new();
    for sigma in (low + 1..=c).filter(|&s| s != tau) {
        let nu = match build_nu(g, q, c, m.v, tau, sigma, &config.guard) {
            Ok(nu) => nu,
            Err(e) => {
                b.skip(STEP, kind, e.to_string());
                return;
            }
        };
        let col = lambda.color_of(&nu.mapping).expect("materialized");
        let in_image = nu.mapping.takes(col);
        let robust = robust_colors.contains(&sigma);
        let not_sigma = !robust || col != sigma;
        ok &= in_image && not_sigma;
        per_sigma.push(json!({
            "sigma": sigma,
            "sigma_robust": robust,
            "nu_adjacent_to_mu_tau": nu.adjacent_to_mu(),
            "lambda_nu": col,
            "lambda_nu_in_image": in_image,
            "robust_excludes_sigma": not_sigma,
        }));
    }
    b.push(
        STEP,
        kind,
        pass_fail(ok),
        json!({
            "v": m.v + 1,
            "tau": tau,
            "lambda_mu_tau": tau_color,
            "mu_colors": mu_colors,
            "per_sigma": per_sigma,
        }),
    );
}

fn canonical_step(b: &mut Builder, g: &Graph, q: usize, c: u32, config: &VerifyConfig) {
    const STEP: &str = "canonical-coloring";
    let product = match strong_product_kq(g, q, &config.guard) {
        Ok(p) => p,
        Err(e) => {
            b.skip(STEP, StepKind::Claim, e.to_string());
            return;
        }
    };
    let n = product.n() as u64;
    let ctx = ExponentialContext::new(product, c, config.guard).expect("c ≥ 1");
    let product_size = ctx.vertex_count().and_then(|k| k.checked_mul(n));
    if ctx.is_materializable() && config.guard.admits(product_size) {
        match canonical_coloring(&ctx) {
            Ok(coloring) => b.push(
                STEP,
                StepKind::Claim,
                StepStatus::Pass,
                json!({ "mode": "exhaustive", "vertices": coloring.len(), "proper": true }),
            ),
            Err(e) => b.push(
                STEP,
                StepKind::Claim,
                StepStatus::Fail,
                json!({ "error": e.to_string() }),
            ),
        }
        return;
    }
    match sample_canonical_coloring(&ctx, config.samples, config.seed) {
        Ok(report) => b.push(
            STEP,
            StepKind::Claim,
            pass_fail(report.violations == 0),
            json!({
                "mode": "sampled",
                "seed": report.seed,
                "checked": report.checked,
                "violations": report.violations,
                "redraws": report.redraws,
                "first_violation": report.first_violation,
            }),
        ),
        Err(e) => b.skip(STEP, StepKind::Claim, e.to_string()),
    }
}
