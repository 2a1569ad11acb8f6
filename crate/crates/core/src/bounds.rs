//! Eigenvalue bounds for trees, their equality characterizations, and
//! machine-readable verification reports.
//!
//! Every bound here is a proved theorem for its graph class, so a violation
//! on valid input is treated as a solver defect: `check_all` and
//! `monotonicity_check` abort with diagnostics instead of recording it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::closed_form::{dirichlet_spectrum, neumann_decoupled_spectrum, ClosedFormError};
use crate::exact::ExactLength;
use crate::graph::{GraphError, MetricGraph};
use crate::secular::{eigenvalues_with, SecularError, SolveOptions};
use crate::spectrum::Spectrum;

const PI: f64 = std::f64::consts::PI;

/// Relative tolerance for equality flags: three orders above the solver
/// tolerance, separating true equalities from near misses at desk scale.
pub const EQUALITY_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    ClosedForm(#[from] ClosedFormError),
    #[error(transparent)]
    Secular(#[from] SecularError),
    #[error("average-length bound requires at least 2 edges, got {0}")]
    EdgeCountTooSmall(usize),
    #[error("spectrum has {got} entries, need at least {needed}")]
    InsufficientSpectrum { needed: usize, got: usize },
    #[error("operation requires purely rational edge lengths; edge #{edge_index} is {length}")]
    IrrationalLength {
        edge_index: usize,
        length: Box<ExactLength>,
    },
    #[error(
        "theorem violation on {graph_id}: {bound} at k={k}: bound {bound_value:.12e} < λ = {lambda:.12e} (margin {margin:.3e}); this indicates a solver bug"
    )]
    TheoremViolation {
        graph_id: String,
        k: usize,
        bound: &'static str,
        bound_value: f64,
        lambda: f64,
        margin: f64,
    },
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// `k²·|E|²·π² / (4·L(G)²)`: the average-length bound for trees, `|E| >= 2`.
pub fn bound_average(k: usize, edge_count: usize, total_length: f64) -> Result<f64, BoundsError> {
    if edge_count < 2 {
        return Err(BoundsError::EdgeCountTooSmall(edge_count));
    }
    let k = k as f64;
    let e = edge_count as f64;
    Ok(k * k * e * e * PI * PI / (4.0 * total_length * total_length))
}

/// `k²π²/diam²`: the diameter bound for trees.
pub fn bound_diameter(k: usize, diam: f64) -> f64 {
    let k = k as f64;
    k * k * PI * PI / (diam * diam)
}

/// `k²π²/L_max²`: the longest-edge bound for trees.
pub fn bound_lmax(k: usize, longest_edge: f64) -> f64 {
    let k = k as f64;
    k * k * PI * PI / (longest_edge * longest_edge)
}

/// `|E|²π²/L(G)²`: the general-graph spectral gap bound. The edge count must
/// be taken after subdividing loop edges (a one-edge loop would read |E|=1).
pub fn bound_kkmm(edge_count: usize, total_length: f64) -> f64 {
    let e = edge_count as f64;
    e * e * PI * PI / (total_length * total_length)
}

/// True iff `a/b` is irrational. In Q + Q·√2 this holds exactly when the
/// coefficient vectors are not parallel over Q.
pub fn rationally_independent(a: &ExactLength, b: &ExactLength) -> bool {
    assert!(a.is_positive() && b.is_positive(), "lengths must be positive");
    !a.is_rational_multiple_of(b)
}

/// True iff some pair of edge lengths is rationally independent. Rational
/// dependence is transitive, so comparing everything against the first edge
/// suffices.
pub fn has_rationally_independent_pair(graph: &MetricGraph) -> bool {
    let edges = graph.edges();
    if edges.len() < 2 {
        return false;
    }
    let first = &edges[0].length;
    edges[1..]
        .iter()
        .any(|e| rationally_independent(&e.length, first))
}

/// The equality class of the k = 1 average-length bound, i.e. trees whose
/// spectral gap meets `|E|²π²/(4L²)` exactly: equilateral stars, plus every
/// 2-edge tree. A 2-edge tree of any split is isometric to the equilateral
/// 2-star (the interval halved at its midpoint) — degree-2 vertices are
/// spectrally invisible but still count toward |E| in the bound, and for
/// |E| = 2 the two effects cancel exactly.
pub fn is_gap_equality_class(graph: &MetricGraph) -> Result<bool, BoundsError> {
    if graph.edge_count() == 2 && graph.is_tree()? {
        return Ok(true);
    }
    Ok(graph.is_equilateral_star()?)
}

/// The equality index of the Dirichlet comparison for all-rational trees.
#[derive(Clone, Debug)]
pub struct GdEqualityIndex {
    /// Minimal x > 0 with x·L(e) ∈ N for every edge.
    pub x: BigRational,
    /// k = x·L(G); at this index λ_{k+1}(G) = λ_k^D(G).
    pub index: u64,
}

/// Minimal `x > 0` with `x·L(e) ∈ N` for all edges (lcm of denominators over
/// gcd of numerators), and the index `k = x·L(G)` where the Dirichlet
/// comparison is an equality.
pub fn gd_equality_index(graph: &MetricGraph) -> Result<GdEqualityIndex, BoundsError> {
    graph.require_valid()?;
    let mut denominator_lcm = BigInt::one();
    let mut numerator_gcd = BigInt::zero();
    for (i, e) in graph.edges().iter().enumerate() {
        if !e.length.is_rational() {
            return Err(BoundsError::IrrationalLength {
                edge_index: i,
                length: Box::new(e.length.clone()),
            });
        }
        let r = e.length.rational_part();
        denominator_lcm = denominator_lcm.lcm(r.denom());
        numerator_gcd = numerator_gcd.gcd(r.numer());
    }
    let x = BigRational::new(denominator_lcm, numerator_gcd);
    let k_exact = &x * graph.total_length().rational_part();
    if !k_exact.denom().is_one() {
        return Err(BoundsError::Internal(format!(
            "equality index x·L(G) = {k_exact} is not an integer"
        )));
    }
    let index = k_exact
        .numer()
        .to_u64()
        .ok_or_else(|| BoundsError::Internal("equality index out of range".into()))?;
    Ok(GdEqualityIndex { x, index })
}

/// One report row: eigenvalue λ_{k+1} against every applicable bound.
/// Option fields are empty when the bound does not apply (non-tree input or
/// |E| < 2 for the average bound).
#[derive(Clone, Debug, Serialize)]
pub struct BoundRow {
    pub k: usize,
    pub lambda: f64,
    pub bound_avg: Option<f64>,
    pub bound_diam: Option<f64>,
    pub bound_lmax: Option<f64>,
    pub lambda_kd: f64,
    pub lambda_nk1: f64,
    pub sat_avg: Option<f64>,
    pub sat_diam: Option<f64>,
    pub sat_lmax: Option<f64>,
    pub sat_dirichlet: Option<f64>,
    pub eq_avg: Option<bool>,
    pub eq_diam: Option<bool>,
    pub eq_lmax: Option<bool>,
    pub eq_dirichlet: Option<bool>,
    pub strict_expected: bool,
}

/// The spectral-gap check against the general-graph bound, evaluated after
/// loop subdivision. Reported separately from the per-k rows.
#[derive(Clone, Debug, Serialize)]
pub struct KkmmCheck {
    pub edge_count: usize,
    pub bound: f64,
    pub lambda_2: f64,
    pub margin: f64,
    pub equality: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub graph_id: String,
    pub is_tree: bool,
    pub rows: Vec<BoundRow>,
    pub kkmm: KkmmCheck,
}

impl BoundReport {
    pub const CSV_HEADER: &'static str = "graph_id,k,lambda,bound_avg,bound_diam,bound_lmax,lambda_kD,lambda_Nk1,sat_avg,sat_diam,sat_lmax,sat_dirichlet,eq_avg,eq_diam,eq_lmax,eq_dirichlet,strict_expected";

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let f = |v: Option<f64>| v.map(|x| format!("{x:.12e}")).unwrap_or_default();
            let b = |v: Option<bool>| v.map(|x| x.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{:.12e},{},{},{},{:.12e},{:.12e},{},{},{},{},{},{},{},{},{}\n",
                self.graph_id,
                row.k,
                row.lambda,
                f(row.bound_avg),
                f(row.bound_diam),
                f(row.bound_lmax),
                row.lambda_kd,
                row.lambda_nk1,
                f(row.sat_avg),
                f(row.sat_diam),
                f(row.sat_lmax),
                f(row.sat_dirichlet),
                b(row.eq_avg),
                b(row.eq_diam),
                b(row.eq_lmax),
                b(row.eq_dirichlet),
                row.strict_expected,
            ));
        }
        out
    }
}

fn relative_scale(bound: f64, lambda: f64) -> f64 {
    // Purely relative: flooring at 1 would turn the tolerance absolute for
    // long graphs, whose eigenvalues sit far below 1.
    bound.abs().max(lambda.abs()).max(1e-300)
}

/// Compare λ against an upper bound: returns `(margin, equality)` or a
/// violation error. Violation and equality are disjoint by construction:
/// equality needs `|margin| ≤ tol·scale`, violation needs `margin < -tol·scale`.
fn check_upper_bound(
    graph_id: &str,
    name: &'static str,
    k: usize,
    bound: f64,
    lambda: f64,
) -> Result<(f64, bool), BoundsError> {
    let margin = bound - lambda;
    let tol = EQUALITY_TOLERANCE * relative_scale(bound, lambda);
    if margin < -tol {
        return Err(BoundsError::TheoremViolation {
            graph_id: graph_id.to_string(),
            k,
            bound: name,
            bound_value: bound,
            lambda,
            margin,
        });
    }
    Ok((margin, margin.abs() <= tol))
}

/// Evaluate every applicable bound for `k = 1..=max_k` against a computed
/// spectrum (which must hold at least `max_k + 1` eigenvalues).
///
/// On trees the full chain is checked: average-length, diameter,
/// longest-edge, the Dirichlet comparison `λ_{k+1} ≤ λ_k^D`, the decoupled
/// Neumann lower bound `λ_{k+1}^N ≤ λ_{k+1}`, and the multiset identity
/// `λ_k^D = λ_{k+|E|}^N`. Non-trees only get the subdivided spectral-gap
/// check and informative Dirichlet/Neumann columns.
pub fn check_all(
    graph: &MetricGraph,
    max_k: usize,
    spectrum: &Spectrum,
    graph_id: &str,
) -> Result<BoundReport, BoundsError> {
    graph.require_valid()?;
    if spectrum.len() < max_k + 1 {
        return Err(BoundsError::InsufficientSpectrum {
            needed: max_k + 1,
            got: spectrum.len(),
        });
    }
    let is_tree = graph.is_tree()?;
    let edge_count = graph.edge_count();
    let total_length = graph.total_length_f64();
    let diam = graph.diameter()?.to_f64();
    let lmax = graph
        .longest_edge()
        .map(|l| l.to_f64())
        .unwrap_or(total_length);
    let strict_expected = has_rationally_independent_pair(graph);

    let dirichlet = dirichlet_spectrum(graph, max_k)?;
    let neumann = neumann_decoupled_spectrum(graph, max_k + edge_count)?;
    if is_tree {
        verify_dirichlet_neumann_identity(&dirichlet, &neumann, edge_count, max_k)?;
    }

    let mut rows = Vec::with_capacity(max_k);
    for k in 1..=max_k {
        let lambda = spectrum.lambda(k + 1).expect("length checked above");
        let lambda_kd = dirichlet.lambda(k).expect("dirichlet spectrum length");
        let lambda_nk1 = neumann.lambda(k + 1).expect("neumann spectrum length");
        let mut row = BoundRow {
            k,
            lambda,
            bound_avg: None,
            bound_diam: None,
            bound_lmax: None,
            lambda_kd,
            lambda_nk1,
            sat_avg: None,
            sat_diam: None,
            sat_lmax: None,
            sat_dirichlet: None,
            eq_avg: None,
            eq_diam: None,
            eq_lmax: None,
            eq_dirichlet: None,
            strict_expected,
        };
        if is_tree {
            if edge_count >= 2 {
                let avg = bound_average(k, edge_count, total_length)?;
                let (margin, eq) = check_upper_bound(graph_id, "average-length", k, avg, lambda)?;
                row.bound_avg = Some(avg);
                row.sat_avg = Some(margin);
                row.eq_avg = Some(eq);
            }
            let diam_bound = bound_diameter(k, diam);
            let (margin, eq) = check_upper_bound(graph_id, "diameter", k, diam_bound, lambda)?;
            row.bound_diam = Some(diam_bound);
            row.sat_diam = Some(margin);
            row.eq_diam = Some(eq);

            let lmax_bound = bound_lmax(k, lmax);
            let (margin, eq) = check_upper_bound(graph_id, "longest-edge", k, lmax_bound, lambda)?;
            row.bound_lmax = Some(lmax_bound);
            row.sat_lmax = Some(margin);
            row.eq_lmax = Some(eq);

            let (margin, eq) =
                check_upper_bound(graph_id, "dirichlet-comparison", k, lambda_kd, lambda)?;
            row.sat_dirichlet = Some(margin);
            row.eq_dirichlet = Some(eq);

            // Decoupled Neumann lower bound: λ_{k+1}^N ≤ λ_{k+1}.
            let tol = EQUALITY_TOLERANCE * relative_scale(lambda_nk1, lambda);
            if lambda < lambda_nk1 - tol {
                return Err(BoundsError::TheoremViolation {
                    graph_id: graph_id.to_string(),
                    k,
                    bound: "neumann-lower",
                    bound_value: lambda_nk1,
                    lambda,
                    margin: lambda - lambda_nk1,
                });
            }
        }
        rows.push(row);
    }

    // Spectral-gap bound for general connected graphs, with loops subdivided
    // so the edge count convention is unambiguous.
    let subdivided = graph.subdivide_loops();
    let kkmm_bound = bound_kkmm(subdivided.edge_count(), total_length);
    let lambda_2 = spectrum.lambda(2).expect("max_k >= 1 row exists");
    let (kkmm_margin, kkmm_eq) =
        check_upper_bound(graph_id, "edge-count-gap", 1, kkmm_bound, lambda_2)?;
    Ok(BoundReport {
        graph_id: graph_id.to_string(),
        is_tree,
        rows,
        kkmm: KkmmCheck {
            edge_count: subdivided.edge_count(),
            bound: kkmm_bound,
            lambda_2,
            margin: kkmm_margin,
            equality: kkmm_eq,
        },
    })
}

/// The Dirichlet spectrum equals the decoupled Neumann spectrum with its
/// |E| leading zeros removed: `λ_k^D = λ_{k+|E|}^N`, checked exactly.
fn verify_dirichlet_neumann_identity(
    dirichlet: &Spectrum,
    neumann: &Spectrum,
    edge_count: usize,
    max_k: usize,
) -> Result<(), BoundsError> {
    for k in 1..=max_k {
        let d = dirichlet
            .lambda_exact(k)
            .ok_or_else(|| BoundsError::Internal("missing exact Dirichlet entry".into()))?;
        let n = neumann
            .lambda_exact(k + edge_count)
            .ok_or_else(|| BoundsError::Internal("missing exact Neumann entry".into()))?;
        if !d.exact_eq(n) {
            return Err(BoundsError::Internal(format!(
                "λ_{k}^D != λ_{}^N: the interval multisets disagree",
                k + edge_count
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityRow {
    pub k: usize,
    pub lambda_host: f64,
    pub lambda_extended: f64,
    /// `λ_k(host) - λ_k(extended)`, nonnegative up to solver tolerance.
    pub margin: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityReport {
    pub rows: Vec<MonotonicityRow>,
}

/// Check the domain monotonicity principle `λ_k(extended) ≤ λ_k(host)` for
/// `k ≤ max_k`, where `extended` was built from `host` by pendant
/// attachments. Violations abort: the principle is proved.
pub fn monotonicity_check(
    host: &MetricGraph,
    extended: &MetricGraph,
    max_k: usize,
    opts: &SolveOptions,
) -> Result<MonotonicityReport, BoundsError> {
    let host_spec = eigenvalues_with(host, max_k, opts)?;
    let ext_spec = eigenvalues_with(extended, max_k, opts)?;
    let mut rows = Vec::with_capacity(max_k);
    for k in 1..=max_k {
        let lambda_host = host_spec.lambda(k).expect("requested count");
        let lambda_extended = ext_spec.lambda(k).expect("requested count");
        let margin = lambda_host - lambda_extended;
        let tol = EQUALITY_TOLERANCE * relative_scale(lambda_host, lambda_extended);
        if margin < -tol {
            return Err(BoundsError::TheoremViolation {
                graph_id: "monotonicity".into(),
                k,
                bound: "pendant-monotonicity",
                bound_value: lambda_host,
                lambda: lambda_extended,
                margin,
            });
        }
        rows.push(MonotonicityRow {
            k,
            lambda_host,
            lambda_extended,
            margin,
        });
    }
    Ok(MonotonicityReport { rows })
}
