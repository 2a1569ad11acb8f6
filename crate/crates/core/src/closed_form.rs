//! Exact closed-form spectra for the operators that admit them: path graphs
//! (Neumann interval), equilateral stars, per-edge Dirichlet Laplacians,
//! decoupled per-edge Neumann Laplacians, and loops (circles).
//!
//! Every eigenvalue here is `coeff · π² / length²` with a rational `coeff`,
//! so multiset merging and equality questions are decided exactly; the
//! float-valued entry points evaluate the same coefficients at a real length.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::exact::ExactLength;
use crate::graph::{GraphError, MetricGraph};
use crate::spectrum::{ExactEigenvalue, Formula, MethodTag, Spectrum};

#[derive(Debug, Error)]
pub enum ClosedFormError {
    #[error("length must be positive, got {0}")]
    NonpositiveLength(f64),
    #[error("star graphs need at least 2 edges, got {0}")]
    EdgeCountTooSmall(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `k²` for k = 0, 1, 2, ...: the Neumann interval coefficients.
fn path_coeffs(count: usize) -> Vec<BigRational> {
    (0..count as i64).map(|k| ratio(k * k, 1)).collect()
}

/// Equilateral star coefficients in nondecreasing order: for each block
/// j = 0, 1, ... one simple eigenvalue `j²` followed by `|E| - 1` copies of
/// `(j + 1/2)²`.
fn star_coeffs(edge_count: usize, count: usize) -> Vec<BigRational> {
    let mut coeffs = Vec::with_capacity(count);
    let mut j: i64 = 0;
    while coeffs.len() < count {
        coeffs.push(ratio(j * j, 1));
        let half_integer = ratio((2 * j + 1) * (2 * j + 1), 4);
        for _ in 0..edge_count - 1 {
            if coeffs.len() >= count {
                break;
            }
            coeffs.push(half_integer.clone());
        }
        j += 1;
    }
    coeffs.truncate(count);
    coeffs
}

/// Circle coefficients: 0, then `4m²` with multiplicity two.
fn loop_coeffs(count: usize) -> Vec<BigRational> {
    let mut coeffs = Vec::with_capacity(count);
    coeffs.push(ratio(0, 1));
    let mut m: i64 = 1;
    while coeffs.len() < count {
        let c = ratio(4 * m * m, 1);
        coeffs.push(c.clone());
        if coeffs.len() < count {
            coeffs.push(c);
        }
        m += 1;
    }
    coeffs.truncate(count);
    coeffs
}

fn float_spectrum(
    coeffs: Vec<BigRational>,
    length: f64,
    formula: Formula,
) -> Result<Spectrum, ClosedFormError> {
    if length.is_nan() || length <= 0.0 {
        return Err(ClosedFormError::NonpositiveLength(length));
    }
    let pi2 = std::f64::consts::PI.powi(2);
    let values = coeffs
        .iter()
        .map(|c| crate::exact::rational_to_f64(c) * pi2 / (length * length))
        .collect();
    Ok(Spectrum::from_values(values, MethodTag::ClosedForm(formula)))
}

fn exact_spectrum(
    coeffs: Vec<BigRational>,
    length: &ExactLength,
    formula: Formula,
) -> Spectrum {
    let entries = coeffs
        .into_iter()
        .map(|c| ExactEigenvalue::new(c, length.clone()))
        .collect();
    Spectrum::from_exact(entries, MethodTag::ClosedForm(formula))
}

/// First `count` eigenvalues of the Neumann interval of the given total
/// length: `λ_{k+1} = k²π²/L²`.
pub fn path_spectrum(total_length: f64, count: usize) -> Result<Spectrum, ClosedFormError> {
    float_spectrum(path_coeffs(count), total_length, Formula::PathNeumann)
}

pub fn path_spectrum_exact(total_length: &ExactLength, count: usize) -> Spectrum {
    exact_spectrum(path_coeffs(count), total_length, Formula::PathNeumann)
}

/// Equilateral star on `edge_count >= 2` edges of the given length:
/// `λ_{|E|j+1} = j²π²/L²` and the half-integer block with multiplicity
/// `|E| - 1`.
pub fn equilateral_star_spectrum(
    edge_count: usize,
    edge_length: f64,
    count: usize,
) -> Result<Spectrum, ClosedFormError> {
    if edge_count < 2 {
        return Err(ClosedFormError::EdgeCountTooSmall(edge_count));
    }
    float_spectrum(
        star_coeffs(edge_count, count),
        edge_length,
        Formula::EquilateralStar,
    )
}

pub fn equilateral_star_spectrum_exact(
    edge_count: usize,
    edge_length: &ExactLength,
    count: usize,
) -> Result<Spectrum, ClosedFormError> {
    if edge_count < 2 {
        return Err(ClosedFormError::EdgeCountTooSmall(edge_count));
    }
    Ok(exact_spectrum(
        star_coeffs(edge_count, count),
        edge_length,
        Formula::EquilateralStar,
    ))
}

/// Circle of the given circumference: `0`, then `4m²π²/L²` doubly.
pub fn loop_spectrum(circumference: f64, count: usize) -> Result<Spectrum, ClosedFormError> {
    float_spectrum(loop_coeffs(count), circumference, Formula::Loop)
}

pub fn loop_spectrum_exact(circumference: &ExactLength, count: usize) -> Spectrum {
    exact_spectrum(loop_coeffs(count), circumference, Formula::Loop)
}

/// Heap entry for the exact multiset merge across edges; ordered by exact
/// eigenvalue comparison with an index tie-break to stay a total order.
struct MergeEntry {
    ev: ExactEigenvalue,
    edge: usize,
    m: u64,
}

impl PartialEq for MergeEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for MergeEntry {}

impl PartialOrd for MergeEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MergeEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap, we want the smallest first.
        other
            .ev
            .exact_cmp(&self.ev)
            .then_with(|| other.edge.cmp(&self.edge))
            .then_with(|| other.m.cmp(&self.m))
    }
}

fn interval_multiset(
    graph: &MetricGraph,
    count: usize,
    first_mode: u64,
    formula: Formula,
) -> Result<Spectrum, ClosedFormError> {
    graph.require_valid()?;
    let mut heap = BinaryHeap::new();
    for (edge, e) in graph.edges().iter().enumerate() {
        heap.push(MergeEntry {
            ev: mode_eigenvalue(first_mode, &e.length),
            edge,
            m: first_mode,
        });
    }
    let mut entries = Vec::with_capacity(count);
    while entries.len() < count {
        let MergeEntry { ev, edge, m } = heap.pop().expect("per-edge generators never end");
        let length = ev.length.clone();
        entries.push(ev);
        heap.push(MergeEntry {
            ev: mode_eigenvalue(m + 1, &length),
            edge,
            m: m + 1,
        });
    }
    Ok(Spectrum::from_exact(entries, MethodTag::ClosedForm(formula)))
}

fn mode_eigenvalue(m: u64, length: &ExactLength) -> ExactEigenvalue {
    let m = BigInt::from(m);
    ExactEigenvalue::new(BigRational::from_integer(&m * &m), length.clone())
}

/// Dirichlet spectrum: the sorted multiset `{m²π²/L(e)² : e ∈ E, m ≥ 1}`,
/// which depends only on the edge lengths.
pub fn dirichlet_spectrum(graph: &MetricGraph, count: usize) -> Result<Spectrum, ClosedFormError> {
    interval_multiset(graph, count, 1, Formula::Dirichlet)
}

/// Spectrum of the decoupled (per-edge Neumann) operator: the sorted multiset
/// `{m²π²/L(e)² : e ∈ E, m ≥ 0}`; exactly `|E|` zeros lead.
pub fn neumann_decoupled_spectrum(
    graph: &MetricGraph,
    count: usize,
) -> Result<Spectrum, ClosedFormError> {
    interval_multiset(graph, count, 0, Formula::NeumannDecoupled)
}
