//! The worked examples: the star-limit family showing the longest-edge bound
//! is sharp, the loop counterexample showing it fails off trees, and the
//! Dirichlet equality index for rational-length trees.

use treespec_core::bounds::{bound_lmax, gd_equality_index};
use treespec_core::closed_form::{dirichlet_spectrum, loop_spectrum};
use treespec_core::exact::ExactLength;
use treespec_core::graph::MetricGraph;
use treespec_core::secular::{eigenvalues_with, solve_interessant, SolveOptions};

use crate::failure::CliFailure;

const PI2: f64 = 9.869604401089358;

/// One row of the star-limit table for an even `n`: the star with legs
/// `π/n, π/n, π` has its spectral gap at the unique root of the
/// symmetric-mode equation in (0, 1).
#[derive(Clone, Copy, Debug)]
pub struct StarLimitRow {
    pub n: u32,
    /// Gap from the 1-D bisection of the symmetric-mode equation.
    pub lambda_bisection: f64,
    /// Gap from the full secular solver (computed on the 1/π-scaled star and
    /// rescaled, since π is not an exact edge length).
    pub lambda_secular: f64,
    pub gap_to_bound: f64,
}

pub fn star_limit_rows(ns: &[u32], opts: &SolveOptions) -> Result<Vec<StarLimitRow>, CliFailure> {
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        if n < 2 || n % 2 != 0 {
            return Err(CliFailure::Usage(format!(
                "star-limit needs even n >= 2, got {n}"
            )));
        }
        let lambda_bisection = solve_interessant(n, opts.tolerance.min(1e-12))?;
        let star = MetricGraph::star(&[
            ExactLength::from_rational(1, n as i64),
            ExactLength::from_rational(1, n as i64),
            ExactLength::one(),
        ]);
        let spectrum = eigenvalues_with(&star, 2, opts)?;
        let lambda_secular = spectrum.lambda(2).expect("two eigenvalues requested") / PI2;
        rows.push(StarLimitRow {
            n,
            lambda_bisection,
            lambda_secular,
            gap_to_bound: 1.0 - lambda_bisection,
        });
    }
    Ok(rows)
}

pub fn render_star_limit(rows: &[StarLimitRow]) -> String {
    let mut out = String::from("# n lambda(n) lambda_2(secular) 1-lambda(n)\n");
    for row in rows {
        out.push_str(&format!(
            "{} {:.12e} {:.12e} {:.12e}\n",
            row.n, row.lambda_bisection, row.lambda_secular, row.gap_to_bound
        ));
    }
    let decreasing = rows
        .windows(2)
        .all(|w| w[1].gap_to_bound < w[0].gap_to_bound);
    out.push_str(&format!("# 1-lambda(n) strictly decreasing: {decreasing}\n"));
    out
}

/// The loop of length `L`: λ_2 = 4π²/L² exceeds the tree-only longest-edge
/// bound π²/L² by a factor of four.
pub fn render_loop_example(length: f64) -> Result<String, CliFailure> {
    if length.is_nan() || length <= 0.0 {
        return Err(CliFailure::Usage(format!(
            "loop length must be positive, got {length}"
        )));
    }
    let spectrum = loop_spectrum(length, 2)?;
    let lambda_2 = spectrum.lambda(2).expect("two entries");
    let bound = bound_lmax(1, length);
    Ok(format!(
        "loop length: {length:.12e}\nlambda_2: {lambda_2:.12e}\ntree longest-edge bound: {bound:.12e}\nbound exceeded (expected off trees): {}\n",
        lambda_2 > bound
    ))
}

/// For a rational-length tree: the index k = x·L(G) at which the Dirichlet
/// comparison becomes an equality, with both sides evaluated.
pub fn render_gd_equality(
    graph: &MetricGraph,
    opts: &SolveOptions,
) -> Result<String, CliFailure> {
    let gd = gd_equality_index(graph)?;
    let k = gd.index as usize;
    let spectrum = eigenvalues_with(graph, k + 1, opts)?;
    let dirichlet = dirichlet_spectrum(graph, k)?;
    let lambda = spectrum.lambda(k + 1).expect("k+1 eigenvalues requested");
    let lambda_kd = dirichlet.lambda(k).expect("k Dirichlet eigenvalues");
    Ok(format!(
        "x: {}\nk = x*L(G): {}\nlambda_(k+1): {lambda:.12e}\nlambda_k^D: {lambda_kd:.12e}\nrelative difference: {:.3e}\n",
        gd.x,
        gd.index,
        (lambda - lambda_kd).abs() / lambda_kd.abs().max(1.0)
    ))
}
