//! Eigenvalue computation for the standard Laplacian on any finite connected
//! metric graph via the directed-bond secular function.
//!
//! Each edge contributes two directed bonds. Kirchhoff matching at a vertex
//! of degree `d` scatters an incoming bond amplitude into outgoing bonds with
//! coefficient `2/d`, minus 1 on the back-scattered bond. The resulting bond
//! scattering matrix `S` is real orthogonal, the propagation matrix
//! `D(k) = diag(e^{ikL_b})` is unitary, and `λ = k² > 0` is an eigenvalue of
//! multiplicity `m` exactly when `I − D(k)S` has an `m`-dimensional kernel.
//! This formulation has no poles at `k·L(e) ∈ πZ`, which trees hit routinely.
//!
//! Since `D(k)S` is unitary, `I − D(k)S` is normal and its singular values
//! are `2|sin(θ_j(k)/2)|` over the eigenphases `θ_j`. Two consequences drive
//! the root scan:
//!
//! * every phase moves with speed `dθ_j/dk ≤ L_max` (the longest bond), so a
//!   root inside a grid cell forces `σ_min` at the cell ends below
//!   `L_max · h` — cells that can hide a root are detectable;
//! * near a root of any multiplicity `σ_min(k)` is V-shaped, not quadratic,
//!   so minimizing it locates double roots to full precision and does not
//!   stall at the square-root-of-epsilon barrier the way `|det|` does.

use nalgebra::{Complex, DMatrix};
use thiserror::Error;

use crate::graph::{GraphError, MetricGraph};
use crate::spectrum::{MethodTag, Spectrum};

#[derive(Debug, Error)]
pub enum SecularError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(
        "root count mismatch on k-window [{lo:.6}, {hi:.6}]: found {found}, Weyl estimate {expected:.2} ± {slack}"
    )]
    RootCountMismatch {
        lo: f64,
        hi: f64,
        found: usize,
        expected: f64,
        slack: usize,
    },
    #[error("expected exactly one sign change in (0,1), found {sign_changes}")]
    StructuralFailure { sign_changes: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Tunable parameters of the secular root scan.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Relative accuracy target on eigenvalues λ.
    pub tolerance: f64,
    /// Grid step is π / (scan_divisor · L(G)).
    pub scan_divisor: u32,
    /// Singular values below this fraction of the largest one count as
    /// kernel dimensions.
    pub multiplicity_threshold: f64,
    /// How many times a window may be rescanned at 4x density before the
    /// count mismatch becomes an error.
    pub max_rescans: u32,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            scan_divisor: 16,
            multiplicity_threshold: 1e-8,
            max_rescans: 2,
        }
    }
}

impl SolveOptions {
    pub fn with_tolerance(tolerance: f64) -> Self {
        Self {
            tolerance,
            ..Self::default()
        }
    }
}

/// One directed bond of the doubled edge set.
#[derive(Clone, Debug)]
pub struct Bond {
    pub edge: usize,
    pub reversed: bool,
    pub origin: usize,
    pub terminus: usize,
    pub length: f64,
}

/// Directed-bond scattering data generating the secular function.
pub struct BondSystem {
    bonds: Vec<Bond>,
    scattering: DMatrix<f64>,
    total_length: f64,
    max_bond_length: f64,
    min_bond_length: f64,
}

impl BondSystem {
    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn scattering(&self) -> &DMatrix<f64> {
        &self.scattering
    }

    pub fn size(&self) -> usize {
        self.bonds.len()
    }

    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    /// `I − D(k)S` with `D(k) = diag(e^{ikL_b})`.
    fn characteristic_matrix(&self, k: f64) -> DMatrix<Complex<f64>> {
        let n = self.size();
        let phases: Vec<Complex<f64>> = self
            .bonds
            .iter()
            .map(|b| Complex::from_polar(1.0, k * b.length))
            .collect();
        DMatrix::from_fn(n, n, |row, col| {
            let diag = if row == col {
                Complex::new(1.0, 0.0)
            } else {
                Complex::new(0.0, 0.0)
            };
            diag - phases[row] * self.scattering[(row, col)]
        })
    }

    /// The secular function `f(k) = det(I − D(k)S)`; entire in `k`, zero at
    /// `k = 0` for any connected graph, and zero exactly on the eigenvalue
    /// wavenumbers for `k > 0`.
    pub fn secular_value(&self, k: f64) -> Complex<f64> {
        self.characteristic_matrix(k).determinant()
    }

    /// Singular values of `I − D(k)S`, ascending.
    pub fn singular_values(&self, k: f64) -> Vec<f64> {
        let mut sv: Vec<f64> = self
            .characteristic_matrix(k)
            .singular_values()
            .iter()
            .copied()
            .collect();
        sv.sort_by(|a, b| a.partial_cmp(b).expect("finite singular values"));
        sv
    }

    fn sigma_min(&self, k: f64) -> f64 {
        self.singular_values(k)[0]
    }
}

/// Build the bond system: bonds are ordered edge by edge (file order),
/// forward orientation then reverse.
pub fn build_bond_system(graph: &MetricGraph) -> Result<BondSystem, SecularError> {
    graph.require_valid()?;
    if graph.edge_count() == 0 {
        return Err(SecularError::InvalidInput(
            "graph has no edges; the Laplacian needs a nontrivial metric".into(),
        ));
    }
    let resolved: Vec<(usize, usize)> =
        graph.resolved_edges().into_iter().flatten().collect();
    let degrees = graph.degrees();
    let mut bonds = Vec::with_capacity(2 * resolved.len());
    for ((from, to), edge) in resolved.iter().zip(graph.edges()) {
        let length = edge.length.to_f64();
        bonds.push(Bond {
            edge: bonds.len() / 2,
            reversed: false,
            origin: *from,
            terminus: *to,
            length,
        });
        bonds.push(Bond {
            edge: bonds.len() / 2,
            reversed: true,
            origin: *to,
            terminus: *from,
            length,
        });
    }
    let n = bonds.len();
    let mut scattering = DMatrix::<f64>::zeros(n, n);
    for (col, incoming) in bonds.iter().enumerate() {
        let v = incoming.terminus;
        let reversal = col ^ 1;
        for (row, outgoing) in bonds.iter().enumerate() {
            if outgoing.origin == v {
                let mut entry = 2.0 / degrees[v] as f64;
                if row == reversal {
                    entry -= 1.0;
                }
                scattering[(row, col)] = entry;
            }
        }
    }
    let total_length = graph.total_length_f64();
    let max_bond_length = bonds.iter().map(|b| b.length).fold(0.0f64, f64::max);
    let min_bond_length = bonds
        .iter()
        .map(|b| b.length)
        .fold(f64::INFINITY, f64::min);
    Ok(BondSystem {
        bonds,
        scattering,
        total_length,
        max_bond_length,
        min_bond_length,
    })
}

/// A located root of the secular function.
#[derive(Clone, Copy, Debug)]
struct Root {
    k: f64,
    multiplicity: usize,
    sigma: f64,
}

/// First `count` eigenvalues (with multiplicities) of the standard Laplacian.
/// λ_1 = 0 is inserted analytically; the scan covers `k > 0` only.
pub fn eigenvalues(
    graph: &MetricGraph,
    count: usize,
    tolerance: f64,
) -> Result<Spectrum, SecularError> {
    eigenvalues_with(graph, count, &SolveOptions::with_tolerance(tolerance))
}

pub fn eigenvalues_with(
    graph: &MetricGraph,
    count: usize,
    opts: &SolveOptions,
) -> Result<Spectrum, SecularError> {
    if opts.tolerance <= 0.0 {
        return Err(SecularError::InvalidInput("tolerance must be positive".into()));
    }
    graph.require_valid()?;
    if count == 0 {
        return Ok(Spectrum::from_values(Vec::new(), MethodTag::Secular));
    }
    let system = build_bond_system(graph)?;
    let needed = count - 1;
    let mut values = vec![0.0f64];
    if needed > 0 {
        let roots = collect_roots(&system, needed, opts)?;
        for root in roots {
            for _ in 0..root.multiplicity {
                values.push(root.k * root.k);
            }
        }
        values.truncate(count);
    }
    Ok(Spectrum::from_values(values, MethodTag::Secular))
}

/// Scan upward in k until `needed` roots (counted with multiplicity) are in
/// hand. Windows are Weyl-sized so each pass nets about `needed` roots.
fn collect_roots(
    system: &BondSystem,
    needed: usize,
    opts: &SolveOptions,
) -> Result<Vec<Root>, SecularError> {
    let total = system.total_length();
    // Positive eigenvalues satisfy λ_2 ≥ π²/L² on connected graphs, so no
    // root lives below π/L; starting at a quarter of that is safely inside
    // the root-free zone while staying clear of the k = 0 zero of f.
    let zero_guard = 0.25 * std::f64::consts::PI / total;
    let mut roots: Vec<Root> = Vec::new();
    let mut window_lo = zero_guard;
    let window_width =
        std::f64::consts::PI * (needed as f64 + 4.0) / total;
    let hard_cap = zero_guard + 32.0 * window_width;
    while roots.iter().map(|r| r.multiplicity).sum::<usize>() < needed {
        let window_hi = window_lo + window_width;
        if window_hi > hard_cap {
            return Err(SecularError::RootCountMismatch {
                lo: window_lo,
                hi: hard_cap,
                found: roots.iter().map(|r| r.multiplicity).sum(),
                expected: needed as f64,
                slack: 0,
            });
        }
        scan_window(system, window_lo, window_hi, zero_guard, opts, &mut roots)?;
        window_lo = window_hi;
    }
    Ok(roots)
}

/// Scan one k-window on a uniform grid of σ_min values, refine every cell
/// that could contain a root, and audit the haul against the Weyl count.
fn scan_window(
    system: &BondSystem,
    lo: f64,
    hi: f64,
    zero_guard: f64,
    opts: &SolveOptions,
    roots: &mut Vec<Root>,
) -> Result<(), SecularError> {
    let total = system.total_length();
    let mut divisor = opts.scan_divisor.max(1) as f64;
    for attempt in 0..=opts.max_rescans {
        let step = std::f64::consts::PI / (divisor * total);
        let mut fresh = Vec::new();
        scan_pass(system, lo, hi, step, zero_guard, opts, &mut fresh);
        // Merge with roots already found in earlier windows (boundary roots
        // may be seen twice).
        let mut merged = roots.clone();
        for root in fresh {
            merge_root(system, &mut merged, root, opts);
        }
        merged.sort_by(|a, b| a.k.partial_cmp(&b.k).expect("finite roots"));
        // Weyl audit over everything scanned so far: N(k) = kL/π + O(|E|).
        let found: usize = merged.iter().map(|r| r.multiplicity).sum();
        let expected = hi * total / std::f64::consts::PI;
        let slack = system.size() + 2;
        if (found as f64 - expected).abs() <= slack as f64 {
            *roots = merged;
            return Ok(());
        }
        if attempt == opts.max_rescans {
            return Err(SecularError::RootCountMismatch {
                lo,
                hi,
                found,
                expected,
                slack,
            });
        }
        divisor *= 4.0;
    }
    unreachable!("loop always returns");
}

/// Final interval width for a root at k: a factor 4 below the requested
/// eigenvalue tolerance (δλ/λ = 2·δk/k), floored at the σ noise level.
fn width_target(k: f64, opts: &SolveOptions) -> f64 {
    (0.125 * opts.tolerance * k).max(1e-14 * k.max(1.0))
}

/// Fold a freshly refined root into the list. Locations closer than the
/// kernel-threshold basin are either the same root seen from two cells or
/// a genuinely near-degenerate pair; σ_min at the midpoint distinguishes
/// them (a bump above the threshold means two separate zeros).
fn merge_root(system: &BondSystem, roots: &mut Vec<Root>, root: Root, opts: &SolveOptions) {
    let basin = 4.0 * opts.multiplicity_threshold * 2.0 / system.min_bond_length
        + 4.0 * width_target(root.k, opts);
    if let Some(index) = roots.iter().position(|r| (r.k - root.k).abs() <= basin) {
        let existing = roots[index];
        let tight = 4.0 * width_target(root.k, opts);
        let separated = (existing.k - root.k).abs() > tight && {
            let mid = 0.5 * (existing.k + root.k);
            let sv = system.singular_values(mid);
            sv[0] >= opts.multiplicity_threshold * kernel_scale(&sv)
        };
        if separated {
            roots.push(root);
        } else if root.sigma < existing.sigma {
            // Same root re-found: keep the better-converged location; its
            // kernel dimension already carries any true multiplicity.
            roots[index] = root;
        }
        return;
    }
    roots.push(root);
}

fn scan_pass(
    system: &BondSystem,
    lo: f64,
    hi: f64,
    step: f64,
    zero_guard: f64,
    opts: &SolveOptions,
    out: &mut Vec<Root>,
) {
    let cells = ((hi - lo) / step).ceil() as usize;
    let grid: Vec<f64> = (0..=cells)
        .map(|i| (lo + i as f64 * step).min(hi))
        .collect();
    let sigma: Vec<f64> = grid.iter().map(|&k| system.sigma_min(k)).collect();
    // σ_min is Lipschitz with constant L_max (dθ/dk = Σ L_b|v_b|² ≤ L_max),
    // so a cell can contain a zero only if σ_left + σ_right ≤ L_max·width.
    let lip = 1.02 * system.max_bond_length;
    for i in 0..cells {
        let (a, b) = (grid[i], grid[i + 1]);
        if sigma[i] + sigma[i + 1] > lip * (b - a) {
            continue;
        }
        localize_roots(system, a, sigma[i], b, sigma[i + 1], lip, zero_guard, opts, out);
    }
}

/// Lipschitz-pruned bisection inside one candidate cell: subintervals whose
/// endpoint values already exclude a zero are dropped, the rest split until
/// they shrink to the accuracy target. A true zero can never be pruned, and
/// near-misses are abandoned as soon as the width falls below their σ floor,
/// so the work concentrates on actual roots. Near-degenerate pairs separate
/// once the width drops below their spacing and are reported individually.
#[allow(clippy::too_many_arguments)]
fn localize_roots(
    system: &BondSystem,
    a0: f64,
    fa0: f64,
    b0: f64,
    fb0: f64,
    lip: f64,
    zero_guard: f64,
    opts: &SolveOptions,
    out: &mut Vec<Root>,
) {
    let mut stack = vec![(a0, fa0, b0, fb0)];
    let mut evals = 0usize;
    while let Some((a, fa, b, fb)) = stack.pop() {
        if fa + fb > lip * (b - a) {
            continue;
        }
        let mid = 0.5 * (a + b);
        if b - a <= 2.0 * width_target(mid, opts) {
            if mid > zero_guard {
                if let Some(root) = accept_root(system, mid, opts) {
                    merge_root(system, out, root, opts);
                }
            }
            continue;
        }
        // Defensive cap; a truncated search shows up in the Weyl audit.
        if evals > 20_000 {
            break;
        }
        let fm = system.sigma_min(mid);
        evals += 1;
        stack.push((a, fa, mid, fm));
        stack.push((mid, fm, b, fb));
    }
}

fn accept_root(system: &BondSystem, k: f64, opts: &SolveOptions) -> Option<Root> {
    let sv = system.singular_values(k);
    let scale = kernel_scale(&sv);
    let multiplicity = sv
        .iter()
        .filter(|&&s| s < opts.multiplicity_threshold * scale)
        .count();
    if multiplicity == 0 {
        return None;
    }
    Some(Root {
        k,
        multiplicity,
        sigma: sv[0],
    })
}

/// Scale for the kernel threshold. The matrix family `I − D(k)S` has norm
/// at most 2 (unitary `D·S`), and at a root where the whole matrix
/// degenerates (the loop graph) σ_max itself collapses, so the observed norm
/// is floored at the family scale.
fn kernel_scale(singular_values: &[f64]) -> f64 {
    singular_values
        .last()
        .copied()
        .unwrap_or(0.0)
        .max(1.0)
}

/// Outcome of counting eigenvalues in `[0, μ]`.
#[derive(Clone, Copy, Debug)]
pub struct CountResult {
    pub count: usize,
    /// Set when μ lies within tolerance of a computed eigenvalue, making the
    /// inclusive count numerically ambiguous.
    pub boundary_ambiguous: bool,
}

/// `N_G([0, μ])`: eigenvalues ≤ μ counted with multiplicity.
pub fn count_up_to(
    graph: &MetricGraph,
    mu: f64,
    opts: &SolveOptions,
) -> Result<CountResult, SecularError> {
    if mu < 0.0 {
        return Err(SecularError::InvalidInput(
            "count threshold must be nonnegative".into(),
        ));
    }
    graph.require_valid()?;
    if mu == 0.0 {
        return Ok(CountResult {
            count: 1,
            boundary_ambiguous: false,
        });
    }
    let system = build_bond_system(graph)?;
    let total = system.total_length();
    let zero_guard = 0.25 * std::f64::consts::PI / total;
    let k_mu = mu.sqrt();
    let margin = std::f64::consts::PI / total;
    let mut roots = Vec::new();
    scan_window(
        &system,
        zero_guard,
        k_mu + margin,
        zero_guard,
        opts,
        &mut roots,
    )?;
    let boundary_tol = (10.0 * opts.tolerance).max(1e-12) * mu.max(1.0);
    let mut count = 1; // λ_1 = 0
    let mut ambiguous = false;
    for root in &roots {
        let lambda = root.k * root.k;
        if (lambda - mu).abs() <= boundary_tol {
            ambiguous = true;
        }
        if lambda <= mu + boundary_tol {
            count += root.multiplicity;
        }
    }
    Ok(CountResult {
        count,
        boundary_ambiguous: ambiguous,
    })
}

/// The transcendental characteristic function of the symmetric modes of the
/// three-star with legs `π/n, π/n, π`, written in `s = √λ`:
/// `cos(sπ/n)·sin(sπ) + 2·sin(sπ/n)·cos(sπ)`.
pub fn interessant_residual(n: u32, s: f64) -> f64 {
    let pi = std::f64::consts::PI;
    (s * pi / n as f64).cos() * (s * pi).sin() + 2.0 * (s * pi / n as f64).sin() * (s * pi).cos()
}

/// The unique λ ∈ (0, 1) solving the symmetric-mode equation for an even
/// `n ≥ 2`, by sign-change bracketing on a fine grid followed by bisection.
/// Errors if the grid does not see exactly one sign change.
pub fn solve_interessant(n: u32, tolerance: f64) -> Result<f64, SecularError> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(SecularError::InvalidInput(format!(
            "n must be an even integer >= 2, got {n}"
        )));
    }
    if tolerance <= 0.0 {
        return Err(SecularError::InvalidInput("tolerance must be positive".into()));
    }
    const GRID: usize = 10_000;
    let mut brackets = Vec::new();
    let mut prev_s = 1.0 / (GRID as f64 + 1.0);
    let mut prev_v = interessant_residual(n, prev_s);
    for i in 2..=GRID {
        let s = i as f64 / (GRID as f64 + 1.0);
        let v = interessant_residual(n, s);
        if prev_v == 0.0 {
            brackets.push((prev_s, prev_s));
        } else if prev_v * v < 0.0 {
            brackets.push((prev_s, s));
        }
        prev_s = s;
        prev_v = v;
    }
    if brackets.len() != 1 {
        return Err(SecularError::StructuralFailure {
            sign_changes: brackets.len(),
        });
    }
    let (mut a, mut b) = brackets[0];
    if a == b {
        return Ok(a * a);
    }
    let mut fa = interessant_residual(n, a);
    // δλ = 2s·δs < 2δs, so half the eigenvalue tolerance suffices in s.
    while b - a > 0.5 * tolerance {
        let mid = 0.5 * (a + b);
        let fm = interessant_residual(n, mid);
        if fm == 0.0 {
            return Ok(mid * mid);
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    let s = 0.5 * (a + b);
    Ok(s * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ExactLength;

    const PI: f64 = std::f64::consts::PI;
    const PI2: f64 = 9.869604401089358;

    fn unit() -> ExactLength {
        ExactLength::one()
    }

    fn assert_spectrum(spec: &Spectrum, expected: &[f64], rel: f64) {
        assert_eq!(spec.len(), expected.len());
        for (i, (a, b)) in spec.values().iter().zip(expected).enumerate() {
            let scale = b.abs().max(1.0);
            assert!(
                (a - b).abs() <= rel * scale,
                "entry {i}: got {a}, want {b}"
            );
        }
    }

    #[test]
    fn single_edge_secular_closed_form() {
        // Reflection +1 at both degree-1 ends gives f(k) = 1 − e^{2ikL}.
        let graph = MetricGraph::path(&[ExactLength::from_rational(3, 2)]);
        let system = build_bond_system(&graph).unwrap();
        let l = 1.5;
        for k in [0.17, 0.5, 1.3, 2.0, 4.71] {
            let expected = Complex::new(1.0, 0.0) - Complex::from_polar(1.0, 2.0 * k * l);
            let got = system.secular_value(k);
            assert!((got - expected).norm() < 1e-12, "k = {k}: {got} vs {expected}");
        }
        // Frozen values at the special points.
        assert!(system.secular_value(PI / l).norm() < 1e-12);
        let half = system.secular_value(PI / (2.0 * l));
        assert!((half - Complex::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn scattering_entries_star() {
        // Degree-3 hub: back-scattering 2/3 − 1 = −1/3, transmission 2/3;
        // degree-1 leaves: reflection +1.
        let graph = MetricGraph::star(&[unit(), unit(), unit()]);
        let system = build_bond_system(&graph).unwrap();
        let s = system.scattering();
        // Bond 1 (l1 → c) terminates at the hub; out-bonds from the hub are
        // 0, 2, 4 (c → l1, c → l2, c → l3).
        assert!((s[(0, 1)] - (-1.0 / 3.0)).abs() < 1e-15);
        assert!((s[(2, 1)] - (2.0 / 3.0)).abs() < 1e-15);
        assert!((s[(4, 1)] - (2.0 / 3.0)).abs() < 1e-15);
        // Bond 0 (c → l1) terminates at the leaf l1; only bond 1 leaves it.
        assert!((s[(1, 0)] - 1.0).abs() < 1e-15);
        assert!((s[(3, 0)]).abs() < 1e-15);
    }

    #[test]
    fn scattering_is_orthogonal() {
        for graph in [
            MetricGraph::star(&[unit(), unit(), unit(), ExactLength::sqrt2()]),
            MetricGraph::path(&[unit(), ExactLength::from_rational(5, 3)]),
            MetricGraph::loop_graph(ExactLength::from_integer(2)),
        ] {
            let system = build_bond_system(&graph).unwrap();
            let s = system.scattering();
            let delta = s * s.transpose() - DMatrix::identity(s.nrows(), s.ncols());
            assert!(delta.amax() < 1e-12, "S·Sᵀ deviates by {}", delta.amax());
        }
    }

    #[test]
    fn loop_scattering_is_transparent() {
        let graph = MetricGraph::loop_graph(ExactLength::from_integer(3));
        let system = build_bond_system(&graph).unwrap();
        let s = system.scattering();
        // Degree 2 with both bond orientations at the same vertex: the wave
        // continues around the loop without reflection.
        let expected = DMatrix::identity(2, 2);
        assert!((s - expected).amax() < 1e-15);
    }

    #[test]
    fn secular_vanishes_at_zero() {
        for graph in [
            MetricGraph::star(&[unit(), ExactLength::from_rational(1, 3), unit()]),
            MetricGraph::loop_graph(unit()),
        ] {
            let system = build_bond_system(&graph).unwrap();
            assert!(system.secular_value(0.0).norm() < 1e-12);
        }
    }

    #[test]
    fn secular_value_bounded() {
        let graph = MetricGraph::star(&[unit(), unit(), ExactLength::sqrt2()]);
        let system = build_bond_system(&graph).unwrap();
        let cap = 2f64.powi(system.size() as i32);
        for i in 0..200 {
            let k = 0.05 * i as f64;
            assert!(system.secular_value(k).norm() <= cap + 1e-9);
        }
    }

    #[test]
    fn equilateral_star_eigenvalues() {
        let graph = MetricGraph::star(&[unit(), unit(), unit()]);
        let spec = eigenvalues(&graph, 5, 1e-10).unwrap();
        assert_spectrum(
            &spec,
            &[0.0, PI2 / 4.0, PI2 / 4.0, PI2, 9.0 * PI2 / 4.0],
            1e-9,
        );
    }

    #[test]
    fn path_with_interior_vertex() {
        let graph = MetricGraph::path(&[
            ExactLength::from_rational(1, 2),
            ExactLength::from_rational(3, 2),
        ]);
        let spec = eigenvalues(&graph, 3, 1e-10).unwrap();
        assert_spectrum(&spec, &[0.0, PI2 / 4.0, PI2], 1e-9);
    }

    #[test]
    fn loop_eigenvalues_doubled() {
        let graph = MetricGraph::loop_graph(unit());
        let spec = eigenvalues(&graph, 3, 1e-10).unwrap();
        assert_spectrum(&spec, &[0.0, 4.0 * PI2, 4.0 * PI2], 1e-9);
    }

    #[test]
    fn degree_two_vertices_are_transparent() {
        let plain = MetricGraph::path(&[ExactLength::from_integer(2)]);
        let split = plain
            .subdivide_edge(0, &num_rational::BigRational::new(1.into(), 3.into()))
            .unwrap();
        let a = eigenvalues(&plain, 4, 1e-10).unwrap();
        let b = eigenvalues(&split, 4, 1e-10).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() <= 1e-9 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn star_limit_second_eigenvalue() {
        // Star {π/2, π/2, π} scaled by 1/π: the second eigenvalue of the
        // scaled graph divided by π² is the root of the symmetric-mode
        // equation near 0.37.
        let graph = MetricGraph::star(&[
            ExactLength::from_rational(1, 2),
            ExactLength::from_rational(1, 2),
            unit(),
        ]);
        let spec = eigenvalues(&graph, 2, 1e-12).unwrap();
        let lambda2 = spec.lambda(2).unwrap() / PI2;
        let reference = solve_interessant(2, 1e-12).unwrap();
        assert!(
            (lambda2 - reference).abs() < 1e-9,
            "secular {lambda2} vs bisection {reference}"
        );
        assert!((lambda2 - 0.37).abs() < 0.01);
    }

    #[test]
    fn antisymmetric_star_modes_present() {
        // For the star {π/n, π/n, π} the values √λ = n(m + 1/2) are
        // eigenvalues. In the 1/π-scaled graph: λ = π²n²(m + 1/2)².
        for n in [2u32, 4] {
            let graph = MetricGraph::star(&[
                ExactLength::from_rational(1, n as i64),
                ExactLength::from_rational(1, n as i64),
                unit(),
            ]);
            let count = if n == 2 { 8 } else { 16 };
            let spec = eigenvalues(&graph, count, 1e-10).unwrap();
            for m in 0..2 {
                let target = PI2 * (n as f64 * (m as f64 + 0.5)).powi(2);
                let hit = spec
                    .values()
                    .iter()
                    .any(|v| (v - target).abs() <= 1e-8 * target);
                assert!(hit, "n = {n}: λ = {target} missing from {:?}", spec.values());
            }
        }
    }

    #[test]
    fn count_examples() {
        let opts = SolveOptions::default();
        // Unit edge: eigenvalues m²π²; μ = 5π² covers {0, π², 4π²}.
        let graph = MetricGraph::path(&[unit()]);
        let result = count_up_to(&graph, 5.0 * PI2, &opts).unwrap();
        assert_eq!(result.count, 3);
        assert!(!result.boundary_ambiguous);

        let star = MetricGraph::star(&[unit(), unit(), unit()]);
        let result = count_up_to(&star, PI2 / 4.0, &opts).unwrap();
        assert_eq!(result.count, 3);
        assert!(result.boundary_ambiguous);

        let result = count_up_to(&star, 0.0, &opts).unwrap();
        assert_eq!(result.count, 1);
    }

    #[test]
    fn interessant_structure() {
        let l2 = solve_interessant(2, 1e-12).unwrap();
        assert!((0.0..1.0).contains(&l2));
        assert!((l2.sqrt() - 0.61).abs() < 0.01);

        let l64 = solve_interessant(64, 1e-12).unwrap();
        assert!(l64 > l2, "λ(n) approaches 1 from below");
        assert!(l64 < 1.0);

        assert!(solve_interessant(3, 1e-10).is_err());
        assert!(solve_interessant(0, 1e-10).is_err());
    }
}
