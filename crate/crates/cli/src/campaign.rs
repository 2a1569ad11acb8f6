//! Randomized verification campaigns: generate trees, compute spectra, check
//! every applicable bound and the pendant monotonicity principle, and track
//! the extremal margins observed per bound.

use std::collections::BTreeMap;

use treespec_core::bounds::{check_all, is_gap_equality_class, monotonicity_check, BoundsError};
use treespec_core::graph::{random_tree, LengthModel};
use treespec_core::secular::{eigenvalues_with, SolveOptions};

use crate::pool::run_parallel;

#[derive(Clone, Debug)]
pub struct CampaignConfig {
    pub trials: usize,
    pub max_edges: usize,
    pub seed: u64,
    pub k_budget: usize,
    pub monotonicity_k: usize,
    pub tolerance: f64,
    pub scan_divisor: u32,
    /// Mix √2 components into edge lengths with probability 1/4.
    pub rad2: bool,
    pub workers: usize,
}

impl CampaignConfig {
    pub fn new(trials: usize, max_edges: usize, seed: u64) -> Self {
        Self {
            trials,
            max_edges,
            seed,
            k_budget: 10,
            monotonicity_k: 8,
            tolerance: 1e-10,
            scan_divisor: 16,
            rad2: false,
            workers: 1,
        }
    }

    fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            tolerance: self.tolerance,
            scan_divisor: self.scan_divisor,
            ..SolveOptions::default()
        }
    }

    fn length_model(&self) -> LengthModel {
        if self.rad2 {
            LengthModel::mixed()
        } else {
            LengthModel::rational()
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrialStats {
    pub edge_count: usize,
    /// Minimum margin observed per bound, with the k it occurred at.
    pub margins: Vec<(&'static str, f64, usize)>,
    pub eq_avg_gap: Option<bool>,
    pub is_equilateral_star: bool,
}

#[derive(Clone, Debug)]
pub enum TrialOutcome {
    Pass(Box<TrialStats>),
    Violation(String),
    Numerical(String),
}

#[derive(Clone, Debug)]
pub struct CampaignSummary {
    pub trials: usize,
    pub violations: Vec<(usize, String)>,
    pub numerical_failures: Vec<(usize, String)>,
    /// Per bound: (margin, trial, k) of the tightest satisfaction seen.
    pub min_margins: BTreeMap<&'static str, (f64, usize, usize)>,
    pub stats: Vec<TrialStats>,
}

impl CampaignSummary {
    pub fn failed(&self) -> bool {
        !self.violations.is_empty() || !self.numerical_failures.is_empty()
    }
}

/// Deterministic per-trial seed stream (splitmix64 over the base seed).
pub fn trial_seed(base: u64, index: usize, stream: u64) -> u64 {
    let mut z = base
        .wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(stream.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn pick(seed: u64, modulus: usize) -> usize {
    (seed % modulus.max(1) as u64) as usize
}

/// Run one trial: a random tree gets the full bound suite, then a random
/// pendant is attached and the monotonicity principle is checked.
pub fn run_trial(config: &CampaignConfig, index: usize) -> TrialOutcome {
    match run_trial_inner(config, index) {
        Ok(stats) => TrialOutcome::Pass(Box::new(stats)),
        Err(e @ BoundsError::TheoremViolation { .. }) => TrialOutcome::Violation(e.to_string()),
        Err(e) => TrialOutcome::Numerical(e.to_string()),
    }
}

fn run_trial_inner(config: &CampaignConfig, index: usize) -> Result<TrialStats, BoundsError> {
    let model = config.length_model();
    let opts = config.solve_options();

    let edges = 1 + pick(trial_seed(config.seed, index, 0), config.max_edges);
    let tree = random_tree(edges + 1, &model, trial_seed(config.seed, index, 1))?;
    let graph_id = format!("trial-{index}");

    let spectrum = eigenvalues_with(&tree, config.k_budget + 1, &opts)?;
    let report = check_all(&tree, config.k_budget, &spectrum, &graph_id)?;

    let mut margins: Vec<(&'static str, f64, usize)> = Vec::new();
    let mut fold = |name: &'static str, margin: f64, k: usize| {
        match margins.iter_mut().find(|(n, _, _)| *n == name) {
            Some(entry) if margin < entry.1 => {
                entry.1 = margin;
                entry.2 = k;
            }
            Some(_) => {}
            None => margins.push((name, margin, k)),
        }
    };
    for row in &report.rows {
        if let Some(m) = row.sat_avg {
            fold("average-length", m, row.k);
        }
        if let Some(m) = row.sat_diam {
            fold("diameter", m, row.k);
        }
        if let Some(m) = row.sat_lmax {
            fold("longest-edge", m, row.k);
        }
        if let Some(m) = row.sat_dirichlet {
            fold("dirichlet-comparison", m, row.k);
        }
        fold("neumann-lower", row.lambda - row.lambda_nk1, row.k);
    }
    fold("edge-count-gap", report.kkmm.margin, 1);

    // Equality characterization of the spectral gap bound: flagged iff the
    // tree is an equilateral star up to isometry (2-edge trees are halved
    // intervals). Both directions are proved, so a mismatch is a defect.
    let eq_avg_gap = report.rows.first().and_then(|row| row.eq_avg);
    let is_star = is_gap_equality_class(&tree)?;
    if let Some(flagged) = eq_avg_gap {
        if flagged != is_star {
            return Err(BoundsError::TheoremViolation {
                graph_id,
                k: 1,
                bound: "gap-equality-characterization",
                bound_value: report.rows[0].bound_avg.unwrap_or(f64::NAN),
                lambda: report.rows[0].lambda,
                margin: report.rows[0].sat_avg.unwrap_or(f64::NAN),
            });
        }
    }

    // Pendant monotonicity on the same tree.
    let pendant_vertices = 2 + pick(trial_seed(config.seed, index, 2), 3);
    let pendant = random_tree(
        pendant_vertices,
        &model,
        trial_seed(config.seed, index, 3),
    )?;
    let at = tree.vertices()[pick(trial_seed(config.seed, index, 4), tree.vertex_count())].clone();
    let root =
        pendant.vertices()[pick(trial_seed(config.seed, index, 5), pendant.vertex_count())].clone();
    let extended = tree.attach_pendant(&at, &pendant, &root)?;
    let mono = monotonicity_check(&tree, &extended, config.monotonicity_k, &opts)?;
    for row in &mono.rows {
        fold("pendant-monotonicity", row.margin, row.k);
    }

    Ok(TrialStats {
        edge_count: edges,
        margins,
        eq_avg_gap,
        is_equilateral_star: is_star,
    })
}

pub fn run_campaign(config: &CampaignConfig) -> CampaignSummary {
    let outcomes = run_parallel(config.trials, config.workers, |index| {
        run_trial(config, index)
    });
    let mut summary = CampaignSummary {
        trials: config.trials,
        violations: Vec::new(),
        numerical_failures: Vec::new(),
        min_margins: BTreeMap::new(),
        stats: Vec::new(),
    };
    for (index, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            TrialOutcome::Pass(stats) => {
                for &(name, margin, k) in &stats.margins {
                    summary
                        .min_margins
                        .entry(name)
                        .and_modify(|entry| {
                            if margin < entry.0 {
                                *entry = (margin, index, k);
                            }
                        })
                        .or_insert((margin, index, k));
                }
                summary.stats.push(*stats);
            }
            TrialOutcome::Violation(msg) => summary.violations.push((index, msg)),
            TrialOutcome::Numerical(msg) => summary.numerical_failures.push((index, msg)),
        }
    }
    summary
}

pub fn render_summary(summary: &CampaignSummary) -> String {
    let mut out = String::new();
    out.push_str(&format!("trials: {}\n", summary.trials));
    out.push_str(&format!(
        "failures: {}\n",
        summary.violations.len() + summary.numerical_failures.len()
    ));
    for (index, msg) in &summary.violations {
        out.push_str(&format!("violation at trial {index}: {msg}\n"));
    }
    for (index, msg) in &summary.numerical_failures {
        out.push_str(&format!("numerical failure at trial {index}: {msg}\n"));
    }
    for (name, (margin, trial, k)) in &summary.min_margins {
        out.push_str(&format!(
            "min margin {name}: {margin:.6e} (trial {trial}, k {k})\n"
        ));
    }
    let stars = summary
        .stats
        .iter()
        .filter(|s| s.is_equilateral_star)
        .count();
    out.push_str(&format!("equilateral stars among trees: {stars}\n"));
    out
}
