//! Cross-module invariants on seeded random graphs: diameter against a
//! brute-force oracle, tree preservation under pendant attachment, spectral
//! transparency of degree-2 vertices, the variational upper-bound property,
//! exact count agreement between the two solvers, and scaling covariance.

use std::collections::HashMap;

use treespec_core::bounds::check_all;
use treespec_core::exact::ExactLength;
use treespec_core::fem;
use treespec_core::graph::{random_tree, LengthModel, MetricGraph};
use treespec_core::secular::{count_up_to, eigenvalues, SolveOptions};

/// Independent diameter oracle: Floyd–Warshall in floating point over the
/// vertex set, then the boundary-pair maximum (valid for trees).
fn brute_force_tree_diameter(graph: &MetricGraph) -> f64 {
    let n = graph.vertex_count();
    let index: HashMap<&str, usize> = graph
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    let mut dist = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in dist.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for e in graph.edges() {
        let (a, b) = (index[e.from.as_str()], index[e.to.as_str()]);
        let w = e.length.to_f64();
        if w < dist[a][b] {
            dist[a][b] = w;
            dist[b][a] = w;
        }
    }
    for mid in 0..n {
        for i in 0..n {
            for j in 0..n {
                let through = dist[i][mid] + dist[mid][j];
                if through < dist[i][j] {
                    dist[i][j] = through;
                }
            }
        }
    }
    let boundary = graph.boundary_vertices();
    let mut best = 0.0f64;
    for (a, &u) in boundary.iter().enumerate() {
        for &v in &boundary[a + 1..] {
            best = best.max(dist[u][v]);
        }
    }
    best
}

#[test]
fn random_trees_are_trees_with_brute_force_diameter() {
    let models = [LengthModel::rational(), LengthModel::mixed()];
    for seed in 0..40u64 {
        let model = &models[(seed % 2) as usize];
        let vertices = 2 + (seed as usize * 7 + 3) % 12;
        let tree = random_tree(vertices, model, seed).unwrap();
        assert!(tree.is_tree().unwrap());
        assert_eq!(tree.vertex_count(), tree.edge_count() + 1);

        let exact = tree.diameter().unwrap().to_f64();
        let brute = brute_force_tree_diameter(&tree);
        assert!(
            (exact - brute).abs() <= 1e-9 * (1.0 + brute),
            "seed {seed}: exact {exact} vs brute force {brute}"
        );
    }
}

#[test]
fn attach_pendant_preserves_trees() {
    let model = LengthModel::mixed();
    for seed in 0..25u64 {
        let host = random_tree(2 + (seed as usize % 8), &model, seed).unwrap();
        let pendant = random_tree(2 + (seed as usize % 3), &model, seed + 1000).unwrap();
        let at = host.vertices()[seed as usize % host.vertex_count()].clone();
        let root = pendant.vertices()[(seed as usize / 2) % pendant.vertex_count()].clone();
        let extended = host.attach_pendant(&at, &pendant, &root).unwrap();
        assert!(extended.is_tree().unwrap(), "seed {seed}");
        assert_eq!(
            extended.edge_count(),
            host.edge_count() + pendant.edge_count()
        );
        assert_eq!(
            extended.total_length(),
            host.total_length() + &pendant.total_length()
        );
    }
}

/// Dense-subdivision oracle for the continuous diameter of non-trees: split
/// every edge into many degree-2 pieces and take the vertex diameter of the
/// refined graph. The true value can exceed it by at most one piece length.
fn subdivision_diameter(graph: &MetricGraph, pieces: usize) -> f64 {
    let mut refined = graph.clone();
    for _ in 0..pieces.trailing_zeros() {
        let edge_count = refined.edge_count();
        let half = num_rational::BigRational::new(1.into(), 2.into());
        for e in (0..edge_count).rev() {
            refined = refined.subdivide_edge(e, &half).unwrap();
        }
    }
    let dist = refined.vertex_distances().unwrap();
    let mut best = 0.0f64;
    for row in &dist {
        for d in row {
            best = best.max(d.to_f64());
        }
    }
    best
}

#[test]
fn continuous_diameter_matches_dense_subdivision() {
    let unit = ExactLength::one;
    let loop2 = MetricGraph::loop_graph(ExactLength::from_integer(2));
    let triangle = MetricGraph::new(
        ["a", "b", "c"],
        [("a", "b", unit()), ("b", "c", unit()), ("c", "a", unit())],
    );
    // Two vertices joined by three parallel edges.
    let theta = MetricGraph::new(
        ["u", "v"],
        [
            ("u", "v", unit()),
            ("u", "v", unit()),
            ("u", "v", ExactLength::from_integer(2)),
        ],
    );
    // A cycle with a pendant path.
    let tadpole = MetricGraph::new(
        ["a", "b", "c", "t"],
        [
            ("a", "b", unit()),
            ("b", "c", unit()),
            ("c", "a", unit()),
            ("a", "t", ExactLength::from_rational(3, 2)),
        ],
    );
    for (name, graph) in [
        ("loop", &loop2),
        ("triangle", &triangle),
        ("theta", &theta),
        ("tadpole", &tadpole),
    ] {
        let exact = graph.diameter().unwrap().to_f64();
        let pieces = 64;
        let approx = subdivision_diameter(graph, pieces);
        let longest = graph.longest_edge().unwrap().to_f64();
        let resolution = longest / pieces as f64;
        assert!(
            approx <= exact + 1e-9 && exact <= approx + 2.0 * resolution,
            "{name}: exact {exact} vs subdivided {approx} (resolution {resolution})"
        );
    }
}

#[test]
fn degree_two_insertion_is_spectrally_transparent() {
    let opts = SolveOptions::default();
    let third = num_rational::BigRational::new(1.into(), 3.into());
    for seed in 0..10u64 {
        let model = if seed % 2 == 0 {
            LengthModel::rational()
        } else {
            LengthModel::mixed()
        };
        let tree = random_tree(2 + (seed as usize % 6), &model, 100 + seed).unwrap();
        let split = tree
            .subdivide_edge(seed as usize % tree.edge_count(), &third)
            .unwrap();
        let before = eigenvalues(&tree, 6, opts.tolerance).unwrap();
        let after = eigenvalues(&split, 6, opts.tolerance).unwrap();
        for (k, (a, b)) in before.values().iter().zip(after.values()).enumerate() {
            let scale = a.abs().max(1.0);
            assert!(
                (a - b).abs() <= 10.0 * opts.tolerance * scale,
                "seed {seed}, entry {k}: {a} vs {b}"
            );
        }
    }
}

#[test]
fn oracle_upper_bounds_secular_eigenvalues() {
    for seed in 0..12u64 {
        let tree = random_tree(2 + (seed as usize % 6), &LengthModel::mixed(), 200 + seed).unwrap();
        let secular = eigenvalues(&tree, 6, 1e-10).unwrap();
        let oracle = fem::eigenvalues_oracle_auto(&tree, 6).unwrap();
        for k in 1..=6 {
            let s = secular.lambda(k).unwrap();
            let o = oracle.lambda(k).unwrap();
            let scale = s.abs().max(1.0);
            assert!(
                o >= s - 1e-8 * scale,
                "seed {seed}, k {k}: oracle {o} below secular {s}"
            );
            assert!(
                (o - s).abs() <= 2e-2 * scale,
                "seed {seed}, k {k}: oracle {o} far from secular {s}"
            );
        }
    }
}

#[test]
fn solvers_agree_on_graphs_with_cycles() {
    // No closed form exists for these, so the secular solver and the
    // variational oracle check each other: multi-edges, loops, and a cycle
    // with a pendant all exercise vertex scattering beyond trees.
    let unit = ExactLength::one;
    let graphs = [
        MetricGraph::new(
            ["u", "v"],
            [
                ("u", "v", unit()),
                ("u", "v", unit()),
                ("u", "v", ExactLength::from_integer(2)),
            ],
        ),
        MetricGraph::new(
            ["a", "b", "c", "t"],
            [
                ("a", "b", unit()),
                ("b", "c", ExactLength::from_rational(3, 2)),
                ("c", "a", unit()),
                ("a", "t", ExactLength::from_parts(0, 1, 1, 2)),
            ],
        ),
        MetricGraph::new(
            ["x"],
            [("x", "x", unit()), ("x", "x", ExactLength::sqrt2())],
        ),
    ];
    for (i, graph) in graphs.iter().enumerate() {
        let secular = eigenvalues(graph, 6, 1e-10).unwrap();
        let oracle = fem::eigenvalues_oracle_auto(graph, 6).unwrap();
        for k in 1..=6 {
            let s = secular.lambda(k).unwrap();
            let o = oracle.lambda(k).unwrap();
            let scale = s.abs().max(1.0);
            assert!(o >= s - 1e-8 * scale, "graph {i}, k {k}: {o} < {s}");
            assert!(
                (o - s).abs() <= 2e-2 * scale,
                "graph {i}, k {k}: oracle {o} vs secular {s}"
            );
        }
    }
}

#[test]
fn solvers_agree_on_extreme_aspect_ratios() {
    // Length ratios above 10³ stress the root scan: the grid follows the
    // total length while the Lipschitz constant follows the longest edge.
    let extreme_star = MetricGraph::star(&[
        ExactLength::from_rational(1, 16),
        ExactLength::from_integer(16),
        ExactLength::from_parts(16, 1, 16, 1),
    ]);
    let caterpillar = MetricGraph::path(&[
        ExactLength::from_rational(1, 16),
        ExactLength::from_integer(16),
        ExactLength::from_rational(1, 16),
        ExactLength::from_integer(16),
        ExactLength::from_rational(1, 16),
    ]);
    for (name, graph) in [("star", &extreme_star), ("caterpillar", &caterpillar)] {
        let secular = eigenvalues(graph, 10, 1e-10).unwrap();
        let oracle = fem::eigenvalues_oracle_auto(graph, 10).unwrap();
        for k in 1..=10 {
            let s = secular.lambda(k).unwrap();
            let o = oracle.lambda(k).unwrap();
            let scale = s.abs().max(1.0);
            assert!(o >= s - 1e-8 * scale, "{name} k {k}: {o} < {s}");
            assert!(
                (o - s).abs() <= 5e-2 * scale,
                "{name} k {k}: oracle {o} vs secular {s}"
            );
        }
    }
}

#[test]
fn broom_multiplicities_match_oracle() {
    // Five equal unit pendants at the end of a long path force eigenvalues
    // of multiplicity 4 on a non-star tree: the antisymmetric pendant modes
    // vanish at the hub and solve the mixed interval problem, λ = (π/2)².
    let mut vertices: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
    let mut edges = vec![
        ("a".to_string(), "b".to_string(), ExactLength::from_integer(2)),
        ("b".to_string(), "c".to_string(), ExactLength::from_integer(3)),
        ("c".to_string(), "d".to_string(), ExactLength::from_integer(2)),
    ];
    for i in 0..5 {
        let leaf = format!("p{i}");
        vertices.push(leaf.clone());
        edges.push(("d".to_string(), leaf, ExactLength::one()));
    }
    let broom = MetricGraph::new(vertices, edges);
    let secular = eigenvalues(&broom, 14, 1e-10).unwrap();
    let oracle = fem::eigenvalues_oracle_auto(&broom, 14).unwrap();
    for k in 1..=14 {
        let s = secular.lambda(k).unwrap();
        let o = oracle.lambda(k).unwrap();
        let scale = s.abs().max(1.0);
        assert!(o >= s - 1e-8 * scale, "k {k}: {o} < {s}");
        assert!((o - s).abs() <= 5e-2 * scale, "k {k}: {o} vs {s}");
    }
    // Four antisymmetric pendant modes sit at (π/2)², and because the path
    // part has length 7 (a half-integer number of wavelengths at k = π/2,
    // cos(7π/2) = 0) a fifth, path-supported eigenfunction degenerates with
    // them: the full multiplicity is 5.
    let target = std::f64::consts::PI.powi(2) / 4.0;
    let hits = secular
        .values()
        .iter()
        .filter(|&&v| (v - target).abs() <= 1e-7 * target)
        .count();
    assert_eq!(hits, 5, "pendant multiplicity: {:?}", secular.values());
    let oracle_hits = oracle
        .values()
        .iter()
        .filter(|&&v| (v - target).abs() <= 1e-2 * target)
        .count();
    assert_eq!(oracle_hits, 5, "oracle multiplicity: {:?}", oracle.values());
}

#[test]
fn edgeless_graph_is_rejected() {
    let point = MetricGraph::new(["p"], Vec::<(String, String, ExactLength)>::new());
    assert!(point.is_valid());
    assert!(eigenvalues(&point, 2, 1e-10).is_err());
}

#[test]
fn counts_agree_between_solvers() {
    let opts = SolveOptions::default();
    for seed in 0..8u64 {
        let tree = random_tree(2 + (seed as usize % 5), &LengthModel::rational(), 300 + seed)
            .unwrap();
        let spectrum = eigenvalues(&tree, 8, 1e-10).unwrap();
        let values = spectrum.values();
        // Mid-gap threshold between the 6th and 7th eigenvalues; skip the
        // rare degenerate gap.
        let mu = 0.5 * (values[5] + values[6]);
        if (values[6] - values[5]) < 1e-6 * values[6].max(1.0) {
            continue;
        }
        let secular_count = count_up_to(&tree, mu, &opts).unwrap();
        assert!(!secular_count.boundary_ambiguous, "seed {seed}");
        let mut elements = 16;
        let oracle_count = loop {
            let result = fem::count_oracle(&tree, mu, elements).unwrap();
            if result.certified {
                break result;
            }
            elements *= 2;
            assert!(elements <= 256, "seed {seed}: certification stalled");
        };
        assert_eq!(
            secular_count.count, oracle_count.count,
            "seed {seed}: secular {} vs oracle {}",
            secular_count.count, oracle_count.count
        );
    }
}

#[test]
fn eigenvalues_and_flags_are_scaling_covariant() {
    let factors = [
        ExactLength::from_rational(3, 2),
        ExactLength::from_parts(1, 1, 1, 1), // 1 + √2
        ExactLength::from_parts(0, 1, 1, 2), // √2/2
    ];
    for seed in 0..6u64 {
        let tree = random_tree(3 + (seed as usize % 5), &LengthModel::rational(), 400 + seed)
            .unwrap();
        let base_spec = eigenvalues(&tree, 6, 1e-11).unwrap();
        let base_report = check_all(&tree, 5, &base_spec, "base").unwrap();
        for factor in &factors {
            let scaled = tree.scaled(factor);
            let c2 = factor.to_f64().powi(2);
            let scaled_spec = eigenvalues(&scaled, 6, 1e-11).unwrap();
            for (a, b) in base_spec.values().iter().zip(scaled_spec.values()) {
                let expected = a / c2;
                assert!(
                    (b - expected).abs() <= 1e-8 * (1.0 + expected.abs()),
                    "seed {seed}: eigenvalue scaling broke: {b} vs {expected}"
                );
            }
            let scaled_report = check_all(&scaled, 5, &scaled_spec, "scaled").unwrap();
            for (r1, r2) in base_report.rows.iter().zip(&scaled_report.rows) {
                assert_eq!(r1.eq_avg, r2.eq_avg, "seed {seed} k {}", r1.k);
                assert_eq!(r1.eq_diam, r2.eq_diam, "seed {seed} k {}", r1.k);
                assert_eq!(r1.eq_lmax, r2.eq_lmax, "seed {seed} k {}", r1.k);
                assert_eq!(r1.eq_dirichlet, r2.eq_dirichlet, "seed {seed} k {}", r1.k);
                assert_eq!(r1.strict_expected, r2.strict_expected);
            }
            assert_eq!(base_report.kkmm.equality, scaled_report.kkmm.equality);
        }
    }
}

#[test]
fn disconnected_graphs_are_rejected_by_solvers() {
    let g = MetricGraph::new(
        ["a", "b", "c", "d"],
        [
            ("a", "b", ExactLength::one()),
            ("c", "d", ExactLength::one()),
        ],
    );
    assert!(eigenvalues(&g, 3, 1e-10).is_err());
    assert!(fem::eigenvalues_oracle(&g, 3, 8).is_err());
    assert!(check_all(&g, 2, &eigenvalues(&MetricGraph::path(&[ExactLength::one()]), 3, 1e-10).unwrap(), "x").is_err());
}
