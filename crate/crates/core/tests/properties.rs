mod common;

use common::*;
use nalgebra::{DMatrix, DVector};
use perronet::graph::SupraAdjacency;
use perronet::operator::to_dense;
use perronet::prelude::*;
use perronet::random::{random_multilayer, random_multiplex, random_network, rng, RandomSpec};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn pass(outcome: Outcome) {
    if let Err(e) = outcome {
        panic!("{e}");
    }
}

#[test]
fn iterative_solver_matches_dense_oracle() {
    pass(oracle_equivalence(11, 50));
}

#[test]
fn sensitivity_norms_match_condition_numbers() {
    pass(norm_identities(12, 50));
}

#[test]
fn communicability_bound_chain() {
    pass(communicability_chain(13, 60));
}

#[test]
fn first_order_error_is_quadratic() {
    pass(finite_difference(14, 6));
}

#[test]
fn wilkinson_perturbation_is_worst_case() {
    pass(wilkinson_optimality(15, 1000));
}

#[test]
fn rankings_match_exhaustive_enumeration() {
    pass(ranking_equivalence(16, 24));
}

#[test]
fn connectivity_matches_brute_force() {
    let mut r = rng(17);
    let mut disconnected = 0;
    for case in 0..60 {
        let net = random_network(&mut r, 200, case % 2 == 0);
        // Deleting random edges produces both outcomes.
        let mut edges = net.editable_edges();
        edges.shuffle(&mut r);
        let cut = r.gen_range(0..=edges.len().min(6));
        let reduced = edges[..cut]
            .iter()
            .fold(net, |acc, (e, _)| acc.remove_edge(e, EditScope::Entry).unwrap());
        let dense = reduced.assemble_dense(DEFAULT_DENSE_CAP).unwrap();
        let expected = brute_force_strongly_connected(&dense);
        assert_eq!(is_strongly_connected(&reduced), expected, "case {case}");
        let adj = SupraAdjacency::new(&reduced);
        assert_eq!(adj.is_strongly_connected(), expected, "case {case}");
        disconnected += usize::from(!expected);
    }
    assert!(disconnected > 0);
}

#[test]
fn multiplex_coupling_blocks_are_scaled_identities() {
    let mut r = rng(18);
    for _ in 0..20 {
        let spec = RandomSpec {
            nodes: r.gen_range(2..=10),
            layers: r.gen_range(2..=4),
            density: 0.3,
            directed: r.gen_bool(0.5),
            max_weight: None,
        };
        let gamma = r.gen_range(0.0..3.0);
        let net: Network = random_multiplex(&mut r, &spec, gamma).into();
        let n = net.nodes();
        let b = net.assemble_dense(DEFAULT_DENSE_CAP).unwrap();
        for k in 0..spec.layers {
            for l in (0..spec.layers).filter(|&l| l != k) {
                let block = b.view((k * n, l * n), (n, n));
                assert_eq!(block, DMatrix::identity(n, n) * gamma);
            }
        }
    }
}

#[test]
fn undirected_networks_assemble_symmetric() {
    let mut r = rng(19);
    for _ in 0..20 {
        let net = random_network(&mut r, 50, false);
        let b = net.assemble_dense(DEFAULT_DENSE_CAP).unwrap();
        assert_eq!(b, b.transpose());
    }
}

#[test]
fn scaling_scales_the_root_only() {
    let mut r = rng(20);
    for _ in 0..10 {
        let net = random_network(&mut r, 40, true);
        let b = net.assemble_dense(DEFAULT_DENSE_CAP).unwrap();
        let t = perron(&b, &PerronOptions::default()).unwrap();
        for c in [0.01, 3.0, 250.0] {
            let s = perron(&(&b * c), &PerronOptions::default()).unwrap();
            assert!((s.rho - c * t.rho).abs() <= 1e-9 * c * t.rho);
            assert!(max_abs_diff(&s.x, &t.x) < 1e-7);
            assert!(max_abs_diff(&s.y, &t.y) < 1e-7);
            assert!((s.kappa - t.kappa).abs() < 1e-7 * t.kappa);
        }
    }
}

#[test]
fn relabelling_permutes_the_vectors() {
    let mut r = rng(21);
    for _ in 0..10 {
        let net = random_network(&mut r, 40, true);
        let b = net.assemble_dense(DEFAULT_DENSE_CAP).unwrap();
        let d = b.nrows();
        let mut perm: Vec<usize> = (0..d).collect();
        perm.shuffle(&mut r);
        let p = DMatrix::from_fn(d, d, |a, c| b[(perm[a], perm[c])]);
        let t = perron(&b, &PerronOptions::default()).unwrap();
        let s = perron(&p, &PerronOptions::default()).unwrap();
        assert!((s.rho - t.rho).abs() <= 1e-9 * t.rho);
        assert!((s.kappa - t.kappa).abs() <= 1e-7 * t.kappa);
        for a in 0..d {
            assert!((s.x[a] - t.x[perm[a]]).abs() < 1e-7);
            assert!((s.y[a] - t.y[perm[a]]).abs() < 1e-7);
        }
    }
}

#[test]
fn hub_and_authority_match_dense_gram_matrices() {
    let mut r = rng(22);
    for _ in 0..10 {
        let net = random_network(&mut r, 30, true);
        let b = net.assemble_dense(DEFAULT_DENSE_CAP).unwrap();
        let bbt = &b * b.transpose();
        let btb = b.transpose() * &b;
        assert!((to_dense(&hub_operator(&net)) - &bbt).norm() <= 1e-12 * bbt.norm());
        assert!((to_dense(&authority_operator(&net)) - &btb).norm() <= 1e-12 * btb.norm());

        let opts = PerronOptions::default();
        let ha = hub_authority_communicability(&net, &opts).unwrap();
        let rho = perron_dense_oracle(&bbt, DEFAULT_DENSE_CAP).unwrap().rho;
        assert!((ha.rho_hub - rho).abs() <= 1e-8 * rho);
        assert!((ha.rho_authority - rho).abs() <= 1e-8 * rho);
    }
}

#[test]
fn total_communicability_tracks_perron_form_when_root_dominates() {
    let mut r = rng(23);
    let mut checked = 0;
    for _ in 0..40 {
        let spec = RandomSpec {
            nodes: r.gen_range(4..=10),
            layers: r.gen_range(1..=3),
            density: 0.8,
            directed: true,
            max_weight: Some(3),
        };
        let net: Network = random_multiplex(&mut r, &spec, 1.0).into();
        let b = net.assemble_dense(DEFAULT_DENSE_CAP).unwrap();
        let eig = b.complex_eigenvalues();
        let mut moduli: Vec<f64> = eig.iter().map(|z| z.norm()).collect();
        moduli.sort_by(|a, c| c.total_cmp(a));
        if moduli[0] < 2.0 * moduli[1] {
            continue;
        }
        let t = perron(&supra_operator(&net), &PerronOptions::default()).unwrap();
        let c_pn = perron_communicability(&t, net.nodes(), net.layers()).unwrap().c_pn;
        let total = total_communicability0(&net, DEFAULT_DENSE_CAP).unwrap();
        let ratio = total / (t.kappa * c_pn);
        assert!((ratio - 1.0).abs() < 0.1, "ratio {ratio}");
        checked += 1;
    }
    assert!(checked >= 5, "only {checked} dominant-root instances");
}

#[test]
fn increases_raise_and_decreases_lower_the_root() {
    let mut r = rng(24);
    let opts = PerronOptions::default();
    for _ in 0..10 {
        let net = random_network(&mut r, 40, true);
        let rho = perron(&supra_operator(&net), &opts).unwrap().rho;
        let edges = net.editable_edges();
        let (e, w) = edges[r.gen_range(0..edges.len())];
        for scope in [EditScope::Entry, EditScope::Pair, EditScope::Reciprocal] {
            let up = recompute_root(&net, &e, EdgeAction::Increase(0.3), scope, &opts).unwrap();
            assert!(up >= rho - 1e-10);
            let down = recompute_root(&net, &e, EdgeAction::Decrease(w / 2.0), EditScope::Entry, &opts).unwrap();
            assert!(down <= rho + 1e-10);
        }
    }
}

fn arb_network() -> impl Strategy<Value = Network> {
    arb_network_with(None)
}

fn arb_network_with(max_weight: Option<u32>) -> impl Strategy<Value = Network> {
    (any::<u64>(), 2usize..8, 1usize..4, any::<bool>(), any::<bool>()).prop_map(
        move |(seed, nodes, layers, directed, multiplex)| {
            let mut r = rng(seed);
            let spec = RandomSpec {
                nodes,
                layers,
                density: 0.3,
                directed,
                max_weight,
            };
            if multiplex {
                random_multiplex(&mut r, &spec, 0.7).into()
            } else {
                random_multilayer(&mut r, &spec).into()
            }
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn operator_matches_dense_assembly(net in arb_network(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = net.dim();
        let b = dense_from_entries(&net);
        prop_assert_eq!(&net.assemble_dense(DEFAULT_DENSE_CAP).unwrap(), &b);
        let v: Vec<f64> = (0..d).map(|_| r.gen_range(-1.0..1.0)).collect();
        let dv = DVector::from_column_slice(&v);
        let op = supra_operator(&net);
        let mut out = vec![0.0; d];
        op.apply(&v, &mut out);
        let want = &b * &dv;
        prop_assert!(max_abs_diff(&out, want.as_slice()) <= 1e-12 * want.amax().max(1.0));
        op.apply_transpose(&v, &mut out);
        let want = b.transpose() * &dv;
        prop_assert!(max_abs_diff(&out, want.as_slice()) <= 1e-12 * want.amax().max(1.0));
    }

    #[test]
    fn edge_delta_round_trips_exactly(net in arb_network_with(Some(8)), pick in any::<prop::sample::Index>(), k in -4i32..4) {
        // Integer weights and power-of-two deltas make the inverse exact.
        let edges = net.editable_edges();
        let (e, _) = edges[pick.index(edges.len())];
        let delta = 2f64.powi(k);
        for scope in [EditScope::Entry, EditScope::Pair, EditScope::Reciprocal] {
            let there = net.apply_edge_delta_with(&e, delta, scope).unwrap();
            prop_assert_ne!(&there, &net);
            let back = there.apply_edge_delta_with(&e, -delta, scope).unwrap();
            if scope != EditScope::Reciprocal {
                prop_assert_eq!(&back, &net);
            }
        }
    }

    #[test]
    fn residuals_meet_tolerance(net in arb_network()) {
        let t = perron(&supra_operator(&net), &PerronOptions::default()).unwrap();
        let bound = 1e-10 * t.rho.max(1.0);
        prop_assert!(t.right_residual <= bound && t.left_residual <= bound);
        prop_assert!(t.x.iter().chain(&t.y).all(|&v| v >= 0.0));
        prop_assert!((t.kappa * t.cos_theta() - 1.0).abs() < 1e-12);
        prop_assert!(t.kappa >= 1.0 - 1e-12);
    }
}
