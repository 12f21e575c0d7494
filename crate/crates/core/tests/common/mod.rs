//! Property suites shared by the core integration tests and the acceptance
//! target. Each suite returns a one-line summary or the first violation.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use perronet::operator::to_dense;
use perronet::prelude::*;
use perronet::random::{random_multiplex, random_network, rng, RandomSpec};
use rand::Rng;

pub type Outcome = std::result::Result<String, String>;

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max)
}

/// Warshall transitive closure over the dense pattern.
pub fn brute_force_strongly_connected(b: &DMatrix<f64>) -> bool {
    let n = b.nrows();
    let mut reach: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j || b[(i, j)] != 0.0).collect()).collect();
    for k in 0..n {
        let via = reach[k].clone();
        for row in reach.iter_mut() {
            if row[k] {
                row.iter_mut().zip(&via).for_each(|(r, v)| *r |= v);
            }
        }
    }
    reach.iter().all(|row| row.iter().all(|&r| r))
}

fn triple(net: &Network) -> PerronTriple {
    perron(&supra_operator(net), &PerronOptions::default()).expect("iterative solve")
}

fn dense_triple(net: &Network) -> PerronTriple {
    perron_dense_oracle(&net.assemble_dense(DEFAULT_DENSE_CAP).unwrap(), DEFAULT_DENSE_CAP).expect("dense solve")
}

/// Iterative and dense eigensolvers agree on `count` random irreducible
/// instances of order at most 200.
pub fn oracle_equivalence(seed: u64, count: usize) -> Outcome {
    let mut r = rng(seed);
    let sizes = [20, 60, 120, 200];
    let mut worst = (0.0_f64, 0.0_f64);
    for case in 0..count {
        let net = random_network(&mut r, sizes[case % sizes.len()], case % 5 != 0);
        let it = triple(&net);
        let dense = dense_triple(&net);
        let rel = (it.rho - dense.rho).abs() / dense.rho;
        let vec = max_abs_diff(&it.x, &dense.x).max(max_abs_diff(&it.y, &dense.y));
        if rel > 1e-8 || vec > 1e-6 {
            return Err(format!(
                "case {case} (NL={}): rho rel {rel:.2e}, vectors {vec:.2e}",
                net.dim()
            ));
        }
        worst = (worst.0.max(rel), worst.1.max(vec));
    }
    Ok(format!("{count} instances, worst rho rel {:.1e}, vectors {:.1e}", worst.0, worst.1))
}

fn random_directed_multiplex(r: &mut impl Rng) -> Network {
    let spec = RandomSpec {
        nodes: r.gen_range(2..=15),
        layers: r.gen_range(1..=4),
        density: r.gen_range(0.1..0.5),
        directed: r.gen_bool(0.8),
        max_weight: None,
    };
    let gamma = r.gen_range(0.2..2.0);
    random_multiplex(r, &spec, gamma).into()
}

/// `(y xᵀ)/(yᵀx)` restricted by `keep`, from the dense oracle's vectors.
fn masked_frobenius(t: &PerronTriple, keep: impl Fn(usize, usize) -> bool) -> f64 {
    let d = t.dim();
    let mut s = 0.0;
    for a in 0..d {
        for b in 0..d {
            if keep(a, b) {
                s += (t.kappa * t.y[a] * t.x[b]).powi(2);
            }
        }
    }
    s.sqrt()
}

/// Frobenius norms of the unstructured, block-diagonal and pattern
/// sensitivity matrices equal `κ`, `κ_D`, `κ_S`, which are ordered.
pub fn norm_identities(seed: u64, count: usize) -> Outcome {
    let mut r = rng(seed);
    for case in 0..count {
        let net = random_directed_multiplex(&mut r);
        let n = net.nodes();
        let b = net.assemble_dense(DEFAULT_DENSE_CAP).unwrap();
        let t = triple(&net);
        let oracle = dense_triple(&net);

        let kappa = oracle.kappa;
        let kappa_d = masked_frobenius(&oracle, |a, b| a / n == b / n);
        let kappa_s = masked_frobenius(&oracle, |a, c| a / n == c / n && b[(a, c)] != 0.0);

        let full = sensitivity_matrix(&t, n);
        let block = sensitivity_matrix_multiplex(&t, &net);
        let pattern = structured_sensitivity_matrix(&t, &net);
        let checks = [
            ("kappa", full.frobenius_norm(), kappa),
            ("kappa", t.kappa, kappa),
            ("kappa_D", block.frobenius_norm(), kappa_d),
            ("kappa_D", structured_condition_number(&t, Cone::Block, &net), kappa_d),
            ("kappa_S", pattern.frobenius_norm(), kappa_s),
            ("kappa_S", structured_condition_number(&t, Cone::Pattern, &net), kappa_s),
        ];
        for (name, got, want) in checks {
            if (got - want).abs() > 1e-8 * want.max(1.0) {
                return Err(format!("case {case}: {name} {got} vs oracle {want}"));
            }
        }
        if !(kappa_s <= kappa_d * (1.0 + 1e-12) && kappa_d <= kappa * (1.0 + 1e-12)) {
            return Err(format!("case {case}: chain broken {kappa_s} {kappa_d} {kappa}"));
        }
        for (e, _) in net.editable_edges() {
            let (s, d, u) = (pattern.entry(&e), block.entry(&e), full.entry(&e));
            if !(s <= d && d <= u) {
                return Err(format!("case {case}: entrywise order broken at {e}"));
            }
        }
    }
    Ok(format!("{count} multiplexes"))
}

/// Defining form, provable bound chain, the undirected and single-layer
/// special cases of the Perron communicability.
pub fn communicability_chain(seed: u64, count: usize) -> Outcome {
    let mut r = rng(seed);
    let mut unequal_forms = 0;
    for case in 0..count {
        let directed = case % 3 != 0;
        let net = random_network(&mut r, 40, directed);
        let t = triple(&net);
        let rep = perron_communicability(&t, net.nodes(), net.layers()).unwrap();
        let defining = exp0(t.rho) * t.y.iter().sum::<f64>() * t.x.iter().sum::<f64>();
        if (rep.c_pn - defining).abs() > 1e-10 * defining {
            return Err(format!("case {case}: c_pn {} vs {defining}", rep.c_pn));
        }
        if !rep.bounds_hold(1e-12) {
            return Err(format!("case {case}: bound chain broken: {rep:?}"));
        }
        if net.layers() == 1 && !rep.forms_agree(1e-10) {
            return Err(format!("case {case}: single-layer forms differ"));
        }
        if !rep.forms_agree(1e-10) {
            unequal_forms += 1;
        }
        if !directed {
            if max_abs_diff(&rep.c_x, &rep.c_y) > 1e-12 || rep.phi > 1e-6 {
                return Err(format!("case {case}: undirected c_X != c_Y"));
            }
            let sym = exp0(t.rho) * rep.c_y.iter().map(|c| c * c).sum::<f64>();
            if (rep.c_pn_marginal - sym).abs() > 1e-10 * sym {
                return Err(format!("case {case}: symmetric form differs"));
            }
        }
    }
    Ok(format!("{count} instances ({unequal_forms} multilayer with distinct marginal form)"))
}

fn unit_random_nonnegative(r: &mut impl Rng, d: usize, keep: impl Fn(usize, usize) -> bool) -> DMatrix<f64> {
    let mut e = DMatrix::from_fn(d, d, |a, b| if keep(a, b) { r.gen::<f64>() } else { 0.0 });
    let nrm = e.norm();
    e /= nrm;
    e
}

fn rayleigh_shift(t: &PerronTriple, e: &DMatrix<f64>) -> f64 {
    let y = DVector::from_column_slice(&t.y);
    let x = DVector::from_column_slice(&t.x);
    y.dot(&(e * x)) * t.kappa
}

/// Ratio of first-order prediction errors at `ε = 1e-3` and `ε = 5e-4`.
pub fn halving_ratio(b: &DMatrix<f64>, e: &DMatrix<f64>) -> f64 {
    let cap = DEFAULT_DENSE_CAP;
    let t = perron_dense_oracle(b, cap).unwrap();
    let slope = rayleigh_shift(&t, e);
    let err = |eps: f64| {
        let rho = perron_dense_oracle(&(b + e * eps), cap).unwrap().rho;
        (rho - t.rho - eps * slope).abs()
    };
    err(1e-3) / err(5e-4)
}

/// The first-order error is quadratic in `ε` for `W`, structured `W` and
/// random nonnegative perturbations.
pub fn finite_difference(seed: u64, count: usize) -> Outcome {
    let mut r = rng(seed);
    let mut ratios = Vec::new();
    for case in 0..count {
        let spec = RandomSpec {
            nodes: r.gen_range(3..=8),
            layers: r.gen_range(2..=3),
            density: 0.3,
            directed: true,
            max_weight: None,
        };
        let gamma = r.gen_range(0.3..1.5);
        let net: Network = random_multiplex(&mut r, &spec, gamma).into();
        let b = net.assemble_dense(DEFAULT_DENSE_CAP).unwrap();
        let t = triple(&net);
        let d = net.dim();
        let perturbations = [
            ("W", wilkinson(&t).to_dense()),
            ("W|D", structured_wilkinson(&t, Cone::Block, &net).unwrap().to_dense()),
            ("W|S", structured_wilkinson(&t, Cone::Pattern, &net).unwrap().to_dense()),
            ("random", unit_random_nonnegative(&mut r, d, |_, _| true)),
        ];
        for (name, e) in perturbations {
            let ratio = halving_ratio(&b, &e);
            if !(3.0..=5.0).contains(&ratio) {
                return Err(format!("case {case}, E = {name}: error ratio {ratio:.3}"));
            }
            ratios.push(ratio);
        }
    }
    let (lo, hi) = ratios.iter().fold((f64::MAX, f64::MIN), |(l, h), &v| (l.min(v), h.max(v)));
    Ok(format!("{} perturbations, ratios in [{lo:.3}, {hi:.3}]", ratios.len()))
}

/// No seeded nonnegative unit-Frobenius perturbation beats `κ`, and none
/// inside the block cone beats `κ_D`.
pub fn wilkinson_optimality(seed: u64, draws: usize) -> Outcome {
    let mut r = rng(seed);
    let net = random_directed_multiplex(&mut r);
    let (n, d) = (net.nodes(), net.dim());
    let t = triple(&net);
    let kappa_d = structured_condition_number(&t, Cone::Block, &net);
    let w = wilkinson(&t).to_dense();
    if (rayleigh_shift(&t, &w) - t.kappa).abs() > 1e-12 * t.kappa {
        return Err("W does not attain kappa".into());
    }
    let mut best = (0.0_f64, 0.0_f64);
    for draw in 0..draws {
        let e = unit_random_nonnegative(&mut r, d, |_, _| true);
        let s = rayleigh_shift(&t, &e);
        if s > t.kappa {
            return Err(format!("draw {draw}: {s} exceeds kappa {}", t.kappa));
        }
        let e = unit_random_nonnegative(&mut r, d, |a, b| a / n == b / n);
        let s_d = rayleigh_shift(&t, &e);
        if s_d > kappa_d {
            return Err(format!("draw {draw}: {s_d} exceeds kappa_D {kappa_d}"));
        }
        best = (best.0.max(s), best.1.max(s_d));
    }
    Ok(format!(
        "{draws} draws, best {:.4} <= kappa {:.4}, block best {:.4} <= kappa_D {:.4}",
        best.0, t.kappa, best.1, kappa_d
    ))
}

/// Full enumeration of admissible insertion positions, best first.
pub fn brute_force_insertions(t: &PerronTriple, net: &Network, opts: &InsertionOptions) -> Vec<(EdgeKey, f64)> {
    let (n, d) = (net.nodes(), net.dim());
    let mut all = Vec::new();
    for a in 0..d {
        for b in 0..d {
            let e = EdgeKey::from_flat(a, b, n);
            if (a == b && !opts.allow_self_loops) || !net.is_editable(&e) {
                continue;
            }
            let present = |e: &EdgeKey| net.weight(e) != 0.0;
            let keep = match opts.candidates {
                CandidateSet::AllPairs => true,
                CandidateSet::ExistingOnly => present(&e),
                CandidateSet::Pattern => present(&e) && e.is_intra_layer(),
                CandidateSet::AbsentOnly => match opts.pairing {
                    Pairing::Ordered => !present(&e),
                    Pairing::Unordered => !present(&e) && !present(&e.reversed()),
                },
            };
            if keep {
                all.push((e, t.kappa * t.y[a] * t.x[b]));
            }
        }
    }
    sort_and_pair(all, opts.pairing, true, n)
}

fn sort_and_pair(mut all: Vec<(EdgeKey, f64)>, pairing: Pairing, descending: bool, n: usize) -> Vec<(EdgeKey, f64)> {
    all.sort_by(|(e, s), (f, u)| {
        let by_score = if descending { u.total_cmp(s) } else { s.total_cmp(u) };
        by_score.then(e.tie_key().cmp(&f.tie_key()))
    });
    if pairing == Pairing::Unordered {
        let mut seen = std::collections::HashSet::new();
        all.retain(|(e, _)| {
            let (a, b) = (e.source(n), e.target(n));
            seen.insert((a.min(b), a.max(b)))
        });
    }
    all
}

/// The `top_k` weakest existing editable edges, filtered by connectivity.
pub fn brute_force_removals(t: &PerronTriple, net: &Network, opts: &RemovalOptions) -> Vec<(EdgeKey, f64)> {
    let n = net.nodes();
    let all = net
        .editable_edges()
        .into_iter()
        .filter(|(e, _)| !opts.intra_layer_only || e.is_intra_layer())
        .map(|(e, _)| (e, t.kappa * t.y[e.source(n)] * t.x[e.target(n)]))
        .collect();
    sort_and_pair(all, opts.pairing, false, n)
        .into_iter()
        .filter(|(e, _)| {
            !opts.require_connected || {
                let reduced = net.remove_edge(e, opts.scope).unwrap();
                brute_force_strongly_connected(&reduced.assemble_dense(DEFAULT_DENSE_CAP).unwrap())
            }
        })
        .take(opts.top_k)
        .collect()
}

fn same_ranking(got: &[RankedEdge], want: &[(EdgeKey, f64)]) -> bool {
    got.len() == want.len() && got.iter().zip(want).all(|(g, (e, s))| g.edge == *e && (g.score - s).abs() <= 1e-15 * s.abs().max(1.0))
}

/// Lazy insertion ranking and removal scan equal exhaustive enumeration.
pub fn ranking_equivalence(seed: u64, count: usize) -> Outcome {
    let mut r = rng(seed);
    let mut compared = 0;
    for case in 0..count {
        let net = random_network(&mut r, 60, case % 4 != 0);
        let t = triple(&net);
        for candidates in [
            CandidateSet::AllPairs,
            CandidateSet::AbsentOnly,
            CandidateSet::ExistingOnly,
            CandidateSet::Pattern,
        ] {
            for pairing in [Pairing::Ordered, Pairing::Unordered] {
                for allow_self_loops in [false, true] {
                    let want = brute_force_insertions(
                        &t,
                        &net,
                        &InsertionOptions {
                            top_k: usize::MAX,
                            candidates,
                            pairing,
                            allow_self_loops,
                        },
                    );
                    let top_k = [1, 5, want.len().max(1)][r.gen_range(0..3)];
                    let opts = InsertionOptions {
                        top_k,
                        candidates,
                        pairing,
                        allow_self_loops,
                    };
                    let got = rank_insertions(&t, &net, &opts).unwrap();
                    let want = &want[..top_k.min(want.len())];
                    if !same_ranking(&got, want) {
                        return Err(format!("case {case}: insertion ranking differs for {opts:?}"));
                    }
                    compared += 1;
                }
            }
        }
        for pairing in [Pairing::Ordered, Pairing::Unordered] {
            for (require_connected, intra_layer_only) in [(false, false), (true, false), (true, true)] {
                let opts = RemovalOptions {
                    top_k: 5,
                    require_connected,
                    intra_layer_only,
                    pairing,
                    scope: EditScope::Entry,
                };
                let want = brute_force_removals(&t, &net, &opts);
                match rank_removals(&t, &net, &opts) {
                    Ok(got) if same_ranking(&got, &want[..want.len().min(5)]) => {}
                    Err(Error::NoFeasibleRemoval | Error::NoEdges) if want.is_empty() => {}
                    _ => return Err(format!("case {case}: removal ranking differs for {opts:?}")),
                }
                compared += 1;
            }
        }
    }
    Ok(format!("{count} instances, {compared} rankings compared"))
}

/// Dense supra-adjacency assembled independently from the edge list.
pub fn dense_from_entries(net: &Network) -> DMatrix<f64> {
    let n = net.nodes();
    let mut b = DMatrix::zeros(net.dim(), net.dim());
    for (e, w) in net.supra_entries() {
        b[(e.source(n), e.target(n))] += w;
    }
    b
}

pub fn operator_matrix(net: &Network) -> DMatrix<f64> {
    to_dense(&supra_operator(net))
}
