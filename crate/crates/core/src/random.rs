//! Seeded random networks for benchmarks and property checks.
//!
//! Every generated network is strongly connected: each layer carries a
//! directed Hamiltonian cycle (both directions when undirected) before
//! random extra edges are sprinkled in.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{EdgeKey, MultilayerNetwork, MultiplexNetwork, Network};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSpec {
    pub nodes: usize,
    pub layers: usize,
    /// Probability of each extra edge.
    pub density: f64,
    pub directed: bool,
    /// Integer weights in `1..=max_weight` when set, otherwise uniform in `(0.1, 2]`.
    pub max_weight: Option<u32>,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn weight<R: Rng>(rng: &mut R, spec: &RandomSpec) -> f64 {
    match spec.max_weight {
        Some(m) => rng.gen_range(1..=m) as f64,
        None => rng.gen_range(0.1..=2.0),
    }
}

/// Edges of one layer: a cycle through a random permutation plus extras.
/// Undirected specs yield each edge once with `i < j`.
fn layer_edges<R: Rng>(rng: &mut R, spec: &RandomSpec, layer: usize) -> Vec<(EdgeKey, f64)> {
    let n = spec.nodes;
    let mut present = vec![vec![false; n]; n];
    let add = |i: usize, j: usize, present: &mut Vec<Vec<bool>>| -> bool {
        let (i, j) = if spec.directed { (i, j) } else { (i.min(j), i.max(j)) };
        if i == j || present[i][j] {
            return false;
        }
        present[i][j] = true;
        true
    };
    let mut edges = Vec::new();
    if n > 1 {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let cycle_len = if !spec.directed && n == 2 { 1 } else { n };
        for c in 0..cycle_len {
            let (i, j) = (order[c], order[(c + 1) % n]);
            if add(i, j, &mut present) {
                let (i, j) = if spec.directed { (i, j) } else { (i.min(j), i.max(j)) };
                edges.push((EdgeKey::intra(i + 1, j + 1, layer), weight(rng, spec)));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if (spec.directed || i < j) && i != j && rng.gen_bool(spec.density) && add(i, j, &mut present) {
                edges.push((EdgeKey::intra(i + 1, j + 1, layer), weight(rng, spec)));
            }
        }
    }
    edges
}

/// Strongly connected multiplex with coupling `gamma > 0`.
pub fn random_multiplex<R: Rng>(rng: &mut R, spec: &RandomSpec, gamma: f64) -> MultiplexNetwork {
    let edges: Vec<_> = (1..=spec.layers).flat_map(|l| layer_edges(rng, spec, l)).collect();
    MultiplexNetwork::from_edges(spec.nodes, spec.layers, gamma, spec.directed, edges)
        .expect("generated edges are valid")
}

/// Strongly connected general multilayer network: per-layer cycles, one
/// random link in each direction between consecutive layers, and random
/// inter-layer extras with probability `density / L`.
pub fn random_multilayer<R: Rng>(rng: &mut R, spec: &RandomSpec) -> MultilayerNetwork {
    let (n, layers) = (spec.nodes, spec.layers);
    let mut edges: Vec<(EdgeKey, f64)> = (1..=layers).flat_map(|l| layer_edges(rng, spec, l)).collect();
    let mut taken: std::collections::HashSet<EdgeKey> = edges.iter().map(|(e, _)| *e).collect();
    if !spec.directed {
        taken.extend(edges.iter().map(|(e, _)| e.reversed()).collect::<Vec<_>>());
    }
    let mut push = |e: EdgeKey, w: f64, edges: &mut Vec<(EdgeKey, f64)>| {
        if taken.insert(e) {
            if !spec.directed {
                taken.insert(e.reversed());
            }
            edges.push((e, w));
        }
    };
    for k in 1..layers {
        let e = EdgeKey::new(rng.gen_range(1..=n), rng.gen_range(1..=n), k, k + 1);
        let w = weight(rng, spec);
        push(e, w, &mut edges);
        if spec.directed {
            let back = EdgeKey::new(rng.gen_range(1..=n), rng.gen_range(1..=n), k + 1, k);
            let w = weight(rng, spec);
            push(back, w, &mut edges);
        }
    }
    let p = (spec.density / layers as f64).min(1.0);
    for k in 1..=layers {
        for l in (1..=layers).filter(|&l| l != k && (spec.directed || k < l)) {
            for i in 1..=n {
                for j in 1..=n {
                    if rng.gen_bool(p) {
                        let w = weight(rng, spec);
                        push(EdgeKey::new(i, j, k, l), w, &mut edges);
                    }
                }
            }
        }
    }
    MultilayerNetwork::from_edges(n, layers, spec.directed, edges).expect("generated edges are valid")
}

/// Either kind, chosen at random, with `NL ≤ max_dim`.
pub fn random_network<R: Rng>(rng: &mut R, max_dim: usize, directed: bool) -> Network {
    let layers = rng.gen_range(1..=4.min(max_dim / 2).max(1));
    let nodes = rng.gen_range(2..=(max_dim / layers).max(2));
    let spec = RandomSpec {
        nodes,
        layers,
        density: rng.gen_range(0.05..0.4),
        directed,
        max_weight: None,
    };
    if rng.gen_bool(0.5) {
        let gamma = rng.gen_range(0.2..2.0);
        random_multiplex(rng, &spec, gamma).into()
    } else {
        random_multilayer(rng, &spec).into()
    }
}
