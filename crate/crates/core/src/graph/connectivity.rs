use std::collections::VecDeque;

use super::Network;

/// Adjacency lists of the directed supra graph on `NL` vertices.
#[derive(Debug, Clone)]
pub struct SupraAdjacency {
    out: Vec<Vec<usize>>,
}

impl SupraAdjacency {
    pub fn new(net: &Network) -> Self {
        let n = net.nodes();
        let mut out = vec![Vec::new(); net.dim()];
        for (e, _) in net.supra_entries() {
            out[e.source(n)].push(e.target(n));
        }
        Self { out }
    }

    pub fn len(&self) -> usize {
        self.out.len()
    }

    pub fn is_empty(&self) -> bool {
        self.out.is_empty()
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn reversed(&self) -> Self {
        let mut rev = vec![Vec::new(); self.out.len()];
        for (u, succ) in self.out.iter().enumerate() {
            for &v in succ {
                rev[v].push(u);
            }
        }
        Self { out: rev }
    }

    /// Vertices reachable from `start`, including itself.
    pub fn reachable_from(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &self.out[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    pub fn is_strongly_connected(&self) -> bool {
        if self.out.is_empty() {
            return false;
        }
        self.reachable_from(0).into_iter().all(|s| s)
            && self.reversed().reachable_from(0).into_iter().all(|s| s)
    }
}

/// True iff the directed graph of the supra-adjacency matrix is strongly
/// connected, i.e. the matrix is irreducible.
pub fn is_strongly_connected(net: &Network) -> bool {
    SupraAdjacency::new(net).is_strongly_connected()
}

/// Physical nodes (0-based, ascending) of the largest connected component
/// of the aggregate graph: `i` and `j` are linked when any layer or
/// inter-layer block joins them, in either direction. Multiplex coupling is
/// ignored. Ties go to the component holding the smallest node.
pub fn largest_component(net: &Network) -> Vec<usize> {
    let n = net.nodes();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for (e, _) in net.editable_edges() {
        let (a, b) = (find(&mut parent, e.i - 1), find(&mut parent, e.j - 1));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let roots: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
    let mut sizes = vec![0usize; n];
    roots.iter().for_each(|&r| sizes[r] += 1);
    let best = (0..n).max_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(b.cmp(&a))).unwrap_or(0);
    (0..n).filter(|&v| roots[v] == best).collect()
}
