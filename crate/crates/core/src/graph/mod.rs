//! Multilayer and multiplex network models.
//!
//! A network has `N` physical nodes replicated over `L` layers. Node `i` of
//! layer `k` (both 1-based) lives at flat position `N(k-1) + (i-1)` of the
//! `NL`-dimensional supra space.

mod connectivity;
mod csr;
mod io;

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;

pub use connectivity::{is_strongly_connected, largest_component, SupraAdjacency};
pub use csr::CsrBlock;
pub use io::{
    load_multilayer, load_multiplex, parse_multilayer, parse_multiplex, write_multilayer,
    write_multiplex,
};

use crate::error::{Error, Result};

/// Largest supra dimension `NL` for which dense assembly is allowed by default.
pub const DEFAULT_DENSE_CAP: usize = 5000;

/// Edge from node `i` in layer `k` to node `j` in layer `l`. All indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeKey {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
}

impl EdgeKey {
    pub const fn new(i: usize, j: usize, k: usize, l: usize) -> Self {
        Self { i, j, k, l }
    }

    /// Intra-layer edge `i -> j` in layer `layer`.
    pub const fn intra(i: usize, j: usize, layer: usize) -> Self {
        Self::new(i, j, layer, layer)
    }

    /// Recovers the key from 0-based flat supra indices.
    pub fn from_flat(source: usize, target: usize, n: usize) -> Self {
        Self {
            i: source % n + 1,
            j: target % n + 1,
            k: source / n + 1,
            l: target / n + 1,
        }
    }

    pub fn source(&self, n: usize) -> usize {
        n * (self.k - 1) + self.i - 1
    }

    pub fn target(&self, n: usize) -> usize {
        n * (self.l - 1) + self.j - 1
    }

    pub fn reversed(&self) -> Self {
        Self::new(self.j, self.i, self.l, self.k)
    }

    pub fn is_intra_layer(&self) -> bool {
        self.k == self.l
    }

    pub fn is_self_loop(&self) -> bool {
        self.i == self.j && self.k == self.l
    }

    /// Sort key used to break ties between equal scores.
    pub fn tie_key(&self) -> (usize, usize, usize, usize) {
        (self.k, self.l, self.i, self.j)
    }

    pub fn check(&self, n: usize, layers: usize) -> Result<()> {
        let ok = (1..=n).contains(&self.i)
            && (1..=n).contains(&self.j)
            && (1..=layers).contains(&self.k)
            && (1..=layers).contains(&self.l);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidEdge {
                edge: *self,
                reason: format!("indices must lie in 1..={n} (nodes) and 1..={layers} (layers)"),
            })
        }
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{},{},{}}}", self.i, self.j, self.k, self.l)
    }
}

/// Which supra-matrix entries an edge edit touches on a directed network.
///
/// Undirected networks always update both `(a, b)` and `(b, a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EditScope {
    /// Only the addressed entry.
    #[default]
    Entry,
    /// The addressed entry and its transpose.
    Pair,
    /// Both entries when they currently carry the same weight (a reciprocal
    /// link, or an absent pair), otherwise only the addressed entry.
    Reciprocal,
}

/// General multilayer network: an `L×L` grid of sparse `N×N` blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct MultilayerNetwork {
    n: usize,
    layers: usize,
    blocks: BTreeMap<(usize, usize), CsrBlock>,
    directed: bool,
}

impl MultilayerNetwork {
    /// Builds a network from weighted edges. With `directed == false` every
    /// edge also populates its transpose. Duplicates are rejected.
    pub fn from_edges<I>(n: usize, layers: usize, directed: bool, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (EdgeKey, f64)>,
    {
        check_shape(n, layers)?;
        let mut maps: BTreeMap<(usize, usize), BTreeMap<(usize, usize), f64>> = BTreeMap::new();
        for (edge, w) in edges {
            edge.check(n, layers)?;
            check_weight(edge, w)?;
            insert_unique(&mut maps, edge, w)?;
            if !directed && !edge.is_self_loop() {
                insert_unique(&mut maps, edge.reversed(), w)?;
            }
        }
        Ok(Self::from_maps(n, layers, directed, maps))
    }

    fn from_maps(
        n: usize,
        layers: usize,
        directed: bool,
        maps: BTreeMap<(usize, usize), BTreeMap<(usize, usize), f64>>,
    ) -> Self {
        let blocks = maps
            .into_iter()
            .filter(|(_, m)| !m.is_empty())
            .map(|(kl, m)| (kl, CsrBlock::from_map(n, &m)))
            .collect();
        Self {
            n,
            layers,
            blocks,
            directed,
        }
    }

    pub fn nodes(&self) -> usize {
        self.n
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Stored block for the 0-based layer pair, if any entry is present.
    pub fn block(&self, k: usize, l: usize) -> Option<&CsrBlock> {
        self.blocks.get(&(k, l))
    }

    /// Iterates stored blocks as `((k, l), block)` with 0-based layers.
    pub fn blocks(&self) -> impl Iterator<Item = ((usize, usize), &CsrBlock)> {
        self.blocks.iter().map(|(&kl, b)| (kl, b))
    }

    pub fn weight(&self, e: &EdgeKey) -> f64 {
        self.blocks
            .get(&(e.k - 1, e.l - 1))
            .map_or(0.0, |b| b.get(e.i - 1, e.j - 1))
    }

    fn with_weights(&self, updates: &[(EdgeKey, f64)]) -> Self {
        let mut out = self.clone();
        for &(e, w) in updates {
            let kl = (e.k - 1, e.l - 1);
            let mut map = out.blocks.get(&kl).map(CsrBlock::to_map).unwrap_or_default();
            if w == 0.0 {
                map.remove(&(e.i - 1, e.j - 1));
            } else {
                map.insert((e.i - 1, e.j - 1), w);
            }
            if map.is_empty() {
                out.blocks.remove(&kl);
            } else {
                out.blocks.insert(kl, CsrBlock::from_map(self.n, &map));
            }
        }
        out
    }
}

/// Multiplex network: one adjacency matrix per layer, coupled by `gamma`
/// between every pair of copies of the same node.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplexNetwork {
    n: usize,
    layers: Vec<CsrBlock>,
    gamma: f64,
    directed: bool,
}

impl MultiplexNetwork {
    /// Builds a multiplex from intra-layer edges `(layer, i, j, weight)` with
    /// 1-based indices. Self-loops and duplicates are rejected.
    pub fn from_edges<I>(
        n: usize,
        layers: usize,
        gamma: f64,
        directed: bool,
        edges: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (EdgeKey, f64)>,
    {
        check_shape(n, layers)?;
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "coupling weight must be finite and nonnegative, got {gamma}"
            )));
        }
        let mut maps = vec![BTreeMap::new(); layers];
        for (edge, w) in edges {
            edge.check(n, layers)?;
            check_multiplex_edge(&edge)?;
            check_weight(edge, w)?;
            let map = &mut maps[edge.k - 1];
            let mut put = |i: usize, j: usize| -> Result<()> {
                if map.insert((i - 1, j - 1), w).is_some() {
                    return Err(Error::InvalidEdge {
                        edge,
                        reason: "duplicate edge".into(),
                    });
                }
                Ok(())
            };
            put(edge.i, edge.j)?;
            if !directed {
                put(edge.j, edge.i)?;
            }
        }
        Ok(Self {
            n,
            layers: maps.iter().map(|m| CsrBlock::from_map(n, m)).collect(),
            gamma,
            directed,
        })
    }

    /// Recognizes a general multilayer network whose inter-layer blocks are
    /// all the same `γ I`. A single layer is read with `γ = 0`.
    pub fn from_multilayer(m: &MultilayerNetwork) -> Result<Self> {
        let (n, layers) = (m.n, m.layers);
        let mut gamma = None;
        for k in 0..layers {
            for l in (0..layers).filter(|&l| l != k) {
                let not_identity = || {
                    Error::NotMultiplex(format!(
                        "block ({},{}) is not a positive multiple of the identity",
                        k + 1,
                        l + 1
                    ))
                };
                let block = m.blocks.get(&(k, l)).ok_or_else(not_identity)?;
                // n stored entries, all on the diagonal and nonzero.
                if block.nnz() != n || (0..n).any(|i| block.get(i, i) == 0.0) {
                    return Err(not_identity());
                }
                for i in 0..n {
                    let w = block.get(i, i);
                    let g = *gamma.get_or_insert(w);
                    if g != w {
                        return Err(Error::NotMultiplex(format!("coupling weights {g} and {w} differ")));
                    }
                }
            }
        }
        let blocks: Vec<CsrBlock> = (0..layers)
            .map(|l| m.blocks.get(&(l, l)).cloned().unwrap_or_else(|| CsrBlock::empty(n)))
            .collect();
        if let Some(l) = blocks.iter().position(|b| (0..n).any(|i| b.get(i, i) != 0.0)) {
            return Err(Error::NotMultiplex(format!("layer {} has a self-loop", l + 1)));
        }
        Self::from_layers(blocks, gamma.unwrap_or(0.0), m.directed)
    }

    /// Builds a multiplex from already assembled layer blocks.
    pub fn from_layers(layers: Vec<CsrBlock>, gamma: f64, directed: bool) -> Result<Self> {
        let n = layers.first().map_or(0, CsrBlock::order);
        check_shape(n, layers.len())?;
        if let Some(b) = layers.iter().find(|b| b.order() != n) {
            return Err(Error::Dimension {
                expected: n,
                actual: b.order(),
            });
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "coupling weight must be finite and nonnegative, got {gamma}"
            )));
        }
        Ok(Self {
            n,
            layers,
            gamma,
            directed,
        })
    }

    pub fn nodes(&self) -> usize {
        self.n
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn layer(&self, l: usize) -> &CsrBlock {
        &self.layers[l]
    }

    pub fn layer_blocks(&self) -> &[CsrBlock] {
        &self.layers
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn weight(&self, e: &EdgeKey) -> f64 {
        if e.k == e.l {
            self.layers[e.k - 1].get(e.i - 1, e.j - 1)
        } else if e.i == e.j {
            self.gamma
        } else {
            0.0
        }
    }

    fn with_weights(&self, updates: &[(EdgeKey, f64)]) -> Self {
        let mut out = self.clone();
        for &(e, w) in updates {
            let mut map = out.layers[e.k - 1].to_map();
            if w == 0.0 {
                map.remove(&(e.i - 1, e.j - 1));
            } else {
                map.insert((e.i - 1, e.j - 1), w);
            }
            out.layers[e.k - 1] = CsrBlock::from_map(self.n, &map);
        }
        out
    }
}

/// Either network kind, behind a common interface.
#[derive(Debug, Clone, PartialEq)]
pub enum Network {
    Multilayer(MultilayerNetwork),
    Multiplex(MultiplexNetwork),
}

impl From<MultilayerNetwork> for Network {
    fn from(net: MultilayerNetwork) -> Self {
        Network::Multilayer(net)
    }
}

impl From<MultiplexNetwork> for Network {
    fn from(net: MultiplexNetwork) -> Self {
        Network::Multiplex(net)
    }
}

impl Network {
    pub fn nodes(&self) -> usize {
        match self {
            Network::Multilayer(m) => m.n,
            Network::Multiplex(m) => m.n,
        }
    }

    pub fn layers(&self) -> usize {
        match self {
            Network::Multilayer(m) => m.layers,
            Network::Multiplex(m) => m.layers.len(),
        }
    }

    /// Supra dimension `NL`.
    pub fn dim(&self) -> usize {
        self.nodes() * self.layers()
    }

    pub fn is_directed(&self) -> bool {
        match self {
            Network::Multilayer(m) => m.directed,
            Network::Multiplex(m) => m.directed,
        }
    }

    pub fn as_multiplex(&self) -> Option<&MultiplexNetwork> {
        match self {
            Network::Multiplex(m) => Some(m),
            Network::Multilayer(_) => None,
        }
    }

    /// Supra-matrix entry for the edge, including multiplex coupling.
    pub fn weight(&self, e: &EdgeKey) -> f64 {
        match self {
            Network::Multilayer(m) => m.weight(e),
            Network::Multiplex(m) => m.weight(e),
        }
    }

    /// Intra-layer block `l` (0-based), if stored.
    pub fn layer_block(&self, l: usize) -> Option<&CsrBlock> {
        match self {
            Network::Multilayer(m) => m.block(l, l),
            Network::Multiplex(m) => Some(&m.layers[l]),
        }
    }

    /// Every nonzero supra-matrix entry, including multiplex coupling.
    pub fn supra_entries(&self) -> Vec<(EdgeKey, f64)> {
        let mut out = self.editable_edges();
        if let Network::Multiplex(m) = self {
            if m.gamma > 0.0 {
                let layers = m.layers.len();
                for k in 1..=layers {
                    for l in (1..=layers).filter(|&l| l != k) {
                        out.extend((1..=m.n).map(|i| (EdgeKey::new(i, i, k, l), m.gamma)));
                    }
                }
            }
        }
        out
    }

    /// Stored edges that the edit API may change. Multiplex coupling is excluded.
    pub fn editable_edges(&self) -> Vec<(EdgeKey, f64)> {
        match self {
            Network::Multilayer(m) => m
                .blocks
                .iter()
                .flat_map(|(&(k, l), b)| {
                    b.iter()
                        .map(move |(i, j, w)| (EdgeKey::new(i + 1, j + 1, k + 1, l + 1), w))
                })
                .collect(),
            Network::Multiplex(m) => m
                .layers
                .iter()
                .enumerate()
                .flat_map(|(l, b)| b.iter().map(move |(i, j, w)| (EdgeKey::intra(i + 1, j + 1, l + 1), w)))
                .collect(),
        }
    }

    /// Whether the edit API accepts this edge.
    pub fn is_editable(&self, e: &EdgeKey) -> bool {
        e.check(self.nodes(), self.layers()).is_ok()
            && match self {
                Network::Multilayer(_) => true,
                Network::Multiplex(_) => check_multiplex_edge(e).is_ok(),
            }
    }

    /// The entries an edit of `e` touches under `scope`.
    pub fn edit_targets(&self, e: &EdgeKey, scope: EditScope) -> Vec<EdgeKey> {
        let rev = e.reversed();
        let pair = if e.is_self_loop() {
            false
        } else if !self.is_directed() {
            true
        } else {
            match scope {
                EditScope::Entry => false,
                EditScope::Pair => true,
                EditScope::Reciprocal => self.weight(e) == self.weight(&rev),
            }
        };
        if pair {
            vec![*e, rev]
        } else {
            vec![*e]
        }
    }

    /// Adds `delta` to the weight of `e` using the default scope: the
    /// transpose entry is updated too when the network is undirected.
    pub fn apply_edge_delta(&self, e: &EdgeKey, delta: f64) -> Result<Network> {
        self.apply_edge_delta_with(e, delta, EditScope::Entry)
    }

    /// Adds `delta` to every entry selected by `scope`. Entries that reach
    /// zero are removed; new entries are created for positive `delta`.
    pub fn apply_edge_delta_with(&self, e: &EdgeKey, delta: f64, scope: EditScope) -> Result<Network> {
        self.check_editable(e)?;
        if !delta.is_finite() {
            return Err(Error::InvalidParameter(format!("edge delta must be finite, got {delta}")));
        }
        if delta == 0.0 {
            return Ok(self.clone());
        }
        let updates = self
            .edit_targets(e, scope)
            .into_iter()
            .map(|t| {
                let w = self.weight(&t) + delta;
                if w < 0.0 {
                    Err(Error::NegativeWeight { edge: t, weight: w })
                } else {
                    Ok((t, w))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.with_weights(&updates))
    }

    /// Deletes every entry selected by `scope`.
    pub fn remove_edge(&self, e: &EdgeKey, scope: EditScope) -> Result<Network> {
        self.check_editable(e)?;
        let updates: Vec<_> = self.edit_targets(e, scope).into_iter().map(|t| (t, 0.0)).collect();
        Ok(self.with_weights(&updates))
    }

    fn check_editable(&self, e: &EdgeKey) -> Result<()> {
        e.check(self.nodes(), self.layers())?;
        if let Network::Multiplex(_) = self {
            check_multiplex_edge(e)?;
        }
        Ok(())
    }

    fn with_weights(&self, updates: &[(EdgeKey, f64)]) -> Network {
        match self {
            Network::Multilayer(m) => Network::Multilayer(m.with_weights(updates)),
            Network::Multiplex(m) => Network::Multiplex(m.with_weights(updates)),
        }
    }

    /// Dense supra-adjacency matrix.
    pub fn assemble_dense(&self, cap: usize) -> Result<DMatrix<f64>> {
        let dim = self.dim();
        if dim > cap {
            return Err(Error::DenseCapExceeded { order: dim, cap });
        }
        let n = self.nodes();
        let mut b = DMatrix::zeros(dim, dim);
        for (e, w) in self.supra_entries() {
            b[(e.source(n), e.target(n))] = w;
        }
        Ok(b)
    }

    /// The subnetwork on the physical nodes `keep` (0-based), in every
    /// layer. Nodes are relabelled in increasing order of their old index.
    pub fn restrict_nodes(&self, keep: &[usize]) -> Result<Network> {
        let n = self.nodes();
        let mut new_index = vec![None; n];
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(&bad) = sorted.iter().find(|&&i| i >= n) {
            return Err(Error::InvalidParameter(format!("node index {} out of range 1..={n}", bad + 1)));
        }
        for (new, &old) in sorted.iter().enumerate() {
            new_index[old] = Some(new);
        }
        let m = sorted.len();
        check_shape(m, self.layers())?;
        let mut maps: BTreeMap<(usize, usize), BTreeMap<(usize, usize), f64>> = BTreeMap::new();
        for (e, w) in self.editable_edges() {
            if let (Some(i), Some(j)) = (new_index[e.i - 1], new_index[e.j - 1]) {
                maps.entry((e.k - 1, e.l - 1)).or_default().insert((i, j), w);
            }
        }
        Ok(match self {
            Network::Multilayer(ml) => MultilayerNetwork::from_maps(m, ml.layers, ml.directed, maps).into(),
            Network::Multiplex(mx) => {
                let layers = (0..mx.layers.len())
                    .map(|l| maps.get(&(l, l)).map_or_else(|| CsrBlock::empty(m), |map| CsrBlock::from_map(m, map)))
                    .collect();
                MultiplexNetwork::from_layers(layers, mx.gamma, mx.directed)?.into()
            }
        })
    }

    /// Converts a multiplex to the equivalent general multilayer network,
    /// with the coupling stored as explicit inter-layer blocks.
    pub fn to_multilayer(&self) -> MultilayerNetwork {
        match self {
            Network::Multilayer(m) => m.clone(),
            Network::Multiplex(m) => {
                let mut maps: BTreeMap<(usize, usize), BTreeMap<(usize, usize), f64>> = BTreeMap::new();
                for (e, w) in self.supra_entries() {
                    maps.entry((e.k - 1, e.l - 1))
                        .or_default()
                        .insert((e.i - 1, e.j - 1), w);
                }
                MultilayerNetwork::from_maps(m.n, m.layers.len(), m.directed, maps)
            }
        }
    }
}

fn check_shape(n: usize, layers: usize) -> Result<()> {
    if n == 0 || layers == 0 {
        return Err(Error::InvalidParameter(format!(
            "node and layer counts must be positive, got N={n}, L={layers}"
        )));
    }
    Ok(())
}

fn check_weight(edge: EdgeKey, w: f64) -> Result<()> {
    if w > 0.0 && w.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidEdge {
            edge,
            reason: format!("weight must be positive and finite, got {w}"),
        })
    }
}

fn check_multiplex_edge(e: &EdgeKey) -> Result<()> {
    if e.k != e.l {
        return Err(Error::InvalidEdge {
            edge: *e,
            reason: "multiplex coupling between layers is fixed by gamma".into(),
        });
    }
    if e.i == e.j {
        return Err(Error::InvalidEdge {
            edge: *e,
            reason: "multiplex layers do not admit self-loops".into(),
        });
    }
    Ok(())
}

fn insert_unique(
    maps: &mut BTreeMap<(usize, usize), BTreeMap<(usize, usize), f64>>,
    edge: EdgeKey,
    w: f64,
) -> Result<()> {
    let slot = maps.entry((edge.k - 1, edge.l - 1)).or_default();
    if slot.insert((edge.i - 1, edge.j - 1), w).is_some() {
        return Err(Error::InvalidEdge {
            edge,
            reason: "duplicate edge".into(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplex_survives_multilayer_round_trip() {
        let mx = MultiplexNetwork::from_edges(
            3,
            2,
            0.5,
            true,
            [(EdgeKey::intra(1, 2, 1), 1.0), (EdgeKey::intra(3, 1, 2), 2.0)],
        )
        .unwrap();
        let ml = Network::from(mx.clone()).to_multilayer();
        assert_eq!(MultiplexNetwork::from_multilayer(&ml).unwrap(), mx);

        let mut entries = Network::from(ml).supra_entries();
        entries.retain(|(e, _)| *e != EdgeKey::new(2, 2, 1, 2));
        let broken = MultilayerNetwork::from_edges(3, 2, true, entries).unwrap();
        assert!(matches!(MultiplexNetwork::from_multilayer(&broken), Err(Error::NotMultiplex(_))));
        let looped = MultilayerNetwork::from_edges(2, 1, true, [(EdgeKey::intra(1, 1, 1), 1.0)]).unwrap();
        assert!(MultiplexNetwork::from_multilayer(&looped).is_err());
    }

    fn two_node_multiplex(gamma: f64) -> Network {
        MultiplexNetwork::from_edges(1, 2, gamma, false, []).unwrap().into()
    }

    #[test]
    fn flat_index_round_trip() {
        let e = EdgeKey::new(2, 4, 3, 2);
        assert_eq!(e.source(4), 9);
        assert_eq!(e.target(4), 7);
        assert_eq!(EdgeKey::from_flat(9, 7, 4), e);
        assert_eq!(e.to_string(), "{2,4,3,2}");
    }

    #[test]
    fn multiplex_dense_coupling() {
        let b = two_node_multiplex(0.5).assemble_dense(DEFAULT_DENSE_CAP).unwrap();
        assert_eq!(b, DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.5, 0.0]));
    }

    #[test]
    fn multiplex_off_diagonal_blocks_are_scaled_identity() {
        let net: Network = MultiplexNetwork::from_edges(
            3,
            3,
            0.7,
            true,
            [(EdgeKey::intra(1, 2, 1), 1.0), (EdgeKey::intra(3, 1, 2), 2.0)],
        )
        .unwrap()
        .into();
        let b = net.assemble_dense(100).unwrap();
        for k in 0..3 {
            for l in (0..3).filter(|&l| l != k) {
                let blk = b.view((3 * k, 3 * l), (3, 3));
                assert_eq!(blk, DMatrix::<f64>::identity(3, 3) * 0.7);
            }
        }
    }

    #[test]
    fn dense_cap_is_enforced() {
        let err = two_node_multiplex(1.0).assemble_dense(1).unwrap_err();
        assert!(matches!(err, Error::DenseCapExceeded { order: 2, cap: 1 }));
    }

    #[test]
    fn zero_delta_is_identity() {
        let net = two_node_multiplex(1.0);
        let mut_net: Network = MultiplexNetwork::from_edges(2, 1, 0.0, false, [(EdgeKey::intra(1, 2, 1), 1.0)])
            .unwrap()
            .into();
        assert_eq!(mut_net.apply_edge_delta(&EdgeKey::intra(1, 2, 1), 0.0).unwrap(), mut_net);
        assert_eq!(net.clone(), net);
    }

    #[test]
    fn undirected_edit_updates_both_entries() {
        let net: Network = MultiplexNetwork::from_edges(2, 1, 0.0, false, [(EdgeKey::intra(1, 2, 1), 1.0)])
            .unwrap()
            .into();
        let up = net.apply_edge_delta(&EdgeKey::intra(1, 2, 1), 0.5).unwrap();
        assert_eq!(up.weight(&EdgeKey::intra(1, 2, 1)), 1.5);
        assert_eq!(up.weight(&EdgeKey::intra(2, 1, 1)), 1.5);
        let gone = up.apply_edge_delta(&EdgeKey::intra(2, 1, 1), -1.5).unwrap();
        assert!(gone.editable_edges().is_empty());
    }

    #[test]
    fn negative_weight_is_rejected() {
        let net: Network = MultiplexNetwork::from_edges(2, 1, 0.0, true, [(EdgeKey::intra(1, 2, 1), 1.0)])
            .unwrap()
            .into();
        let err = net.apply_edge_delta(&EdgeKey::intra(1, 2, 1), -1.5).unwrap_err();
        assert!(matches!(err, Error::NegativeWeight { .. }));
    }

    #[test]
    fn multiplex_coupling_is_not_editable() {
        let net = two_node_multiplex(1.0);
        assert!(net.apply_edge_delta(&EdgeKey::new(1, 1, 1, 2), 0.3).is_err());
        let three: Network = MultiplexNetwork::from_edges(2, 1, 1.0, true, []).unwrap().into();
        assert!(three.apply_edge_delta(&EdgeKey::intra(1, 1, 1), 0.3).is_err());
    }

    #[test]
    fn multiplex_rejects_self_loops_and_duplicates() {
        assert!(MultiplexNetwork::from_edges(2, 1, 1.0, true, [(EdgeKey::intra(1, 1, 1), 1.0)]).is_err());
        let dup = [(EdgeKey::intra(1, 2, 1), 1.0), (EdgeKey::intra(2, 1, 1), 1.0)];
        assert!(MultiplexNetwork::from_edges(2, 1, 1.0, false, dup).is_err());
        assert!(MultiplexNetwork::from_edges(2, 1, 1.0, true, dup).is_ok());
        assert!(MultiplexNetwork::from_edges(2, 1, -0.1, true, []).is_err());
    }

    #[test]
    fn multilayer_accepts_self_loops() {
        let net = MultilayerNetwork::from_edges(2, 1, true, [(EdgeKey::intra(1, 1, 1), 2.0)]).unwrap();
        assert_eq!(net.weight(&EdgeKey::intra(1, 1, 1)), 2.0);
    }

    #[test]
    fn scopes_on_directed_networks() {
        let edges = [
            (EdgeKey::intra(1, 2, 1), 1.0),
            (EdgeKey::intra(2, 1, 1), 1.0),
            (EdgeKey::intra(2, 3, 1), 1.0),
        ];
        let net: Network = MultilayerNetwork::from_edges(3, 1, true, edges).unwrap().into();
        let e = EdgeKey::intra(1, 2, 1);
        assert_eq!(net.edit_targets(&e, EditScope::Entry), vec![e]);
        assert_eq!(net.edit_targets(&e, EditScope::Reciprocal), vec![e, e.reversed()]);
        let one_way = EdgeKey::intra(2, 3, 1);
        assert_eq!(net.edit_targets(&one_way, EditScope::Reciprocal), vec![one_way]);
        let absent = EdgeKey::intra(1, 3, 1);
        assert_eq!(net.edit_targets(&absent, EditScope::Reciprocal).len(), 2);
        let removed = net.remove_edge(&e, EditScope::Entry).unwrap();
        assert_eq!(removed.weight(&e), 0.0);
        assert_eq!(removed.weight(&e.reversed()), 1.0);
    }

    #[test]
    fn multiplex_to_multilayer_preserves_dense_form() {
        let net: Network = MultiplexNetwork::from_edges(
            3,
            2,
            0.25,
            false,
            [(EdgeKey::intra(1, 2, 1), 1.0), (EdgeKey::intra(2, 3, 2), 3.0)],
        )
        .unwrap()
        .into();
        let general: Network = net.to_multilayer().into();
        assert_eq!(
            net.assemble_dense(100).unwrap(),
            general.assemble_dense(100).unwrap()
        );
    }
}
