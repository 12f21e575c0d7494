//! Matrix-free linear operators on the `NL`-dimensional supra space.

use nalgebra::{DMatrix, DVector};

use crate::graph::{Network, SupraAdjacency};

/// A square real operator with forward and transpose products.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;

    /// `out = A x`
    fn apply(&self, x: &[f64], out: &mut [f64]);

    /// `out = Aᵀ x`
    fn apply_transpose(&self, x: &[f64], out: &mut [f64]);

    /// Whether `A = Aᵀ` is known structurally.
    fn is_symmetric(&self) -> bool {
        false
    }

    /// Adjacency of the nonzero pattern, when the operator knows it.
    fn adjacency(&self) -> Option<SupraAdjacency> {
        None
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, x: &[f64], out: &mut [f64]) {
        (**self).apply(x, out)
    }
    fn apply_transpose(&self, x: &[f64], out: &mut [f64]) {
        (**self).apply_transpose(x, out)
    }
    fn is_symmetric(&self) -> bool {
        (**self).is_symmetric()
    }
    fn adjacency(&self) -> Option<SupraAdjacency> {
        (**self).adjacency()
    }
}

/// The supra-adjacency matrix `B` of a network, applied without assembly.
///
/// For a multiplex the coupling `γ(1 1ᵀ ⊗ I − I)` is applied as
/// `γ (Σ_m v_m − v_k)` on block `k`.
#[derive(Debug, Clone, Copy)]
pub struct SupraOperator<'a> {
    net: &'a Network,
}

impl<'a> SupraOperator<'a> {
    pub fn new(net: &'a Network) -> Self {
        Self { net }
    }

    pub fn network(&self) -> &'a Network {
        self.net
    }

    fn product(&self, x: &[f64], out: &mut [f64], transpose: bool) {
        let n = self.net.nodes();
        out.iter_mut().for_each(|o| *o = 0.0);
        match self.net {
            Network::Multilayer(m) => {
                for ((k, l), block) in m.blocks() {
                    if transpose {
                        block.mul_transpose_add(&x[k * n..(k + 1) * n], &mut out[l * n..(l + 1) * n]);
                    } else {
                        block.mul_add(&x[l * n..(l + 1) * n], &mut out[k * n..(k + 1) * n]);
                    }
                }
            }
            Network::Multiplex(m) => {
                let layers = m.layer_count();
                for (k, block) in m.layer_blocks().iter().enumerate() {
                    let span = k * n..(k + 1) * n;
                    if transpose {
                        block.mul_transpose_add(&x[span.clone()], &mut out[span]);
                    } else {
                        block.mul_add(&x[span.clone()], &mut out[span]);
                    }
                }
                let gamma = m.gamma();
                if gamma != 0.0 && layers > 1 {
                    let mut total = vec![0.0; n];
                    for chunk in x.chunks_exact(n) {
                        total.iter_mut().zip(chunk).for_each(|(t, v)| *t += v);
                    }
                    for (o_chunk, x_chunk) in out.chunks_exact_mut(n).zip(x.chunks_exact(n)) {
                        for ((o, t), v) in o_chunk.iter_mut().zip(&total).zip(x_chunk) {
                            *o += gamma * (t - v);
                        }
                    }
                }
            }
        }
    }
}

impl LinearOperator for SupraOperator<'_> {
    fn dim(&self) -> usize {
        self.net.dim()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        self.product(x, out, false)
    }

    fn apply_transpose(&self, x: &[f64], out: &mut [f64]) {
        self.product(x, out, true)
    }

    fn is_symmetric(&self) -> bool {
        !self.net.is_directed()
    }

    fn adjacency(&self) -> Option<SupraAdjacency> {
        Some(SupraAdjacency::new(self.net))
    }
}

/// Operator of the supra-adjacency matrix of `net`.
pub fn supra_operator(net: &Network) -> SupraOperator<'_> {
    SupraOperator::new(net)
}

/// Which Gram product of the base operator to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramKind {
    /// `v ↦ B(Bᵀv)`
    Hub,
    /// `v ↦ Bᵀ(Bv)`
    Authority,
}

/// Symmetric Gram operator `BBᵀ` or `BᵀB`.
#[derive(Debug, Clone, Copy)]
pub struct GramOperator<O> {
    inner: O,
    kind: GramKind,
}

impl<O: LinearOperator> GramOperator<O> {
    pub fn new(inner: O, kind: GramKind) -> Self {
        Self { inner, kind }
    }
}

impl<O: LinearOperator> LinearOperator for GramOperator<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let mut tmp = vec![0.0; self.inner.dim()];
        match self.kind {
            GramKind::Hub => {
                self.inner.apply_transpose(x, &mut tmp);
                self.inner.apply(&tmp, out);
            }
            GramKind::Authority => {
                self.inner.apply(x, &mut tmp);
                self.inner.apply_transpose(&tmp, out);
            }
        }
    }

    fn apply_transpose(&self, x: &[f64], out: &mut [f64]) {
        self.apply(x, out)
    }

    fn is_symmetric(&self) -> bool {
        true
    }
}

pub fn hub_operator(net: &Network) -> GramOperator<SupraOperator<'_>> {
    GramOperator::new(SupraOperator::new(net), GramKind::Hub)
}

pub fn authority_operator(net: &Network) -> GramOperator<SupraOperator<'_>> {
    GramOperator::new(SupraOperator::new(net), GramKind::Authority)
}

/// `A + s·u vᵀ` without forming the outer product.
#[derive(Debug, Clone)]
pub struct RankOneUpdate<O> {
    base: O,
    scale: f64,
    left: Vec<f64>,
    right: Vec<f64>,
}

impl<O: LinearOperator> RankOneUpdate<O> {
    pub fn new(base: O, scale: f64, left: Vec<f64>, right: Vec<f64>) -> Self {
        assert_eq!(left.len(), base.dim());
        assert_eq!(right.len(), base.dim());
        Self {
            base,
            scale,
            left,
            right,
        }
    }
}

impl<O: LinearOperator> LinearOperator for RankOneUpdate<O> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        self.base.apply(x, out);
        let c = self.scale * dot(&self.right, x);
        out.iter_mut().zip(&self.left).for_each(|(o, u)| *o += c * u);
    }

    fn apply_transpose(&self, x: &[f64], out: &mut [f64]) {
        self.base.apply_transpose(x, out);
        let c = self.scale * dot(&self.left, x);
        out.iter_mut().zip(&self.right).for_each(|(o, v)| *o += c * v);
    }

    fn is_symmetric(&self) -> bool {
        self.base.is_symmetric() && self.left == self.right
    }
}

impl LinearOperator for DMatrix<f64> {
    fn dim(&self) -> usize {
        assert_eq!(self.nrows(), self.ncols(), "operator must be square");
        self.nrows()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let y = self * DVector::from_column_slice(x);
        out.copy_from_slice(y.as_slice());
    }

    fn apply_transpose(&self, x: &[f64], out: &mut [f64]) {
        let y = self.tr_mul(&DVector::from_column_slice(x));
        out.copy_from_slice(y.as_slice());
    }
}

/// Materializes any operator column by column.
pub fn to_dense<O: LinearOperator + ?Sized>(op: &O) -> DMatrix<f64> {
    let n = op.dim();
    let mut m = DMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    let mut col = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        op.apply(&e, &mut col);
        m.column_mut(j).copy_from_slice(&col);
        e[j] = 0.0;
    }
    m
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
