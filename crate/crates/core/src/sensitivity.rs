//! First-order sensitivity of the Perron root to edge-weight changes.
//!
//! For unit Perron vectors `x`, `y` the Wilkinson perturbation `W = y xᵀ`
//! has unit spectral and Frobenius norm, and the root sensitivity matrix is
//! `κ(ρ) W`. Restricting perturbations to block-diagonal matrices (the
//! intra-layer cone) or further to the existing intra-layer sparsity pattern
//! gives the structured variants; their Frobenius norms are the structured
//! condition numbers `κ_D ≥ κ_S`.
//!
//! All matrices here are kept in factored form (the two Perron vectors plus
//! an optional pattern) and materialized only on request.

use nalgebra::DMatrix;

use crate::eigensolver::PerronTriple;
use crate::error::{Error, Result};
use crate::graph::{CsrBlock, EdgeKey, Network};
use crate::operator::{dot, LinearOperator};

/// Admissible structured perturbation class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cone {
    /// Nonnegative block-diagonal matrices (intra-layer entries only).
    Block,
    /// Block-diagonal matrices supported on the existing intra-layer edges.
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SensitivityVariant {
    Unstructured,
    BlockDiagonal,
    Pattern,
    /// `2 x_a x_b`, the joint sensitivity of an undirected edge pair.
    Symmetric,
}

/// The rank-one Wilkinson perturbation `W = y xᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Wilkinson {
    pub y: Vec<f64>,
    pub x: Vec<f64>,
}

impl Wilkinson {
    pub fn entry(&self, a: usize, b: usize) -> f64 {
        self.y[a] * self.x[b]
    }

    /// `‖y‖₂ ‖x‖₂`, which is both the spectral and the Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        dot(&self.y, &self.y).sqrt() * dot(&self.x, &self.x).sqrt()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.x.len();
        DMatrix::from_fn(n, n, |a, b| self.entry(a, b))
    }
}

impl LinearOperator for Wilkinson {
    fn dim(&self) -> usize {
        self.x.len()
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        let c = dot(&self.x, v);
        out.iter_mut().zip(&self.y).for_each(|(o, y)| *o = c * y);
    }

    fn apply_transpose(&self, v: &[f64], out: &mut [f64]) {
        let c = dot(&self.y, v);
        out.iter_mut().zip(&self.x).for_each(|(o, x)| *o = c * x);
    }
}

pub fn wilkinson(t: &PerronTriple) -> Wilkinson {
    Wilkinson {
        y: t.y.clone(),
        x: t.x.clone(),
    }
}

/// First-order estimate `ε yᵀEx / yᵀx` of the root shift under `A + εE`.
pub fn first_order_delta_rho<E: LinearOperator + ?Sized>(t: &PerronTriple, e: &E, eps: f64) -> f64 {
    let mut ex = vec![0.0; t.dim()];
    e.apply(&t.x, &mut ex);
    eps * dot(&t.y, &ex) / t.cos_theta()
}

fn check_edge(t: &PerronTriple, n: usize, e: &EdgeKey) -> Result<()> {
    if n == 0 || t.dim() % n != 0 {
        return Err(Error::Dimension {
            expected: t.dim(),
            actual: n,
        });
    }
    e.check(n, t.dim() / n)
}

/// `κ(ρ) y_{N(k−1)+i} x_{N(ℓ−1)+j}`
pub fn sensitivity_entry(t: &PerronTriple, n: usize, e: &EdgeKey) -> Result<f64> {
    check_edge(t, n, e)?;
    Ok(t.kappa * t.y[e.source(n)] * t.x[e.target(n)])
}

/// `2 x_a x_b` for an undirected network, where `x = y`.
pub fn symmetric_sensitivity_entry(t: &PerronTriple, net: &Network, e: &EdgeKey) -> Result<f64> {
    if net.is_directed() {
        return Err(Error::RequiresUndirected);
    }
    let n = net.nodes();
    check_edge(t, n, e)?;
    Ok(2.0 * t.x[e.source(n)] * t.x[e.target(n)])
}

/// Root sensitivity matrix in factored form.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityMatrix {
    variant: SensitivityVariant,
    n: usize,
    kappa: f64,
    y: Vec<f64>,
    x: Vec<f64>,
    /// Intra-layer sparsity pattern, for the pattern variant.
    pattern: Option<Vec<CsrBlock>>,
}

impl SensitivityMatrix {
    pub fn variant(&self) -> SensitivityVariant {
        self.variant
    }

    pub fn nodes(&self) -> usize {
        self.n
    }

    pub fn layers(&self) -> usize {
        self.x.len() / self.n
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// Entry at flat supra position `(a, b)`.
    pub fn entry_flat(&self, a: usize, b: usize) -> f64 {
        let (la, lb) = (a / self.n, b / self.n);
        match self.variant {
            SensitivityVariant::Unstructured => self.kappa * self.y[a] * self.x[b],
            SensitivityVariant::Symmetric => 2.0 * self.x[a] * self.x[b],
            SensitivityVariant::BlockDiagonal if la == lb => self.kappa * self.y[a] * self.x[b],
            SensitivityVariant::Pattern if la == lb => {
                let present = self.pattern.as_ref().is_some_and(|p| p[la].get(a % self.n, b % self.n) > 0.0);
                if present {
                    self.kappa * self.y[a] * self.x[b]
                } else {
                    0.0
                }
            }
            _ => 0.0,
        }
    }

    pub fn entry(&self, e: &EdgeKey) -> f64 {
        self.entry_flat(e.source(self.n), e.target(self.n))
    }

    /// Frobenius norm computed from the factors.
    pub fn frobenius_norm(&self) -> f64 {
        let sq = |v: &[f64]| dot(v, v);
        let n = self.n;
        match self.variant {
            SensitivityVariant::Unstructured => self.kappa * (sq(&self.y) * sq(&self.x)).sqrt(),
            SensitivityVariant::Symmetric => 2.0 * sq(&self.x),
            SensitivityVariant::BlockDiagonal => {
                let s: f64 = self
                    .y
                    .chunks_exact(n)
                    .zip(self.x.chunks_exact(n))
                    .map(|(yl, xl)| sq(yl) * sq(xl))
                    .sum();
                self.kappa * s.sqrt()
            }
            SensitivityVariant::Pattern => {
                let s: f64 = self
                    .pattern_entries()
                    .map(|(a, b)| (self.y[a] * self.x[b]).powi(2))
                    .sum();
                self.kappa * s.sqrt()
            }
        }
    }

    /// The condition number this matrix realizes: `κ`, `κ_D` or `κ_S`
    /// (the symmetric variant reports `κ`).
    pub fn condition(&self) -> f64 {
        match self.variant {
            SensitivityVariant::Symmetric => self.kappa,
            _ => self.frobenius_norm(),
        }
    }

    /// `1ᵀ S 1`
    pub fn total(&self) -> f64 {
        match self.variant {
            SensitivityVariant::Unstructured => {
                self.kappa * self.y.iter().sum::<f64>() * self.x.iter().sum::<f64>()
            }
            SensitivityVariant::Symmetric => 2.0 * self.x.iter().sum::<f64>().powi(2),
            SensitivityVariant::BlockDiagonal => {
                let n = self.n;
                self.kappa
                    * self
                        .y
                        .chunks_exact(n)
                        .zip(self.x.chunks_exact(n))
                        .map(|(yl, xl)| yl.iter().sum::<f64>() * xl.iter().sum::<f64>())
                        .sum::<f64>()
            }
            SensitivityVariant::Pattern => self
                .pattern_entries()
                .map(|(a, b)| self.kappa * self.y[a] * self.x[b])
                .sum(),
        }
    }

    fn pattern_entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        self.pattern.iter().flatten().enumerate().flat_map(move |(l, block)| {
            block.iter().map(move |(i, j, _)| (l * n + i, l * n + j))
        })
    }

    /// Nonzero entries of the pattern variant as `(edge, value)`.
    pub fn pattern_values(&self) -> Vec<(EdgeKey, f64)> {
        self.pattern_entries()
            .map(|(a, b)| (EdgeKey::from_flat(a, b, self.n), self.kappa * self.y[a] * self.x[b]))
            .collect()
    }

    /// Diagonal block `l` (0-based) as a dense `N×N` matrix.
    pub fn layer_block(&self, l: usize) -> DMatrix<f64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |i, j| self.entry_flat(l * n + i, l * n + j))
    }

    pub fn to_dense(&self, cap: usize) -> Result<DMatrix<f64>> {
        let d = self.dim();
        if d > cap {
            return Err(Error::DenseCapExceeded { order: d, cap });
        }
        Ok(DMatrix::from_fn(d, d, |a, b| self.entry_flat(a, b)))
    }
}

fn layer_pattern(net: &Network) -> Vec<CsrBlock> {
    (0..net.layers())
        .map(|l| net.layer_block(l).cloned().unwrap_or_else(|| CsrBlock::empty(net.nodes())))
        .collect()
}

fn base(t: &PerronTriple, n: usize, variant: SensitivityVariant) -> SensitivityMatrix {
    SensitivityMatrix {
        variant,
        n,
        kappa: t.kappa,
        y: t.y.clone(),
        x: t.x.clone(),
        pattern: None,
    }
}

/// Unstructured sensitivity matrix `κ(ρ) y xᵀ`.
pub fn sensitivity_matrix(t: &PerronTriple, n: usize) -> SensitivityMatrix {
    base(t, n, SensitivityVariant::Unstructured)
}

/// Sensitivity restricted to intra-layer (block-diagonal) perturbations.
pub fn sensitivity_matrix_multiplex(t: &PerronTriple, net: &Network) -> SensitivityMatrix {
    base(t, net.nodes(), SensitivityVariant::BlockDiagonal)
}

/// Sensitivity restricted to the existing intra-layer edges.
pub fn structured_sensitivity_matrix(t: &PerronTriple, net: &Network) -> SensitivityMatrix {
    SensitivityMatrix {
        pattern: Some(layer_pattern(net)),
        ..base(t, net.nodes(), SensitivityVariant::Pattern)
    }
}

/// `2 x xᵀ` for undirected networks.
pub fn symmetric_sensitivity_matrix(t: &PerronTriple, net: &Network) -> Result<SensitivityMatrix> {
    if net.is_directed() {
        return Err(Error::RequiresUndirected);
    }
    Ok(base(t, net.nodes(), SensitivityVariant::Symmetric))
}

/// `‖(y xᵀ)|_cone‖_F / (yᵀx)`
pub fn structured_condition_number(t: &PerronTriple, cone: Cone, net: &Network) -> f64 {
    match cone {
        Cone::Block => sensitivity_matrix_multiplex(t, net).frobenius_norm(),
        Cone::Pattern => structured_sensitivity_matrix(t, net).frobenius_norm(),
    }
}

/// Unit-Frobenius perturbation `(y xᵀ)|_cone / ‖(y xᵀ)|_cone‖_F`, the
/// worst case within the cone to first order.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuredWilkinson {
    cone: Cone,
    n: usize,
    scale: f64,
    y: Vec<f64>,
    x: Vec<f64>,
    pattern: Vec<CsrBlock>,
}

impl StructuredWilkinson {
    pub fn cone(&self) -> Cone {
        self.cone
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        crate::operator::to_dense(self)
    }

    fn product(&self, v: &[f64], out: &mut [f64], transpose: bool) {
        let n = self.n;
        let (left, right) = if transpose { (&self.x, &self.y) } else { (&self.y, &self.x) };
        out.iter_mut().for_each(|o| *o = 0.0);
        match self.cone {
            Cone::Block => {
                for (l, o) in out.chunks_exact_mut(n).enumerate() {
                    let span = l * n..(l + 1) * n;
                    let c = self.scale * dot(&right[span.clone()], &v[span.clone()]);
                    o.iter_mut().zip(&left[span]).for_each(|(oi, u)| *oi = c * u);
                }
            }
            Cone::Pattern => {
                for (l, block) in self.pattern.iter().enumerate() {
                    for (i, j, _) in block.iter() {
                        let (a, b) = (l * n + i, l * n + j);
                        if transpose {
                            out[b] += self.scale * self.y[a] * self.x[b] * v[a];
                        } else {
                            out[a] += self.scale * self.y[a] * self.x[b] * v[b];
                        }
                    }
                }
            }
        }
    }
}

impl LinearOperator for StructuredWilkinson {
    fn dim(&self) -> usize {
        self.x.len()
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        self.product(v, out, false)
    }

    fn apply_transpose(&self, v: &[f64], out: &mut [f64]) {
        self.product(v, out, true)
    }
}

pub fn structured_wilkinson(t: &PerronTriple, cone: Cone, net: &Network) -> Result<StructuredWilkinson> {
    let norm = structured_condition_number(t, cone, net) / t.kappa;
    if !(norm > 0.0) {
        return Err(Error::ZeroProjection);
    }
    Ok(StructuredWilkinson {
        cone,
        n: net.nodes(),
        scale: 1.0 / norm,
        y: t.y.clone(),
        x: t.x.clone(),
        pattern: match cone {
            Cone::Block => Vec::new(),
            Cone::Pattern => layer_pattern(net),
        },
    })
}

/// Which entries the spectral impact matrix covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImpactLevel {
    /// Every nonzero of `B`, multiplex coupling included.
    Supra,
    /// Intra-layer entries only.
    Layers,
}

/// Nonzero entries of `−(1/ρ) B ∘ S`: the first-order relative effect of
/// deleting each edge.
pub fn spectral_impact(net: &Network, t: &PerronTriple, level: ImpactLevel) -> Vec<(EdgeKey, f64)> {
    let n = net.nodes();
    let entries = match level {
        ImpactLevel::Supra => net.supra_entries(),
        ImpactLevel::Layers => net.supra_entries().into_iter().filter(|(e, _)| e.is_intra_layer()).collect(),
    };
    let mut out: Vec<_> = entries
        .into_iter()
        .map(|(e, w)| (e, -w * t.kappa * t.y[e.source(n)] * t.x[e.target(n)] / t.rho))
        .collect();
    out.sort_by_key(|(e, _)| e.tie_key());
    out
}
