//! Perron communicability and the layer/node centralities derived from
//! the Perron vectors.

use nalgebra::DMatrix;

use crate::eigensolver::{perron, PerronOptions, PerronTriple};
use crate::error::{Error, Result};
use crate::graph::Network;
use crate::operator::{authority_operator, dot, hub_operator, norm2};

/// `e^t − 1` without cancellation for small `t`.
pub fn exp0(t: f64) -> f64 {
    t.exp_m1()
}

/// The Perron vectors reshaped to `N×L` column-major matrices: column `l`
/// holds the entries of layer `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigentensors {
    pub x: DMatrix<f64>,
    pub y: DMatrix<f64>,
}

impl Eigentensors {
    pub fn nodes(&self) -> usize {
        self.x.nrows()
    }

    pub fn layers(&self) -> usize {
        self.x.ncols()
    }
}

pub fn eigentensors(t: &PerronTriple, n: usize, layers: usize) -> Result<Eigentensors> {
    if n * layers != t.x.len() || t.y.len() != t.x.len() {
        return Err(Error::Dimension {
            expected: n * layers,
            actual: t.x.len(),
        });
    }
    Ok(Eigentensors {
        x: DMatrix::from_column_slice(n, layers, &t.x),
        y: DMatrix::from_column_slice(n, layers, &t.y),
    })
}

/// Column sums `(c_Y, c_X) = (Yᵀ1, Xᵀ1)`.
pub fn marginal_layer_centralities(e: &Eigentensors) -> (Vec<f64>, Vec<f64>) {
    let sums = |m: &DMatrix<f64>| m.column_iter().map(|c| c.sum()).collect::<Vec<_>>();
    (sums(&e.y), sums(&e.x))
}

/// Node versatility `ν = Y w`; `w = 1_L` gives the plain row sums.
pub fn versatility(e: &Eigentensors, weights: &[f64]) -> Result<Vec<f64>> {
    if weights.len() != e.layers() {
        return Err(Error::Dimension {
            expected: e.layers(),
            actual: weights.len(),
        });
    }
    if weights.iter().any(|w| !(*w >= 0.0)) {
        return Err(Error::InvalidParameter("versatility weights must be nonnegative".into()));
    }
    Ok((0..e.nodes())
        .map(|i| e.y.row(i).iter().zip(weights).map(|(y, w)| y * w).sum())
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommunicabilityReport {
    pub rho: f64,
    /// `exp₀(ρ) (1ᵀy)(xᵀ1)`
    pub c_pn: f64,
    /// `exp₀(ρ) c_Yᵀ c_X`. Equals `c_pn` for a single layer; with several
    /// layers it drops the cross-layer products and is never larger.
    pub c_pn_marginal: f64,
    /// `exp₀(ρ)`
    pub lower: f64,
    /// `NL exp₀(ρ)`
    pub upper_basic: f64,
    /// `NL exp₀(ρ) cos φ`, an upper bound on `c_pn_marginal`.
    pub upper_cos: f64,
    pub c_y: Vec<f64>,
    pub c_x: Vec<f64>,
    /// Angle between `c_Y` and `c_X`, in radians.
    pub phi: f64,
    pub versatility: Vec<f64>,
}

impl CommunicabilityReport {
    /// Checks, with relative slack `rel`,
    /// `lower ≤ c_pn ≤ upper_basic`, `c_pn_marginal ≤ c_pn` and
    /// `c_pn_marginal ≤ upper_cos ≤ upper_basic`.
    pub fn bounds_hold(&self, rel: f64) -> bool {
        let le = |a: f64, b: f64| a <= b + rel * b.abs().max(f64::MIN_POSITIVE);
        le(self.lower, self.c_pn)
            && le(self.c_pn, self.upper_basic)
            && le(self.c_pn_marginal, self.c_pn)
            && le(self.c_pn_marginal, self.upper_cos)
            && le(self.upper_cos, self.upper_basic)
    }

    /// `c_pn` and `c_pn_marginal` agree to relative `rel`.
    pub fn forms_agree(&self, rel: f64) -> bool {
        (self.c_pn - self.c_pn_marginal).abs() <= rel * self.c_pn.abs()
    }
}

/// Perron communicability of the network whose Perron triple is `t`,
/// together with its bounds and marginal centralities.
pub fn perron_communicability(t: &PerronTriple, n: usize, layers: usize) -> Result<CommunicabilityReport> {
    let tensors = eigentensors(t, n, layers)?;
    let (c_y, c_x) = marginal_layer_centralities(&tensors);
    let e0 = exp0(t.rho);
    let sum_y: f64 = t.y.iter().sum();
    let sum_x: f64 = t.x.iter().sum();
    let c_pn = e0 * sum_y * sum_x;
    let c_pn_marginal = e0 * dot(&c_y, &c_x);
    let cos_phi = (dot(&c_y, &c_x) / (norm2(&c_y) * norm2(&c_x))).clamp(-1.0, 1.0);
    let dim = (n * layers) as f64;
    Ok(CommunicabilityReport {
        rho: t.rho,
        c_pn,
        c_pn_marginal,
        lower: e0,
        upper_basic: dim * e0,
        upper_cos: dim * e0 * cos_phi,
        phi: cos_phi.acos(),
        versatility: versatility(&tensors, &vec![1.0; layers])?,
        c_y,
        c_x,
    })
}

/// `1ᵀ(exp(B) − I)1` by dense scaling and squaring.
pub fn total_communicability0(net: &Network, cap: usize) -> Result<f64> {
    let b = net.assemble_dense(cap)?;
    Ok(dense_total_communicability0(&b))
}

pub fn dense_total_communicability0(b: &DMatrix<f64>) -> f64 {
    let n = b.nrows();
    let e = b.exp();
    e.sum() - n as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct HubAuthority {
    pub hub: f64,
    pub authority: f64,
    pub rho_hub: f64,
    pub rho_authority: f64,
}

/// Perron communicabilities of `BBᵀ` (hubs) and `BᵀB` (authorities).
pub fn hub_authority_communicability(net: &Network, opts: &PerronOptions) -> Result<HubAuthority> {
    let hub = perron(&hub_operator(net), opts)?;
    let auth = perron(&authority_operator(net), opts)?;
    let value = |t: &PerronTriple| exp0(t.rho) * t.x.iter().sum::<f64>().powi(2);
    Ok(HubAuthority {
        hub: value(&hub),
        authority: value(&auth),
        rho_hub: hub.rho,
        rho_authority: auth.rho,
    })
}
