//! Perron root and left/right Perron vectors.
//!
//! The iterative path runs two power iterations side by side, one on `A`
//! and one on `Aᵀ`, and estimates the root with the two-sided Rayleigh
//! quotient `yᵀAx / yᵀx`. Both iterations use the shifted operator
//! `A + σI` with `σ` the mean row sum of `A`; the shift leaves the Perron
//! vectors unchanged and makes the Perron root strictly dominant even when
//! the graph is periodic (bipartite layers, two-cycles).
//!
//! The dense path is an independent check for small matrices: the root
//! comes from a real Schur decomposition and each vector from inverse
//! iteration on a full-pivot LU factorization of `A − μI` (resp. `Aᵀ`),
//! with `μ` a hair above `ρ`.

use nalgebra::{Complex, DMatrix, DVector, Schur};

use crate::error::{Error, Result};
use crate::operator::{dot, norm2, LinearOperator};

/// Largest negative entry tolerated in a unit Perron vector before it is
/// clamped to zero.
pub const NEGATIVE_ENTRY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerronOptions {
    /// Residual tolerance, applied as `tol · max(1, ρ)`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PerronOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 100_000,
        }
    }
}

impl PerronOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

/// Perron root with unit-norm positive right (`x`) and left (`y`) vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct PerronTriple {
    pub rho: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// `1 / (yᵀx)`
    pub kappa: f64,
    /// `‖Ax − ρx‖₂`
    pub right_residual: f64,
    /// `‖Aᵀy − ρy‖₂`
    pub left_residual: f64,
    pub iterations: usize,
}

impl PerronTriple {
    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// `cos θ = yᵀx`
    pub fn cos_theta(&self) -> f64 {
        dot(&self.y, &self.x)
    }
}

/// Condition number `1 / (yᵀx)` of the Perron root.
pub fn condition_number(t: &PerronTriple) -> f64 {
    1.0 / t.cos_theta()
}

/// Perron triple of an irreducible nonnegative operator by two-sided
/// shifted power iteration.
pub fn perron<O: LinearOperator + ?Sized>(op: &O, opts: &PerronOptions) -> Result<PerronTriple> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {}", opts.tol)));
    }
    if opts.max_iter == 0 {
        return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
    }
    let n = op.dim();
    if n == 0 {
        return Err(Error::InvalidParameter("operator has dimension zero".into()));
    }
    let symmetric = op.is_symmetric();

    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut y = x.clone();
    let mut ax = vec![0.0; n];
    let mut ay = vec![0.0; n];
    op.apply(&x, &mut ax);
    if symmetric {
        ay.copy_from_slice(&ax);
    } else {
        op.apply_transpose(&y, &mut ay);
    }
    let shift = ax.iter().sum::<f64>() / (n as f64).sqrt();
    if !(shift > 0.0) {
        return Err(Error::InvalidParameter(
            "operator has no positive row sum; a Perron root needs a nonzero nonnegative operator".into(),
        ));
    }

    let mut rho_prev = f64::NAN;
    let mut residuals = (f64::INFINITY, f64::INFINITY);
    for it in 1..=opts.max_iter {
        let rho = dot(&y, &ax) / dot(&y, &x);
        let right = residual(&ax, &x, rho);
        let left = if symmetric { right } else { residual(&ay, &y, rho) };
        residuals = (right, left);
        let threshold = opts.tol * rho.abs().max(1.0);
        if right <= threshold && left <= threshold && (rho - rho_prev).abs() <= threshold {
            return finish(rho, x, y, right, left, it);
        }
        rho_prev = rho;

        shifted_step(&mut x, &ax, shift);
        op.apply(&x, &mut ax);
        if symmetric {
            y.copy_from_slice(&x);
            ay.copy_from_slice(&ax);
        } else {
            shifted_step(&mut y, &ay, shift);
            op.apply_transpose(&y, &mut ay);
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        right_residual: residuals.0,
        left_residual: residuals.1,
    })
}

/// `v ← normalize(Av + σv)`
fn shifted_step(v: &mut [f64], av: &[f64], shift: f64) {
    v.iter_mut().zip(av).for_each(|(vi, a)| *vi = a + shift * *vi);
    let nrm = norm2(v);
    v.iter_mut().for_each(|vi| *vi /= nrm);
}

fn residual(av: &[f64], v: &[f64], rho: f64) -> f64 {
    av.iter()
        .zip(v)
        .map(|(a, b)| (a - rho * b).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn finish(rho: f64, x: Vec<f64>, y: Vec<f64>, right: f64, left: f64, iterations: usize) -> Result<PerronTriple> {
    let x = positive_unit(x)?;
    let y = positive_unit(y)?;
    let kappa = 1.0 / dot(&y, &x);
    Ok(PerronTriple {
        rho,
        x,
        y,
        kappa,
        right_residual: right,
        left_residual: left,
        iterations,
    })
}

/// Orients `v` so its largest-magnitude entry is positive, rejects entries
/// below `-NEGATIVE_ENTRY_TOLERANCE`, clamps the rest at zero and rescales
/// to unit Euclidean norm.
fn positive_unit(mut v: Vec<f64>) -> Result<Vec<f64>> {
    let nrm = norm2(&v);
    let peak = v.iter().copied().fold(0.0_f64, |m, e| if e.abs() > m.abs() { e } else { m });
    let s = if peak < 0.0 { -1.0 / nrm } else { 1.0 / nrm };
    v.iter_mut().for_each(|e| *e *= s);
    if let Some(&worst) = v.iter().min_by(|a, b| a.total_cmp(b)) {
        if worst < -NEGATIVE_ENTRY_TOLERANCE {
            return Err(Error::NotPositive { value: worst });
        }
    }
    v.iter_mut().for_each(|e| *e = e.max(0.0));
    let nrm = norm2(&v);
    v.iter_mut().for_each(|e| *e /= nrm);
    Ok(v)
}

/// Perron triple from a full dense eigen-decomposition.
pub fn perron_dense_oracle(m: &DMatrix<f64>, cap: usize) -> Result<PerronTriple> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::Dimension {
            expected: n,
            actual: m.ncols(),
        });
    }
    if n > cap {
        return Err(Error::DenseCapExceeded { order: n, cap });
    }
    if n == 0 {
        return Err(Error::InvalidParameter("matrix has dimension zero".into()));
    }
    // The shift breaks the ±λ symmetry of periodic spectra, on which
    // unshifted Francis steps can stall.
    let sigma = m.abs().row_sum().mean().max(f64::MIN_POSITIVE);
    let max_iter = 1000 * n.max(10);
    let schur = Schur::try_new(m + DMatrix::identity(n, n) * sigma, f64::EPSILON, max_iter).ok_or(
        Error::NoConvergence {
            iterations: max_iter,
            right_residual: f64::NAN,
            left_residual: f64::NAN,
        },
    )?;
    let top = schur
        .complex_eigenvalues()
        .iter()
        .map(|z| Complex::new(z.re - sigma, z.im))
        .max_by(|a, b| a.re.total_cmp(&b.re))
        .expect("nonempty spectrum");
    let scale = top.norm().max(1.0);
    // The Perron root of a nonnegative matrix has the largest real part.
    if top.im.abs() > 1e-8 * scale || top.re <= 0.0 {
        return Err(Error::ComplexDominant { re: top.re, im: top.im });
    }
    let rho = top.re;
    let x = positive_unit(inverse_iteration(m, rho, scale))?;
    let y = positive_unit(inverse_iteration(&m.transpose(), rho, scale))?;

    let xv = DVector::from_column_slice(&x);
    let yv = DVector::from_column_slice(&y);
    let right = (m * &xv - &xv * rho).norm();
    let left = (m.tr_mul(&yv) - &yv * rho).norm();
    let kappa = 1.0 / dot(&y, &x);
    Ok(PerronTriple {
        rho,
        x,
        y,
        kappa,
        right_residual: right,
        left_residual: left,
        iterations: 0,
    })
}

/// Eigenvector for `rho` by inverse iteration with a shift just above it;
/// the shifted matrix is nonsingular, and one solve already contracts the
/// other directions by about `1e-10 / gap`.
fn inverse_iteration(m: &DMatrix<f64>, rho: f64, scale: f64) -> Vec<f64> {
    let n = m.nrows();
    let mu = rho + 1e-10 * scale;
    let lu = (m - DMatrix::identity(n, n) * mu).full_piv_lu();
    let mut v = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    for _ in 0..3 {
        if let Some(w) = lu.solve(&v) {
            let nrm = w.norm();
            if nrm.is_finite() && nrm > 0.0 {
                v = w / nrm;
            }
        }
    }
    v.iter().copied().collect()
}
