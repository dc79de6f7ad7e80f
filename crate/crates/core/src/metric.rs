//! The generalized m-Kropina norm `F = α^{m+1} / β^m` on `m`, its profile
//! `φ(s) = s^{-m}`, and the convexity / admissibility checks around it.
//!
//! Evaluation is restricted to the open cone `β(y) > 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::ReductiveDecomposition;
use crate::linalg::{self, inner, Matrix, Vector};

/// Relative tolerance for linear independence of a flag.
pub const DEPENDENCE_TOL: f64 = 1e-12;

/// Below this ratio `β/α` the Hessian is flagged as ill-conditioned.
pub const CONDITIONING_RATIO: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct MKropinaMetric {
    m: f64,
    x: Vector,
    gram: Matrix,
    x_norm: f64,
    warnings: Vec<String>,
}

impl MKropinaMetric {
    /// `gram` is the invariant inner product on all of `g` (only its `m` block is
    /// ever paired with vectors in `m`). Enforces `m ∉ {0, −1}`, `X ≠ 0`, and
    /// `√⟨X,X⟩ < 1`.
    pub fn new(m: f64, x: Vector, gram: Matrix) -> Result<Self> {
        Self::build(m, x, gram, false)
    }

    /// Like [`MKropinaMetric::new`] but downgrades the norm bound to a warning.
    pub fn with_relaxed_norm_bound(m: f64, x: Vector, gram: Matrix) -> Result<Self> {
        Self::build(m, x, gram, true)
    }

    fn build(m: f64, x: Vector, gram: Matrix, relax: bool) -> Result<Self> {
        if !m.is_finite() || m == 0.0 || m == -1.0 {
            return Err(Error::InvalidExponent(m));
        }
        linalg::check_square(&gram, x.len())?;
        let xx = inner(&gram, &x, &x);
        if !(xx > 0.0) {
            return Err(Error::BadDefiningVector);
        }
        let x_norm = xx.sqrt();
        let mut warnings = Vec::new();
        if x_norm >= 1.0 {
            if relax {
                warnings.push(format!("norm bound relaxed: sqrt<X,X> = {x_norm}"));
            } else {
                return Err(Error::NormBound { norm: x_norm });
            }
        }
        Ok(MKropinaMetric {
            m,
            x,
            gram,
            x_norm,
            warnings,
        })
    }

    /// Rejects a defining vector with components in `h`.
    pub fn check_in_m(&self, dec: &ReductiveDecomposition) -> Result<()> {
        if dec.off_m(&self.x) > 0.0 {
            return Err(Error::BadDefiningVector);
        }
        Ok(())
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn x_vec(&self) -> &Vector {
        &self.x
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// `b = ‖β‖_α = √⟨X,X⟩`
    pub fn x_norm(&self) -> f64 {
        self.x_norm
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Same metric with a different exponent (validation re-applied).
    pub fn with_exponent(&self, m: f64) -> Result<Self> {
        let relax = !self.warnings.is_empty();
        Self::build(m, self.x.clone(), self.gram.clone(), relax)
    }

    #[inline]
    pub fn ip(&self, a: &Vector, b: &Vector) -> f64 {
        inner(&self.gram, a, b)
    }

    /// `(α, β) = (√⟨y,y⟩, ⟨X,y⟩)`
    pub fn alpha_beta(&self, y: &Vector) -> Result<(f64, f64)> {
        linalg::check_len(y, self.x.len())?;
        Ok((self.ip(y, y).max(0.0).sqrt(), self.ip(&self.x, y)))
    }

    #[inline]
    pub fn beta(&self, y: &Vector) -> f64 {
        self.ip(&self.x, y)
    }

    /// `F(y) = α^{m+1} / β^m` on the cone `β > 0`.
    pub fn norm(&self, y: &Vector) -> Result<f64> {
        let (alpha, beta) = self.alpha_beta(y)?;
        if !(beta > 0.0) {
            return Err(Error::OutsideCone { beta });
        }
        Ok(alpha.powf(self.m + 1.0) / beta.powf(self.m))
    }

    /// `F(y)²`, computed from `⟨y,y⟩` directly.
    pub fn norm_sq(&self, y: &Vector) -> Result<f64> {
        linalg::check_len(y, self.x.len())?;
        let beta = self.beta(y);
        if !(beta > 0.0) {
            return Err(Error::OutsideCone { beta });
        }
        let yy = self.ip(y, y);
        Ok(yy.powf(self.m + 1.0) / beta.powf(2.0 * self.m))
    }
}

/// `φ(s)`, `φ′(s)`, `φ″(s)` for `φ(s) = s^{-m}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Profile {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

pub fn profile(m: f64, s: f64) -> Result<Profile> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("profile needs s > 0, got {s}")));
    }
    let value = s.powf(-m);
    Ok(Profile {
        value,
        d1: -m * value / s,
        d2: m * (m + 1.0) * value / (s * s),
    })
}

/// `φ − sφ′ + (b² − s²)φ″`, the second convexity quantity, from its three terms.
pub fn convexity_three_term(m: f64, s: f64, b: f64) -> Result<f64> {
    let p = profile(m, s)?;
    Ok(p.value - s * p.d1 + (b * b - s * s) * p.d2)
}

/// The same quantity reduced for `φ = s^{-m}`:
/// `(m+1)·s^{−m−2}·(s² + m(b² − s²))`.
pub fn convexity_reduced(m: f64, s: f64, b: f64) -> f64 {
    (m + 1.0) * s.powf(-m - 2.0) * (s * s + m * (b * b - s * s))
}

/// Boundary `s*` of the convex region for fixed `b`, when one exists inside `(0, b]`.
///
/// For `−1 < m < 0` the condition holds exactly for `s > s*`; for `m < −1` exactly
/// for `s < s*`; for `m > 0` it holds everywhere and `None` is returned.
pub fn convexity_threshold(m: f64, b: f64) -> Option<f64> {
    if m > 0.0 {
        None
    } else {
        Some(b * (-m / (1.0 - m)).sqrt())
    }
}

/// Nodes `(s, b)` with `0 < s ≤ b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ConvexityGrid {
    /// `nb` values of `b` evenly spaced on `(0, b0]`, and for each, `ns` values of
    /// `s` evenly spaced on `(0, b]`.
    Uniform { b0: f64, nb: usize, ns: usize },
    /// Fixed `b`; `s = k·step` for all `k ≥ 1` with `s_min < s ≤ b`.
    FixedB { b: f64, step: f64, s_min: f64 },
}

impl ConvexityGrid {
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        match *self {
            ConvexityGrid::Uniform { b0, nb, ns } => {
                let mut out = Vec::with_capacity(nb * ns);
                for i in 1..=nb {
                    let b = b0 * i as f64 / nb as f64;
                    for k in 1..=ns {
                        out.push((b * k as f64 / ns as f64, b));
                    }
                }
                out
            }
            ConvexityGrid::FixedB { b, step, s_min } => {
                let mut out = Vec::new();
                let mut k = 1usize;
                loop {
                    let s = k as f64 * step;
                    if s > b * (1.0 + 1e-15) {
                        break;
                    }
                    if s > s_min {
                        out.push((s, b));
                    }
                    k += 1;
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub valid: bool,
    pub nodes: usize,
    pub failures: usize,
    /// First failing node in grid order.
    pub first_failure: Option<(f64, f64)>,
    /// Largest failing `s` (for fixed-`b` grids, the edge of the failing band).
    pub last_failure_s: Option<f64>,
    /// Smallest passing `s`.
    pub first_valid_s: Option<f64>,
    /// Largest relative disagreement between the reduced and three-term forms.
    pub form_mismatch: f64,
}

/// Checks `φ(s) > 0` and `φ − sφ′ + (b² − s²)φ″ > 0` at every grid node, using
/// both the generic three-term expression and the reduced closed form.
pub fn check_strong_convexity(m: f64, grid: &ConvexityGrid) -> ConvexityReport {
    let nodes = grid.nodes();
    let mut report = ConvexityReport {
        valid: true,
        nodes: nodes.len(),
        failures: 0,
        first_failure: None,
        last_failure_s: None,
        first_valid_s: None,
        form_mismatch: 0.0,
    };
    for &(s, b) in &nodes {
        let p = match profile(m, s) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let generic = p.value - s * p.d1 + (b * b - s * s) * p.d2;
        let reduced = convexity_reduced(m, s, b);
        let rel = (generic - reduced).abs() / generic.abs().max(reduced.abs()).max(f64::MIN_POSITIVE);
        report.form_mismatch = report.form_mismatch.max(rel);
        let ok = p.value > 0.0 && generic > 0.0;
        if ok {
            report.first_valid_s = Some(report.first_valid_s.map_or(s, |v: f64| v.min(s)));
        } else {
            report.valid = false;
            report.failures += 1;
            if report.first_failure.is_none() {
                report.first_failure = Some((s, b));
            }
            report.last_failure_s = Some(report.last_failure_s.map_or(s, |v: f64| v.max(s)));
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HessianReport {
    pub positive_definite: bool,
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    pub warning: Option<String>,
}

/// Builds `g_Y(e_i, e_j)` over the basis of `m` from the closed form and checks
/// positive definiteness through its eigenvalues.
pub fn check_hessian_pd(
    met: &MKropinaMetric,
    dec: &ReductiveDecomposition,
    y: &Vector,
) -> Result<HessianReport> {
    let ctx = crate::tensor::TensorEvalContext::new(met, y)?;
    let idx = dec.m_indices();
    let n = met.x_vec().len();
    let basis: Vec<Vector> = idx.iter().map(|&i| linalg::basis(n, i)).collect();
    let k = idx.len();
    let h = Matrix::from_fn(k, k, |p, q| ctx.g(&basis[p], &basis[q]));
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(|a, b| a.total_cmp(b));
    let min_eigenvalue = eigenvalues.first().copied().unwrap_or(f64::NAN);
    let (alpha, beta) = met.alpha_beta(y)?;
    let warning = (beta < CONDITIONING_RATIO * alpha).then(|| {
        format!("ill-conditioned: beta/alpha = {:e} near the cone boundary", beta / alpha)
    });
    Ok(HessianReport {
        positive_definite: min_eigenvalue > 0.0,
        eigenvalues,
        min_eigenvalue,
        warning,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub beta_positive: bool,
    pub independent: bool,
    pub norm_bound: bool,
    pub reasons: Vec<String>,
}

/// Hypotheses on a flag `(Y, U)` for the curvature formulas: `β(Y) > 0`,
/// `Y, U` independent, `√⟨X,X⟩ < 1`.
pub fn check_flag_admissible(met: &MKropinaMetric, y: &Vector, u: &Vector) -> Admissibility {
    let mut reasons = Vec::new();
    let n = met.x_vec().len();
    if y.len() != n || u.len() != n {
        return Admissibility {
            admissible: false,
            beta_positive: false,
            independent: false,
            norm_bound: met.x_norm() < 1.0,
            reasons: vec!["dimension mismatch".into()],
        };
    }
    let beta = met.beta(y);
    let beta_positive = beta > 0.0;
    if !beta_positive {
        reasons.push(format!("beta(Y) = {beta} is not positive"));
    }
    let yy = met.ip(y, y);
    let uu = met.ip(u, u);
    let yu = met.ip(y, u);
    let independent = yy * uu - yu * yu > DEPENDENCE_TOL * yy * uu && yy > 0.0 && uu > 0.0;
    if !independent {
        reasons.push("Y and U are linearly dependent".into());
    }
    let norm_bound = met.x_norm() < 1.0;
    if !norm_bound {
        reasons.push(format!("sqrt<X,X> = {} is not below 1", met.x_norm()));
    }
    Admissibility {
        admissible: beta_positive && independent && norm_bound,
        beta_positive,
        independent,
        norm_bound,
        reasons,
    }
}
