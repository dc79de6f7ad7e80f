//! Fundamental tensor `g_Y` and Cartan tensor `C_Y` of the m-Kropina norm.
//!
//! `g_Y` is evaluated in closed form from the scalars `⟨Y,Y⟩`, `⟨X,Y⟩` and the
//! pairings of `U, V` with `X` and `Y`. Two numerical routes sit next to it: a
//! Richardson-extrapolated mixed second difference of `½F²` that certifies the
//! closed form, and a Richardson first difference of the closed form along the
//! base point that yields the Cartan tensor.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, ReductiveDecomposition};
use crate::linalg::Vector;
use crate::metric::MKropinaMetric;

/// Oracle step as a fraction of the distance scale `min(‖Y‖, β(Y)/Σ|β(dir)|)`.
/// `F²` grows like `β^{-2m}`, so a step tied to that scale keeps round-off and
/// the `O(h⁶)` truncation error balanced across the whole cone.
pub const FD_STEP_RATIO: f64 = 1e-2;

/// Cartan step as a fraction of the distance scale `min(‖Y‖, β(Y)/|β(V̂)|)`.
/// Balances the `O(h⁶)` truncation against round-off in `g_Y ∝ β^{-2m-2}`.
pub const CARTAN_STEP_RATIO: f64 = 5e-3;

/// Tolerance on `⟨Y,Y⟩ = 1` (and `⟨U,Y⟩ = 0`) for the orthonormal-flag formulas.
pub const UNIT_TOL: f64 = 1e-10;

/// A base direction `Y` with the scalars `⟨Y,Y⟩` and `⟨X,Y⟩` cached.
#[derive(Debug, Clone)]
pub struct TensorEvalContext<'a> {
    met: &'a MKropinaMetric,
    y: Vector,
    yy: f64,
    xy: f64,
}

impl<'a> TensorEvalContext<'a> {
    pub fn new(met: &'a MKropinaMetric, y: &Vector) -> Result<Self> {
        crate::linalg::check_len(y, met.x_vec().len())?;
        let xy = met.beta(y);
        if !(xy > 0.0) {
            return Err(Error::OutsideCone { beta: xy });
        }
        Ok(TensorEvalContext {
            met,
            y: y.clone(),
            yy: met.ip(y, y),
            xy,
        })
    }

    pub fn metric(&self) -> &MKropinaMetric {
        self.met
    }

    pub fn y(&self) -> &Vector {
        &self.y
    }

    /// `⟨Y,Y⟩`
    pub fn yy(&self) -> f64 {
        self.yy
    }

    /// `⟨X,Y⟩`
    pub fn xy(&self) -> f64 {
        self.xy
    }

    /// Closed-form `g_Y(U, V)`.
    pub fn g(&self, u: &Vector, v: &Vector) -> f64 {
        let met = self.met;
        let x = met.x_vec();
        let uy = met.ip(u, &self.y);
        let vy = met.ip(v, &self.y);
        let xu = met.ip(x, u);
        let xv = met.ip(x, v);
        let uv = met.ip(u, v);
        self.g_from_scalars(uy, vy, xu, xv, uv)
    }

    /// Closed form in terms of the five pairings
    /// `⟨U,Y⟩, ⟨V,Y⟩, ⟨X,U⟩, ⟨X,V⟩, ⟨U,V⟩`.
    pub fn g_from_scalars(&self, uy: f64, vy: f64, xu: f64, xv: f64, uv: f64) -> f64 {
        let m = self.met.m();
        let (a, b) = (self.yy, self.xy);
        let c = 2.0 * m * (m + 1.0);
        let bracket = c * b * b * uy * vy - c * b * a * uy * xv - c * b * a * xu * vy
            + (m + 1.0) * b * b * a * uv
            + m * (2.0 * m + 1.0) * a * a * xu * xv;
        a.powf(m - 1.0) / b.powf(2.0 * m + 2.0) * bracket
    }

    /// The orthonormal-flag form of `g_Y(U, V)`, valid for `⟨Y,Y⟩ = 1`.
    ///
    /// The raw form carries `⟨X,U⟩⟨Y,V⟩` but not its mirror, so it is not
    /// symmetric in `(U, V)`. Both the verbatim value and its symmetrization are
    /// returned; downstream code uses [`TensorEvalContext::g`].
    pub fn g_orthonormal(&self, u: &Vector, v: &Vector) -> Result<OrthonormalForm> {
        if (self.yy - 1.0).abs() > UNIT_TOL {
            return Err(Error::Precondition(format!(
                "orthonormal form needs <Y,Y> = 1, got {}",
                self.yy
            )));
        }
        let met = self.met;
        let x = met.x_vec();
        let m = met.m();
        let b = self.xy;
        let xu = met.ip(x, u);
        let xv = met.ip(x, v);
        let uy = met.ip(u, &self.y);
        let vy = met.ip(v, &self.y);
        let uv = met.ip(u, v);
        let scale = b.powf(-(2.0 * m + 2.0));
        let c = 2.0 * m * (m + 1.0);
        let common = (m + 1.0) * b * b * uv + m * (2.0 * m + 1.0) * xu * xv;
        let verbatim = scale * (common - c * b * xu * vy);
        let mirrored = scale * (common - c * b * xv * uy);
        Ok(OrthonormalForm {
            verbatim,
            symmetrized: 0.5 * (verbatim + mirrored),
            asymmetry: (verbatim - mirrored).abs(),
        })
    }

    /// Residuals of the three orthonormal-flag identities for `g_Y` and of the
    /// determinant identity derived from them.
    pub fn identity_suite(&self, u: &Vector) -> Result<IdentityResiduals> {
        let met = self.met;
        let uu = met.ip(u, u);
        let uy = met.ip(u, &self.y);
        if (self.yy - 1.0).abs() > UNIT_TOL || (uu - 1.0).abs() > UNIT_TOL || uy.abs() > UNIT_TOL {
            return Err(Error::Precondition(
                "identity suite needs {U, Y} orthonormal".into(),
            ));
        }
        let m = met.m();
        let b = self.xy;
        let a = met.ip(met.x_vec(), u);
        let g_yy = self.g(&self.y, &self.y);
        let g_uy = self.g(u, &self.y);
        let g_uu = self.g(u, u);
        let det = g_yy * g_uu - g_uy * g_uy;
        let want_yy = b.powf(-2.0 * m);
        let want_uy = -m * a / b.powf(2.0 * m + 1.0);
        let want_uu = ((m + 1.0) * b * b + m * (2.0 * m + 1.0) * a * a) / b.powf(2.0 * m + 2.0);
        let want_det = (m + 1.0) * (m * a * a + b * b) / b.powf(4.0 * m + 2.0);
        let rel = |got: f64, want: f64| (got - want).abs() / (1.0 + want.abs());
        Ok(IdentityResiduals {
            g_yy: rel(g_yy, want_yy),
            g_uy: rel(g_uy, want_uy),
            g_uu: rel(g_uu, want_uu),
            determinant: rel(det, want_det),
            determinant_value: det,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrthonormalForm {
    pub verbatim: f64,
    pub symmetrized: f64,
    /// `|form(U,V) − form(V,U)|`
    pub asymmetry: f64,
}

/// Residuals are relative, `|got − want| / (1 + |want|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityResiduals {
    pub g_yy: f64,
    pub g_uy: f64,
    pub g_uu: f64,
    pub determinant: f64,
    pub determinant_value: f64,
}

impl IdentityResiduals {
    pub fn max(&self) -> f64 {
        self.g_yy.max(self.g_uy).max(self.g_uu).max(self.determinant)
    }
}

fn positive_beta(met: &MKropinaMetric, y: &Vector) -> Result<f64> {
    let beta = met.beta(y);
    if beta > 0.0 {
        Ok(beta)
    } else {
        Err(Error::OutsideCone { beta })
    }
}

/// `ratio·min(‖Y‖, β(Y)/Σ|β(d)|)`: a fixed fraction of the distance to the cone
/// boundary along the stencil directions (or of `‖Y‖` when they are parallel
/// to it).
fn scaled_step(met: &MKropinaMetric, y: &Vector, dirs: &[&Vector], ratio: f64) -> Result<f64> {
    let beta = positive_beta(met, y)?;
    let ynorm = met.ip(y, y).max(0.0).sqrt();
    let drift: f64 = dirs.iter().map(|d| met.beta(d).abs()).sum();
    let scale = if drift > 0.0 { ynorm.min(beta / drift) } else { ynorm };
    Ok(ratio * scale)
}

/// Halves `h` until every stencil point keeps `β` at least half of `β(Y)`.
fn cone_safe(met: &MKropinaMetric, y: &Vector, dirs: &[&Vector], mut h: f64) -> Result<f64> {
    let beta = positive_beta(met, y)?;
    let drift: f64 = dirs.iter().map(|d| met.beta(d).abs()).sum();
    while h * drift > 0.5 * beta {
        h *= 0.5;
        if h < 1e-12 {
            return Err(Error::Domain(
                "finite-difference stencil cannot stay inside the cone".into(),
            ));
        }
    }
    Ok(h)
}

/// Two Richardson levels on an `O(h²)` central scheme: `O(h⁶)` overall.
fn richardson<F: Fn(f64) -> f64>(d: F, h: f64) -> f64 {
    let d0 = d(h);
    let d1 = d(h / 2.0);
    let d2 = d(h / 4.0);
    let r1 = (4.0 * d1 - d0) / 3.0;
    let r2 = (4.0 * d2 - d1) / 3.0;
    (16.0 * r2 - r1) / 15.0
}

fn unit(met: &MKropinaMetric, v: &Vector) -> (Vector, f64) {
    let n = met.ip(v, v).max(0.0).sqrt();
    if n == 0.0 {
        (v.clone(), 0.0)
    } else {
        (v / n, n)
    }
}

/// `½ ∂²/∂s∂t F²(Y + sU + tV)` at `s = t = 0`, by a four-point mixed central
/// difference with Richardson extrapolation. `U` and `V` are normalized before
/// stenciling and the result is rescaled by bilinearity.
///
/// `step` overrides the default from [`FD_STEP_RATIO`]; it is halved until the
/// stencil stays inside the cone.
pub fn g_fd_oracle(
    met: &MKropinaMetric,
    y: &Vector,
    u: &Vector,
    v: &Vector,
    step: Option<f64>,
) -> Result<f64> {
    let n = met.x_vec().len();
    crate::linalg::check_len(y, n)?;
    crate::linalg::check_len(u, n)?;
    crate::linalg::check_len(v, n)?;
    let (uh, un) = unit(met, u);
    let (vh, vn) = unit(met, v);
    if un == 0.0 || vn == 0.0 {
        return Ok(0.0);
    }
    let h = match step {
        Some(s) => cone_safe(met, y, &[&uh, &vh], s)?,
        None => scaled_step(met, y, &[&uh, &vh], FD_STEP_RATIO)?,
    };
    let f = |s: f64, t: f64| -> f64 {
        let p = y + &uh * s + &vh * t;
        met.norm_sq(&p).unwrap_or(f64::NAN)
    };
    let mixed = |h: f64| (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
    let est = 0.5 * richardson(mixed, h);
    if !est.is_finite() {
        return Err(Error::Domain("stencil left the cone".into()));
    }
    Ok(est * un * vn)
}

/// `C_Y(Z, U, V) = ½ d/dt g_{Y+tV}(Z, U)` at `t = 0`, differentiating the closed
/// form with a Richardson-extrapolated central difference. The step follows
/// [`CARTAN_STEP_RATIO`], which keeps the stencil well inside the cone.
pub fn cartan(
    met: &MKropinaMetric,
    y: &Vector,
    z: &Vector,
    u: &Vector,
    v: &Vector,
) -> Result<f64> {
    let n = met.x_vec().len();
    crate::linalg::check_len(y, n)?;
    crate::linalg::check_len(z, n)?;
    crate::linalg::check_len(u, n)?;
    crate::linalg::check_len(v, n)?;
    let (vh, vn) = unit(met, v);
    if vn == 0.0 {
        return Ok(0.0);
    }
    let h = scaled_step(met, y, &[&vh], CARTAN_STEP_RATIO)?;
    let g_at = |t: f64| -> f64 {
        let p = y + &vh * t;
        match TensorEvalContext::new(met, &p) {
            Ok(ctx) => ctx.g(z, u),
            Err(_) => f64::NAN,
        }
    };
    let central = |h: f64| (g_at(h) - g_at(-h)) / (2.0 * h);
    let est = 0.5 * richardson(central, h);
    if !est.is_finite() {
        return Err(Error::Domain("stencil left the cone".into()));
    }
    Ok(est * vn)
}

/// Closed-form `2·C_Y([Z,Y]_m, U, V)` for a parallel defining vector:
///
/// `2m(m+1)⟨Y,Y⟩^{m−1}/⟨X,Y⟩^{2m+2} · [⟨W,V⟩(⟨X,Y⟩²⟨Y,U⟩ − ⟨X,Y⟩⟨X,U⟩⟨Y,Y⟩)
///  + ⟨W,U⟩(⟨X,Y⟩²⟨Y,V⟩ − ⟨X,Y⟩⟨X,V⟩⟨Y,Y⟩)]` with `W = [Z,Y]_m`.
///
/// The expression drops every term carrying `⟨X,W⟩` or `⟨W,Y⟩`, so both must
/// vanish; otherwise a precondition error is returned.
pub fn cartan_pattern_closed(
    met: &MKropinaMetric,
    alg: &LieAlgebra,
    dec: &ReductiveDecomposition,
    z: &Vector,
    y: &Vector,
    u: &Vector,
    v: &Vector,
) -> Result<f64> {
    let ctx = TensorEvalContext::new(met, y)?;
    crate::linalg::check_len(z, alg.dim())?;
    let w = dec.m_part(&alg.br(z, y));
    let scale = 1.0 + met.ip(&w, &w).sqrt() * (1.0 + met.ip(y, y).sqrt());
    let xw = met.ip(met.x_vec(), &w);
    if xw.abs() > 1e-10 * scale {
        return Err(Error::Precondition(format!(
            "<X,[Z,Y]_m> = {xw:e}; the defining vector is not parallel"
        )));
    }
    let wy = met.ip(&w, y);
    if wy.abs() > 1e-10 * scale {
        return Err(Error::Precondition(format!(
            "<[Z,Y]_m,Y> = {wy:e}; the metric is not naturally reductive here"
        )));
    }
    let m = met.m();
    let (a, b) = (ctx.yy(), ctx.xy());
    let x = met.x_vec();
    let (yu, yv) = (met.ip(y, u), met.ip(y, v));
    let (xu, xv) = (met.ip(x, u), met.ip(x, v));
    let (wu, wv) = (met.ip(&w, u), met.ip(&w, v));
    let pre = 2.0 * m * (m + 1.0) * a.powf(m - 1.0) / b.powf(2.0 * m + 2.0);
    Ok(pre * (wv * (b * b * yu - b * xu * a) + wu * (b * b * yv - b * xv * a)))
}
