//! Flag curvature `K(P, Y)` of the m-Kropina metric.
//!
//! [`flag_curvature_general`] evaluates the defining quotient
//! `g_Y(U, R(U,Y)Y) / (g_Y(Y,Y)·g_Y(U,U) − g_Y(Y,U)²)` with any curvature
//! backend. The three closed forms assume an orthonormal flag and a parallel
//! defining vector; they orthonormalize their input when needed and record it
//! in the report notes.

use serde::{Deserialize, Serialize};

use crate::curvature::{self, BackendKind, CurvatureBackend, Geometry, Sigma};
use crate::error::{Error, Result};
use crate::linalg::{inner, Matrix, Vector};
use crate::metric::{check_flag_admissible, Admissibility, MKropinaMetric};
use crate::reductivity;
use crate::tensor::{self, TensorEvalContext};

/// Orthonormality tolerance for flags.
pub const ORTHO_TOL: f64 = 1e-10;

/// Denominators below this are treated as a degenerate flag.
pub const DENOMINATOR_GUARD: f64 = 1e-14;

/// Flag pole `y` and transverse edge `u` spanning `P`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Flag {
    pub y: Vector,
    pub u: Vector,
    pub orthonormal: bool,
}

impl Flag {
    /// Untagged flag; see [`Flag::tagged`] to mark it orthonormal after checking.
    pub fn new(y: Vector, u: Vector) -> Self {
        Flag {
            y,
            u,
            orthonormal: false,
        }
    }

    /// Sets the orthonormal tag iff the pair is orthonormal for `gram`.
    pub fn tagged(mut self, gram: &Matrix) -> Self {
        self.orthonormal = is_orthonormal(gram, &self.y, &self.u);
        self
    }
}

pub fn is_orthonormal(gram: &Matrix, y: &Vector, u: &Vector) -> bool {
    (inner(gram, y, y) - 1.0).abs() <= ORTHO_TOL
        && (inner(gram, u, u) - 1.0).abs() <= ORTHO_TOL
        && inner(gram, y, u).abs() <= ORTHO_TOL
}

/// Gram–Schmidt for `⟨·,·⟩`: `Y′ = Y/‖Y‖`, `U′ = (U − ⟨U,Y′⟩Y′)/‖·‖`.
pub fn orthonormalize_flag(gram: &Matrix, y: &Vector, u: &Vector) -> Result<Flag> {
    if y.len() != gram.nrows() || u.len() != gram.nrows() {
        return Err(Error::DimensionMismatch {
            expected: gram.nrows(),
            found: y.len().max(u.len()),
        });
    }
    let yy = inner(gram, y, y);
    if !(yy > 0.0) {
        return Err(Error::Dependent);
    }
    let yn = y / yy.sqrt();
    let w = u - &yn * inner(gram, u, &yn);
    let ww = inner(gram, &w, &w);
    let uu = inner(gram, u, u);
    if !(ww > crate::metric::DEPENDENCE_TOL * uu) || uu == 0.0 {
        return Err(Error::Dependent);
    }
    Ok(Flag {
        y: yn,
        u: w / ww.sqrt(),
        orthonormal: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Defining quotient with a curvature backend.
    General,
    /// Closed form with the bracket expressions for the two inner products.
    Thm31,
    /// Closed form for naturally reductive spaces.
    Natred,
    /// Closed form for bi-invariant metrics on groups.
    Biinv,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::General, Method::Thm31, Method::Natred, Method::Biinv];

    pub fn name(self) -> &'static str {
        match self {
            Method::General => "general",
            Method::Thm31 => "thm31",
            Method::Natred => "natred",
            Method::Biinv => "biinv",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "general" => Ok(Method::General),
            "thm31" => Ok(Method::Thm31),
            "natred" => Ok(Method::Natred),
            "biinv" => Ok(Method::Biinv),
            other => Err(Error::Parse(format!("unknown method `{other}`"))),
        }
    }
}

/// How `g_Y` is obtained inside the general quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TensorSource {
    Closed,
    FdOracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlagCurvatureReport {
    pub method: Method,
    pub k: f64,
    pub numerator: f64,
    pub denominator: f64,
    pub admissibility: Admissibility,
    pub notes: Vec<String>,
}

fn require_admissible(met: &MKropinaMetric, flag: &Flag) -> Result<Admissibility> {
    let adm = check_flag_admissible(met, &flag.y, &flag.u);
    if !adm.admissible {
        return Err(Error::Precondition(format!(
            "inadmissible flag: {}",
            adm.reasons.join("; ")
        )));
    }
    Ok(adm)
}

fn quotient(numerator: f64, denominator: f64) -> Result<f64> {
    if !(denominator.abs() >= DENOMINATOR_GUARD) {
        return Err(Error::DegenerateFlag { denominator });
    }
    Ok(numerator / denominator)
}

/// Defining quotient with the closed-form `g_Y`.
pub fn flag_curvature_general(
    met: &MKropinaMetric,
    geo: &Geometry,
    backend: &CurvatureBackend,
    flag: &Flag,
) -> Result<FlagCurvatureReport> {
    flag_curvature_general_with(met, geo, backend, flag, TensorSource::Closed)
}

pub fn flag_curvature_general_with(
    met: &MKropinaMetric,
    geo: &Geometry,
    backend: &CurvatureBackend,
    flag: &Flag,
    source: TensorSource,
) -> Result<FlagCurvatureReport> {
    let admissibility = require_admissible(met, flag)?;
    let (y, u) = (&flag.y, &flag.u);
    let r = backend.curvature_vector(geo, u, y)?;
    type Pairing<'a> = Box<dyn Fn(&Vector, &Vector) -> Result<f64> + 'a>;
    let g: Pairing = match source {
        TensorSource::Closed => {
            let ctx = TensorEvalContext::new(met, y)?;
            Box::new(move |a, b| Ok(ctx.g(a, b)))
        }
        TensorSource::FdOracle => Box::new(move |a, b| tensor::g_fd_oracle(met, y, a, b, None)),
    };
    let numerator = g(u, &r)?;
    let g_yy = g(y, y)?;
    let g_uu = g(u, u)?;
    let g_yu = g(y, u)?;
    let denominator = g_yy * g_uu - g_yu * g_yu;
    let k = quotient(numerator, denominator)?;
    let mut notes = Vec::new();
    if !matches!(reductivity::check_levi_civita_parallel(met, geo), Ok(c) if c.passed) {
        notes.push("warning: defining vector is not Levi-Civita parallel; R is the curvature of <.,.> only".into());
    }
    if source == TensorSource::FdOracle {
        notes.push("g_Y from finite-difference oracle".into());
    }
    Ok(FlagCurvatureReport {
        method: Method::General,
        k,
        numerator,
        denominator,
        admissibility,
        notes,
    })
}

/// The closed flag-curvature formula as pure algebra:
/// `K = ⟨X,Y⟩^{2m}·[(m+1)⟨X,Y⟩²·ur + m(2m+1)⟨X,U⟩·xr] / ((m+1)·[m⟨X,U⟩² + ⟨X,Y⟩²])`
/// with `ur = ⟨U,R(U,Y)Y⟩` and `xr = ⟨X,R(U,Y)Y⟩`. Returns `(numerator, denominator)`.
///
/// No restriction is placed on `m`; at `m = 0` the quotient is `ur`, the
/// sectional curvature of `⟨·,·⟩` on an orthonormal flag.
pub fn kropina_formula(m: f64, xy: f64, xu: f64, ur: f64, xr: f64) -> (f64, f64) {
    let num = xy.powf(2.0 * m) * ((m + 1.0) * xy * xy * ur + m * (2.0 * m + 1.0) * xu * xr);
    let den = (m + 1.0) * (m * xu * xu + xy * xy);
    (num, den)
}

fn prepare_orthonormal(met: &MKropinaMetric, flag: &Flag, notes: &mut Vec<String>) -> Result<Flag> {
    if flag.orthonormal && is_orthonormal(met.gram(), &flag.y, &flag.u) {
        return Ok(flag.clone());
    }
    if is_orthonormal(met.gram(), &flag.y, &flag.u) {
        return Ok(Flag {
            orthonormal: true,
            ..flag.clone()
        });
    }
    notes.push("flag orthonormalized before applying the closed form".into());
    orthonormalize_flag(met.gram(), &flag.y, &flag.u)
}

fn note_parallel(met: &MKropinaMetric, geo: &Geometry, notes: &mut Vec<String>) {
    let check = reductivity::check_parallel_condition(met, geo.alg, geo.dec);
    if !check.passed {
        notes.push(format!(
            "warning: defining vector is not parallel (residual {:e})",
            check.residual
        ));
    }
}

fn closed_report(
    method: Method,
    met: &MKropinaMetric,
    flag: &Flag,
    ur: f64,
    xr: f64,
    divisor: f64,
    notes: Vec<String>,
) -> Result<FlagCurvatureReport> {
    let admissibility = require_admissible(met, flag)?;
    let xy = met.beta(&flag.y);
    let xu = met.beta(&flag.u);
    let (numerator, den) = kropina_formula(met.m(), xy, xu, ur, xr);
    let denominator = divisor * den;
    let k = quotient(numerator, denominator)?;
    Ok(FlagCurvatureReport {
        method,
        k,
        numerator,
        denominator,
        admissibility,
        notes,
    })
}

/// Closed form with `⟨U,R(U,Y)Y⟩` and `⟨X,R(U,Y)Y⟩` from their bracket expressions.
///
/// Exact when `X` is Levi-Civita parallel and `Φ = I`. With `Φ ≠ I` the
/// expressions pair every term with `⟨·,·⟩` and drift from the true curvature.
pub fn flag_curvature_thm31(
    met: &MKropinaMetric,
    geo: &Geometry,
    sigma: Sigma,
    flag: &Flag,
) -> Result<FlagCurvatureReport> {
    require_admissible(met, flag)?;
    let mut notes = Vec::new();
    let flag = prepare_orthonormal(met, flag, &mut notes)?;
    match reductivity::check_levi_civita_parallel(met, geo) {
        Ok(c) if c.passed => {}
        Ok(c) => notes.push(format!(
            "warning: defining vector is not Levi-Civita parallel (residual {:e})",
            c.residual
        )),
        Err(e) => notes.push(format!("warning: parallelism not checked: {e}")),
    }
    if !geo.pair.is_identity_endo() {
        notes.push("warning: metric endomorphism is not the identity; the bracket expressions pair with <.,.> only".into());
    }
    let (xr, ur) = curvature::thm31_inner_products(geo, sigma, met.x_vec(), &flag.u, &flag.y)?;
    closed_report(Method::Thm31, met, &flag, ur, xr, 1.0, notes)
}

/// Closed form for naturally reductive spaces. Both bracket terms share the
/// outer factor `¼` as in the published expression.
pub fn flag_curvature_natred(
    met: &MKropinaMetric,
    geo: &Geometry,
    flag: &Flag,
) -> Result<FlagCurvatureReport> {
    require_admissible(met, flag)?;
    let mut notes = Vec::new();
    let flag = prepare_orthonormal(met, flag, &mut notes)?;
    note_parallel(met, geo, &mut notes);
    let nr = reductivity::check_riemannian_natred(geo.alg, geo.dec, geo.pair.gram());
    if !nr.check.passed {
        notes.push(format!(
            "warning: decomposition is not naturally reductive (residual {:e})",
            nr.check.residual
        ));
    }
    let (alg, dec) = (geo.alg, geo.dec);
    let (y, u) = (&flag.y, &flag.u);
    let uy = alg.br(u, y);
    let t_m = dec.m_part(&alg.br(y, &dec.m_part(&uy)));
    let uy_h = dec.h_part(&uy);
    let t_h = alg.br(y, &uy_h);
    if crate::linalg::max_abs(&uy_h) > 0.0 {
        notes.push("[U,Y] has an h-component; its term is weighted by 1/4 in this form".into());
    }
    let ip = |a: &Vector, b: &Vector| geo.pair.ip(a, b);
    let ur = ip(u, &t_m) + ip(u, &t_h);
    let xr = ip(met.x_vec(), &t_m) + ip(met.x_vec(), &t_h);
    closed_report(Method::Natred, met, &flag, ur, xr, 4.0, notes)
}

/// Closed form for a bi-invariant `⟨·,·⟩` on the group itself (`h = 0`).
pub fn flag_curvature_biinv(
    met: &MKropinaMetric,
    geo: &Geometry,
    flag: &Flag,
) -> Result<FlagCurvatureReport> {
    require_admissible(met, flag)?;
    let mut notes = Vec::new();
    let flag = prepare_orthonormal(met, flag, &mut notes)?;
    if !geo.dec.h_indices().is_empty() {
        notes.push("warning: h is not trivial".into());
    }
    match geo.alg.check_bi_invariance(geo.pair.gram()) {
        Ok(c) if c.passed => {}
        _ => notes.push("warning: <.,.> is not bi-invariant".into()),
    }
    note_parallel(met, geo, &mut notes);
    let (alg, y, u) = (geo.alg, &flag.y, &flag.u);
    let t = alg.br(y, &alg.br(u, y));
    let ur = geo.pair.ip(u, &t);
    let xr = geo.pair.ip(met.x_vec(), &t);
    closed_report(Method::Biinv, met, &flag, ur, xr, 4.0, notes)
}

/// Dispatches one method. The general method uses `backend`; the closed forms
/// ignore it except for `σ`.
pub fn flag_curvature(
    method: Method,
    met: &MKropinaMetric,
    geo: &Geometry,
    backend: &CurvatureBackend,
    flag: &Flag,
) -> Result<FlagCurvatureReport> {
    match method {
        Method::General => flag_curvature_general(met, geo, backend, flag),
        Method::Thm31 => flag_curvature_thm31(met, geo, backend.sigma, flag),
        Method::Natred => flag_curvature_natred(met, geo, flag),
        Method::Biinv => flag_curvature_biinv(met, geo, flag),
    }
}

/// Backend used when none is requested: the naturally reductive formula when
/// the decomposition passes the Riemannian criterion, Püttmann's otherwise.
pub fn default_backend(geo: &Geometry, sigma: Sigma) -> CurvatureBackend {
    let nr = reductivity::check_riemannian_natred(geo.alg, geo.dec, geo.pair.gram());
    let kind = if nr.check.passed {
        BackendKind::NaturallyReductive
    } else {
        BackendKind::Puttmann
    };
    CurvatureBackend::new(kind).with_sigma(sigma)
}
