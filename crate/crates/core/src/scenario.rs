//! JSON scenarios: loading with eager validation, and the four commands that
//! produce reports from them.

use serde::{Deserialize, Serialize};

use crate::curvature::{BackendKind, CurvatureBackend, Geometry, Sigma};
use crate::error::{Error, Result};
use crate::flag::{self, Flag, Method, TensorSource};
use crate::lie::{Check, InnerProductPair, LieAlgebra, ReductiveDecomposition};
use crate::linalg::{Matrix, Vector};
use crate::metric::{self, ConvexityGrid, ConvexityReport, MKropinaMetric};
use crate::par::Execution;
use crate::reductivity::{self, ReductivityReport, SampleSpec};
use crate::report::{self, Format, ReportRow};
use crate::sampling;
use crate::tensor::{self, TensorEvalContext};

/// A number given as a JSON number, a decimal string, or a `"p/q"` rational.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Num {
    F(f64),
    S(String),
}

impl Num {
    fn value(&self) -> Result<f64> {
        match self {
            Num::F(x) => Ok(*x),
            Num::S(s) => parse_number(s),
        }
    }
}

pub fn parse_number(s: &str) -> Result<f64> {
    let bad = || Error::Parse(format!("not a number: `{s}`"));
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0.0 {
                return Err(bad());
            }
            p / q
        }
        None => s.parse().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

fn vector(xs: &[Num]) -> Result<Vector> {
    let v: Result<Vec<f64>> = xs.iter().map(Num::value).collect();
    Ok(Vector::from_vec(v?))
}

fn matrix(rows: &[Vec<Num>], n: usize, what: &str) -> Result<Matrix> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse(format!("{what} must be a {n}x{n} row-major array")));
    }
    let mut m = Matrix::zeros(n, n);
    for (i, r) in rows.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            m[(i, j)] = x.value()?;
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum AlgebraSpec {
    Preset(String),
    Explicit {
        dim: usize,
        constants: Vec<(usize, usize, usize, Num)>,
        #[serde(default)]
        labels: Option<Vec<String>>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlagSpec {
    id: String,
    y: Vec<Num>,
    u: Vec<Num>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSpec {
    pub count: usize,
    pub seed: u64,
}

impl Default for ScanSpec {
    fn default() -> Self {
        ScanSpec { count: 32, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Closed-form identities (homogeneity, the determinant identity).
    pub closed_form: f64,
    /// Finite-difference oracles, relative to `1 + |value|`.
    pub fd_oracle: f64,
    /// Agreement between flag-curvature methods, relative to `1 + |K|`.
    pub method: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            closed_form: 1e-10,
            fd_oracle: 1e-6,
            method: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn uniform(t: f64) -> Self {
        Tolerances {
            closed_form: t,
            fd_oracle: t,
            method: t,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    #[serde(default)]
    name: Option<String>,
    algebra: AlgebraSpec,
    #[serde(default)]
    h_indices: Vec<usize>,
    #[serde(default)]
    gram0: Option<Vec<Vec<Num>>>,
    #[serde(default)]
    gram_m: Option<Vec<Vec<Num>>>,
    x_vec: Vec<Num>,
    m_exponent: Num,
    #[serde(default)]
    sign_convention: Option<i32>,
    #[serde(default)]
    relax_norm_bound: bool,
    #[serde(default)]
    backend: Option<BackendKind>,
    #[serde(default)]
    methods: Option<Vec<Method>>,
    #[serde(default)]
    flags: Vec<FlagSpec>,
    #[serde(default)]
    scan: Option<ScanSpec>,
    #[serde(default)]
    tolerances: Tolerances,
    #[serde(default)]
    latifi: Option<SampleSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitFlag {
    pub id: String,
    pub y: Vector,
    pub u: Vector,
}

/// A validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub alg: LieAlgebra,
    pub dec: ReductiveDecomposition,
    pub pair: InnerProductPair,
    pub met: MKropinaMetric,
    pub sigma: Sigma,
    pub backend: Option<BackendKind>,
    pub methods: Option<Vec<Method>>,
    pub flags: Vec<ExplicitFlag>,
    pub scan: ScanSpec,
    pub tolerances: Tolerances,
    pub latifi: SampleSpec,
    pub jacobi: Check,
    pub ad_invariance: Check,
    pub bi_invariance: Check,
}

fn require(check: &Check, what: &str) -> Result<()> {
    if check.passed {
        Ok(())
    } else {
        Err(Error::Validation(format!(
            "{what} fails: residual {:e} at {:?}",
            check.residual, check.witness
        )))
    }
}

/// Parses and validates a scenario document. Every structural check runs here,
/// before any computation.
pub fn load_scenario(text: &str) -> Result<Scenario> {
    let file: ScenarioFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;

    let alg = match &file.algebra {
        AlgebraSpec::Preset(name) => LieAlgebra::preset(name)?,
        AlgebraSpec::Explicit {
            dim,
            constants,
            labels,
        } => {
            let triples: Result<Vec<(usize, usize, usize, f64)>> = constants
                .iter()
                .map(|(i, j, k, v)| Ok((*i, *j, *k, v.value()?)))
                .collect();
            LieAlgebra::from_triples(*dim, &triples?, labels.clone())?
        }
    };
    let n = alg.dim();
    let jacobi = alg.check_jacobi();
    require(&jacobi, "Jacobi identity")?;

    let dec = ReductiveDecomposition::from_h(n, &file.h_indices)?;
    let ad_invariance = dec.check_ad_invariance(&alg)?;
    require(&ad_invariance, "ad(h)-invariance of the decomposition")?;

    let gram0 = match &file.gram0 {
        Some(rows) => matrix(rows, n, "gram0")?,
        None => Matrix::identity(n, n),
    };
    let pair = match &file.gram_m {
        Some(rows) => {
            let gm = matrix(rows, dec.m_indices().len(), "gram_m")?;
            InnerProductPair::new(&alg, &dec, gram0.clone(), &gm)?
        }
        None => InnerProductPair::bi_invariant(&alg, &dec, gram0.clone())?,
    };
    let bi_invariance = alg.check_bi_invariance(&gram0)?;
    require(&bi_invariance, "bi-invariance of gram0")?;

    let x = vector(&file.x_vec)?;
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    let m = file.m_exponent.value()?;
    let met = if file.relax_norm_bound {
        MKropinaMetric::with_relaxed_norm_bound(m, x, pair.gram().clone())?
    } else {
        MKropinaMetric::new(m, x, pair.gram().clone())?
    };
    met.check_in_m(&dec)?;

    let sigma = match file.sign_convention {
        Some(s) => Sigma::new(s)?,
        None => Sigma::default(),
    };

    let mut flags = Vec::with_capacity(file.flags.len());
    for f in &file.flags {
        let y = vector(&f.y)?;
        let u = vector(&f.u)?;
        for v in [&y, &u] {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
            if dec.off_m(v) > 0.0 {
                return Err(Error::Validation(format!("flag `{}` has components in h", f.id)));
            }
        }
        flags.push(ExplicitFlag {
            id: f.id.clone(),
            y,
            u,
        });
    }

    Ok(Scenario {
        name: file.name.unwrap_or_else(|| "scenario".into()),
        alg,
        dec,
        pair,
        met,
        sigma,
        backend: file.backend,
        methods: file.methods,
        flags,
        scan: file.scan.unwrap_or_default(),
        tolerances: file.tolerances,
        latifi: file.latifi.unwrap_or_default(),
        jacobi,
        ad_invariance,
        bi_invariance,
    })
}

pub fn load_scenario_file(path: &std::path::Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    load_scenario(&text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Check,
    Curvature,
    Scan,
    Verify,
}

/// Command-line overrides of scenario settings.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub methods: Option<Vec<Method>>,
    pub count: Option<usize>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    pub sigma: Option<Sigma>,
    pub exec: Execution,
}

impl Scenario {
    pub fn geometry(&self) -> Geometry<'_> {
        Geometry {
            alg: &self.alg,
            dec: &self.dec,
            pair: &self.pair,
        }
    }

    /// Methods whose hypotheses hold: the general quotient always; `thm31`
    /// needs a Levi-Civita parallel defining vector and `Φ = I`; `natred` and
    /// `biinv` need the bracket parallel condition plus natural reductivity or
    /// a bi-invariant metric on the group. `natred` is also left out when
    /// `[m,m]` has an `h`-component, which its closed form weights by `¼`
    /// instead of `1`.
    pub fn applicable_methods(&self) -> Vec<Method> {
        let parallel = reductivity::check_parallel_condition(&self.met, &self.alg, &self.dec).passed;
        let lc_parallel = reductivity::check_levi_civita_parallel(&self.met, &self.geometry())
            .map(|c| c.passed)
            .unwrap_or(false);
        let natred =
            reductivity::check_riemannian_natred(&self.alg, &self.dec, self.pair.gram()).check.passed;
        let biinv = self.dec.h_indices().is_empty()
            && self
                .alg
                .check_bi_invariance(self.pair.gram())
                .map(|c| c.passed)
                .unwrap_or(false);
        let mut out = vec![Method::General];
        if lc_parallel && self.pair.is_identity_endo() {
            out.push(Method::Thm31);
        }
        if parallel {
            if natred && !self.brackets_leave_m() {
                out.push(Method::Natred);
            }
            if biinv {
                out.push(Method::Biinv);
            }
        }
        out
    }

    /// True when some `[e_i, e_j]` with `e_i, e_j ∈ m` has an `h`-component.
    pub fn brackets_leave_m(&self) -> bool {
        let idx = self.dec.m_indices();
        idx.iter().any(|&i| {
            idx.iter()
                .any(|&j| self.dec.off_m(&self.alg.br(&self.alg.basis(i), &self.alg.basis(j))) > 0.0)
        })
    }

    fn backend_for(&self, sigma: Sigma) -> CurvatureBackend {
        match self.backend {
            Some(kind) => CurvatureBackend::new(kind).with_sigma(sigma),
            None => flag::default_backend(&self.geometry(), sigma),
        }
    }

    fn tolerances_for(&self, opts: &RunOptions) -> Tolerances {
        opts.tolerance.map(Tolerances::uniform).unwrap_or(self.tolerances)
    }
}

/// Output of `check`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub scenario: String,
    pub dim: usize,
    pub h_indices: Vec<usize>,
    pub m_indices: Vec<usize>,
    pub m_exponent: f64,
    pub x_norm: f64,
    pub sign_convention: i32,
    pub jacobi: Check,
    pub ad_invariance: Check,
    pub bi_invariance: Check,
    pub metric_endomorphism_identity: bool,
    pub convexity: ConvexityReport,
    pub reductivity: ReductivityReport,
    pub backend: BackendKind,
    pub applicable_methods: Vec<Method>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyItem {
    pub name: String,
    pub samples: usize,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl VerifyItem {
    fn new(name: &str, samples: usize, residual: f64, tolerance: f64) -> Self {
        VerifyItem {
            name: name.into(),
            samples,
            residual,
            tolerance,
            passed: residual <= tolerance,
        }
    }
}

/// Output of `verify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub scenario: String,
    pub passed: bool,
    pub items: Vec<VerifyItem>,
}

impl VerifyReport {
    pub fn item(&self, name: &str) -> Option<&VerifyItem> {
        self.items.iter().find(|i| i.name == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Check(Box<CheckReport>),
    Rows(Vec<ReportRow>),
    Verify(VerifyReport),
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match (self, format) {
            (Output::Rows(rows), f) => report::emit_report(rows, f),
            (Output::Check(c), Format::Json) => report::emit_json(c),
            (Output::Verify(v), Format::Json) => report::emit_json(v),
            (Output::Check(c), Format::Csv) => {
                let mut out = String::from("check,passed,residual\n");
                let r = &c.reductivity;
                for (name, chk) in [
                    ("jacobi", &c.jacobi),
                    ("ad_invariance", &c.ad_invariance),
                    ("bi_invariance", &c.bi_invariance),
                    ("riemannian_natred", &r.riemannian_natred.check),
                    ("latifi_natred", &r.latifi_natred.check),
                    ("parallel_condition", &r.parallel_condition),
                ] {
                    out.push_str(&format!("{name},{},{}\n", chk.passed, report::fmt_float(chk.residual)));
                }
                out.push_str(&format!(
                    "equivalence_consistent,{},\nconvexity,{},\n",
                    r.equivalence_consistent, c.convexity.valid
                ));
                out
            }
            (Output::Verify(v), Format::Csv) => {
                let mut out = String::from("check,samples,residual,tolerance,passed\n");
                for i in &v.items {
                    out.push_str(&format!(
                        "{},{},{},{},{}\n",
                        i.name,
                        i.samples,
                        report::fmt_float(i.residual),
                        report::fmt_float(i.tolerance),
                        i.passed
                    ));
                }
                out
            }
        }
    }

    /// `0` on success, `2` when `verify` finds a residual above tolerance.
    pub fn exit_code(&self) -> i32 {
        match self {
            Output::Verify(v) if !v.passed => 2,
            _ => 0,
        }
    }
}

pub fn run_command(sc: &Scenario, cmd: Command, opts: &RunOptions) -> Result<Output> {
    match cmd {
        Command::Check => run_check(sc, opts).map(|c| Output::Check(Box::new(c))),
        Command::Curvature => {
            let flags: Vec<(String, Vector, Vector)> = sc
                .flags
                .iter()
                .map(|f| (f.id.clone(), f.y.clone(), f.u.clone()))
                .collect();
            Ok(Output::Rows(compute_rows(sc, &flags, opts)))
        }
        Command::Scan => {
            let count = opts.count.unwrap_or(sc.scan.count);
            let seed = opts.seed.unwrap_or(sc.scan.seed);
            let flags: Vec<(String, Vector, Vector)> =
                sampling::orthonormal_flags(&sc.met, &sc.dec, count, seed, sampling::CONE_MARGIN)?
                    .into_iter()
                    .enumerate()
                    .map(|(i, (y, u))| (format!("scan-{i:04}"), y, u))
                    .collect();
            Ok(Output::Rows(compute_rows(sc, &flags, opts)))
        }
        Command::Verify => run_verify(sc, opts).map(Output::Verify),
    }
}

fn run_check(sc: &Scenario, opts: &RunOptions) -> Result<CheckReport> {
    let sigma = opts.sigma.unwrap_or(sc.sigma);
    let latifi = SampleSpec {
        count: opts.count.unwrap_or(sc.latifi.count),
        seed: opts.seed.unwrap_or(sc.latifi.seed),
    };
    let reductivity = reductivity::equivalence_report(&sc.met, &sc.geometry(), latifi, opts.exec)?;
    let convexity = metric::check_strong_convexity(
        sc.met.m(),
        &ConvexityGrid::Uniform {
            b0: sc.met.x_norm(),
            nb: 50,
            ns: 200,
        },
    );
    Ok(CheckReport {
        scenario: sc.name.clone(),
        dim: sc.alg.dim(),
        h_indices: sc.dec.h_indices().to_vec(),
        m_indices: sc.dec.m_indices().to_vec(),
        m_exponent: sc.met.m(),
        x_norm: sc.met.x_norm(),
        sign_convention: sigma.into(),
        jacobi: sc.jacobi.clone(),
        ad_invariance: sc.ad_invariance.clone(),
        bi_invariance: sc.bi_invariance.clone(),
        metric_endomorphism_identity: sc.pair.is_identity_endo(),
        convexity,
        reductivity,
        backend: sc.backend_for(sigma).kind,
        applicable_methods: sc.applicable_methods(),
        warnings: sc.met.warnings().to_vec(),
    })
}

/// One row per flag, in input order. Flags are orthonormalized for `⟨·,·⟩`
/// before any method runs; `K` is unchanged by this.
pub fn compute_rows(
    sc: &Scenario,
    flags: &[(String, Vector, Vector)],
    opts: &RunOptions,
) -> Vec<ReportRow> {
    let sigma = opts.sigma.unwrap_or(sc.sigma);
    let backend = sc.backend_for(sigma);
    let methods = opts
        .methods
        .clone()
        .or_else(|| sc.methods.clone())
        .unwrap_or_else(|| sc.applicable_methods());
    opts.exec
        .map(flags, |(id, y, u)| compute_row(sc, &backend, &methods, id, y, u))
}

fn compute_row(
    sc: &Scenario,
    backend: &CurvatureBackend,
    methods: &[Method],
    id: &str,
    y: &Vector,
    u: &Vector,
) -> ReportRow {
    let mut row = ReportRow {
        flag_id: id.to_string(),
        ..Default::default()
    };
    let adm = metric::check_flag_admissible(&sc.met, y, u);
    row.admissible = adm.admissible;
    if !adm.admissible {
        row.notes = adm.reasons;
        return row;
    }
    let fl = match flag::orthonormalize_flag(sc.met.gram(), y, u) {
        Ok(f) => f,
        Err(e) => {
            row.admissible = false;
            row.notes.push(e.to_string());
            return row;
        }
    };
    if !flag::is_orthonormal(sc.met.gram(), y, u) {
        row.notes.push("flag orthonormalized".into());
    }
    if let Ok(ctx) = TensorEvalContext::new(&sc.met, &fl.y) {
        let (gyy, guu, guy) = (ctx.g(&fl.y, &fl.y), ctx.g(&fl.u, &fl.u), ctx.g(&fl.u, &fl.y));
        row.g_yy = Some(gyy);
        row.g_uu = Some(guu);
        row.g_uy = Some(guy);
        row.eqn_n = Some(gyy * guu - guy * guy);
    }
    let geo = sc.geometry();
    for &m in methods {
        match flag::flag_curvature(m, &sc.met, &geo, backend, &fl) {
            Ok(rep) => {
                row.set_k(m, rep.k);
                for n in rep.notes {
                    if n != "flag orthonormalized before applying the closed form" {
                        row.notes.push(format!("{}: {n}", m.name()));
                    }
                }
            }
            Err(e) => row.notes.push(format!("{}: {e}", m.name())),
        }
    }
    row.update_spread();
    row
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + b.abs())
}

fn run_verify(sc: &Scenario, opts: &RunOptions) -> Result<VerifyReport> {
    let tol = sc.tolerances_for(opts);
    let count = opts.count.unwrap_or(sc.scan.count).max(1);
    let seed = opts.seed.unwrap_or(sc.scan.seed);
    let exec = opts.exec;
    let met = &sc.met;
    let mut items = Vec::new();

    let triples = sampling::admissible_triples(met, &sc.dec, count, seed, sampling::CONE_MARGIN)?;
    let g_res = exec.try_map(&triples, |(y, u, v)| -> Result<(f64, f64, f64, f64)> {
        let ctx = TensorEvalContext::new(met, y)?;
        let closed = ctx.g(u, v);
        let fd = tensor::g_fd_oracle(met, y, u, v, None)?;
        let f2 = met.norm_sq(y)?;
        let homog = rel(ctx.g(y, y), f2);
        let c = tensor::cartan(met, y, u, v, y)?;
        let c_perm = [
            tensor::cartan(met, y, v, u, y)?,
            tensor::cartan(met, y, y, v, u)?,
            tensor::cartan(met, y, y, u, v)?,
        ];
        let c_yslot = tensor::cartan(met, y, y, u, v)?.abs() / (1.0 + closed.abs());
        let c_sym = c_perm.iter().map(|p| (p - c).abs()).fold(0.0, f64::max)
            / (1.0 + c.abs() + closed.abs());
        Ok((rel(fd, closed), homog, c_sym, c_yslot))
    })?;
    let max_of = |f: fn(&(f64, f64, f64, f64)) -> f64| g_res.iter().map(f).fold(0.0, f64::max);
    items.push(VerifyItem::new("g_fd_oracle", triples.len(), max_of(|r| r.0), tol.fd_oracle));
    items.push(VerifyItem::new("homogeneity", triples.len(), max_of(|r| r.1), tol.closed_form));
    items.push(VerifyItem::new("cartan_symmetry", triples.len(), max_of(|r| r.2), tol.fd_oracle));
    items.push(VerifyItem::new("cartan_pole_slot", triples.len(), max_of(|r| r.3), tol.fd_oracle));

    let mut flags: Vec<Flag> = Vec::new();
    for f in &sc.flags {
        if metric::check_flag_admissible(met, &f.y, &f.u).admissible {
            flags.push(flag::orthonormalize_flag(met.gram(), &f.y, &f.u)?);
        }
    }
    if sc.dec.m_indices().len() >= 2 {
        for (y, u) in sampling::orthonormal_flags(met, &sc.dec, count, seed ^ 0x9e37_79b9, sampling::CONE_MARGIN)? {
            flags.push(Flag::new(y, u).tagged(met.gram()));
        }
    }

    let ident = exec.try_map(&flags, |f| -> Result<(f64, bool)> {
        let ctx = TensorEvalContext::new(met, &f.y)?;
        let r = ctx.identity_suite(&f.u)?;
        Ok((r.max(), r.determinant_value > 0.0))
    })?;
    items.push(VerifyItem::new(
        "identity_suite",
        flags.len(),
        ident.iter().map(|r| r.0).fold(0.0, f64::max),
        tol.closed_form,
    ));
    let nonpositive = ident.iter().filter(|r| !r.1).count();
    items.push(VerifyItem::new("eqn_n_positive", flags.len(), nonpositive as f64, 0.0));

    let sigma = opts.sigma.unwrap_or(sc.sigma);
    let backend = sc.backend_for(sigma);
    let methods = opts
        .methods
        .clone()
        .or_else(|| sc.methods.clone())
        .unwrap_or_else(|| sc.applicable_methods());
    let geo = sc.geometry();
    let agree = exec.try_map(&flags, |f| -> Result<(f64, f64)> {
        let general = flag::flag_curvature_general(met, &geo, &backend, f)?.k;
        let mut worst: f64 = 0.0;
        for &m in &methods {
            if m != Method::General {
                let k = flag::flag_curvature(m, met, &geo, &backend, f)?.k;
                worst = worst.max(rel(k, general));
            }
        }
        let fd = flag::flag_curvature_general_with(met, &geo, &backend, f, TensorSource::FdOracle)?.k;
        Ok((worst, rel(fd, general)))
    })?;
    items.push(VerifyItem::new(
        "method_agreement",
        flags.len(),
        agree.iter().map(|r| r.0).fold(0.0, f64::max),
        tol.method,
    ));
    items.push(VerifyItem::new(
        "general_fd_pipeline",
        flags.len(),
        agree.iter().map(|r| r.1).fold(0.0, f64::max),
        tol.fd_oracle,
    ));

    let red = reductivity::equivalence_report(met, &geo, sc.latifi, exec)?;
    items.push(VerifyItem::new(
        "natred_equivalence",
        red.latifi_natred.samples,
        if red.equivalence_consistent { 0.0 } else { 1.0 },
        0.0,
    ));
    if red.parallel_condition.passed && red.riemannian_natred.check.passed {
        items.push(VerifyItem::new(
            "latifi_residual",
            red.latifi_natred.samples,
            red.latifi_natred.check.residual,
            reductivity::LATIFI_TOL,
        ));
    }

    Ok(VerifyReport {
        scenario: sc.name.clone(),
        passed: items.iter().all(|i| i.passed),
        items,
    })
}
