//! Natural reductivity: the Riemannian trilinear criterion, the Finslerian
//! criterion with `g_Y` and the Cartan tensor, the parallel condition on the
//! defining vector, and the report tying the three together.
//!
//! Criteria are evaluated in their standard (symmetric) forms. Alternate
//! asymmetric variants are evaluated too and surfaced as `alternate_form_residual`
//! for audit; they never decide pass/fail.

use serde::{Deserialize, Serialize};

use crate::curvature::Geometry;
use crate::error::Result;
use crate::lie::{Check, LieAlgebra, ReductiveDecomposition, Worst};
use crate::linalg::{self, inner, Matrix, Vector};
use crate::metric::MKropinaMetric;
use crate::par::Execution;
use crate::sampling;
use crate::tensor::{cartan, TensorEvalContext};

pub const RIEMANNIAN_TOL: f64 = 1e-10;
pub const PARALLEL_TOL: f64 = 1e-10;
/// Finite-difference limited; see [`check_latifi_natred`] for the normalization.
pub const LATIFI_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NatRedReport {
    /// `⟨[X,Y]_m,Z⟩ + ⟨Y,[X,Z]_m⟩ = 0`; witness `(X, Y, Z)`.
    pub check: Check,
    /// Largest `|⟨[X,Y]_m,Z⟩ + ⟨X,[Y,Z]_m⟩|` (alternate asymmetric form).
    pub alternate_form_residual: f64,
}

pub fn check_riemannian_natred(
    alg: &LieAlgebra,
    dec: &ReductiveDecomposition,
    gram: &Matrix,
) -> NatRedReport {
    let idx = dec.m_indices();
    let basis: Vec<Vector> = idx.iter().map(|&i| alg.basis(i)).collect();
    let mut worst = Worst::default();
    let mut alternate: f64 = 0.0;
    for (p, x) in basis.iter().enumerate() {
        for (q, y) in basis.iter().enumerate() {
            let xy_m = dec.m_part(&alg.br(x, y));
            for (r, z) in basis.iter().enumerate() {
                let xz_m = dec.m_part(&alg.br(x, z));
                let standard = inner(gram, &xy_m, z) + inner(gram, y, &xz_m);
                worst.offer(standard.abs(), || vec![idx[p], idx[q], idx[r]]);
                let yz_m = dec.m_part(&alg.br(y, z));
                alternate = alternate.max((inner(gram, &xy_m, z) + inner(gram, x, &yz_m)).abs());
            }
        }
    }
    NatRedReport {
        check: Check::from_worst(worst.value, worst.at, RIEMANNIAN_TOL),
        alternate_form_residual: alternate,
    }
}

/// `⟨X,[Y,Z]_m⟩ = 0` for all basis `Y, Z ∈ m` (witness `(Y, Z)`), and
/// `[h, X] = 0` (witness `(H)`).
pub fn check_parallel_condition(
    met: &MKropinaMetric,
    alg: &LieAlgebra,
    dec: &ReductiveDecomposition,
) -> Check {
    let x = met.x_vec();
    let idx = dec.m_indices();
    let mut worst = Worst::default();
    for &a in idx {
        let ea = alg.basis(a);
        for &b in idx {
            let r = met.ip(x, &dec.m_part(&alg.br(&ea, &alg.basis(b))));
            worst.offer(r.abs(), || vec![a, b]);
        }
    }
    for &h in dec.h_indices() {
        let r = linalg::max_abs(&alg.br(&alg.basis(h), x));
        worst.offer(r, || vec![h]);
    }
    Check::from_worst(worst.value, worst.at, PARALLEL_TOL)
}

/// `U(a,b) ∈ m` with `2⟨U(a,b),z⟩ = ⟨[z,a]_m,b⟩ + ⟨a,[z,b]_m⟩` for all `z ∈ m`.
fn nomizu_u(geo: &Geometry, a: &Vector, b: &Vector) -> Result<Vector> {
    let (alg, dec, pair) = (geo.alg, geo.dec, geo.pair);
    let s: Vec<f64> = dec
        .m_indices()
        .iter()
        .map(|&k| {
            let z = alg.basis(k);
            0.5 * (pair.ip(&dec.m_part(&alg.br(&z, a)), b) + pair.ip(a, &dec.m_part(&alg.br(&z, b))))
        })
        .collect();
    geo.raise_in_m(&s)
}

/// Levi-Civita parallelism of the invariant field through `X`: the Nomizu map
/// `Λ(Y)X = ½[Y,X]_m + U(Y,X)` vanishes for every basis `Y ∈ m` (witness
/// `(Y)`), and `[h, X] = 0` (witness `(H, H)`).
///
/// Under natural reductivity this is equivalent to [`check_parallel_condition`];
/// in general that bracket condition is only necessary.
pub fn check_levi_civita_parallel(met: &MKropinaMetric, geo: &Geometry) -> Result<Check> {
    let x = met.x_vec();
    let (alg, dec) = (geo.alg, geo.dec);
    let mut worst = Worst::default();
    for &a in dec.m_indices() {
        let y = alg.basis(a);
        let lam = dec.m_part(&alg.br(&y, x)) * 0.5 + nomizu_u(geo, &y, x)?;
        worst.offer(linalg::max_abs(&lam), || vec![a]);
    }
    for &h in dec.h_indices() {
        let r = linalg::max_abs(&alg.br(&alg.basis(h), x));
        worst.offer(r, || vec![h, h]);
    }
    Ok(Check::from_worst(worst.value, worst.at, PARALLEL_TOL))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub count: usize,
    pub seed: u64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec { count: 16, seed: 0x5eed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatifiReport {
    /// Witness is the basis triple `(Z, U, V)`.
    pub check: Check,
    /// Flag pole at which the witness was found.
    pub witness_y: Option<Vec<f64>>,
    pub samples: usize,
    /// Largest normalized residual of the alternate asymmetric form
    /// `g_Y([Z,U]_m,V) + g_Y(Z,[U,V]_m) + 2C_Y([Z,Y]_m,U,V)`.
    pub alternate_form_residual: f64,
}

struct SampleOutcome {
    worst: f64,
    at: Option<[usize; 3]>,
    alternate: f64,
}

fn latifi_at(
    met: &MKropinaMetric,
    alg: &LieAlgebra,
    dec: &ReductiveDecomposition,
    y: &Vector,
) -> Result<SampleOutcome> {
    let ctx = TensorEvalContext::new(met, y)?;
    let idx = dec.m_indices();
    let basis: Vec<Vector> = idx.iter().map(|&i| alg.basis(i)).collect();
    let scale = 1.0
        + basis
            .iter()
            .flat_map(|a| basis.iter().map(|b| ctx.g(a, b).abs()))
            .fold(0.0, f64::max);
    let mut out = SampleOutcome {
        worst: 0.0,
        at: None,
        alternate: 0.0,
    };
    for (a, z) in basis.iter().enumerate() {
        let zy = dec.m_part(&alg.br(z, y));
        for (b, u) in basis.iter().enumerate() {
            let zu = dec.m_part(&alg.br(z, u));
            for (c, v) in basis.iter().enumerate() {
                let zv = dec.m_part(&alg.br(z, v));
                let t1 = ctx.g(&zu, v);
                let t2 = ctx.g(&zv, u);
                let t3 = 2.0 * cartan(met, y, &zy, u, v)?;
                let r = (t1 + t2 + t3).abs() / (scale + t1.abs() + t2.abs() + t3.abs());
                if r > out.worst {
                    out.worst = r;
                    out.at = Some([idx[a], idx[b], idx[c]]);
                }
                let uv = dec.m_part(&alg.br(u, v));
                let p2 = ctx.g(z, &uv);
                let pr = (t1 + p2 + t3).abs() / (scale + t1.abs() + p2.abs() + t3.abs());
                out.alternate = out.alternate.max(pr);
            }
        }
    }
    Ok(out)
}

/// `g_Y([Z,U]_m,V) + g_Y([Z,V]_m,U) + 2C_Y([Z,Y]_m,U,V)` at one pole.
pub fn latifi_expression(
    met: &MKropinaMetric,
    alg: &LieAlgebra,
    dec: &ReductiveDecomposition,
    y: &Vector,
    z: &Vector,
    u: &Vector,
    v: &Vector,
) -> Result<f64> {
    let ctx = TensorEvalContext::new(met, y)?;
    let zy = dec.m_part(&alg.br(z, y));
    Ok(ctx.g(&dec.m_part(&alg.br(z, u)), v)
        + ctx.g(&dec.m_part(&alg.br(z, v)), u)
        + 2.0 * cartan(met, y, &zy, u, v)?)
}

/// Sampled flag poles: `count` seeded unit directions with `β > CONE_MARGIN`,
/// followed by every normalized basis vector of `m` with `β > CONE_MARGIN`.
pub fn latifi_poles(
    met: &MKropinaMetric,
    dec: &ReductiveDecomposition,
    spec: SampleSpec,
) -> Result<Vec<Vector>> {
    let mut rng = sampling::rng(spec.seed);
    let mut poles = Vec::with_capacity(spec.count + dec.m_indices().len());
    for _ in 0..spec.count {
        poles.push(sampling::admissible_pole(&mut rng, met, dec, sampling::CONE_MARGIN)?);
    }
    for &i in dec.m_indices() {
        let e = linalg::basis(dec.dim(), i);
        let e = &e / met.ip(&e, &e).sqrt();
        if met.beta(&e) > sampling::CONE_MARGIN {
            poles.push(e);
        }
    }
    Ok(poles)
}

/// `g_Y([Z,U]_m,V) + g_Y([Z,V]_m,U) + 2C_Y([Z,Y]_m,U,V) = 0` over all basis
/// triples of `m` and the poles from [`latifi_poles`].
///
/// Each residual is normalized by `1 + max|g_Y(e_i,e_j)| + |t₁| + |t₂| + |t₃|`.
/// `g_Y` grows like `β^{-2m-2}` near the cone boundary, and round-off in the
/// difference quotient grows with it, so residuals are measured against the
/// size of `g_Y` at the pole rather than against the terms alone.
pub fn check_latifi_natred(
    met: &MKropinaMetric,
    alg: &LieAlgebra,
    dec: &ReductiveDecomposition,
    spec: SampleSpec,
    exec: Execution,
) -> Result<LatifiReport> {
    let poles = latifi_poles(met, dec, spec)?;
    let outcomes = exec.try_map(&poles, |y| latifi_at(met, alg, dec, y))?;
    let mut worst = 0.0;
    let mut at = None;
    let mut wy = None;
    let mut alternate: f64 = 0.0;
    for (o, y) in outcomes.iter().zip(&poles) {
        alternate = alternate.max(o.alternate);
        if o.worst > worst {
            worst = o.worst;
            at = o.at.map(|t| t.to_vec());
            wy = Some(y.iter().copied().collect());
        }
    }
    let check = Check::from_worst(worst, at, LATIFI_TOL);
    Ok(LatifiReport {
        witness_y: if check.passed { None } else { wy },
        check,
        samples: poles.len(),
        alternate_form_residual: alternate,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductivityReport {
    pub riemannian_natred: NatRedReport,
    pub latifi_natred: LatifiReport,
    pub parallel_condition: Check,
    /// Stronger than `parallel_condition` outside the naturally reductive case.
    pub levi_civita_parallel: Check,
    /// The equivalence is only claimed under the parallel condition.
    pub equivalence_applicable: bool,
    /// `riemannian == latifi` when applicable; `true` otherwise.
    pub equivalence_consistent: bool,
}

pub fn equivalence_report(
    met: &MKropinaMetric,
    geo: &Geometry,
    spec: SampleSpec,
    exec: Execution,
) -> Result<ReductivityReport> {
    let riemannian_natred = check_riemannian_natred(geo.alg, geo.dec, geo.pair.gram());
    let latifi_natred = check_latifi_natred(met, geo.alg, geo.dec, spec, exec)?;
    let parallel_condition = check_parallel_condition(met, geo.alg, geo.dec);
    let levi_civita_parallel = check_levi_civita_parallel(met, geo)?;
    let equivalence_applicable = parallel_condition.passed;
    let equivalence_consistent = !equivalence_applicable
        || riemannian_natred.check.passed == latifi_natred.check.passed;
    Ok(ReductivityReport {
        riemannian_natred,
        latifi_natred,
        parallel_condition,
        levi_civita_parallel,
        equivalence_applicable,
        equivalence_consistent,
    })
}
