//! Seeded samplers for directions, flags and triples in `m`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::lie::ReductiveDecomposition;
use crate::linalg::Vector;
use crate::metric::MKropinaMetric;

/// Minimum `β(Y)` for sampled unit flag poles.
pub const CONE_MARGIN: f64 = 0.05;

const ATTEMPTS_PER_SAMPLE: usize = 10_000;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian coordinates on the basis of `m`, zero on `h`.
pub fn gaussian_in_m<R: Rng>(rng: &mut R, dec: &ReductiveDecomposition) -> Vector {
    let mut v = Vector::zeros(dec.dim());
    for &i in dec.m_indices() {
        v[i] = rng.sample(StandardNormal);
    }
    v
}

/// A `⟨·,·⟩`-unit vector in `m`.
pub fn unit_in_m<R: Rng>(rng: &mut R, met: &MKropinaMetric, dec: &ReductiveDecomposition) -> Vector {
    loop {
        let v = gaussian_in_m(rng, dec);
        let n = met.ip(&v, &v).sqrt();
        if n > 1e-8 {
            return v / n;
        }
    }
}

/// Unit `Y` with `β(Y) > margin` by rejection.
pub fn admissible_pole<R: Rng>(
    rng: &mut R,
    met: &MKropinaMetric,
    dec: &ReductiveDecomposition,
    margin: f64,
) -> Result<Vector> {
    for _ in 0..ATTEMPTS_PER_SAMPLE {
        let y = unit_in_m(rng, met, dec);
        if met.beta(&y) > margin {
            return Ok(y);
        }
    }
    Err(Error::Sampling(format!(
        "no direction with beta > {margin} found in {ATTEMPTS_PER_SAMPLE} draws"
    )))
}

/// `count` flags `(Y, U)`, orthonormal for `⟨·,·⟩`, with `β(Y) > margin`.
pub fn orthonormal_flags(
    met: &MKropinaMetric,
    dec: &ReductiveDecomposition,
    count: usize,
    seed: u64,
    margin: f64,
) -> Result<Vec<(Vector, Vector)>> {
    if dec.m_indices().len() < 2 {
        return Err(Error::Sampling("m must be at least two-dimensional for flags".into()));
    }
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let y = admissible_pole(&mut rng, met, dec, margin)?;
        let mut found = None;
        for _ in 0..ATTEMPTS_PER_SAMPLE {
            let u = unit_in_m(&mut rng, met, dec);
            let w = &u - &y * met.ip(&u, &y);
            let n = met.ip(&w, &w).sqrt();
            if n > 1e-6 {
                found = Some(w / n);
                break;
            }
        }
        let u = found.ok_or_else(|| Error::Sampling("could not complete a flag".into()))?;
        out.push((y, u));
    }
    Ok(out)
}

/// `count` triples `(Y, U, V)`: admissible unit `Y`, Gaussian `U`, `V` in `m`.
pub fn admissible_triples(
    met: &MKropinaMetric,
    dec: &ReductiveDecomposition,
    count: usize,
    seed: u64,
    margin: f64,
) -> Result<Vec<(Vector, Vector, Vector)>> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let y = admissible_pole(&mut rng, met, dec, margin)?;
            let u = gaussian_in_m(&mut rng, dec);
            let v = gaussian_in_m(&mut rng, dec);
            Ok((y, u, v))
        })
        .collect()
}
