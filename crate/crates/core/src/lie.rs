//! Finite-dimensional real Lie algebras given by structure constants, basis-adapted
//! reductive decompositions `g = h ⊕ m`, and the pair of inner products
//! (bi-invariant `⟨⟨·,·⟩⟩`, invariant `⟨·,·⟩`) linked by the metric endomorphism.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, inner, Matrix, Vector};

/// Absolute tolerance for structure-constant identities (coefficient max-norm).
pub const STRUCTURE_TOL: f64 = 1e-12;

/// Outcome of a structural check: pass/fail, the worst residual seen and the basis
/// indices that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub passed: bool,
    pub residual: f64,
    pub witness: Option<Vec<usize>>,
}

impl Check {
    pub fn pass() -> Self {
        Check {
            passed: true,
            residual: 0.0,
            witness: None,
        }
    }

    /// Builds a check from the worst residual and its witness.
    pub(crate) fn from_worst(worst: f64, witness: Option<Vec<usize>>, tol: f64) -> Self {
        let passed = worst <= tol;
        Check {
            passed,
            residual: worst,
            witness: if passed { None } else { witness },
        }
    }
}

/// Tracks the largest residual and where it occurred. Ties keep the first witness.
#[derive(Debug, Default)]
pub(crate) struct Worst {
    pub value: f64,
    pub at: Option<Vec<usize>>,
}

impl Worst {
    pub fn offer(&mut self, value: f64, at: impl FnOnce() -> Vec<usize>) {
        if value > self.value {
            self.value = value;
            self.at = Some(at());
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    // c[(i * n + j) * n + k]
    constants: Vec<f64>,
    labels: Vec<String>,
}

impl LieAlgebra {
    /// Dense constants `c[i][j][k]` flattened row-major. Antisymmetry in `(i, j)` is
    /// required; the Jacobi identity is checked separately by [`LieAlgebra::check_jacobi`].
    pub fn new(dim: usize, constants: Vec<f64>, labels: Option<Vec<String>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if constants.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim * dim,
                found: constants.len(),
            });
        }
        let labels = match labels {
            Some(l) if l.len() != dim => {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: l.len(),
                })
            }
            Some(l) => l,
            None => (0..dim).map(|i| format!("e{i}")).collect(),
        };
        let alg = LieAlgebra {
            dim,
            constants,
            labels,
        };
        for i in 0..dim {
            for j in i..dim {
                for k in 0..dim {
                    let r = (alg.c(i, j, k) + alg.c(j, i, k)).abs();
                    if r > STRUCTURE_TOL {
                        return Err(Error::NotAntisymmetric { i, j, k, residual: r });
                    }
                }
            }
        }
        Ok(alg)
    }

    /// Sparse triples `(i, j, k, value)` with `i < j`, meaning `[e_i, e_j]` has
    /// `value` along `e_k`. The `(j, i)` entries are filled in by antisymmetry.
    pub fn from_triples(
        dim: usize,
        triples: &[(usize, usize, usize, f64)],
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let mut c = vec![0.0; dim * dim * dim];
        for &(i, j, k, v) in triples {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::BadTriple {
                    i,
                    j,
                    k,
                    reason: "index out of range",
                });
            }
            if i >= j {
                return Err(Error::BadTriple {
                    i,
                    j,
                    k,
                    reason: "triples must satisfy i < j",
                });
            }
            c[(i * dim + j) * dim + k] += v;
            c[(j * dim + i) * dim + k] -= v;
        }
        Self::new(dim, c, labels)
    }

    /// `su(2)` with basis `e1, e2, e3` and `[e1,e2]=e3`, `[e2,e3]=e1`, `[e3,e1]=e2`.
    pub fn su2() -> Self {
        Self::from_triples(
            3,
            &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (0, 2, 1, -1.0)],
            Some(vec!["e1".into(), "e2".into(), "e3".into()]),
        )
        .expect("su2 constants are valid")
    }

    /// `u(2) = R e0 ⊕ su(2)` with `e0` central.
    pub fn u2() -> Self {
        Self::from_triples(
            4,
            &[(1, 2, 3, 1.0), (2, 3, 1, 1.0), (1, 3, 2, -1.0)],
            Some(vec!["e0".into(), "e1".into(), "e2".into(), "e3".into()]),
        )
        .expect("u2 constants are valid")
    }

    pub fn abelian(n: usize) -> Result<Self> {
        Self::new(n, vec![0.0; n * n * n], None)
    }

    /// Resolves `su2`, `u2` and `abelian_<n>`.
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "su2" => Ok(Self::su2()),
            "u2" => Ok(Self::u2()),
            other => {
                if let Some(n) = other.strip_prefix("abelian_") {
                    let n: usize = n
                        .parse()
                        .map_err(|_| Error::UnknownPreset(other.to_string()))?;
                    Self::abelian(n)
                } else {
                    Err(Error::UnknownPreset(other.to_string()))
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.constants[(i * self.dim + j) * self.dim + k]
    }

    pub fn basis(&self, i: usize) -> Vector {
        linalg::basis(self.dim, i)
    }

    /// `[x, y]` with dimension checks.
    pub fn bracket(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        linalg::check_len(x, self.dim)?;
        linalg::check_len(y, self.dim)?;
        Ok(self.br(x, y))
    }

    /// Unchecked bracket; callers guarantee lengths.
    pub(crate) fn br(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.dim;
        let mut out = Vector::zeros(n);
        for i in 0..n {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            for j in 0..n {
                let w = xi * y[j];
                if w == 0.0 {
                    continue;
                }
                let base = (i * n + j) * n;
                for k in 0..n {
                    out[k] += w * self.constants[base + k];
                }
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.iter().all(|&c| c == 0.0)
    }

    /// Jacobi residual over all basis triples `i < j < k` (the cyclic sum is
    /// alternating, so other orderings repeat these up to sign).
    pub fn check_jacobi(&self) -> Check {
        let n = self.dim;
        let mut worst = Worst::default();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let (x, y, z) = (self.basis(i), self.basis(j), self.basis(k));
                    let r = self.br(&x, &self.br(&y, &z))
                        + self.br(&y, &self.br(&z, &x))
                        + self.br(&z, &self.br(&x, &y));
                    worst.offer(linalg::max_abs(&r), || vec![i, j, k]);
                }
            }
        }
        Check::from_worst(worst.value, worst.at, STRUCTURE_TOL)
    }

    /// `⟨⟨[z,x],y⟩⟩ + ⟨⟨x,[z,y]⟩⟩ = 0` over all basis triples; witness is `(z, x, y)`.
    pub fn check_bi_invariance(&self, gram0: &Matrix) -> Result<Check> {
        linalg::check_square(gram0, self.dim)?;
        let n = self.dim;
        let mut worst = Worst::default();
        for z in 0..n {
            let ez = self.basis(z);
            for x in 0..n {
                let ex = self.basis(x);
                let zx = self.br(&ez, &ex);
                for y in 0..n {
                    let ey = self.basis(y);
                    let zy = self.br(&ez, &ey);
                    let r = inner(gram0, &zx, &ey) + inner(gram0, &ex, &zy);
                    worst.offer(r.abs(), || vec![z, x, y]);
                }
            }
        }
        Ok(Check::from_worst(worst.value, worst.at, STRUCTURE_TOL))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Part {
    H,
    M,
}

/// Basis-adapted split `g = h ⊕ m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductiveDecomposition {
    dim: usize,
    h: Vec<usize>,
    m: Vec<usize>,
    in_m: Vec<bool>,
}

impl ReductiveDecomposition {
    /// `m` is the complement of `h_indices`.
    pub fn from_h(dim: usize, h_indices: &[usize]) -> Result<Self> {
        let m: Vec<usize> = (0..dim).filter(|i| !h_indices.contains(i)).collect();
        Self::new(dim, h_indices, &m)
    }

    /// Both index sets explicit; they must partition `0..dim`.
    pub fn new(dim: usize, h_indices: &[usize], m_indices: &[usize]) -> Result<Self> {
        let mut seen = vec![0u8; dim];
        for &i in h_indices.iter().chain(m_indices) {
            if i >= dim {
                return Err(Error::Decomposition(format!(
                    "index {i} out of range for dimension {dim}"
                )));
            }
            seen[i] += 1;
        }
        if let Some(i) = seen.iter().position(|&c| c > 1) {
            return Err(Error::Decomposition(format!("index {i} listed twice")));
        }
        if seen.contains(&0) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: h_indices.len() + m_indices.len(),
            });
        }
        if m_indices.is_empty() {
            return Err(Error::Decomposition("m must be nonempty".into()));
        }
        let mut h = h_indices.to_vec();
        let mut m = m_indices.to_vec();
        h.sort_unstable();
        m.sort_unstable();
        let mut in_m = vec![false; dim];
        for &i in &m {
            in_m[i] = true;
        }
        Ok(ReductiveDecomposition { dim, h, m, in_m })
    }

    pub fn trivial(dim: usize) -> Self {
        Self::from_h(dim, &[]).expect("trivial decomposition is valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn h_indices(&self) -> &[usize] {
        &self.h
    }

    pub fn m_indices(&self) -> &[usize] {
        &self.m
    }

    pub fn in_m(&self, i: usize) -> bool {
        self.in_m[i]
    }

    pub fn project(&self, x: &Vector, part: Part) -> Vector {
        let keep_m = part == Part::M;
        Vector::from_iterator(
            self.dim,
            x.iter()
                .enumerate()
                .map(|(i, &v)| if self.in_m[i] == keep_m { v } else { 0.0 }),
        )
    }

    #[inline]
    pub fn m_part(&self, x: &Vector) -> Vector {
        self.project(x, Part::M)
    }

    #[inline]
    pub fn h_part(&self, x: &Vector) -> Vector {
        self.project(x, Part::H)
    }

    /// Largest coefficient of `x` outside `m`.
    pub fn off_m(&self, x: &Vector) -> f64 {
        linalg::max_abs(&self.h_part(x))
    }

    /// `[h, h] ⊆ h` and `[h, m] ⊆ m`; witness is the offending basis pair.
    pub fn check_ad_invariance(&self, alg: &LieAlgebra) -> Result<Check> {
        if alg.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: alg.dim(),
            });
        }
        let mut worst = Worst::default();
        for &a in &self.h {
            let ea = alg.basis(a);
            for b in 0..self.dim {
                let v = alg.br(&ea, &alg.basis(b));
                let leak = if self.in_m[b] {
                    linalg::max_abs(&self.h_part(&v))
                } else {
                    linalg::max_abs(&self.m_part(&v))
                };
                worst.offer(leak, || vec![a, b]);
            }
        }
        Ok(Check::from_worst(worst.value, worst.at, STRUCTURE_TOL))
    }
}

/// `⟨⟨·,·⟩⟩` (bi-invariant, on all of `g`), `⟨·,·⟩` (the invariant metric on `m`
/// extended by `⟨⟨·,·⟩⟩` on `h` with `h ⊥ m`), and `Φ` with `⟨x,z⟩ = ⟨⟨Φx,z⟩⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerProductPair {
    gram0: Matrix,
    gram: Matrix,
    endo: Matrix,
    endo_inv: Matrix,
}

impl InnerProductPair {
    /// `gram_m` is indexed by the positions of `dec.m_indices()`.
    pub fn new(
        alg: &LieAlgebra,
        dec: &ReductiveDecomposition,
        gram0: Matrix,
        gram_m: &Matrix,
    ) -> Result<Self> {
        let n = alg.dim();
        linalg::check_square(&gram0, n)?;
        let m = dec.m_indices();
        linalg::check_square(gram_m, m.len())?;
        if !linalg::is_spd(&gram0) {
            return Err(Error::NotPositiveDefinite { what: "gram0" });
        }
        if !linalg::is_spd(gram_m) {
            return Err(Error::NotPositiveDefinite { what: "gram_m" });
        }
        for &a in dec.h_indices() {
            for &b in m {
                if gram0[(a, b)].abs() > STRUCTURE_TOL {
                    return Err(Error::Decomposition(format!(
                        "h and m are not orthogonal under gram0 at ({a}, {b})"
                    )));
                }
            }
        }
        let mut gram = Matrix::zeros(n, n);
        for &a in dec.h_indices() {
            for &b in dec.h_indices() {
                gram[(a, b)] = gram0[(a, b)];
            }
        }
        for (p, &a) in m.iter().enumerate() {
            for (q, &b) in m.iter().enumerate() {
                gram[(a, b)] = gram_m[(p, q)];
            }
        }
        let (endo, endo_inv) = metric_endomorphism(&gram0, &gram)?;
        Ok(InnerProductPair {
            gram0,
            gram,
            endo,
            endo_inv,
        })
    }

    /// Both metrics equal to `gram0`, so `Φ = I`.
    pub fn bi_invariant(alg: &LieAlgebra, dec: &ReductiveDecomposition, gram0: Matrix) -> Result<Self> {
        let m = dec.m_indices();
        let gram_m = Matrix::from_fn(m.len(), m.len(), |p, q| gram0[(m[p], m[q])]);
        Self::new(alg, dec, gram0, &gram_m)
    }

    pub fn gram0(&self) -> &Matrix {
        &self.gram0
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn endo(&self) -> &Matrix {
        &self.endo
    }

    pub fn endo_inv(&self) -> &Matrix {
        &self.endo_inv
    }

    /// `⟨x, y⟩`
    #[inline]
    pub fn ip(&self, x: &Vector, y: &Vector) -> f64 {
        inner(&self.gram, x, y)
    }

    /// `⟨⟨x, y⟩⟩`
    #[inline]
    pub fn ip0(&self, x: &Vector, y: &Vector) -> f64 {
        inner(&self.gram0, x, y)
    }

    pub fn phi(&self, x: &Vector) -> Vector {
        &self.endo * x
    }

    pub fn phi_inv(&self, x: &Vector) -> Vector {
        &self.endo_inv * x
    }

    /// `Φ = I` up to the structure tolerance.
    pub fn is_identity_endo(&self) -> bool {
        let n = self.endo.nrows();
        (&self.endo - Matrix::identity(n, n)).amax() <= 1e-12
    }

    /// `‖gram0·Φ − Φᵀ·gram0‖`, zero when `Φ` is `⟨⟨·,·⟩⟩`-self-adjoint.
    pub fn self_adjoint_residual(&self) -> f64 {
        (&self.gram0 * &self.endo - self.endo.transpose() * &self.gram0).amax()
    }
}

/// `Φ = gram0⁻¹·gram` and its inverse.
pub fn metric_endomorphism(gram0: &Matrix, gram: &Matrix) -> Result<(Matrix, Matrix)> {
    if gram0.nrows() != gram.nrows() || gram0.ncols() != gram.ncols() {
        return Err(Error::DimensionMismatch {
            expected: gram0.nrows(),
            found: gram.nrows(),
        });
    }
    let lu0 = gram0.clone().lu();
    let endo = lu0.solve(gram).ok_or(Error::Singular("gram0"))?;
    let endo_inv = gram
        .clone()
        .lu()
        .solve(gram0)
        .ok_or(Error::Singular("gram"))?;
    Ok((endo, endo_inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn su2_bracket_reads_constants() {
        let su2 = LieAlgebra::su2();
        let r = su2.bracket(&su2.basis(0), &su2.basis(1)).unwrap();
        assert_eq!(r, su2.basis(2));
        let r = su2.bracket(&su2.basis(2), &su2.basis(0)).unwrap();
        assert_eq!(r, su2.basis(1));
    }

    #[test]
    fn bracket_with_self_vanishes() {
        let u2 = LieAlgebra::u2();
        let x = v(&[0.3, -1.2, 0.7, 2.5]);
        assert!(linalg::max_abs(&u2.bracket(&x, &x).unwrap()) < 1e-15);
    }

    #[test]
    fn abelian_bracket_is_zero() {
        let a = LieAlgebra::preset("abelian_3").unwrap();
        let r = a.bracket(&v(&[1.0, 2.0, 3.0]), &v(&[-1.0, 0.5, 4.0])).unwrap();
        assert_eq!(r, Vector::zeros(3));
    }

    #[test]
    fn bracket_dimension_mismatch() {
        let su2 = LieAlgebra::su2();
        assert!(matches!(
            su2.bracket(&v(&[1.0, 0.0]), &su2.basis(0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn unknown_preset() {
        assert!(matches!(LieAlgebra::preset("so5"), Err(Error::UnknownPreset(_))));
        assert!(LieAlgebra::preset("abelian_x").is_err());
    }

    #[test]
    fn triples_require_ordered_pairs() {
        assert!(LieAlgebra::from_triples(3, &[(1, 0, 2, 1.0)], None).is_err());
        assert!(LieAlgebra::from_triples(3, &[(0, 1, 5, 1.0)], None).is_err());
    }

    #[test]
    fn dense_constants_must_be_antisymmetric() {
        let mut c = vec![0.0; 8];
        c[2] = 1.0; // [e0, e1] = e0 without the matching [e1, e0] entry
        assert!(matches!(
            LieAlgebra::new(2, c, None),
            Err(Error::NotAntisymmetric { .. })
        ));
    }

    #[test]
    fn jacobi_passes_on_presets() {
        assert!(LieAlgebra::su2().check_jacobi().passed);
        assert!(LieAlgebra::u2().check_jacobi().passed);
        assert!(LieAlgebra::abelian(4).unwrap().check_jacobi().passed);
    }

    #[test]
    fn jacobi_witness_on_broken_su2() {
        // [e1,e2] = e3 + 0.1 e1: the cyclic sum for (e1,e2,e3) is 0.1 e2.
        let alg = LieAlgebra::from_triples(
            3,
            &[(0, 1, 2, 1.0), (0, 1, 0, 0.1), (1, 2, 0, 1.0), (0, 2, 1, -1.0)],
            None,
        )
        .unwrap();
        let check = alg.check_jacobi();
        assert!(!check.passed);
        assert_eq!(check.witness, Some(vec![0, 1, 2]));
        assert_abs_diff_eq!(check.residual, 0.1, epsilon = 1e-15);
    }

    #[test]
    fn rescaled_su2_still_satisfies_jacobi() {
        // Scaling a single bracket of a 3-dim algebra of this shape keeps Jacobi.
        let alg = LieAlgebra::from_triples(
            3,
            &[(0, 1, 2, 1.1), (1, 2, 0, 1.0), (0, 2, 1, -1.0)],
            None,
        )
        .unwrap();
        assert!(alg.check_jacobi().passed);
    }

    #[test]
    fn projections_split_coordinates() {
        let dec = ReductiveDecomposition::from_h(4, &[0]).unwrap();
        let x = v(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(dec.project(&x, Part::H), v(&[1.0, 0.0, 0.0, 0.0]));
        assert_eq!(dec.project(&x, Part::M), v(&[0.0, 2.0, 3.0, 4.0]));
        assert_eq!(dec.project(&x, Part::H) + dec.project(&x, Part::M), x);

        let trivial = ReductiveDecomposition::trivial(4);
        assert_eq!(trivial.project(&x, Part::M), x);
    }

    #[test]
    fn decomposition_must_partition() {
        let err = ReductiveDecomposition::new(3, &[0], &[1]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
        assert!(ReductiveDecomposition::new(3, &[0, 1], &[1, 2]).is_err());
        assert!(ReductiveDecomposition::new(3, &[0, 1, 2], &[]).is_err());
        assert!(ReductiveDecomposition::from_h(3, &[7]).is_err());
    }

    #[test]
    fn ad_invariance_cases() {
        let u2 = LieAlgebra::u2();
        assert!(ReductiveDecomposition::trivial(4)
            .check_ad_invariance(&u2)
            .unwrap()
            .passed);
        assert!(ReductiveDecomposition::from_h(4, &[0])
            .unwrap()
            .check_ad_invariance(&u2)
            .unwrap()
            .passed);
        // h = {e1} in su2: [e1,e2]=e3 and [e1,e3]=-e2 both stay in m.
        let su2 = LieAlgebra::su2();
        assert!(ReductiveDecomposition::from_h(3, &[0])
            .unwrap()
            .check_ad_invariance(&su2)
            .unwrap()
            .passed);
        // h = {e1, e2} is not a subalgebra.
        let check = ReductiveDecomposition::from_h(3, &[0, 1])
            .unwrap()
            .check_ad_invariance(&su2)
            .unwrap();
        assert!(!check.passed);
        assert_eq!(check.witness, Some(vec![0, 1]));
    }

    #[test]
    fn bi_invariance_cases() {
        let su2 = LieAlgebra::su2();
        assert!(su2.check_bi_invariance(&Matrix::identity(3, 3)).unwrap().passed);
        let skew = Matrix::from_diagonal(&v(&[1.0, 1.0, 2.0]));
        let check = su2.check_bi_invariance(&skew).unwrap();
        assert!(!check.passed);
        assert_eq!(check.witness, Some(vec![0, 1, 2]));
        assert_abs_diff_eq!(check.residual, 1.0, epsilon = 1e-15);
        let ab = LieAlgebra::abelian(3).unwrap();
        assert!(ab.check_bi_invariance(&skew).unwrap().passed);
    }

    #[test]
    fn endomorphism_examples() {
        let g0 = Matrix::identity(4, 4);
        let (e, _) = metric_endomorphism(&g0, &g0).unwrap();
        assert_abs_diff_eq!(e, Matrix::identity(4, 4), epsilon = 1e-15);
        let (e, _) = metric_endomorphism(&g0, &(g0.clone() * 2.0)).unwrap();
        assert_abs_diff_eq!(e, Matrix::identity(4, 4) * 2.0, epsilon = 1e-15);
        let d = Matrix::from_diagonal(&v(&[1.0, 1.0, 2.0, 3.0]));
        let (e, ei) = metric_endomorphism(&g0, &d).unwrap();
        assert_abs_diff_eq!(e, d, epsilon = 1e-15);
        assert_abs_diff_eq!(&e * &ei, Matrix::identity(4, 4), epsilon = 1e-12);
        assert!(matches!(
            metric_endomorphism(&Matrix::zeros(2, 2), &Matrix::identity(2, 2)),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn pair_extension_and_endo() {
        let u2 = LieAlgebra::u2();
        let dec = ReductiveDecomposition::from_h(4, &[0]).unwrap();
        let gram_m = Matrix::from_diagonal(&v(&[2.0, 2.0, 2.0]));
        let pair = InnerProductPair::new(&u2, &dec, Matrix::identity(4, 4), &gram_m).unwrap();
        assert_eq!(pair.gram()[(0, 0)], 1.0);
        assert_eq!(pair.gram()[(2, 2)], 2.0);
        assert!(pair.self_adjoint_residual() < 1e-12);
        let x = v(&[0.5, 1.0, -2.0, 0.25]);
        let z = v(&[1.5, 0.0, 3.0, -1.0]);
        assert_abs_diff_eq!(pair.ip(&x, &z), pair.ip0(&pair.phi(&x), &z), epsilon = 1e-12);
    }

    #[test]
    fn pair_rejects_indefinite_gram() {
        let u2 = LieAlgebra::u2();
        let dec = ReductiveDecomposition::trivial(4);
        let bad = Matrix::from_diagonal(&v(&[1.0, 1.0, 0.0, 1.0]));
        assert!(matches!(
            InnerProductPair::new(&u2, &dec, Matrix::identity(4, 4), &bad),
            Err(Error::NotPositiveDefinite { what: "gram_m" })
        ));
    }
}
