//! Riemannian curvature of the invariant metric `⟨·,·⟩` at the origin coset.
//!
//! Three evaluators:
//!
//! - `Puttmann`: the general formula for invariant metrics on compact `G/H`,
//!   written with `Φ`, `B₊` and `B₋`. Its raw right-hand side is multiplied
//!   by a sign parameter `σ` (default `−1`) that aligns it with the convention
//!   `⟨R(u,y)y,u⟩ > 0` on compact groups used by the other two.
//! - `NaturallyReductive`: `R(x,y)y = ¼[y,[x,y]_m]_m + [y,[x,y]_h]`.
//! - `BiInvariant`: `R(x,y)y = ¼[y,[x,y]]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{InnerProductPair, LieAlgebra, ReductiveDecomposition};
use crate::linalg::{self, Matrix, Vector};

/// Homogeneous-space data shared by every curvature evaluation.
#[derive(Debug, Clone, Copy)]
pub struct Geometry<'a> {
    pub alg: &'a LieAlgebra,
    pub dec: &'a ReductiveDecomposition,
    pub pair: &'a InnerProductPair,
}

impl<'a> Geometry<'a> {
    pub fn new(
        alg: &'a LieAlgebra,
        dec: &'a ReductiveDecomposition,
        pair: &'a InnerProductPair,
    ) -> Result<Self> {
        if dec.dim() != alg.dim() || pair.gram().nrows() != alg.dim() {
            return Err(Error::DimensionMismatch {
                expected: alg.dim(),
                found: dec.dim(),
            });
        }
        Ok(Geometry { alg, dec, pair })
    }

    #[inline]
    fn br(&self, x: &Vector, y: &Vector) -> Vector {
        self.alg.br(x, y)
    }

    /// Solves `⟨r, e_i⟩ = s_i` for `r ∈ m`, given `s` on the `m` basis.
    pub(crate) fn raise_in_m(&self, s: &[f64]) -> Result<Vector> {
        let idx = self.dec.m_indices();
        let g = self.pair.gram();
        let gm = Matrix::from_fn(idx.len(), idx.len(), |p, q| g[(idx[p], idx[q])]);
        let coeffs = gm
            .lu()
            .solve(&Vector::from_column_slice(s))
            .ok_or(Error::Singular("gram on m"))?;
        let mut out = Vector::zeros(self.alg.dim());
        for (p, &i) in idx.iter().enumerate() {
            out[i] = coeffs[p];
        }
        Ok(out)
    }

    fn require_in_m(&self, vs: &[&Vector]) -> Result<()> {
        for v in vs {
            linalg::check_len(v, self.alg.dim())?;
            if self.dec.off_m(v) > 0.0 {
                return Err(Error::Precondition("arguments must lie in m".into()));
            }
        }
        Ok(())
    }
}

/// Sign applied to the raw Püttmann-type expressions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "i32", into = "i32")]
pub struct Sigma(i8);

impl Sigma {
    pub const MINUS: Sigma = Sigma(-1);
    pub const PLUS: Sigma = Sigma(1);

    pub fn new(s: i32) -> Result<Self> {
        match s {
            1 => Ok(Sigma::PLUS),
            -1 => Ok(Sigma::MINUS),
            _ => Err(Error::Parse(format!("sign convention must be +1 or -1, got {s}"))),
        }
    }

    pub fn value(self) -> f64 {
        self.0 as f64
    }
}

impl Default for Sigma {
    fn default() -> Self {
        Sigma::MINUS
    }
}

impl TryFrom<i32> for Sigma {
    type Error = Error;
    fn try_from(s: i32) -> Result<Self> {
        Sigma::new(s)
    }
}

impl From<Sigma> for i32 {
    fn from(s: Sigma) -> i32 {
        s.0 as i32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    Puttmann,
    NaturallyReductive,
    BiInvariant,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureBackend {
    pub kind: BackendKind,
    pub sigma: Sigma,
}

impl CurvatureBackend {
    pub fn new(kind: BackendKind) -> Self {
        CurvatureBackend {
            kind,
            sigma: Sigma::default(),
        }
    }

    pub fn with_sigma(mut self, sigma: Sigma) -> Self {
        self.sigma = sigma;
        self
    }

    /// `⟨R(x,y)z, w⟩`
    pub fn scalar(&self, geo: &Geometry, x: &Vector, y: &Vector, z: &Vector, w: &Vector) -> f64 {
        match self.kind {
            BackendKind::Puttmann => puttmann_scalar(geo, self.sigma, x, y, z, w),
            BackendKind::NaturallyReductive => geo.pair.ip(&natred_tensor(geo.alg, geo.dec, x, y, z), w),
            BackendKind::BiInvariant => geo.pair.ip(&biinv_tensor(geo.alg, x, y, z), w),
        }
    }

    /// `R(u,y)y ∈ m`.
    pub fn curvature_vector(&self, geo: &Geometry, u: &Vector, y: &Vector) -> Result<Vector> {
        match self.kind {
            BackendKind::Puttmann => {
                geo.require_in_m(&[u, y])?;
                let s: Vec<f64> = geo
                    .dec
                    .m_indices()
                    .iter()
                    .map(|&i| puttmann_scalar(geo, self.sigma, u, y, y, &geo.alg.basis(i)))
                    .collect();
                geo.raise_in_m(&s)
            }
            BackendKind::NaturallyReductive => natred_curvature(geo.alg, geo.dec, u, y),
            BackendKind::BiInvariant => biinv_curvature(geo.alg, u, y),
        }
    }
}

/// `B₊(x,y) = ½([x,Φy] + [y,Φx])`
pub fn b_plus(alg: &LieAlgebra, pair: &InnerProductPair, x: &Vector, y: &Vector) -> Vector {
    (alg.br(x, &pair.phi(y)) + alg.br(y, &pair.phi(x))) * 0.5
}

/// `B₋(x,y) = ½([Φx,y] + [x,Φy])`
pub fn b_minus(alg: &LieAlgebra, pair: &InnerProductPair, x: &Vector, y: &Vector) -> Vector {
    (alg.br(&pair.phi(x), y) + alg.br(x, &pair.phi(y))) * 0.5
}

/// `σ` times the raw Püttmann expression for `⟨R(x,y)z, w⟩`.
pub fn puttmann_scalar(
    geo: &Geometry,
    sigma: Sigma,
    x: &Vector,
    y: &Vector,
    z: &Vector,
    w: &Vector,
) -> f64 {
    let (alg, pair, dec) = (geo.alg, geo.pair, geo.dec);
    let xy = geo.br(x, y);
    let zw = geo.br(z, w);
    let first = 0.5 * (pair.ip0(&b_minus(alg, pair, x, y), &zw) + pair.ip0(&xy, &b_minus(alg, pair, z, w)));
    let xw = geo.br(x, w);
    let xz = geo.br(x, z);
    let yz_m = dec.m_part(&geo.br(y, z));
    let yw_m = dec.m_part(&geo.br(y, w));
    let zw_m = dec.m_part(&zw);
    let second = 0.25 * (pair.ip(&xw, &yz_m) - pair.ip(&xz, &yw_m) - 2.0 * pair.ip(&xy, &zw_m));
    let third = pair.ip0(&b_plus(alg, pair, x, w), &pair.phi_inv(&b_plus(alg, pair, y, z)))
        - pair.ip0(&b_plus(alg, pair, x, z), &pair.phi_inv(&b_plus(alg, pair, y, w)));
    sigma.value() * (first + second + third)
}

/// Full tensor of the naturally reductive connection:
/// `R(x,y)z = −[[x,y]_h, z] − ½[[x,y]_m, z]_m + ¼[x,[y,z]_m]_m − ¼[y,[x,z]_m]_m`.
pub fn natred_tensor(
    alg: &LieAlgebra,
    dec: &ReductiveDecomposition,
    x: &Vector,
    y: &Vector,
    z: &Vector,
) -> Vector {
    let xy = alg.br(x, y);
    let xy_h = dec.h_part(&xy);
    let xy_m = dec.m_part(&xy);
    let yz_m = dec.m_part(&alg.br(y, z));
    let xz_m = dec.m_part(&alg.br(x, z));
    -alg.br(&xy_h, z) - dec.m_part(&alg.br(&xy_m, z)) * 0.5 + dec.m_part(&alg.br(x, &yz_m)) * 0.25
        - dec.m_part(&alg.br(y, &xz_m)) * 0.25
}

/// `R(x,y)y = ¼[y,[x,y]_m]_m + [y,[x,y]_h]` for `x, y ∈ m`.
pub fn natred_curvature(
    alg: &LieAlgebra,
    dec: &ReductiveDecomposition,
    x: &Vector,
    y: &Vector,
) -> Result<Vector> {
    for v in [x, y] {
        linalg::check_len(v, alg.dim())?;
        if dec.off_m(v) > 0.0 {
            return Err(Error::Precondition("arguments must lie in m".into()));
        }
    }
    let xy = alg.br(x, y);
    let xy_m = dec.m_part(&xy);
    let xy_h = dec.h_part(&xy);
    Ok(dec.m_part(&alg.br(y, &xy_m)) * 0.25 + alg.br(y, &xy_h))
}

/// `R(x,y)z = −¼[[x,y],z]`
pub fn biinv_tensor(alg: &LieAlgebra, x: &Vector, y: &Vector, z: &Vector) -> Vector {
    alg.br(&alg.br(x, y), z) * -0.25
}

/// `R(x,y)y = ¼[y,[x,y]]`
pub fn biinv_curvature(alg: &LieAlgebra, x: &Vector, y: &Vector) -> Result<Vector> {
    linalg::check_len(x, alg.dim())?;
    linalg::check_len(y, alg.dim())?;
    Ok(alg.br(y, &alg.br(x, y)) * 0.25)
}

/// The two inner products `(⟨X,R(U,Y)Y⟩, ⟨U,R(U,Y)Y⟩)` in the bracket form that
/// accompanies the closed flag-curvature formula, each multiplied by `σ`.
pub fn thm31_inner_products(
    geo: &Geometry,
    sigma: Sigma,
    x: &Vector,
    u: &Vector,
    y: &Vector,
) -> Result<(f64, f64)> {
    geo.require_in_m(&[u, y])?;
    linalg::check_len(x, geo.alg.dim())?;
    let pair = geo.pair;
    let ip = |a: &Vector, b: &Vector| pair.ip(a, b);
    let br = |a: &Vector, b: &Vector| geo.br(a, b);
    let (pu, py, px) = (pair.phi(u), pair.phi(y), pair.phi(x));
    let y_py = br(y, &py);

    let x_r = -0.25 * (ip(&(br(&pu, y) + br(u, &py)), &br(y, x)) + ip(&br(u, y), &(br(&py, x) + br(y, &px))))
        - 0.75 * ip(&br(y, u), &geo.dec.m_part(&br(y, x)))
        - 0.5 * ip(&(br(u, &px) + br(x, &pu)), &pair.phi_inv(&y_py))
        + 0.25 * ip(&(br(u, &py) + br(y, &pu)), &pair.phi_inv(&(br(y, &px) + br(x, &py))));

    let u_py_sym = br(u, &py) + br(y, &pu);
    let u_r = 0.5 * ip(&(br(&pu, y) + br(u, &py)), &br(y, u))
        + 0.75 * ip(&br(y, u), &geo.dec.m_part(&br(y, u)))
        + ip(&br(u, &pu), &pair.phi_inv(&y_py))
        - 0.25 * ip(&u_py_sym, &pair.phi_inv(&(br(y, &pu) + br(u, &py))));

    let s = sigma.value();
    Ok((s * x_r, s * u_r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    struct Fixture {
        alg: LieAlgebra,
        dec: ReductiveDecomposition,
        pair: InnerProductPair,
    }

    impl Fixture {
        fn bi_invariant(alg: LieAlgebra, h: &[usize]) -> Self {
            let n = alg.dim();
            let dec = ReductiveDecomposition::from_h(n, h).unwrap();
            let pair = InnerProductPair::bi_invariant(&alg, &dec, Matrix::identity(n, n)).unwrap();
            Fixture { alg, dec, pair }
        }

        fn geo(&self) -> Geometry<'_> {
            Geometry::new(&self.alg, &self.dec, &self.pair).unwrap()
        }
    }

    #[test]
    fn b_maps_with_identity_endo() {
        let f = Fixture::bi_invariant(LieAlgebra::su2(), &[]);
        let (e1, e2) = (f.alg.basis(0), f.alg.basis(1));
        assert_eq!(b_plus(&f.alg, &f.pair, &e1, &e2), Vector::zeros(3));
        assert_eq!(b_minus(&f.alg, &f.pair, &e1, &e2), f.alg.basis(2));
    }

    #[test]
    fn b_maps_with_diagonal_endo() {
        let alg = LieAlgebra::u2();
        let dec = ReductiveDecomposition::trivial(4);
        let gram = Matrix::from_diagonal(&v(&[1.0, 1.0, 2.0, 3.0]));
        let pair = InnerProductPair::new(&alg, &dec, Matrix::identity(4, 4), &gram).unwrap();
        let (e1, e2) = (alg.basis(1), alg.basis(2));
        // ½([e1, 2e2] + [e2, e1]) = ½(2e3 − e3) = ½e3
        assert_abs_diff_eq!(b_plus(&alg, &pair, &e1, &e2), v(&[0.0, 0.0, 0.0, 0.5]), epsilon = 1e-15);
        assert_eq!(b_plus(&alg, &pair, &e1, &e2), b_plus(&alg, &pair, &e2, &e1));
        // ½([e1, e2] + [e1, 2e2]) = 1.5 e3
        assert_abs_diff_eq!(b_minus(&alg, &pair, &e1, &e2), v(&[0.0, 0.0, 0.0, 1.5]), epsilon = 1e-15);
    }

    #[test]
    fn puttmann_su2_anchor() {
        let f = Fixture::bi_invariant(LieAlgebra::su2(), &[]);
        let geo = f.geo();
        let (e1, e2) = (f.alg.basis(0), f.alg.basis(1));
        let raw = puttmann_scalar(&geo, Sigma::PLUS, &e1, &e2, &e2, &e1);
        assert_abs_diff_eq!(raw, -0.25, epsilon = 1e-15);
        let calibrated = puttmann_scalar(&geo, Sigma::MINUS, &e1, &e2, &e2, &e1);
        assert_abs_diff_eq!(calibrated, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn abelian_curvature_vanishes() {
        let f = Fixture::bi_invariant(LieAlgebra::abelian(3).unwrap(), &[]);
        let geo = f.geo();
        let (a, b) = (v(&[1.0, 2.0, 3.0]), v(&[0.5, -1.0, 0.0]));
        for kind in [BackendKind::Puttmann, BackendKind::NaturallyReductive, BackendKind::BiInvariant] {
            let be = CurvatureBackend::new(kind);
            assert_eq!(be.scalar(&geo, &a, &b, &b, &a), 0.0);
            assert_eq!(be.curvature_vector(&geo, &a, &b).unwrap(), Vector::zeros(3));
        }
        let (xr, ur) = thm31_inner_products(&geo, Sigma::MINUS, &a, &b, &a).unwrap();
        assert_eq!((xr, ur), (0.0, 0.0));
    }

    #[test]
    fn natred_examples() {
        let su2 = LieAlgebra::su2();
        let dec = ReductiveDecomposition::trivial(3);
        let r = natred_curvature(&su2, &dec, &su2.basis(0), &su2.basis(1)).unwrap();
        assert_abs_diff_eq!(r, su2.basis(0) * 0.25, epsilon = 1e-15);
        let x = v(&[0.3, -0.2, 0.9]);
        assert!(linalg::max_abs(&natred_curvature(&su2, &dec, &x, &x).unwrap()) < 1e-15);

        let u2 = LieAlgebra::u2();
        let dec4 = ReductiveDecomposition::trivial(4);
        let r = natred_curvature(&u2, &dec4, &v(&[0.1, 0.5, -0.7, 0.2]), &u2.basis(0)).unwrap();
        assert_eq!(r, Vector::zeros(4));

        let dec_h = ReductiveDecomposition::from_h(4, &[0]).unwrap();
        assert!(natred_curvature(&u2, &dec_h, &u2.basis(0), &u2.basis(1)).is_err());
    }

    #[test]
    fn natred_full_tensor_contracts_to_lemma_form() {
        let u2 = LieAlgebra::u2();
        let dec = ReductiveDecomposition::from_h(4, &[1]).unwrap();
        let x = v(&[0.3, 0.0, 0.4, -0.8]);
        let y = v(&[-0.5, 0.0, 0.9, 0.1]);
        let full = natred_tensor(&u2, &dec, &x, &y, &y);
        let lemma = natred_curvature(&u2, &dec, &x, &y).unwrap();
        assert_abs_diff_eq!(full, lemma, epsilon = 1e-15);
    }

    #[test]
    fn biinv_examples() {
        let su2 = LieAlgebra::su2();
        let r = biinv_curvature(&su2, &su2.basis(0), &su2.basis(1)).unwrap();
        assert_abs_diff_eq!(r, su2.basis(0) * 0.25, epsilon = 1e-15);
        let u2 = LieAlgebra::u2();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let r = biinv_curvature(&u2, &u2.basis(1), &v(&[s, 0.0, s, 0.0])).unwrap();
        assert_abs_diff_eq!(r, u2.basis(1) * 0.125, epsilon = 1e-15);
    }

    #[test]
    fn thm31_products_bi_invariant() {
        let f = Fixture::bi_invariant(LieAlgebra::u2(), &[]);
        let geo = f.geo();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let x = v(&[0.8, 0.0, 0.0, 0.0]);
        let y = v(&[s, 0.0, s, 0.0]);
        let u = f.alg.basis(1);
        let (xr, ur) = thm31_inner_products(&geo, Sigma::MINUS, &x, &u, &y).unwrap();
        assert_abs_diff_eq!(xr, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ur, 0.125, epsilon = 1e-15);

        // Raw value is −¼‖[u,y]‖² when Φ = I.
        let uu = v(&[0.0, 0.3, -0.4, 0.5]);
        let yy = v(&[0.1, 0.7, 0.2, -0.6]);
        let br = f.alg.br(&uu, &yy);
        let (_, raw) = thm31_inner_products(&geo, Sigma::PLUS, &x, &uu, &yy).unwrap();
        assert_abs_diff_eq!(raw, -0.25 * f.pair.ip(&br, &br), epsilon = 1e-14);
    }

    #[test]
    fn sigma_parsing() {
        assert_eq!(Sigma::new(-1).unwrap(), Sigma::MINUS);
        assert!(Sigma::new(0).is_err());
        let s: Sigma = serde_json::from_str("1").unwrap();
        assert_eq!(s, Sigma::PLUS);
        assert!(serde_json::from_str::<Sigma>("2").is_err());
    }
}
