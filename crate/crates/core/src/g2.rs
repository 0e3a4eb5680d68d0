//! The group G2 = Aut(O), acting on the imaginary octonions.
//!
//! An automorphism fixes 1, so it is stored as the 7x7 real matrix of its
//! action on `span{i, j, k, e, f, g, h}`; column `p` holds the image of the
//! `p`-th imaginary basis element. Elements are built from the images of
//! `(i, j, e)`, from which every other basis image follows by multiplication.

use nalgebra::SMatrix;

use crate::cayley_dickson::Octonion;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::report::{Check, IdentityReport};
use crate::sampling;

pub type Matrix7 = SMatrix<f64, 7, 7>;

/// Default tolerance on the inner products that make a triple admissible.
pub const FRAME_TOL: f64 = 1e-9;

/// Tolerance on `| |x| - 1 |` for points of S^6.
pub const SPHERE_TOL: f64 = 1e-12;

/// Imaginary basis in storage order, `IMAGINARY_BASIS[p]` is column `p`.
pub const IMAGINARY_BASIS: [Octonion; 7] = [
    Octonion::I,
    Octonion::J,
    Octonion::K,
    Octonion::E,
    Octonion::F,
    Octonion::G,
    Octonion::H,
];

/// A unit imaginary octonion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint6(Octonion);

impl SpherePoint6 {
    /// North pole `i`.
    pub const NORTH: SpherePoint6 = SpherePoint6(Octonion::I);

    /// From the imaginary coordinates `x2..x8`.
    pub fn new(x: [f64; 7]) -> Result<Self> {
        Self::from_octonion(Octonion::from_imaginary(x))
    }

    /// Requires a zero real part and unit norm within [`SPHERE_TOL`].
    pub fn from_octonion(x: Octonion) -> Result<Self> {
        if x.re() != 0.0 {
            return Err(Error::DomainViolation {
                what: "real part must be zero on S^6",
            });
        }
        let norm = x.norm();
        if (norm - 1.0).abs() > SPHERE_TOL {
            return Err(Error::NotUnit { norm });
        }
        Ok(SpherePoint6(x))
    }

    /// Drops the real part and rescales to unit norm. Accepts anything whose
    /// imaginary norm is within `1e-6` of 1; intended for values computed
    /// from other unit vectors that picked up rounding error.
    pub fn renormalized(x: Octonion) -> Result<Self> {
        let im = x.im();
        let norm = im.norm();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::NotUnit { norm });
        }
        Ok(SpherePoint6(im / norm))
    }

    /// Any nonzero imaginary direction, scaled to unit length.
    pub fn normalize(x: Octonion) -> Result<Self> {
        let im = x.im();
        let n = im.norm();
        if !(n > 1e-12) {
            return Err(Error::NotUnit { norm: n });
        }
        Ok(SpherePoint6(im / n))
    }

    pub fn as_octonion(&self) -> Octonion {
        self.0
    }

    pub fn imaginary(&self) -> [f64; 7] {
        self.0.imaginary()
    }

    /// The `i`-coordinate, which measures height towards the north pole.
    pub fn x2(&self) -> f64 {
        self.0[1]
    }

    pub fn antipode(&self) -> SpherePoint6 {
        SpherePoint6(-self.0)
    }
}

impl From<SpherePoint6> for Octonion {
    fn from(p: SpherePoint6) -> Octonion {
        p.0
    }
}

/// Images of the imaginary basis under an automorphism determined by the
/// images `(xi, eta, zeta)` of `(i, j, e)`.
fn basis_images(xi: Octonion, eta: Octonion, zeta: Octonion) -> [Octonion; 7] {
    let xi_eta = xi * eta;
    [xi, eta, xi_eta, zeta, xi * zeta, eta * zeta, xi_eta * zeta]
}

fn matrix_from_columns(cols: &[Octonion; 7]) -> Matrix7 {
    Matrix7::from_fn(|r, c| cols[c][r + 1])
}

fn column(m: &Matrix7, c: usize) -> Octonion {
    Octonion::from_imaginary(std::array::from_fn(|r| m[(r, c)]))
}

/// `x -> (real part of x) + m * (imaginary part of x)`.
pub fn apply_matrix(m: &Matrix7, x: &Octonion) -> Octonion {
    let im = nalgebra::SVector::<f64, 7>::from_fn(|r, _| x[r + 1]);
    let out = m * im;
    let mut c = [0.0; 8];
    c[0] = x.re();
    c[1..].copy_from_slice(out.as_slice());
    Octonion(c)
}

/// `max |M^T M - I|` entrywise.
pub fn orthogonality_residual(m: &Matrix7) -> f64 {
    (m.transpose() * m - Matrix7::identity()).amax()
}

/// Worst violation of `M(b_p b_q) = M(b_p) M(b_q)` over all 49 pairs of
/// imaginary basis elements.
pub fn multiplicativity_residual(m: &Matrix7) -> f64 {
    let mut worst: f64 = 0.0;
    for bp in &IMAGINARY_BASIS {
        for bq in &IMAGINARY_BASIS {
            let lhs = apply_matrix(m, &(*bp * *bq));
            let rhs = apply_matrix(m, bp) * apply_matrix(m, bq);
            let r = lhs.distance_inf(&rhs);
            worst = if r.is_nan() { f64::NAN } else { worst.max(r) };
        }
    }
    worst
}

/// Matrix of `x -> r x r^-1` on the imaginary octonions, with no check that
/// it is an automorphism.
pub fn conjugation_matrix(r: &Octonion) -> Result<Matrix7> {
    let r_inv = r.inv()?;
    let cols = IMAGINARY_BASIS.map(|b| (*r * b) * r_inv);
    Ok(matrix_from_columns(&cols))
}

/// An automorphism of the octonions.
#[derive(Debug, Clone, PartialEq)]
pub struct G2Element {
    matrix: Matrix7,
    triple: [SpherePoint6; 3],
}

impl G2Element {
    pub fn identity() -> Self {
        G2Element {
            matrix: Matrix7::identity(),
            triple: [
                SpherePoint6(Octonion::I),
                SpherePoint6(Octonion::J),
                SpherePoint6(Octonion::E),
            ],
        }
    }

    /// The unique automorphism with `i -> xi`, `j -> eta`, `e -> zeta`.
    ///
    /// `eta` must be orthogonal to `xi`, and `zeta` orthogonal to `xi`, `eta`
    /// and `xi eta`, each within `tol`.
    pub fn from_triple(
        xi: SpherePoint6,
        eta: SpherePoint6,
        zeta: SpherePoint6,
        tol: f64,
    ) -> Result<Self> {
        let (x, y, z) = (xi.0, eta.0, zeta.0);
        let conditions = [
            ("<eta, xi>", y.dot(&x)),
            ("<zeta, xi>", z.dot(&x)),
            ("<zeta, eta>", z.dot(&y)),
            ("<zeta, xi eta>", z.dot(&(x * y))),
        ];
        for (which, value) in conditions {
            if !(value.abs() <= tol) {
                return Err(Error::OrthogonalityViolation { which, value, tol });
            }
        }
        let matrix = matrix_from_columns(&basis_images(x, y, z));
        Ok(G2Element {
            matrix,
            triple: [xi, eta, zeta],
        })
    }

    /// The inner automorphism `x -> r x r^-1`, defined exactly for non-real
    /// `r` with `4 r1^2 = |r|^2` (checked to a relative `1e-9`).
    pub fn inner(r: &Octonion) -> Result<Self> {
        let n2 = r.norm_sqr();
        let r_inv = r.inv()?;
        let im2 = r.im().norm_sqr();
        if im2 <= 1e-24 * n2 {
            return Err(Error::NotInnerAutomorphism {
                reason: "r is real",
                residual: im2 / n2,
            });
        }
        let criterion = (4.0 * r.re() * r.re() - n2).abs() / n2;
        if criterion > 1e-9 {
            return Err(Error::NotInnerAutomorphism {
                reason: "4 r1^2 differs from |r|^2",
                residual: criterion,
            });
        }
        let cols = IMAGINARY_BASIS.map(|b| (*r * b) * r_inv);
        let matrix = matrix_from_columns(&cols);
        let triple = [
            SpherePoint6::renormalized(cols[0])?,
            SpherePoint6::renormalized(cols[1])?,
            SpherePoint6::renormalized(cols[3])?,
        ];
        Ok(G2Element { matrix, triple })
    }

    /// A random element: `xi` uniform on S^6, `eta` uniform on the unit
    /// sphere orthogonal to `xi`, `zeta` uniform on the unit sphere orthogonal
    /// to `xi`, `eta` and `xi eta`.
    pub fn random(seed: u64) -> Self {
        let mut rng = sampling::rng(seed);
        Self::random_with(&mut rng)
    }

    pub fn random_with<R: rand::Rng + ?Sized>(rng: &mut R) -> Self {
        let xi = sampling::unit_imaginary(rng);
        let eta = sampling::unit_imaginary_orthogonal_to(rng, &[xi]);
        let xi_eta = (xi * eta).im();
        let xi_eta = xi_eta / xi_eta.norm();
        let zeta = sampling::unit_imaginary_orthogonal_to(rng, &[xi, eta, xi_eta]);
        Self::from_triple(
            SpherePoint6(xi),
            SpherePoint6(eta),
            SpherePoint6(zeta),
            FRAME_TOL,
        )
        .expect("sampled frame is orthonormal by construction")
    }

    fn from_matrix(matrix: Matrix7) -> Self {
        let triple = [0, 1, 3].map(|c| SpherePoint6(column(&matrix, c)));
        G2Element { matrix, triple }
    }

    pub fn matrix(&self) -> &Matrix7 {
        &self.matrix
    }

    /// Images of `(i, j, e)`.
    pub fn triple(&self) -> &[SpherePoint6; 3] {
        &self.triple
    }

    pub fn apply(&self, x: &Octonion) -> Octonion {
        apply_matrix(&self.matrix, x)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &G2Element) -> G2Element {
        Self::from_matrix(self.matrix * other.matrix)
    }

    pub fn inverse(&self) -> G2Element {
        Self::from_matrix(self.matrix.transpose())
    }

    pub fn orthogonality_residual(&self) -> f64 {
        orthogonality_residual(&self.matrix)
    }

    pub fn multiplicativity_residual(&self) -> f64 {
        multiplicativity_residual(&self.matrix)
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    /// Rebuilds an element from serialized parts, checking that the matrix
    /// is an automorphism and that its `(i, j, e)` columns match the triple.
    pub fn from_parts(matrix: Matrix7, triple: [SpherePoint6; 3]) -> Result<Self> {
        let ortho = orthogonality_residual(&matrix);
        if !(ortho < 1e-10) {
            return Err(Error::OrthogonalityViolation {
                which: "M^T M - I",
                value: ortho,
                tol: 1e-10,
            });
        }
        let mult = multiplicativity_residual(&matrix);
        if !(mult < 1e-9) {
            return Err(Error::OrthogonalityViolation {
                which: "multiplicativity on the basis",
                value: mult,
                tol: 1e-9,
            });
        }
        for (c, p) in [0, 1, 3].into_iter().zip(&triple) {
            let d = column(&matrix, c).distance_inf(&p.0);
            if !(d < 1e-12) {
                return Err(Error::OrthogonalityViolation {
                    which: "triple does not match matrix columns",
                    value: d,
                    tol: 1e-12,
                });
            }
        }
        Ok(G2Element { matrix, triple })
    }
}

/// The almost complex structure on the tangent space at `xi`: `v -> xi v`.
/// No tangency check; see [`crate::charts::complex_structure`] for the
/// checked version.
pub fn j_map(xi: &Octonion, v: &Octonion) -> Octonion {
    *xi * *v
}

/// Residual of `g(J_xi v) = J_{g xi}(g v)` over random `xi` on S^6 and random
/// tangent `v`. `map` may be any linear map of the imaginary octonions, so
/// orthogonal maps outside G2 can be tested as negative controls.
pub fn check_j_equivariance(
    map: &Matrix7,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<IdentityReport> {
    j_equivariance_with(map, Execution::default(), n_samples, seed, tol)
}

pub fn j_equivariance_with(
    map: &Matrix7,
    exec: Execution,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<IdentityReport> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument(
            "n_samples must be at least 1".into(),
        ));
    }
    let mut rng = sampling::rng(seed);
    let samples: Vec<(Octonion, Octonion)> = (0..n_samples)
        .map(|_| {
            let xi = sampling::unit_imaginary(&mut rng);
            let v = sampling::unit_imaginary_orthogonal_to(&mut rng, &[xi]);
            (xi, v)
        })
        .collect();
    let residual = exec.max(&samples, |(xi, v)| {
        let lhs = apply_matrix(map, &j_map(xi, v));
        let rhs = j_map(&apply_matrix(map, xi), &apply_matrix(map, v));
        lhs.distance_inf(&rhs)
    });
    let mut report = IdentityReport::new("j-equivariance", seed, n_samples);
    report.push(Check::below(
        "J-equivariance",
        "g(xi v) = g(xi) g(v)",
        residual,
        tol,
    ));
    Ok(report)
}

/// The orthogonal map swapping the `j` and `e` coordinates; it lies in O(7)
/// but not in G2.
pub fn swap_j_e() -> Matrix7 {
    let mut m = Matrix7::identity();
    m.swap_columns(1, 3);
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(x: Octonion) -> SpherePoint6 {
        SpherePoint6::from_octonion(x).unwrap()
    }

    #[test]
    fn sphere_point_validation() {
        assert!(SpherePoint6::new([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).is_ok());
        assert!(matches!(
            SpherePoint6::new([1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
            Err(Error::NotUnit { .. })
        ));
        assert!(SpherePoint6::from_octonion(Octonion::ONE).is_err());
        let p = SpherePoint6::normalize(Octonion::J * 3.0).unwrap();
        assert_eq!(p.as_octonion(), Octonion::J);
        assert!(SpherePoint6::normalize(Octonion::ONE).is_err());
    }

    #[test]
    fn identity_from_basis_triple() {
        let g =
            G2Element::from_triple(sp(Octonion::I), sp(Octonion::J), sp(Octonion::E), FRAME_TOL)
                .unwrap();
        assert_eq!(*g.matrix(), Matrix7::identity());
        assert_eq!(g, G2Element::identity());
    }

    #[test]
    fn swap_i_j() {
        let g =
            G2Element::from_triple(sp(Octonion::J), sp(Octonion::I), sp(Octonion::E), FRAME_TOL)
                .unwrap();
        assert_eq!(g.apply(&Octonion::I), Octonion::J);
        assert_eq!(g.apply(&Octonion::J), Octonion::I);
        assert_eq!(g.apply(&Octonion::E), Octonion::E);
        assert_eq!(g.apply(&Octonion::K), -Octonion::K);
        assert!(g.multiplicativity_residual() < 1e-12);
        assert!((g.determinant() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn e_to_f() {
        let g =
            G2Element::from_triple(sp(Octonion::I), sp(Octonion::J), sp(Octonion::F), FRAME_TOL)
                .unwrap();
        assert_eq!(g.apply(&Octonion::E), Octonion::F);
        assert_eq!(g.apply(&Octonion::G), Octonion::J * Octonion::F);
        assert!(g.multiplicativity_residual() < 1e-12);
    }

    #[test]
    fn bad_frames_rejected() {
        let err =
            G2Element::from_triple(sp(Octonion::I), sp(Octonion::I), sp(Octonion::E), FRAME_TOL);
        assert!(matches!(
            err,
            Err(Error::OrthogonalityViolation {
                which: "<eta, xi>",
                ..
            })
        ));
        // zeta = k = i j violates the last condition only.
        let err =
            G2Element::from_triple(sp(Octonion::I), sp(Octonion::J), sp(Octonion::K), FRAME_TOL);
        assert!(matches!(
            err,
            Err(Error::OrthogonalityViolation {
                which: "<zeta, xi eta>",
                ..
            })
        ));
    }

    #[test]
    fn random_elements() {
        let g = G2Element::random(17);
        assert!(g.orthogonality_residual() < 1e-12);
        assert!(g.multiplicativity_residual() < 1e-12);
        assert!((g.determinant() - 1.0).abs() < 1e-9);
        assert_eq!(g, G2Element::random(17));
        assert!((g.matrix() - G2Element::random(18).matrix()).amax() > 1e-6);
    }

    #[test]
    fn action_is_multiplicative() {
        let g = G2Element::random(3);
        let mut rng = sampling::rng(4);
        for _ in 0..1000 {
            let x = sampling::gaussian_octonion(&mut rng);
            let y = sampling::gaussian_octonion(&mut rng);
            assert!(g.apply(&(x * y)).distance_inf(&(g.apply(&x) * g.apply(&y))) < 1e-12);
            assert_eq!(g.apply(&Octonion::ONE), Octonion::ONE);
        }
    }

    #[test]
    fn group_structure() {
        let g = G2Element::random(1);
        let h = G2Element::random(2);
        assert_eq!(g.compose(&G2Element::identity()).matrix(), g.matrix());
        assert!((g.compose(&g.inverse()).matrix() - Matrix7::identity()).amax() < 1e-10);
        let gh = g.compose(&h);
        let x = sampling::gaussian_octonion(&mut sampling::rng(5));
        assert!(gh.apply(&x).distance_inf(&g.apply(&h.apply(&x))) < 1e-12);
        assert!(
            gh.triple()[0]
                .as_octonion()
                .distance_inf(&g.apply(&h.apply(&Octonion::I)))
                < 1e-15
        );
        assert!(gh.multiplicativity_residual() < 1e-12);
    }

    #[test]
    fn inner_automorphisms() {
        let r = Octonion([0.5, 0.5, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0]);
        let g = G2Element::inner(&r).unwrap();
        assert!(g.multiplicativity_residual() < 1e-10);
        assert!(g.orthogonality_residual() < 1e-12);

        assert!(matches!(
            G2Element::inner(&Octonion::ONE),
            Err(Error::NotInnerAutomorphism {
                reason: "r is real",
                ..
            })
        ));
        assert!(matches!(
            G2Element::inner(&Octonion::I),
            Err(Error::NotInnerAutomorphism { .. })
        ));
        assert!(matches!(
            G2Element::inner(&Octonion::ZERO),
            Err(Error::ZeroDivisor { .. })
        ));

        // x -> i x i^-1 is not multiplicative; (j, e) is a witness.
        let m = conjugation_matrix(&Octonion::I).unwrap();
        let lhs = apply_matrix(&m, &(Octonion::J * Octonion::E));
        let rhs = apply_matrix(&m, &Octonion::J) * apply_matrix(&m, &Octonion::E);
        assert!(lhs.distance_inf(&rhs) > 1.0);
    }

    #[test]
    fn j_equivariance() {
        let id = check_j_equivariance(&Matrix7::identity(), 100, 1, 1e-9).unwrap();
        assert_eq!(id.checks[0].residual, 0.0);
        let g = G2Element::random(9);
        assert!(check_j_equivariance(g.matrix(), 1000, 2, 1e-9)
            .unwrap()
            .all_pass());
        let bad = check_j_equivariance(&swap_j_e(), 1000, 2, 1e-9).unwrap();
        assert!(bad.checks[0].residual >= 0.1);
        assert!(orthogonality_residual(&swap_j_e()) == 0.0);
    }

    #[test]
    fn from_parts_round_trip() {
        let g = G2Element::random(4);
        assert_eq!(G2Element::from_parts(*g.matrix(), *g.triple()).unwrap(), g);
        assert!(G2Element::from_parts(swap_j_e(), *g.triple()).is_err());
        let other = G2Element::random(5);
        assert!(G2Element::from_parts(*g.matrix(), *other.triple()).is_err());
    }
}
