//! The transition function over the equator `S^5` of `S^6`.
//!
//! The equator `{x2 = 0}` is the unit sphere of `V_i = span{j, k, e, f, g, h}`,
//! a complex 3-space with basis `(j, e, g)` and complex structure `v -> i v`.
//! A point `(u, v, w)` of `S^5 ⊂ C^3` is the octonion
//! `u1 j + u2 k + v1 e + v2 f + w1 g - w2 h` (note `i g = -h`).
//!
//! On the equator the transition function has the closed form
//!
//! ```text
//!          | u^2          vu + conj(w)   wu - conj(v) |
//! θ(z) =   | uv - conj(w) v^2            wv + conj(u) |  =  z z^t + conj(M_z)
//!          | uw + conj(v) vw - conj(u)   w^2          |
//! ```
//!
//! Chart convention: with the fiber coordinates of [`crate::charts`] taken
//! literally, the chart transition `t12` satisfies `t12(ξ) = θ(z)^t = θ(-z)`
//! and `t21(ξ) = conj(θ(z))`. The closed form is therefore recovered as the
//! matrix of `Q_{-ξ}^-1 ∘ Q_ξ` (that is `t21`) with its entries conjugated;
//! see [`theta_from_charts`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cayley_dickson::Octonion;
use crate::charts::{self, ComplexFrame};
use crate::error::{Error, Result};
use crate::g2::SpherePoint6;
use crate::su3::{ComplexMatrix3, SU3Matrix};

/// Tolerance on `|u|^2 + |v|^2 + |w|^2 - 1`.
pub const EQUATOR_TOL: f64 = 1e-12;

/// Tolerance used when validating closed-form outputs as SU(3) matrices.
pub const CLOSED_FORM_SU3_TOL: f64 = 1e-10;

/// A point `(u, v, w)` of the unit sphere in `C^3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EquatorJson", into = "EquatorJson")]
pub struct EquatorPoint {
    pub u: Complex64,
    pub v: Complex64,
    pub w: Complex64,
}

#[derive(Serialize, Deserialize)]
struct EquatorJson {
    u: [f64; 2],
    v: [f64; 2],
    w: [f64; 2],
}

impl TryFrom<EquatorJson> for EquatorPoint {
    type Error = Error;
    fn try_from(j: EquatorJson) -> Result<Self> {
        EquatorPoint::from_reals([j.u[0], j.u[1], j.v[0], j.v[1], j.w[0], j.w[1]])
    }
}

impl From<EquatorPoint> for EquatorJson {
    fn from(z: EquatorPoint) -> Self {
        EquatorJson {
            u: [z.u.re, z.u.im],
            v: [z.v.re, z.v.im],
            w: [z.w.re, z.w.im],
        }
    }
}

impl EquatorPoint {
    pub fn new(u: Complex64, v: Complex64, w: Complex64) -> Result<Self> {
        let z = EquatorPoint { u, v, w };
        let n2 = z.norm_sqr();
        if !((n2 - 1.0).abs() <= EQUATOR_TOL) {
            return Err(Error::NotUnit { norm: n2.sqrt() });
        }
        Ok(z)
    }

    /// From `(u_re, u_im, v_re, v_im, w_re, w_im)`.
    pub fn from_reals(x: [f64; 6]) -> Result<Self> {
        Self::new(
            Complex64::new(x[0], x[1]),
            Complex64::new(x[2], x[3]),
            Complex64::new(x[4], x[5]),
        )
    }

    pub fn to_reals(&self) -> [f64; 6] {
        [
            self.u.re, self.u.im, self.v.re, self.v.im, self.w.re, self.w.im,
        ]
    }

    pub fn components(&self) -> [Complex64; 3] {
        [self.u, self.v, self.w]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.u.norm_sqr() + self.v.norm_sqr() + self.w.norm_sqr()
    }

    pub fn neg(&self) -> EquatorPoint {
        EquatorPoint {
            u: -self.u,
            v: -self.v,
            w: -self.w,
        }
    }
}

/// The frame `(j, e, g)` of `V_{±i}`, with complex structure `J_{±i}`.
fn basis_frame(base: SpherePoint6) -> ComplexFrame {
    ComplexFrame {
        base,
        a: Octonion::J,
        b: Octonion::E,
        c: Octonion::G,
    }
}

/// `(u, v, w) -> u1 j + u2 k + v1 e + v2 f + w1 g - w2 h`.
pub fn embed_equator(z: &EquatorPoint) -> SpherePoint6 {
    let [u1, u2, v1, v2, w1, w2] = z.to_reals();
    SpherePoint6::from_octonion(Octonion([0.0, 0.0, u1, u2, v1, v2, w1, -w2]))
        .expect("equator points have unit norm")
}

/// Inverse of [`embed_equator`]; requires `x2 = 0`.
pub fn extract_equator(xi: &SpherePoint6) -> Result<EquatorPoint> {
    let x = xi.as_octonion();
    if x[1] != 0.0 {
        return Err(Error::NotOnEquator { x2: x[1] });
    }
    EquatorPoint::from_reals([x[2], x[3], x[4], x[5], x[6], -x[7]])
}

fn column_vector(z: &EquatorPoint) -> nalgebra::Vector3<Complex64> {
    nalgebra::Vector3::new(z.u, z.v, z.w)
}

/// The closed-form matrix entries, with no validation of `z`.
pub fn theta_matrix(z: &EquatorPoint) -> ComplexMatrix3 {
    let (u, v, w) = (z.u, z.v, z.w);
    ComplexMatrix3::new(
        u * u,
        v * u + w.conj(),
        w * u - v.conj(),
        u * v - w.conj(),
        v * v,
        w * v + u.conj(),
        u * w + v.conj(),
        v * w - u.conj(),
        w * w,
    )
}

/// The transition function over the equator, in closed form.
pub fn theta_closed_form(z: &EquatorPoint) -> Result<SU3Matrix> {
    SU3Matrix::with_tol(theta_matrix(z), CLOSED_FORM_SU3_TOL)
}

/// The antisymmetric matrix `[[0, w, -v], [-w, 0, u], [v, -u, 0]]`, for any
/// triple (no norm requirement).
pub fn m_z(z: &nalgebra::Vector3<Complex64>) -> ComplexMatrix3 {
    let zero = Complex64::new(0.0, 0.0);
    let (u, v, w) = (z[0], z[1], z[2]);
    ComplexMatrix3::new(zero, w, -v, -w, zero, u, v, -u, zero)
}

/// `z z^t`.
pub fn outer(z: &nalgebra::Vector3<Complex64>) -> ComplexMatrix3 {
    z * z.transpose()
}

/// `z z^t + conj(M_z)`.
pub fn outer_form_matrix(z: &EquatorPoint) -> ComplexMatrix3 {
    let zv = column_vector(z);
    outer(&zv) + m_z(&zv).map(|c| c.conj())
}

pub fn outer_form(z: &EquatorPoint) -> Result<SU3Matrix> {
    SU3Matrix::with_tol(outer_form_matrix(z), CLOSED_FORM_SU3_TOL)
}

/// Frobenius inner product `Tr(conj(A)^t B)`.
pub fn frobenius(a: &ComplexMatrix3, b: &ComplexMatrix3) -> Complex64 {
    (a.adjoint() * b).trace()
}

fn require_v_i(x: &Octonion, what: &'static str) -> Result<()> {
    if x.re().abs() > 1e-9 || x[1].abs() > 1e-9 {
        return Err(Error::DomainViolation { what });
    }
    Ok(())
}

fn require_unit_v_i(xi: &Octonion) -> Result<()> {
    require_v_i(xi, "xi must lie in V_i")?;
    let norm = xi.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotUnit { norm });
    }
    Ok(())
}

/// `Q_xi(v) = 1/2 ((-1 + i + xi + i xi) v + <v, xi + i xi> (1 + i + xi + i xi))`
/// for `xi, v` in `V_i`, `|xi| = 1`.
pub fn q_xi_closed(xi: &Octonion, v: &Octonion) -> Result<Octonion> {
    require_unit_v_i(xi)?;
    require_v_i(v, "v must lie in V_i")?;
    let i = Octonion::I;
    let i_xi = i * *xi;
    let left = -Octonion::ONE + i + *xi + i_xi;
    let right = Octonion::ONE + i + *xi + i_xi;
    Ok((left * *v + right * v.dot(&(*xi + i_xi))) * 0.5)
}

/// `Q_{-xi}^-1 ∘ Q_xi (v) = v xi - <v xi, 1>(1 + xi) - <v xi, i>(1 + xi) i`
/// for `xi, v` in `V_i`, `|xi| = 1`.
pub fn q_composition_closed(xi: &Octonion, v: &Octonion) -> Result<Octonion> {
    require_unit_v_i(xi)?;
    require_v_i(v, "v must lie in V_i")?;
    let v_xi = *v * *xi;
    let one_xi = Octonion::ONE + *xi;
    Ok(v_xi - one_xi * v_xi.re() - (one_xi * Octonion::I) * v_xi[1])
}

/// Matrix of `Q_{-ξ}^-1 ∘ Q_ξ : V_i -> V_{-i}` in the bases `(j, e, g)`, the
/// target read with `J_{-i}(v) = -i v`, and then entrywise conjugated.
pub fn matrix_of_q_composition(z: &EquatorPoint) -> Result<SU3Matrix> {
    let xi = embed_equator(z).as_octonion();
    let south = basis_frame(SpherePoint6::NORTH.antipode());
    let mut cols = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (col, b) in cols.iter_mut().zip([Octonion::J, Octonion::E, Octonion::G]) {
        *col = south.coordinates(&q_composition_closed(&xi, &b)?);
    }
    SU3Matrix::new(ComplexMatrix3::from_fn(|r, c| cols[c][r].conj()))
}

/// The closed form reproduced from the chart construction: `conj(t21(ξ))`,
/// which equals `t12(ξ)^t` and `t12(-ξ)`.
pub fn theta_from_charts(z: &EquatorPoint) -> Result<SU3Matrix> {
    Ok(charts::transition_t21(&embed_equator(z))?.conj())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use crate::su3::max_entry_diff;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real_matrix(rows: [[f64; 3]; 3]) -> ComplexMatrix3 {
        ComplexMatrix3::from_fn(|r, col| c(rows[r][col], 0.0))
    }

    fn random_z(rng: &mut sampling::SeededRng) -> EquatorPoint {
        EquatorPoint::from_reals(sampling::unit_r6(rng)).unwrap()
    }

    #[test]
    fn equator_point_validation() {
        assert!(EquatorPoint::from_reals([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).is_ok());
        assert!(matches!(
            EquatorPoint::from_reals([2.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
            Err(Error::NotUnit { .. })
        ));
        let z: EquatorPoint = serde_json::from_str(r#"{"u":[0,1],"v":[0,0],"w":[0,0]}"#).unwrap();
        assert_eq!(z.u, c(0.0, 1.0));
        assert_eq!(
            serde_json::to_string(&z).unwrap(),
            r#"{"u":[0.0,1.0],"v":[0.0,0.0],"w":[0.0,0.0]}"#
        );
        assert!(
            serde_json::from_str::<EquatorPoint>(r#"{"u":[1,1],"v":[0,0],"w":[0,0]}"#).is_err()
        );
    }

    #[test]
    fn embedding() {
        let z = |x: [f64; 6]| EquatorPoint::from_reals(x).unwrap();
        assert_eq!(
            embed_equator(&z([1.0, 0.0, 0.0, 0.0, 0.0, 0.0])).as_octonion(),
            Octonion::J
        );
        assert_eq!(
            embed_equator(&z([0.0, 1.0, 0.0, 0.0, 0.0, 0.0])).as_octonion(),
            Octonion::K
        );
        assert_eq!(
            embed_equator(&z([0.0, 0.0, 0.0, 0.0, 0.0, 1.0])).as_octonion(),
            -Octonion::H
        );
        let mut rng = sampling::rng(1);
        let north = basis_frame(SpherePoint6::NORTH);
        for _ in 0..100 {
            let p = random_z(&mut rng);
            let xi = embed_equator(&p);
            assert_eq!(extract_equator(&xi).unwrap(), p);
            // The embedding is the J_i-complex coordinate map of the frame (j, e, g).
            let coords = north.coordinates(&xi.as_octonion());
            for (a, b) in coords.iter().zip(p.components()) {
                assert!((a - b).norm() < 1e-15);
            }
        }
        assert!(matches!(
            extract_equator(&SpherePoint6::NORTH),
            Err(Error::NotOnEquator { .. })
        ));
    }

    #[test]
    fn closed_form_examples() {
        let m =
            theta_closed_form(&EquatorPoint::from_reals([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap())
                .unwrap();
        assert_eq!(
            *m.matrix(),
            real_matrix([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, -1.0, 0.0]])
        );
        let m =
            theta_closed_form(&EquatorPoint::from_reals([0.0, 0.0, 1.0, 0.0, 0.0, 0.0]).unwrap())
                .unwrap();
        assert_eq!(
            *m.matrix(),
            real_matrix([[0.0, 0.0, -1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]])
        );
        assert!(theta_closed_form(&EquatorPoint {
            u: c(2.0, 0.0),
            v: c(0.0, 0.0),
            w: c(0.0, 0.0)
        })
        .is_err());
    }

    #[test]
    fn m_z_examples() {
        let e1 = nalgebra::Vector3::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert_eq!(
            m_z(&e1),
            real_matrix([[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, -1.0, 0.0]])
        );
        assert_eq!(m_z(&nalgebra::Vector3::zeros()), ComplexMatrix3::zeros());
        let mut rng = sampling::rng(2);
        for _ in 0..100 {
            let z = column_vector(&random_z(&mut rng));
            let m = m_z(&z);
            assert_eq!(m + m.transpose(), ComplexMatrix3::zeros());
            assert!(max_entry_diff(&(outer(&z) * m), &ComplexMatrix3::zeros()) < 1e-14);
            assert!(max_entry_diff(&(m * outer(&z)), &ComplexMatrix3::zeros()) < 1e-14);
        }
    }

    #[test]
    fn outer_form_agrees() {
        let e1 = EquatorPoint::from_reals([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(*outer_form(&e1).unwrap().matrix(), theta_matrix(&e1));
        let mut rng = sampling::rng(3);
        for _ in 0..1000 {
            let z = random_z(&mut rng);
            let p = outer_form(&z).unwrap();
            assert!(p.max_diff(&theta_closed_form(&z).unwrap()) < 1e-14);
            let zv = column_vector(&z);
            assert!(frobenius(&outer(&zv), &m_z(&zv).map(|x| x.conj())).norm() < 1e-14);
            // θ(-z) = z z^t - conj(M_z)
            let anti = outer(&zv) - m_z(&zv).map(|x| x.conj());
            assert!(max_entry_diff(&theta_matrix(&z.neg()), &anti) < 1e-14);
        }
    }

    #[test]
    fn q_closed_forms_match_conjugation() {
        let j = Octonion::J;
        let e = Octonion::E;
        let q = charts::translator_q(&SpherePoint6::from_octonion(j).unwrap()).unwrap();
        let qm = charts::translator_q(&SpherePoint6::from_octonion(-j).unwrap()).unwrap();
        for v in [j, e] {
            assert!(q_xi_closed(&j, &v).unwrap().distance_inf(&q.apply(&v)) < 1e-12);
            let direct = qm.inverse().apply(&q.apply(&v));
            assert!(q_composition_closed(&j, &v).unwrap().distance_inf(&direct) < 1e-11);
        }
        // Hand expansion: v = xi = j gives v xi = -1, and the closed form returns j.
        assert_eq!(q_composition_closed(&j, &j).unwrap(), j);
        assert!(matches!(
            q_xi_closed(&j, &Octonion::I),
            Err(Error::DomainViolation { .. })
        ));
        assert!(matches!(
            q_composition_closed(&Octonion::I, &j),
            Err(Error::DomainViolation { .. })
        ));
        assert!(matches!(
            q_xi_closed(&(j * 2.0), &e),
            Err(Error::NotUnit { .. })
        ));
    }

    #[test]
    fn q_composition_matrix() {
        let e1 = EquatorPoint::from_reals([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let m = matrix_of_q_composition(&e1).unwrap();
        assert!(m.max_diff(&theta_closed_form(&e1).unwrap()) < 1e-15);
        // Column 2 at z = (0, 1, 0) before conjugation: (conj(v)conj(u) + w, conj(v)^2, conj(v)conj(w) - u).
        let e2 = EquatorPoint::from_reals([0.0, 0.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        let m = matrix_of_q_composition(&e2).unwrap();
        let col = m.column(1).map(|x| x.conj());
        assert!((col[0] - c(0.0, 0.0)).norm() < 1e-15);
        assert!((col[1] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((col[2] - c(0.0, 0.0)).norm() < 1e-15);
        let mut rng = sampling::rng(4);
        for _ in 0..200 {
            let z = random_z(&mut rng);
            let m = matrix_of_q_composition(&z).unwrap();
            assert!(m.max_diff(&theta_closed_form(&z).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn charts_reproduce_closed_form() {
        let mut rng = sampling::rng(5);
        for _ in 0..50 {
            let z = random_z(&mut rng);
            let theta = theta_closed_form(&z).unwrap();
            let xi = embed_equator(&z);
            let t12 = charts::transition_t12(&xi).unwrap();
            assert!(theta_from_charts(&z).unwrap().max_diff(&theta) < 1e-9);
            assert!(t12.transpose().max_diff(&theta) < 1e-9);
            assert!(
                charts::transition_t12(&embed_equator(&z.neg()))
                    .unwrap()
                    .max_diff(&theta)
                    < 1e-9
            );
        }
    }
}
