//! The principal SU(3)-bundle `p: G2 -> S^6, g -> g(i)` over two charts.
//!
//! `U1` excludes the south pole `-i`, `U2` the north pole `i`. Over `U1` the
//! fiber coordinate of `g` is read off in the complex frame
//! `(a, b, c) = (Q j, Q e, Q g)` at `xi = g(i)`, where `Q = Q_xi` is the inner
//! automorphism by `r_xi` sending `i` to `xi`; the complex structure on the
//! tangent space at `xi` is `J_xi(v) = xi v`. Over `U2` the same recipe uses
//! `Q~_xi = Q_{-xi}`, which sends `-i` to `xi`.
//!
//! `r_xi` has real part `1/2`, which confines `Q_xi(i)` to `x2 >= -1/2`.
//! Points of `U1` below that latitude (and points of `U2` above `x2 = 1/2`)
//! have no translator of this form and are rejected with
//! [`Error::NoRealSolution`].

use num_complex::Complex64;

use crate::cayley_dickson::Octonion;
use crate::error::{Error, Result};
use crate::g2::{G2Element, SpherePoint6, FRAME_TOL};
use crate::su3::{ComplexMatrix3, SU3Matrix};

/// Minimum distance `1 + x2` (resp. `1 - x2`) from the excluded pole.
pub const POLE_MARGIN: f64 = 1e-6;

/// Tangency tolerance for [`complex_structure`].
pub const TANGENCY_TOL: f64 = 1e-9;

/// Tolerance of the round-trip post-check in [`theta_inverse`].
pub const ROUND_TRIP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChartId {
    /// `S^6` minus the south pole `-i`.
    U1,
    /// `S^6` minus the north pole `i`.
    U2,
}

impl ChartId {
    /// Distance of `x2` from the excluded pole, `1 + x2` for `U1` and
    /// `1 - x2` for `U2`.
    pub fn pole_margin(self, xi: &SpherePoint6) -> f64 {
        match self {
            ChartId::U1 => 1.0 + xi.x2(),
            ChartId::U2 => 1.0 - xi.x2(),
        }
    }

    pub fn contains(self, xi: &SpherePoint6) -> bool {
        self.pole_margin(xi) > POLE_MARGIN
    }

    pub fn other(self) -> ChartId {
        match self {
            ChartId::U1 => ChartId::U2,
            ChartId::U2 => ChartId::U1,
        }
    }
}

/// `p(g) = g(i)`.
pub fn fibration_p(g: &G2Element) -> SpherePoint6 {
    g.triple()[0]
}

/// `J_xi(v) = xi v` for `v` tangent at `xi`.
pub fn complex_structure(xi: &SpherePoint6, v: &Octonion) -> Result<Octonion> {
    let residual = v.re().abs().max(v.dot(&xi.as_octonion()).abs());
    if !(residual <= TANGENCY_TOL) {
        return Err(Error::TangencyViolation { residual });
    }
    Ok(xi.as_octonion() * *v)
}

/// The unit octonion with real part `1/2` whose conjugation sends `i` to `xi`:
///
/// ```text
/// r = 1/2 (1, s, (x3 s - x4)/d, (x3 + x4 s)/d, (x5 s - x6)/d, (x5 + x6 s)/d,
///          (x7 s + x8)/d, (-x7 + x8 s)/d),   s = sqrt(1 + 2 x2), d = 1 + x2
/// ```
pub fn r_xi(xi: &SpherePoint6) -> Result<Octonion> {
    let margin = ChartId::U1.pole_margin(xi);
    if !(margin > POLE_MARGIN) {
        return Err(Error::PoleSingularity {
            chart: ChartId::U1,
            margin,
        });
    }
    let [x2, x3, x4, x5, x6, x7, x8] = xi.imaginary();
    let discriminant = 1.0 + 2.0 * x2;
    // Allow rounding noise right at the x2 = -1/2 boundary.
    if discriminant < -1e-12 {
        return Err(Error::NoRealSolution { discriminant });
    }
    let s = discriminant.max(0.0).sqrt();
    let d = 1.0 + x2;
    Ok(Octonion([
        0.5,
        0.5 * s,
        0.5 * (x3 * s - x4) / d,
        0.5 * (x3 + x4 * s) / d,
        0.5 * (x5 * s - x6) / d,
        0.5 * (x5 + x6 * s) / d,
        0.5 * (x7 * s + x8) / d,
        0.5 * (-x7 + x8 * s) / d,
    ]))
}

/// Equator form `r_xi = (1 + i)(1 + xi) / 2`, valid when `x2 = 0`.
pub fn r_xi_equator(xi: &SpherePoint6) -> Result<Octonion> {
    if !(xi.x2().abs() <= 1e-9) {
        return Err(Error::NotOnEquator { x2: xi.x2() });
    }
    Ok((Octonion::ONE + Octonion::I) * (Octonion::ONE + xi.as_octonion()) * 0.5)
}

/// `Q_xi: x -> r_xi x conj(r_xi)`, with `Q_xi(i) = xi`.
pub fn translator_q(xi: &SpherePoint6) -> Result<G2Element> {
    G2Element::inner(&r_xi(xi)?)
}

/// `Q~_xi = Q_{-xi}`, with `Q~_xi(-i) = xi`.
pub fn translator_q_tilde(xi: &SpherePoint6) -> Result<G2Element> {
    let margin = ChartId::U2.pole_margin(xi);
    if !(margin > POLE_MARGIN) {
        return Err(Error::PoleSingularity {
            chart: ChartId::U2,
            margin,
        });
    }
    translator_q(&xi.antipode())
}

/// The translator of `chart` at `xi`.
pub fn translator(xi: &SpherePoint6, chart: ChartId) -> Result<G2Element> {
    match chart {
        ChartId::U1 => translator_q(xi),
        ChartId::U2 => translator_q_tilde(xi),
    }
}

/// A complex orthonormal basis `(a, b, c)` of the tangent space at `base`
/// with respect to `J_base`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexFrame {
    pub base: SpherePoint6,
    pub a: Octonion,
    pub b: Octonion,
    pub c: Octonion,
}

impl ComplexFrame {
    pub fn vectors(&self) -> [Octonion; 3] {
        [self.a, self.b, self.c]
    }

    fn j(&self, v: &Octonion) -> Octonion {
        self.base.as_octonion() * *v
    }

    /// Complex coordinates `<v, a_k> + I <v, J a_k>` of a tangent vector.
    pub fn coordinates(&self, v: &Octonion) -> [Complex64; 3] {
        self.vectors()
            .map(|a| Complex64::new(v.dot(&a), v.dot(&self.j(&a))))
    }

    /// Inverse of [`ComplexFrame::coordinates`]:
    /// `sum_k Re(z_k) a_k + Im(z_k) J a_k`.
    pub fn vector(&self, z: &[Complex64; 3]) -> Octonion {
        self.vectors()
            .iter()
            .zip(z)
            .fold(Octonion::ZERO, |acc, (a, z)| {
                acc + *a * z.re + self.j(a) * z.im
            })
    }

    /// Worst deviation of `{a, b, c, J a, J b, J c, base}` from an
    /// orthonormal set.
    pub fn orthonormality_residual(&self) -> f64 {
        let [a, b, c] = self.vectors();
        let set = [
            a,
            b,
            c,
            self.j(&a),
            self.j(&b),
            self.j(&c),
            self.base.as_octonion(),
        ];
        let mut worst: f64 = 0.0;
        for (p, x) in set.iter().enumerate() {
            worst = worst.max(x.re().abs());
            for (q, y) in set.iter().enumerate() {
                let target = if p == q { 1.0 } else { 0.0 };
                worst = worst.max((x.dot(y) - target).abs());
            }
        }
        worst
    }
}

/// The chart frame `(Q j, Q e, Q g)` at `xi`.
pub fn frame_at(xi: &SpherePoint6, chart: ChartId) -> Result<ComplexFrame> {
    let q = translator(xi, chart)?;
    Ok(ComplexFrame {
        base: *xi,
        a: q.apply(&Octonion::J),
        b: q.apply(&Octonion::E),
        c: q.apply(&Octonion::G),
    })
}

fn require_chart(xi: &SpherePoint6, chart: ChartId) -> Result<()> {
    if chart.contains(xi) {
        Ok(())
    } else {
        Err(Error::ChartViolation { chart })
    }
}

/// Fiber coordinate of `g` in `chart`: the matrix whose columns are the
/// frame coordinates of `g(j)`, `g(e)` and `g(g) = g(j) g(e)`.
pub fn theta_xi(g: &G2Element, chart: ChartId) -> Result<SU3Matrix> {
    let xi = fibration_p(g);
    require_chart(&xi, chart)?;
    let frame = frame_at(&xi, chart)?;
    theta_in_frame(g, &frame)
}

fn theta_in_frame(g: &G2Element, frame: &ComplexFrame) -> Result<SU3Matrix> {
    let cols = [Octonion::J, Octonion::E, Octonion::G].map(|b| frame.coordinates(&g.apply(&b)));
    SU3Matrix::new(ComplexMatrix3::from_fn(|r, c| cols[c][r]))
}

/// The automorphism over `xi` whose fiber coordinate in `chart` is `m`.
///
/// Only the first two columns are used to build it; the third is then
/// required to match (together with the rest of the matrix) within
/// [`ROUND_TRIP_TOL`].
pub fn theta_inverse(xi: &SpherePoint6, m: &SU3Matrix, chart: ChartId) -> Result<G2Element> {
    require_chart(xi, chart)?;
    let frame = frame_at(xi, chart)?;
    let eta = SpherePoint6::renormalized(frame.vector(&m.column(0)))?;
    let zeta = SpherePoint6::renormalized(frame.vector(&m.column(1)))?;
    // Columns of an SU3Matrix are orthonormal only to its construction tolerance.
    let g = G2Element::from_triple(*xi, eta, zeta, FRAME_TOL.max(crate::su3::SU3_TOL))?;
    let back = theta_in_frame(&g, &frame)?;
    let residual = back.max_diff(m);
    if !(residual < ROUND_TRIP_TOL) {
        return Err(Error::ColumnMismatch { residual });
    }
    Ok(g)
}

/// Local trivialization `g -> (g(i), theta(g))` over `chart`.
pub fn psi(g: &G2Element, chart: ChartId) -> Result<(SpherePoint6, SU3Matrix)> {
    Ok((fibration_p(g), theta_xi(g, chart)?))
}

pub fn psi_inverse(xi: &SpherePoint6, m: &SU3Matrix, chart: ChartId) -> Result<G2Element> {
    theta_inverse(xi, m, chart)
}

pub fn psi1(g: &G2Element) -> Result<(SpherePoint6, SU3Matrix)> {
    psi(g, ChartId::U1)
}

pub fn psi2(g: &G2Element) -> Result<(SpherePoint6, SU3Matrix)> {
    psi(g, ChartId::U2)
}

pub fn psi1_inverse(xi: &SpherePoint6, m: &SU3Matrix) -> Result<G2Element> {
    psi_inverse(xi, m, ChartId::U1)
}

pub fn psi2_inverse(xi: &SpherePoint6, m: &SU3Matrix) -> Result<G2Element> {
    psi_inverse(xi, m, ChartId::U2)
}

/// Transition from chart `from` to chart `to` at `xi`: the matrix `t` with
/// `theta_to(theta_from^-1(phi)) = t phi`.
pub fn transition(xi: &SpherePoint6, from: ChartId, to: ChartId) -> Result<SU3Matrix> {
    let g = theta_inverse(xi, &SU3Matrix::identity(), from)?;
    theta_xi(&g, to)
}

/// `t12(xi)`, defined by `psi1(psi2^-1(xi, phi)) = (xi, t12(xi) phi)`.
pub fn transition_t12(xi: &SpherePoint6) -> Result<SU3Matrix> {
    transition(xi, ChartId::U2, ChartId::U1)
}

/// `t21(xi) = t12(xi)^-1`.
pub fn transition_t21(xi: &SpherePoint6) -> Result<SU3Matrix> {
    transition(xi, ChartId::U1, ChartId::U2)
}
