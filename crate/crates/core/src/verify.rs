//! Verification suites driving every module, as run by `g2-bundle verify`.

use std::str::FromStr;

use crate::cayley_dickson::{self, doubling, MultiplicationTable, Octonion};
use crate::charts::{self, ChartId};
use crate::degree::{self, FD_STEP};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::g2::{self, G2Element, SpherePoint6};
use crate::report::{Check, IdentityReport};
use crate::sampling::{self, SeededRng};
use crate::su3::{max_entry_diff, ComplexMatrix3, SU3Matrix};
use crate::transition::{self, EquatorPoint};

/// Default threshold for algebra and closed-form identities.
pub const TOL_ALGEBRA: f64 = 1e-10;

/// Default threshold for chart and bundle identities.
pub const TOL_BUNDLE: f64 = 1e-9;

/// Threshold for exact bilinear identities.
pub const TOL_EXACT: f64 = 1e-14;

/// Margin kept from the boundary of a translator's domain when sampling.
pub const DOMAIN_MARGIN: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    G2,
    Charts,
    Transition,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 5] = ["algebra", "g2", "charts", "transition", "all"];
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "algebra" => Ok(Suite::Algebra),
            "g2" => Ok(Suite::G2),
            "charts" => Ok(Suite::Charts),
            "transition" => Ok(Suite::Transition),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidArgument(format!("unknown suite {other:?}"))),
        }
    }
}

/// Runs `suite` and returns one report per sub-suite.
pub fn run(
    suite: Suite,
    exec: Execution,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<IdentityReport>> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument(
            "n_samples must be at least 1".into(),
        ));
    }
    Ok(match suite {
        Suite::Algebra => vec![algebra(exec, n_samples, seed)?],
        Suite::G2 => vec![g2_suite(exec, n_samples, seed)?],
        Suite::Charts => vec![charts_suite(exec, n_samples, seed)?],
        Suite::Transition => vec![transition_suite(exec, n_samples, seed)?],
        Suite::All => vec![
            algebra(exec, n_samples, seed)?,
            g2_suite(exec, n_samples, seed)?,
            charts_suite(exec, n_samples, seed)?,
            transition_suite(exec, n_samples, seed)?,
        ],
    })
}

/// Derived seed for the `k`-th check of a suite.
fn sub_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_add(k.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn draw<T>(n: usize, seed: u64, mut f: impl FnMut(&mut SeededRng) -> T) -> Vec<T> {
    let mut rng = sampling::rng(seed);
    (0..n).map(|_| f(&mut rng)).collect()
}

/// Errors count as a failed sample.
fn or_nan(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::NAN)
}

/// A uniform point of S^6 conditioned on `accept`.
pub fn sphere_point_where<R: rand::Rng + ?Sized>(
    rng: &mut R,
    accept: impl Fn(f64) -> bool,
) -> SpherePoint6 {
    loop {
        let x = sampling::unit_imaginary(rng);
        if accept(x[1]) {
            return SpherePoint6::from_octonion(x).expect("sampled on the unit sphere");
        }
    }
}

/// A random automorphism whose base point `g(i)` satisfies `accept(x2)`.
pub fn g2_over<R: rand::Rng + ?Sized>(rng: &mut R, accept: impl Fn(f64) -> bool) -> G2Element {
    loop {
        let g = G2Element::random_with(rng);
        if accept(g.triple()[0].x2()) {
            return g;
        }
    }
}

/// Where the chart's translator is defined, with a margin.
pub fn in_translator_domain(chart: ChartId, x2: f64) -> bool {
    match chart {
        ChartId::U1 => x2 > -0.5 + DOMAIN_MARGIN,
        ChartId::U2 => x2 < 0.5 - DOMAIN_MARGIN,
    }
}

pub fn random_equator(rng: &mut SeededRng) -> EquatorPoint {
    EquatorPoint::from_reals(sampling::unit_r6(rng)).expect("unit sample")
}

/// A random unit `v` in `V_i`.
pub fn random_v_i(rng: &mut SeededRng) -> Octonion {
    sampling::unit_imaginary_orthogonal_to(rng, &[Octonion::I])
}

pub fn algebra(exec: Execution, n: usize, seed: u64) -> Result<IdentityReport> {
    let table = MultiplicationTable::standard();
    let mut report = IdentityReport::new("algebra", seed, n);
    report.extend(cayley_dickson::verify_algebra_identities_with(
        table,
        exec,
        n,
        seed,
        TOL_ALGEBRA,
    )?);

    let pairs = draw(n, sub_seed(seed, 1), |r| {
        (sampling::unit_octonion(r), sampling::unit_octonion(r))
    });
    let doubling_gap = exec.max(&pairs, |(a, b)| {
        let d = doubling::mul(&a.0, &b.0);
        (*a * *b).distance_inf(&Octonion(d.try_into().expect("eight components")))
    });
    report.push(Check::below(
        "table agrees with doubling",
        "(a,b)(u,v) = (au - conj(v)b, b conj(u) + va)",
        doubling_gap,
        TOL_ALGEBRA,
    ));
    let conj_gap = exec.max(&pairs, |(a, b)| {
        (*a * *b).conj().distance_inf(&(b.conj() * a.conj()))
    });
    report.push(Check::below(
        "conjugation reverses products",
        "conj(ab) = conj(b) conj(a)",
        conj_gap,
        TOL_ALGEBRA,
    ));

    let corrupted = table.with_flipped_sign(1, 2);
    let broken = cayley_dickson::verify_algebra_identities_with(
        &corrupted,
        exec,
        n,
        sub_seed(seed, 2),
        TOL_ALGEBRA,
    )?;
    let moufang = broken
        .check("Moufang")
        .map_or(f64::NAN, |c| c.residual)
        .max(basis_moufang(&corrupted));
    report.push(Check::above(
        "corrupted table breaks Moufang",
        "one flipped sign: a(bc)a != (ab)(ca)",
        moufang,
        1.0,
    ));
    Ok(report)
}

/// Largest Moufang residual over all basis triples.
pub fn basis_moufang(table: &MultiplicationTable) -> f64 {
    let basis: Vec<Octonion> = (0..8).map(Octonion::basis).collect();
    let mut worst: f64 = 0.0;
    for a in &basis {
        for b in &basis {
            for c in &basis {
                worst = worst.max(cayley_dickson::identity_residuals(table, &[*a, *b, *c, *c])[6]);
            }
        }
    }
    worst
}

/// Unit `r` with `r1 = 1/2` and random imaginary direction.
fn admissible_r(rng: &mut SeededRng) -> Octonion {
    let u = sampling::unit_imaginary(rng);
    Octonion::ONE * 0.5 + u * (3f64.sqrt() / 2.0)
}

/// Unit `r` with `|4 r1^2 - 1| > 0.1`.
fn inadmissible_r(rng: &mut SeededRng) -> Octonion {
    loop {
        let r = sampling::unit_octonion(rng);
        if (4.0 * r.re() * r.re() - 1.0).abs() > 0.1 && r.im().norm() > 1e-3 {
            return r;
        }
    }
}

pub fn g2_suite(exec: Execution, n: usize, seed: u64) -> Result<IdentityReport> {
    let mut report = IdentityReport::new("g2", seed, n);

    let elements = draw(n, sub_seed(seed, 10), G2Element::random_with);
    let [orth, mult] = exec.max_n(&elements, |g| {
        [g.orthogonality_residual(), g.multiplicativity_residual()]
    });
    report.push(Check::below(
        "random automorphism is orthogonal",
        "g^t g = I",
        orth,
        TOL_ALGEBRA,
    ));
    report.push(Check::below(
        "random automorphism is multiplicative",
        "g(e_a e_b) = g(e_a) g(e_b), 49 pairs",
        mult,
        TOL_ALGEBRA,
    ));

    let good = draw(n, sub_seed(seed, 11), admissible_r);
    let inner_ok = exec.max(&good, |r| {
        or_nan(g2::conjugation_matrix(r).map(|m| g2::multiplicativity_residual(&m)))
    });
    report.push(Check::below(
        "conjugation by r with 4 r1^2 = |r|^2 is an automorphism",
        "4 r1^2 = |r|^2 => x -> r x r^-1 in G2",
        inner_ok,
        TOL_ALGEBRA,
    ));
    let bad = draw(n, sub_seed(seed, 12), inadmissible_r);
    let inner_bad = exec.min(&bad, |r| {
        or_nan(g2::conjugation_matrix(r).map(|m| g2::multiplicativity_residual(&m)))
    });
    report.push(Check::above(
        "conjugation by r with 4 r1^2 != |r|^2 is not",
        "|4 r1^2 - |r|^2| > 0.1 => not multiplicative",
        inner_bad,
        1e-3,
    ));

    let g = G2Element::random(sub_seed(seed, 13));
    let equiv = g2::j_equivariance_with(g.matrix(), exec, n, sub_seed(seed, 14), TOL_ALGEBRA)?;
    report.push(Check::below(
        "automorphism commutes with J",
        "g(J_xi v) = J_{g xi}(g v)",
        equiv.checks[0].residual,
        TOL_ALGEBRA,
    ));
    let swap = g2::j_equivariance_with(&g2::swap_j_e(), exec, n, sub_seed(seed, 15), TOL_ALGEBRA)?;
    report.push(Check::above(
        "orthogonal map outside G2 breaks J",
        "swap(j, e) in O(7) \\ G2",
        swap.checks[0].residual,
        0.1,
    ));
    Ok(report)
}

pub fn charts_suite(exec: Execution, n: usize, seed: u64) -> Result<IdentityReport> {
    let mut report = IdentityReport::new("charts", seed, n);
    let n_heavy = n.clamp(1, 1000);

    let points = draw(n, sub_seed(seed, 20), |r| {
        sphere_point_where(r, |x2| in_translator_domain(ChartId::U1, x2))
    });
    let [conj, real, unit] = exec.max_n(&points, |xi| match charts::r_xi(xi) {
        Ok(r) => [
            ((r * Octonion::I) * r.conj()).distance_inf(&xi.as_octonion()),
            (r.re() - 0.5).abs(),
            (r.norm() - 1.0).abs(),
        ],
        Err(_) => [f64::NAN; 3],
    });
    report.push(Check::below(
        "translator sends i to xi",
        "r i conj(r) = xi, x2 > -1/2",
        conj,
        TOL_BUNDLE,
    ));
    report.push(Check::below(
        "translator has real part 1/2",
        "r1 = 1/2",
        real,
        TOL_EXACT,
    ));
    report.push(Check::below(
        "translator is a unit",
        "|r| = 1",
        unit,
        TOL_ALGEBRA,
    ));

    let frames = exec.max(&points, |xi| {
        or_nan(charts::frame_at(xi, ChartId::U1).map(|f| f.orthonormality_residual()))
    });
    report.push(Check::below(
        "chart frame is J-orthonormal",
        "(Qj, Qe, Qg) complex orthonormal at xi",
        frames,
        TOL_BUNDLE,
    ));

    for (k, chart) in [ChartId::U1, ChartId::U2].into_iter().enumerate() {
        let elements = draw(n_heavy, sub_seed(seed, 21 + k as u64), |r| {
            g2_over(r, |x2| in_translator_domain(chart, x2))
        });
        let trip = exec.max(&elements, |g| {
            or_nan((|| {
                let (xi, m) = charts::psi(g, chart)?;
                let back = charts::psi_inverse(&xi, &m, chart)?;
                let forward = (back.matrix() - g.matrix()).abs().max();
                let (xi2, m2) = charts::psi(&back, chart)?;
                Ok(forward
                    .max(xi2.as_octonion().distance_inf(&xi.as_octonion()))
                    .max(m2.max_diff(&m)))
            })())
        });
        let name = match chart {
            ChartId::U1 => "psi1 round trip",
            ChartId::U2 => "psi2 round trip",
        };
        report.push(Check::below(
            name,
            "psi^-1(psi(g)) = g, psi(psi^-1(xi, A)) = (xi, A)",
            trip,
            TOL_BUNDLE,
        ));
    }

    let overlap = draw(n_heavy, sub_seed(seed, 23), |r| {
        sphere_point_where(r, |x2| {
            in_translator_domain(ChartId::U1, x2) && in_translator_domain(ChartId::U2, x2)
        })
    });
    let cocycle = exec.max(&overlap, |xi| {
        or_nan((|| {
            let p = charts::transition_t12(xi)? * charts::transition_t21(xi)?;
            Ok(p.max_diff(&SU3Matrix::identity()))
        })())
    });
    report.push(Check::below(
        "cocycle",
        "t12 t21 = I on the overlap",
        cocycle,
        TOL_BUNDLE,
    ));
    Ok(report)
}

pub fn transition_suite(exec: Execution, n: usize, seed: u64) -> Result<IdentityReport> {
    let mut report = IdentityReport::new("transition", seed, n);
    let n_heavy = n.clamp(1, 1000);
    let zero = ComplexMatrix3::zeros();

    let zs = draw(n, sub_seed(seed, 30), random_equator);
    let [su3, outer_form, annihilate, frob, antipodal] = exec.max_n(&zs, |z| {
        let m = transition::theta_matrix(z);
        let zv = nalgebra::Vector3::new(z.u, z.v, z.w);
        let outer = transition::outer(&zv);
        let mz = transition::m_z(&zv);
        let mz_bar = mz.map(|c| c.conj());
        [
            crate::su3::unitarity_residual(&m).max(crate::su3::det_residual(&m)),
            max_entry_diff(&m, &transition::outer_form_matrix(z)),
            max_entry_diff(&(outer * mz), &zero).max(max_entry_diff(&(mz * outer), &zero)),
            transition::frobenius(&outer, &mz_bar).norm(),
            max_entry_diff(&transition::theta_matrix(&z.neg()), &(outer - mz_bar)),
        ]
    });
    report.push(Check::below(
        "closed form is in SU(3)",
        "theta(z) unitary, det = 1",
        su3,
        TOL_ALGEBRA,
    ));
    report.push(Check::below(
        "closed form equals z z^t + conj(M_z)",
        "theta(z) = z z^t + conj(M_z)",
        outer_form,
        TOL_EXACT,
    ));
    report.push(Check::below(
        "z z^t annihilates M_z",
        "z z^t M_z = M_z z z^t = 0",
        annihilate,
        TOL_EXACT,
    ));
    report.push(Check::below(
        "Frobenius orthogonality",
        "<z z^t, conj(M_z)>_F = 0",
        frob,
        TOL_EXACT,
    ));
    report.push(Check::below(
        "antipodal law",
        "theta(-z) = z z^t - conj(M_z)",
        antipodal,
        TOL_EXACT,
    ));

    let pairs = draw(n_heavy, sub_seed(seed, 31), |r| {
        (embed(random_equator(r)), random_v_i(r))
    });
    let [q_gap, comp_gap] = exec.max_n(&pairs, |(xi, v)| {
        let res = (|| {
            let q = charts::translator_q(&SpherePoint6::from_octonion(*xi)?)?;
            let q_minus = charts::translator_q(&SpherePoint6::from_octonion(-*xi)?)?;
            let direct = q.apply(v);
            Ok::<_, Error>([
                transition::q_xi_closed(xi, v)?.distance_inf(&direct),
                transition::q_composition_closed(xi, v)?
                    .distance_inf(&q_minus.inverse().apply(&direct)),
            ])
        })();
        res.unwrap_or([f64::NAN; 2])
    });
    report.push(Check::below(
        "translator closed form on V_i",
        "Q_xi(v) = 1/2((-1+i+xi+i xi)v + <v, xi+i xi>(1+i+xi+i xi))",
        q_gap,
        TOL_ALGEBRA,
    ));
    report.push(Check::below(
        "composite translator closed form",
        "Q_{-xi}^-1 Q_xi(v) = v xi - <v xi,1>(1+xi) - <v xi,i>(1+xi)i",
        comp_gap,
        TOL_ALGEBRA,
    ));

    let zs_heavy = draw(n_heavy, sub_seed(seed, 32), random_equator);
    let [qmat, charts_gap] = exec.max_n(&zs_heavy, |z| {
        let theta = transition::theta_matrix(z);
        [
            or_nan(
                transition::matrix_of_q_composition(z).map(|m| max_entry_diff(m.matrix(), &theta)),
            ),
            or_nan(
                charts::transition_t12(&transition::embed_equator(z))
                    .map(|t| max_entry_diff(t.transpose().matrix(), &theta)),
            ),
        ]
    });
    report.push(Check::below(
        "matrix of the composite translator",
        "conj(matrix of Q_{-xi}^-1 Q_xi in (j, e, g)) = theta(z)",
        qmat,
        TOL_ALGEBRA,
    ));
    report.push(Check::below(
        "charts reproduce the closed form",
        "t12(xi)^t = t12(-xi) = theta(z)",
        charts_gap,
        TOL_BUNDLE,
    ));

    let base = EquatorPoint::from_reals(degree::BASE_VALUE)?;
    let deg = degree::degree_with(&base, FD_STEP, degree::Orientation::OutwardFirst, exec);
    let deg_gap = match &deg {
        Ok(r) if r.preimages.len() == 2 && r.signs_agree() => (r.degree - 2).abs() as f64,
        _ => f64::NAN,
    };
    report.push(Check::below(
        "degree of pi o theta",
        "deg(first column of theta) = 2",
        deg_gap,
        0.5,
    ));
    Ok(report)
}

fn embed(z: EquatorPoint) -> Octonion {
    transition::embed_equator(&z).as_octonion()
}
