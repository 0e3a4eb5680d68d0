//! Degree of `π ∘ θ : S^5 -> S^5`, where `π` takes the first column.
//!
//! In real coordinates `(u_re, u_im, v_re, v_im, w_re, w_im)` the map is
//! `F(u, v, w) = (u^2, uv - conj(w), uw + conj(v))`. The degree is the sum of
//! the Jacobian signs over the preimages of a regular value, with both spheres
//! oriented by the outward normal: a tangent basis `t1..t5` at `p` is positive
//! when `det[p, t1, .., t5] > 0`.

use nalgebra::{Matrix5, Matrix6, SMatrix, Vector5, Vector6};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::transition::EquatorPoint;

/// Default central-difference step.
pub const FD_STEP: f64 = 1e-5;

/// Below this `|det|` the Jacobian is treated as singular.
pub const SINGULAR_DET: f64 = 1e-6;

/// Residual at which root polishing stops.
pub const POLISH_TOL: f64 = 1e-13;

/// Preimages closer than this are the same point.
const DEDUP_TOL: f64 = 1e-8;

pub type R6 = [f64; 6];

/// The regular value `(1, 0, 0)`.
pub const BASE_VALUE: R6 = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0];

/// Its antipode, the second preimage.
pub const ANTIPODE: R6 = [-1.0, 0.0, 0.0, 0.0, 0.0, 0.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `det[p, t1, .., t5] > 0`.
    OutwardFirst,
    /// The opposite orientation on every tangent space.
    Reversed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Preimage {
    pub point: R6,
    pub det: f64,
    pub sign: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeReport {
    pub value: R6,
    pub fd_step: f64,
    pub preimages: Vec<Preimage>,
    pub degree: i32,
}

impl DegreeReport {
    /// `(+,+)` style summary of the local signs.
    pub fn sign_pattern(&self) -> String {
        let signs: Vec<&str> = self
            .preimages
            .iter()
            .map(|p| if p.sign > 0 { "+" } else { "-" })
            .collect();
        format!("({})", signs.join(","))
    }

    pub fn signs_agree(&self) -> bool {
        self.preimages.windows(2).all(|w| w[0].sign == w[1].sign)
    }
}

fn split(x: &R6) -> [Complex64; 3] {
    [
        Complex64::new(x[0], x[1]),
        Complex64::new(x[2], x[3]),
        Complex64::new(x[4], x[5]),
    ]
}

fn join(z: [Complex64; 3]) -> R6 {
    [z[0].re, z[0].im, z[1].re, z[1].im, z[2].re, z[2].im]
}

/// First column of θ, evaluated on any point of `R^6`.
pub fn pi_theta(x: &R6) -> R6 {
    let [u, v, w] = split(x);
    join([u * u, u * v - w.conj(), u * w + v.conj()])
}

/// Real derivative of [`pi_theta`] at `x` in direction `d`.
pub fn pi_theta_derivative(x: &R6, d: &R6) -> R6 {
    let [u, v, w] = split(x);
    let [du, dv, dw] = split(d);
    join([
        u * du * 2.0,
        du * v + u * dv - dw.conj(),
        du * w + u * dw + dv.conj(),
    ])
}

fn norm(x: &R6) -> f64 {
    x.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn dot(a: &R6, b: &R6) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(x: &R6) -> R6 {
    let n = norm(x);
    x.map(|a| a / n)
}

fn axpy(a: f64, x: &R6, y: &R6) -> R6 {
    std::array::from_fn(|k| a * x[k] + y[k])
}

fn distance(a: &R6, b: &R6) -> f64 {
    norm(&axpy(-1.0, a, b))
}

/// Orthonormal basis of `p^⊥` from Gram-Schmidt on the standard basis with
/// the largest-`|p_k|` axis dropped, oriented as requested.
pub fn tangent_basis(p: &R6, orientation: Orientation) -> [R6; 5] {
    let p = normalize(p);
    let drop = (0..6)
        .max_by(|&a, &b| p[a].abs().total_cmp(&p[b].abs()))
        .unwrap_or(0);
    let mut basis: Vec<R6> = vec![p];
    for k in (0..6).filter(|&k| k != drop) {
        let mut t = [0.0; 6];
        t[k] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                t = axpy(-dot(&t, b), b, &t);
            }
        }
        basis.push(normalize(&t));
    }
    let mut t: [R6; 5] = std::array::from_fn(|k| basis[k + 1]);
    let m = Matrix6::from_fn(|r, c| if c == 0 { p[r] } else { t[c - 1][r] });
    let positive = m.determinant() > 0.0;
    if positive != (orientation == Orientation::OutwardFirst) {
        t[4] = t[4].map(|a| -a);
    }
    t
}

/// 5x5 Jacobian of `π ∘ θ` at `p` in the tangent bases at `p` and `F(p)`,
/// by central differences along `normalize(p ± h t_k)`.
pub fn jacobian_fd(p: &R6, h: f64, orientation: Orientation) -> Matrix5<f64> {
    let q = pi_theta(p);
    let tp = tangent_basis(p, orientation);
    let tq = tangent_basis(&q, orientation);
    let mut jac = Matrix5::zeros();
    for (c, t) in tp.iter().enumerate() {
        let plus = pi_theta(&normalize(&axpy(h, t, p)));
        let minus = pi_theta(&normalize(&axpy(-h, t, p)));
        let d: R6 = std::array::from_fn(|k| (plus[k] - minus[k]) / (2.0 * h));
        for (r, s) in tq.iter().enumerate() {
            jac[(r, c)] = dot(s, &d);
        }
    }
    jac
}

/// Same Jacobian from the analytic derivative.
pub fn jacobian_exact(p: &R6, orientation: Orientation) -> Matrix5<f64> {
    let q = pi_theta(p);
    let tp = tangent_basis(p, orientation);
    let tq = tangent_basis(&q, orientation);
    Matrix5::from_fn(|r, c| dot(&tq[r], &pi_theta_derivative(p, &tp[c])))
}

/// Damped Gauss-Newton for `F(x) = value` on `S^5`, starting at `seed`.
pub fn polish_root(value: &R6, seed: &R6) -> Result<R6> {
    let residual_at = |x: &R6| distance(&pi_theta(x), value);
    let mut x = normalize(seed);
    let mut res = residual_at(&x);
    for _ in 0..200 {
        if res < POLISH_TOL {
            return Ok(x);
        }
        let t = tangent_basis(&x, Orientation::OutwardFirst);
        let f = pi_theta(&x);
        let r = Vector6::from_fn(|k, _| f[k] - value[k]);
        let jac = SMatrix::<f64, 6, 5>::from_fn(|row, c| pi_theta_derivative(&x, &t[c])[row]);
        let jtj = jac.transpose() * jac;
        let jtr = jac.transpose() * r;
        let mut lambda = 1e-12;
        let mut improved = false;
        for _ in 0..40 {
            let Some(step) = (jtj + Matrix5::identity() * lambda).lu().solve(&(-jtr)) else {
                lambda *= 10.0;
                continue;
            };
            let step: Vector5<f64> = step;
            let mut y = x;
            for (k, tk) in t.iter().enumerate() {
                y = axpy(step[k], tk, &y);
            }
            let y = normalize(&y);
            let ry = residual_at(&y);
            if ry < res {
                x = y;
                res = ry;
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    if res < POLISH_TOL {
        Ok(x)
    } else {
        Err(Error::NoConvergence {
            seed: *seed,
            residual: res,
        })
    }
}

/// Preimages of `value`: exactly `±(1, 0, 0)` for the base value, otherwise
/// polished from those two seeds.
pub fn find_preimages(value: &R6) -> Result<Vec<R6>> {
    if *value == BASE_VALUE {
        return Ok(vec![BASE_VALUE, ANTIPODE]);
    }
    let seeds = [BASE_VALUE, ANTIPODE];
    let mut roots: Vec<R6> = Vec::new();
    for seed in &seeds {
        let root = polish_root(value, seed)?;
        if roots.iter().all(|r| distance(r, &root) > DEDUP_TOL) {
            roots.push(root);
        }
    }
    Ok(roots)
}

/// Signed preimage count of `value` under `π ∘ θ`.
pub fn degree_pi_theta(value: &EquatorPoint, fd_step: f64) -> Result<DegreeReport> {
    degree_with(
        value,
        fd_step,
        Orientation::OutwardFirst,
        Execution::default(),
    )
}

pub fn degree_with(
    value: &EquatorPoint,
    fd_step: f64,
    orientation: Orientation,
    exec: Execution,
) -> Result<DegreeReport> {
    if !(fd_step > 0.0 && fd_step.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "fd_step must be positive, got {fd_step}"
        )));
    }
    let target = value.to_reals();
    let roots = find_preimages(&target)?;
    let preimages = exec
        .map(&roots, |p| {
            let det = jacobian_fd(p, fd_step, orientation).determinant();
            if !(det.abs() >= SINGULAR_DET) {
                return Err(Error::SingularJacobian { preimage: *p, det });
            }
            Ok(Preimage {
                point: *p,
                det,
                sign: if det > 0.0 { 1 } else { -1 },
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let degree = preimages.iter().map(|p| p.sign).sum();
    Ok(DegreeReport {
        value: target,
        fd_step,
        preimages,
        degree,
    })
}
