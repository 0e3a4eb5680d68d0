//! The Cayley algebra of octonions, built by doubling the quaternions.
//!
//! Coordinates are stored in the fixed basis order `(1, i, j, k, e, f, g, h)`
//! with `f = ie`, `g = je`, `h = ke`. Multiplication goes through an 8x8
//! signed basis table that is generated once, on first use, from the
//! recursive doubling rule `(a,b)(u,v) = (au - conj(v) b, b conj(u) + v a)`.
//! The recursive rule itself lives in [`doubling`] and stays available as an
//! independent reference for the table.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::report::{Check, IdentityReport};
use crate::sampling;

/// Names of the basis elements in storage order.
pub const BASIS_NAMES: [&str; 8] = ["1", "i", "j", "k", "e", "f", "g", "h"];

/// Squared-norm threshold below which an octonion is treated as non-invertible.
pub const ZERO_DIVISOR_EPS: f64 = 1e-30;

/// Recursive Cayley-Dickson doubling on coordinate slices of length `2^n`.
///
/// An element of the doubled algebra is the pair `(a, b)` made of the first
/// and second half of the slice, i.e. `a + b e`.
pub mod doubling {
    /// Conjugation `conj(a + b e) = conj(a) - b e`; the identity on the reals.
    pub fn conj(x: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = x.iter().map(|c| -c).collect();
        out[0] = x[0];
        out
    }

    /// Product `(a,b)(u,v) = (au - conj(v) b, b conj(u) + v a)`.
    pub fn mul(x: &[f64], y: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), y.len(), "operands must have the same dimension");
        assert!(
            x.len().is_power_of_two(),
            "dimension must be a power of two"
        );
        if x.len() == 1 {
            return vec![x[0] * y[0]];
        }
        let half = x.len() / 2;
        let (a, b) = x.split_at(half);
        let (u, v) = y.split_at(half);
        let first = sub(&mul(a, u), &mul(&conj(v), b));
        let second = add(&mul(b, &conj(u)), &mul(v, a));
        [first, second].concat()
    }

    fn add(x: &[f64], y: &[f64]) -> Vec<f64> {
        x.iter().zip(y).map(|(a, b)| a + b).collect()
    }

    fn sub(x: &[f64], y: &[f64]) -> Vec<f64> {
        x.iter().zip(y).map(|(a, b)| a - b).collect()
    }
}

/// `basis[p] * basis[q] = sign * basis[index]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisProduct {
    pub sign: i8,
    pub index: u8,
}

/// Signed multiplication table of the eight basis elements.
///
/// Rows are the left factor, columns the right factor. The `Display` impl
/// writes 8 lines of 8 entries `±name`; `FromStr` reads the same format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicationTable {
    entries: [[BasisProduct; 8]; 8],
}

impl MultiplicationTable {
    /// Regenerates the table from the recursive doubling rule.
    pub fn generate() -> Self {
        let mut entries = [[BasisProduct { sign: 1, index: 0 }; 8]; 8];
        for (p, row) in entries.iter_mut().enumerate() {
            for (q, entry) in row.iter_mut().enumerate() {
                let prod = doubling::mul(&unit_vector(p), &unit_vector(q));
                let index = prod
                    .iter()
                    .position(|c| *c != 0.0)
                    .expect("product of basis elements is never zero");
                debug_assert!(prod.iter().filter(|c| **c != 0.0).count() == 1);
                *entry = BasisProduct {
                    sign: prod[index].signum() as i8,
                    index: index as u8,
                };
            }
        }
        Self { entries }
    }

    /// The process-wide table, built on first use.
    pub fn standard() -> &'static MultiplicationTable {
        static TABLE: OnceLock<MultiplicationTable> = OnceLock::new();
        TABLE.get_or_init(MultiplicationTable::generate)
    }

    pub fn entry(&self, p: usize, q: usize) -> BasisProduct {
        self.entries[p][q]
    }

    /// A copy with the sign of one entry flipped. Only useful as a mutation
    /// target for the identity checks.
    pub fn with_flipped_sign(&self, p: usize, q: usize) -> Self {
        let mut out = self.clone();
        out.entries[p][q].sign = -out.entries[p][q].sign;
        out
    }

    /// Bilinear product of two coordinate vectors under this table.
    pub fn mul(&self, a: &Octonion, b: &Octonion) -> Octonion {
        let mut out = [0.0; 8];
        for (p, row) in self.entries.iter().enumerate() {
            let ap = a.0[p];
            if ap == 0.0 {
                continue;
            }
            for (q, entry) in row.iter().enumerate() {
                let term = ap * b.0[q];
                if entry.sign > 0 {
                    out[entry.index as usize] += term;
                } else {
                    out[entry.index as usize] -= term;
                }
            }
        }
        Octonion(out)
    }
}

impl fmt::Display for MultiplicationTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let line: Vec<String> = row
                .iter()
                .map(|e| {
                    let sign = if e.sign > 0 { '+' } else { '-' };
                    format!("{sign}{}", BASIS_NAMES[e.index as usize])
                })
                .collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for MultiplicationTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidArgument(format!("multiplication table: {msg}"));
        let rows: Vec<&str> = s.lines().filter(|l| !l.trim().is_empty()).collect();
        if rows.len() != 8 {
            return Err(bad(format!("expected 8 rows, found {}", rows.len())));
        }
        let mut entries = [[BasisProduct { sign: 1, index: 0 }; 8]; 8];
        for (p, line) in rows.iter().enumerate() {
            let cells: Vec<&str> = line.split_whitespace().collect();
            if cells.len() != 8 {
                return Err(bad(format!("row {p} has {} entries", cells.len())));
            }
            for (q, cell) in cells.iter().enumerate() {
                let (sign, name) = match cell.split_at(1) {
                    ("+", name) => (1, name),
                    ("-", name) => (-1, name),
                    _ => return Err(bad(format!("entry `{cell}` lacks a sign"))),
                };
                let index = BASIS_NAMES
                    .iter()
                    .position(|n| *n == name)
                    .ok_or_else(|| bad(format!("unknown basis name `{name}`")))?;
                entries[p][q] = BasisProduct {
                    sign,
                    index: index as u8,
                };
            }
        }
        Ok(Self { entries })
    }
}

fn unit_vector(p: usize) -> Vec<f64> {
    let mut v = vec![0.0; 8];
    v[p] = 1.0;
    v
}

/// An octonion `c1 + c2 i + c3 j + c4 k + c5 e + c6 f + c7 g + c8 h`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Octonion(pub [f64; 8]);

impl Octonion {
    pub const ZERO: Octonion = Octonion([0.0; 8]);
    pub const ONE: Octonion = Octonion::basis(0);
    pub const I: Octonion = Octonion::basis(1);
    pub const J: Octonion = Octonion::basis(2);
    pub const K: Octonion = Octonion::basis(3);
    pub const E: Octonion = Octonion::basis(4);
    pub const F: Octonion = Octonion::basis(5);
    pub const G: Octonion = Octonion::basis(6);
    pub const H: Octonion = Octonion::basis(7);

    pub const fn new(coords: [f64; 8]) -> Self {
        Octonion(coords)
    }

    pub const fn basis(p: usize) -> Self {
        let mut c = [0.0; 8];
        c[p] = 1.0;
        Octonion(c)
    }

    pub fn real(x: f64) -> Self {
        Octonion::ONE * x
    }

    /// Purely imaginary octonion from the seven coordinates `x2..x8`.
    pub fn from_imaginary(x: [f64; 7]) -> Self {
        let mut c = [0.0; 8];
        c[1..].copy_from_slice(&x);
        Octonion(c)
    }

    pub fn coords(&self) -> &[f64; 8] {
        &self.0
    }

    pub fn re(&self) -> f64 {
        self.0[0]
    }

    pub fn imaginary(&self) -> [f64; 7] {
        let mut x = [0.0; 7];
        x.copy_from_slice(&self.0[1..]);
        x
    }

    /// Imaginary part as an octonion (real coordinate zeroed).
    pub fn im(&self) -> Octonion {
        let mut c = self.0;
        c[0] = 0.0;
        Octonion(c)
    }

    pub fn conj(&self) -> Octonion {
        let mut c = self.0.map(|x| -x);
        c[0] = self.0[0];
        Octonion(c)
    }

    pub fn dot(&self, other: &Octonion) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `conj(a) / |a|^2`.
    pub fn inv(&self) -> Result<Octonion> {
        let n2 = self.norm_sqr();
        if n2 < ZERO_DIVISOR_EPS {
            return Err(Error::ZeroDivisor { norm_sqr: n2 });
        }
        Ok(self.conj() / n2)
    }

    pub fn normalized(&self) -> Result<Octonion> {
        let n2 = self.norm_sqr();
        if n2 < ZERO_DIVISOR_EPS {
            return Err(Error::ZeroDivisor { norm_sqr: n2 });
        }
        Ok(*self / n2.sqrt())
    }

    /// Largest absolute coordinate.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| {
            if c.is_nan() || m.is_nan() {
                f64::NAN
            } else {
                m.max(c.abs())
            }
        })
    }

    /// `max_abs(self - other)`.
    pub fn distance_inf(&self, other: &Octonion) -> f64 {
        (*self - *other).max_abs()
    }

    /// Product under an explicit table, e.g. a deliberately corrupted one.
    pub fn mul_with(&self, table: &MultiplicationTable, rhs: &Octonion) -> Octonion {
        table.mul(self, rhs)
    }
}

impl Index<usize> for Octonion {
    type Output = f64;
    fn index(&self, idx: usize) -> &f64 {
        &self.0[idx]
    }
}

impl Add for Octonion {
    type Output = Octonion;
    fn add(self, rhs: Octonion) -> Octonion {
        Octonion(std::array::from_fn(|p| self.0[p] + rhs.0[p]))
    }
}

impl AddAssign for Octonion {
    fn add_assign(&mut self, rhs: Octonion) {
        *self = *self + rhs;
    }
}

impl Sub for Octonion {
    type Output = Octonion;
    fn sub(self, rhs: Octonion) -> Octonion {
        Octonion(std::array::from_fn(|p| self.0[p] - rhs.0[p]))
    }
}

impl Neg for Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        Octonion(self.0.map(|x| -x))
    }
}

impl Mul for Octonion {
    type Output = Octonion;
    fn mul(self, rhs: Octonion) -> Octonion {
        MultiplicationTable::standard().mul(&self, &rhs)
    }
}

impl Mul<f64> for Octonion {
    type Output = Octonion;
    fn mul(self, rhs: f64) -> Octonion {
        Octonion(self.0.map(|x| x * rhs))
    }
}

impl Mul<Octonion> for f64 {
    type Output = Octonion;
    fn mul(self, rhs: Octonion) -> Octonion {
        rhs * self
    }
}

impl Div<f64> for Octonion {
    type Output = Octonion;
    fn div(self, rhs: f64) -> Octonion {
        Octonion(self.0.map(|x| x / rhs))
    }
}

impl fmt::Display for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| format!("{c}")).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Names of the seven identities reported by [`verify_algebra_identities`].
pub const ALGEBRA_IDENTITIES: [(&str, &str); 7] = [
    ("alternativity", "(ab)b = a(bb), a(ab) = (aa)b"),
    ("flexibility", "(ab)a = a(ba)"),
    ("norm multiplicativity", "|ab| = |a||b|"),
    (
        "conjugate polarization",
        "(ax)conj(y) + (ay)conj(x) = 2<x,y>a",
    ),
    ("symmetrized products", "(ax)y + (ay)x = a(xy) + a(yx)"),
    (
        "inner product polarization",
        "<ax,by> + <bx,ay> = 2<a,b><x,y>",
    ),
    ("Moufang", "a(bc)a = (ab)(ca)"),
];

/// Residuals of the seven identities for one tuple `(a, b, x, y)`.
pub fn identity_residuals(table: &MultiplicationTable, [a, b, x, y]: &[Octonion; 4]) -> [f64; 7] {
    let m = |p: &Octonion, q: &Octonion| table.mul(p, q);

    let alternative = m(&m(a, b), b)
        .distance_inf(&m(a, &m(b, b)))
        .max(m(a, &m(a, b)).distance_inf(&m(&m(a, a), b)));
    let flexible = m(&m(a, b), a).distance_inf(&m(a, &m(b, a)));
    let normed = (m(a, b).norm() - a.norm() * b.norm()).abs();
    let polarization =
        (m(&m(a, x), &y.conj()) + m(&m(a, y), &x.conj())).distance_inf(&(*a * (2.0 * x.dot(y))));
    let symmetrized =
        (m(&m(a, x), y) + m(&m(a, y), x)).distance_inf(&(m(a, &m(x, y)) + m(a, &m(y, x))));
    let inner = (m(a, x).dot(&m(b, y)) + m(b, x).dot(&m(a, y)) - 2.0 * a.dot(b) * x.dot(y)).abs();
    // Moufang with c = x.
    let moufang = m(&m(a, &m(b, x)), a).distance_inf(&m(&m(a, b), &m(x, a)));

    [
        alternative,
        flexible,
        normed,
        polarization,
        symmetrized,
        inner,
        moufang,
    ]
}

/// Checks the seven octonion identities on `n_samples` seeded random unit
/// octonion tuples with the standard table.
pub fn verify_algebra_identities(n_samples: usize, seed: u64, tol: f64) -> Result<IdentityReport> {
    verify_algebra_identities_with(
        MultiplicationTable::standard(),
        Execution::default(),
        n_samples,
        seed,
        tol,
    )
}

pub fn verify_algebra_identities_with(
    table: &MultiplicationTable,
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
    let samples: Vec<[Octonion; 4]> = (0..n_samples)
        .map(|_| std::array::from_fn(|_| sampling::unit_octonion(&mut rng)))
        .collect();
    let residuals = exec.max_n(&samples, |s| identity_residuals(table, s));

    let mut report = IdentityReport::new("algebra", seed, n_samples);
    for ((name, formula), residual) in ALGEBRA_IDENTITIES.iter().zip(residuals) {
        report.push(Check::below(*name, *formula, residual, tol));
    }
    Ok(report)
}
