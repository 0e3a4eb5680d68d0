//! JSON encodings of the domain types and the CSV sample schema.
//!
//! * `SpherePoint6`: `[x2, ..., x8]`
//! * `SU3Matrix`: `{"rows": [[[re, im], [re, im], [re, im]], x3]}`
//! * `G2Element`: `{"matrix": [[7 reals] x7], "triple": {"xi": [..], "eta": [..], "zeta": [..]}}`
//! * `EquatorPoint`: `{"u": [re, im], "v": [re, im], "w": [re, im]}` (see [`crate::transition`])
//!
//! Decoding validates: points must be unit, matrices special unitary,
//! automorphisms orthogonal, multiplicative and consistent with their triple.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::g2::{G2Element, Matrix7, SpherePoint6};
use crate::su3::{ComplexMatrix3, SU3Matrix};
use crate::transition::{self, EquatorPoint};

impl Serialize for SpherePoint6 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.imaginary().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpherePoint6 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let x = <[f64; 7]>::deserialize(d)?;
        SpherePoint6::new(x).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct Su3Json {
    rows: [[[f64; 2]; 3]; 3],
}

impl Serialize for SU3Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Su3Json {
            rows: self.rows().map(|row| row.map(|z| [z.re, z.im])),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SU3Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = Su3Json::deserialize(d)?;
        let m = ComplexMatrix3::from_fn(|r, c| Complex64::new(j.rows[r][c][0], j.rows[r][c][1]));
        SU3Matrix::new(m).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct TripleJson {
    xi: SpherePoint6,
    eta: SpherePoint6,
    zeta: SpherePoint6,
}

#[derive(Serialize, Deserialize)]
struct G2Json {
    matrix: [[f64; 7]; 7],
    triple: TripleJson,
}

impl Serialize for G2Element {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let m = self.matrix();
        let [xi, eta, zeta] = *self.triple();
        G2Json {
            matrix: std::array::from_fn(|r| std::array::from_fn(|c| m[(r, c)])),
            triple: TripleJson { xi, eta, zeta },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for G2Element {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = G2Json::deserialize(d)?;
        let m = Matrix7::from_fn(|r, c| j.matrix[r][c]);
        G2Element::from_parts(m, [j.triple.xi, j.triple.eta, j.triple.zeta])
            .map_err(D::Error::custom)
    }
}

/// Header of the sample CSV: the six coordinates of `z`, then `θ(z)` row-major
/// as `re, im` pairs.
pub fn csv_header() -> Vec<String> {
    let mut cols: Vec<String> = ["u_re", "u_im", "v_re", "v_im", "w_re", "w_im"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for r in 1..=3 {
        for c in 1..=3 {
            cols.push(format!("t{r}{c}_re"));
            cols.push(format!("t{r}{c}_im"));
        }
    }
    cols
}

/// The 24 reals of one sample row.
pub fn csv_values(z: &EquatorPoint, theta: &SU3Matrix) -> [f64; 24] {
    let mut vals = [0.0; 24];
    vals[..6].copy_from_slice(&z.to_reals());
    for (k, e) in theta.rows().iter().flatten().enumerate() {
        vals[6 + 2 * k] = e.re;
        vals[7 + 2 * k] = e.im;
    }
    vals
}

/// A sampled point and its transition matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub z: EquatorPoint,
    pub theta: SU3Matrix,
}

impl Sample {
    pub fn new(z: EquatorPoint) -> crate::Result<Self> {
        Ok(Sample {
            theta: transition::theta_closed_form(&z)?,
            z,
        })
    }
}

/// Writes the header and one row per sample. Values use the shortest
/// representation that round-trips.
pub fn write_csv<W: Write>(out: W, samples: &[Sample]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(csv_header())?;
    for s in samples {
        w.write_record(csv_values(&s.z, &s.theta).iter().map(|v| format!("{v}")))?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a CSV produced by [`write_csv`], validating every row.
pub fn read_csv<R: Read>(input: R) -> crate::Result<Vec<Sample>> {
    let bad = |msg: String| crate::Error::InvalidArgument(msg);
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(|e| bad(format!("CSV header: {e}")))?;
    if header.iter().ne(csv_header().iter().map(String::as_str)) {
        return Err(bad("unexpected CSV header".into()));
    }
    r.deserialize::<Vec<f64>>()
        .enumerate()
        .map(|(k, row)| {
            let vals = row.map_err(|e| bad(format!("row {}: {e}", k + 1)))?;
            if vals.len() != 24 {
                return Err(bad(format!(
                    "row {}: expected 24 fields, got {}",
                    k + 1,
                    vals.len()
                )));
            }
            let z = EquatorPoint::from_reals(std::array::from_fn(|i| vals[i]))?;
            let m = ComplexMatrix3::from_fn(|r, c| {
                let at = 6 + 2 * (3 * r + c);
                Complex64::new(vals[at], vals[at + 1])
            });
            Ok(Sample {
                z,
                theta: SU3Matrix::new(m)?,
            })
        })
        .collect()
}
