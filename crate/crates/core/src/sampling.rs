//! Seeded random inputs for the verification suites.
//!
//! All sampling goes through ChaCha8 seeded from a `u64`, so a seed pins the
//! exact input sequence on every platform. Directions are drawn as normalized
//! Gaussian vectors, which are uniform on the corresponding sphere.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::cayley_dickson::Octonion;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn gaussian_octonion<R: Rng + ?Sized>(rng: &mut R) -> Octonion {
    Octonion(std::array::from_fn(|_| gaussian(rng)))
}

/// Uniform on S^7.
pub fn unit_octonion<R: Rng + ?Sized>(rng: &mut R) -> Octonion {
    loop {
        let x = gaussian_octonion(rng);
        if let Ok(u) = x.normalized() {
            return u;
        }
    }
}

/// Uniform on the unit sphere of imaginary octonions (S^6).
pub fn unit_imaginary<R: Rng + ?Sized>(rng: &mut R) -> Octonion {
    unit_imaginary_orthogonal_to(rng, &[])
}

/// Uniform on the unit sphere of imaginary octonions orthogonal to every
/// vector in `basis`, which must be orthonormal and imaginary. Degenerate
/// draws are resampled.
pub fn unit_imaginary_orthogonal_to<R: Rng + ?Sized>(rng: &mut R, basis: &[Octonion]) -> Octonion {
    loop {
        let mut x = gaussian_octonion(rng).im();
        for b in basis {
            x = x - *b * x.dot(b);
        }
        // Second pass keeps the result orthogonal to ~1e-16 even for nearly
        // parallel draws.
        for b in basis {
            x = x - *b * x.dot(b);
        }
        if x.norm() > 1e-6 {
            return x / x.norm();
        }
    }
}

/// Uniform on S^5 in R^6, as `(u_re, u_im, v_re, v_im, w_re, w_im)`.
pub fn unit_r6<R: Rng + ?Sized>(rng: &mut R) -> [f64; 6] {
    loop {
        let x: [f64; 6] = std::array::from_fn(|_| gaussian(rng));
        let n = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 1e-6 {
            return x.map(|c| c / n);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let a = unit_octonion(&mut rng(7));
        let b = unit_octonion(&mut rng(7));
        assert_eq!(a, b);
        assert_ne!(a, unit_octonion(&mut rng(8)));
    }

    #[test]
    fn orthogonal_draws() {
        let mut r = rng(1);
        let x = unit_imaginary(&mut r);
        let y = unit_imaginary_orthogonal_to(&mut r, &[x]);
        assert_eq!(x.re(), 0.0);
        assert_eq!(y.re(), 0.0);
        assert!(x.dot(&y).abs() < 1e-15);
        assert!((y.norm() - 1.0).abs() < 1e-15);
        let z = unit_r6(&mut r);
        assert!((z.iter().map(|c| c * c).sum::<f64>() - 1.0).abs() < 1e-15);
    }
}
