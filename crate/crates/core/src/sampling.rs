//! Seeded random polynomials normalized to unit Bloch norm.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::norm::seminorm_general;
use crate::poly::Coefficients;

pub const SAMPLE_NORM_TOL: f64 = 1e-10;
pub const MIN_DEGREE: usize = 2;
pub const MAX_DEGREE: usize = 12;

/// Degree uniform in `{2, …, 12}`, real and imaginary parts uniform in `[−1, 1]`.
pub fn random_polynomial(rng: &mut impl Rng) -> Coefficients {
    let degree = rng.gen_range(MIN_DEGREE..=MAX_DEGREE);
    loop {
        let coeffs: Vec<Complex64> = (0..degree)
            .map(|_| Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
            .collect();
        let f = Coefficients::new(coeffs).expect("finite draws");
        if !f.is_zero() {
            return f;
        }
    }
}

/// Rescales `f` to unit norm on the general path.
pub fn normalize(f: &Coefficients) -> Result<Coefficients> {
    let norm = seminorm_general(f, SAMPLE_NORM_TOL)?;
    Ok(f.scaled(Complex64::new(1.0 / norm.value, 0.0)))
}

/// `count` unit-norm samples; sample `i` is drawn from a generator seeded
/// with `seed + i`, so the set is independent of the thread count.
pub fn normalized_samples(count: usize, seed: u64) -> Result<Vec<Coefficients>> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            normalize(&random_polynomial(&mut rng))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_deterministic_and_normalized() {
        let a = normalized_samples(8, 5).unwrap();
        let b = normalized_samples(8, 5).unwrap();
        assert_eq!(a, b);
        for f in &a {
            assert!((MIN_DEGREE..=MAX_DEGREE).contains(&f.len()));
            let norm = seminorm_general(f, 1e-10).unwrap().value;
            assert!((norm - 1.0).abs() <= 1e-9);
        }
        assert_ne!(a, normalized_samples(8, 6).unwrap());
    }
}
