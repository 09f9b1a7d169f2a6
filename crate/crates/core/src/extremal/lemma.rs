//! Coefficient-exchange perturbation for nonnegative coefficients.
//!
//! Moving the mass of `b_k` to `z^m` (`k < m`) as `g = f − b_k z^k + (k/m) b_k z^m`
//! lowers `g′(r)` pointwise on `[0, 1)`, so `‖g‖_ℬ ≤ ‖f‖_ℬ`. At an extremal of
//! the nonnegative problem this forces `b_m ≤ (m−k)/(2m) · b_k`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::poly::Coefficients;

fn require_nonnegative(f: &Coefficients) -> Result<()> {
    match f.first_non_nonnegative() {
        Some((index, c)) => Err(Error::NotNonNegative {
            index,
            re: c.re,
            im: c.im,
        }),
        None => Ok(()),
    }
}

/// Returns `g` and `Δ = F_n(g) − F_n(f) = 2k b_k b_m + (k²/m) b_k² − k b_k²`.
pub fn lemma_perturbation(
    f: &Coefficients,
    n: usize,
    k: usize,
    m: usize,
) -> Result<(Coefficients, f64)> {
    check_range("k", k as f64, k >= 1 && k < m, "1 <= k < m")?;
    check_range("m", m as f64, m <= n, "m <= n")?;
    require_nonnegative(f)?;
    let bk = f.coeff(k).re;
    let bm = f.coeff(m).re;
    let mut coeffs = f.resized(f.len().max(m)).as_slice().to_vec();
    let (kf, mf) = (k as f64, m as f64);
    coeffs[k - 1] = Complex64::new(0.0, 0.0);
    coeffs[m - 1] = Complex64::new(bm + kf / mf * bk, 0.0);
    let delta = 2.0 * kf * bk * bm + kf * kf / mf * bk * bk - kf * bk * bk;
    Ok((Coefficients::new(coeffs)?, delta))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaSlack {
    pub k: usize,
    pub m: usize,
    /// `(m−k)/(2m) · b_k − b_m`; negative certifies non-extremality.
    pub slack: f64,
}

/// Slacks of the necessary condition for every `1 ≤ k < m ≤ n` with `b_k > 0`.
pub fn lemma_bound_check(f: &Coefficients, n: usize) -> Result<Vec<LemmaSlack>> {
    require_nonnegative(f)?;
    let mut out = Vec::new();
    for k in 1..n {
        let bk = f.coeff(k).re;
        if bk <= 0.0 {
            continue;
        }
        for m in k + 1..=n {
            let slack = (m - k) as f64 / (2.0 * m as f64) * bk - f.coeff(m).re;
            out.push(LemmaSlack { k, m, slack });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::{functional_value, FunctionalSpec};
    use crate::norm::coefficient_bound;

    fn real(c: &[f64]) -> Coefficients {
        Coefficients::from_real(c).unwrap()
    }

    fn f_n(f: &Coefficients, n: usize) -> f64 {
        functional_value(f, FunctionalSpec::new(n, 1.0).unwrap())
    }

    #[test]
    fn perturbation_example() {
        let f = real(&[0.5, 0.0, 0.5]);
        let (g, delta) = lemma_perturbation(&f, 3, 1, 3).unwrap();
        assert_eq!(g.coeff(1).re, 0.0);
        assert!((g.coeff(3).re - 2.0 / 3.0).abs() <= 1e-15);
        assert!((delta - 1.0 / 3.0).abs() <= 1e-15);
        assert!((f_n(&f, 3) - 1.0).abs() <= 1e-15);
        assert!((f_n(&g, 3) - 4.0 / 3.0).abs() <= 1e-15);
    }

    #[test]
    fn perturbation_of_zero_coefficient_is_identity() {
        let f = real(&[0.0, 0.3, 0.4]);
        let (g, delta) = lemma_perturbation(&f, 3, 1, 2).unwrap();
        assert_eq!(g, f);
        assert_eq!(delta, 0.0);
    }

    #[test]
    fn perturbation_of_identity() {
        let (g, delta) = lemma_perturbation(&real(&[1.0]), 2, 1, 2).unwrap();
        assert_eq!(g, real(&[0.0, 0.5]));
        assert!((delta + 0.5).abs() <= 1e-15);
        assert!((f_n(&g, 2) - f_n(&real(&[1.0]), 2) - delta).abs() <= 1e-15);
    }

    #[test]
    fn perturbation_rejects_bad_input() {
        assert!(lemma_perturbation(&real(&[1.0, 1.0]), 2, 2, 2).is_err());
        assert!(lemma_perturbation(&real(&[1.0, 1.0]), 2, 1, 3).is_err());
        assert!(lemma_perturbation(&real(&[1.0, -1.0]), 2, 1, 2).is_err());
    }

    #[test]
    fn slack_examples() {
        let b4 = coefficient_bound(4).unwrap();
        let m = Coefficients::monomial(4, Complex64::new(b4, 0.0)).unwrap();
        assert!(lemma_bound_check(&m, 4).unwrap().is_empty());

        let s = lemma_bound_check(&real(&[1.0, 1.0]), 2).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].k, s[0].m), (1, 2));
        assert!((s[0].slack + 0.75).abs() <= 1e-15);

        let s = lemma_bound_check(&real(&[1.0, 0.2]), 2).unwrap();
        assert!((s[0].slack - 0.05).abs() <= 1e-15);
    }
}
