use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::functionals::{functional_value, FunctionalSpec};
use crate::norm::seminorm;
use crate::poly::Coefficients;

/// Norm tolerance used by [`rayleigh_objective`].
pub const OBJECTIVE_TOL: f64 = 1e-12;

/// `F_n^t(f) / ‖f‖_ℬ²`, the scale-free form of the extremal problem.
pub fn rayleigh_objective(f: &Coefficients, spec: FunctionalSpec) -> Result<f64> {
    rayleigh_objective_with_tol(f, spec, OBJECTIVE_TOL)
}

pub fn rayleigh_objective_with_tol(
    f: &Coefficients,
    spec: FunctionalSpec,
    tol: f64,
) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let norm = seminorm(f, tol)?.value;
    Ok(functional_value(f, spec) / (norm * norm))
}

/// Applies `b_k ↦ b_k e^{i(a + k b)}` so that the two largest coefficients
/// (ties to the smaller index) become real and nonnegative.
pub fn gauge_normalize(f: &Coefficients) -> Result<Coefficients> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let mut order: Vec<usize> = (1..=f.len()).filter(|&k| f.coeff(k).norm() > 0.0).collect();
    order.sort_by(|&i, &j| {
        f.coeff(j)
            .norm()
            .total_cmp(&f.coeff(i).norm())
            .then(i.cmp(&j))
    });

    let k1 = order[0];
    let arg1 = f.coeff(k1).arg();
    let (a, b, pinned) = match order.get(1) {
        None => (-arg1, 0.0, vec![k1]),
        Some(&k2) => {
            let arg2 = f.coeff(k2).arg();
            let b = (arg1 - arg2) / (k2 as f64 - k1 as f64);
            (-arg1 - k1 as f64 * b, b, vec![k1, k2])
        }
    };
    if a == 0.0 && b == 0.0 {
        return Ok(f.clone());
    }
    let rotated = f
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let k = i + 1;
            if pinned.contains(&k) {
                Complex64::new(c.norm(), 0.0)
            } else {
                c * Complex64::from_polar(1.0, a + k as f64 * b)
            }
        })
        .collect();
    Coefficients::new(rotated)
}

/// `|n(n+1) b_{n+1} conj(b_n)|`, which vanishes at every extremal of `F_n`.
pub fn marty_residual(f: &Coefficients, n: usize) -> f64 {
    let nf = n as f64;
    (nf * (nf + 1.0) * f.coeff(n + 1) * f.coeff(n).conj()).norm()
}
