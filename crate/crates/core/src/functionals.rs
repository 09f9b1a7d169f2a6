//! Weighted truncated area functionals `F_n^t(f) = Σ_{k≤n} k^t |b_k|²` and
//! the closed-form bounds that surround them.

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Result};
use crate::norm::coefficient_bound;
use crate::poly::Coefficients;

/// Truncation order `n` and weight exponent `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalSpec {
    pub n: usize,
    pub t: f64,
}

impl FunctionalSpec {
    pub fn new(n: usize, t: f64) -> Result<Self> {
        check_range("n", n as f64, n >= 1, "n >= 1")?;
        check_range("t", t, t >= 0.0, "t >= 0")?;
        Ok(Self { n, t })
    }

    /// The value `n^t B_n²` attained by `B_n z^n`.
    pub fn conjectured_bound(&self) -> f64 {
        let bn = coefficient_bound(self.n).expect("n >= 1");
        (self.n as f64).powf(self.t) * bn * bn
    }
}

pub fn functional_value(f: &Coefficients, spec: FunctionalSpec) -> f64 {
    f.as_slice()
        .iter()
        .take(spec.n)
        .enumerate()
        .map(|(i, b)| ((i + 1) as f64).powf(spec.t) * b.norm_sqr())
        .sum()
}

/// `n^n / (n−1)^{n−1}`, an upper bound for `F_n` over the unit ball.
pub fn crude_bound(n: usize) -> Result<f64> {
    check_range("n", n as f64, n >= 2, "n >= 2")?;
    let m = (n - 1) as f64;
    Ok(n as f64 * (m * (1.0 / m).ln_1p()).exp())
}

/// `crude_bound(n) / (n B_n²) = 4 / ((n+1)/n)^{n+1}`.
pub fn ratio_to_conjectured(n: usize) -> Result<f64> {
    check_range("n", n as f64, n >= 2, "n >= 2")?;
    let nf = n as f64;
    Ok(4.0 * (-(nf + 1.0) * (1.0 / nf).ln_1p()).exp())
}

/// `1/(1−ρ)² − Σ_{k≤n} k² |b_k|² ρ^{k−1}`; nonnegative whenever `‖f‖_ℬ ≤ 1`.
pub fn parseval_margin(f: &Coefficients, n: usize, rho: f64) -> Result<f64> {
    check_range("rho", rho, (0.0..1.0).contains(&rho), "0 <= rho < 1")?;
    let mut sum = 0.0;
    let mut power = 1.0;
    for (i, b) in f.as_slice().iter().take(n).enumerate() {
        let k = (i + 1) as f64;
        sum += k * k * b.norm_sqr() * power;
        power *= rho;
    }
    Ok(1.0 / ((1.0 - rho) * (1.0 - rho)) - sum)
}

/// Checks `F_n^s(f) ≤ n^{s−t} F_n^t(f)` for `s ≥ t`.
///
/// The inequality holds termwise, so `false` means an arithmetic fault.
pub fn weight_reduction_check(f: &Coefficients, n: usize, t: f64, s: f64) -> Result<bool> {
    check_range("t", t, t >= 0.0, "t >= 0")?;
    check_range("s", s, s >= t, "s >= t")?;
    let lower = FunctionalSpec::new(n, t)?;
    let upper = FunctionalSpec::new(n, s)?;
    let lhs = functional_value(f, upper);
    let rhs = (n as f64).powf(s - t) * functional_value(f, lower);
    Ok(lhs <= rhs * (1.0 + 1e-12))
}
