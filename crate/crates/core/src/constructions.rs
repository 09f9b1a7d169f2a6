//! Explicit families: the `t < 1` counterexample `z + b_n z^n` and the
//! three-term norm-chain family built around `z + B_n z^n`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::functionals::{functional_value, FunctionalSpec};
use crate::norm::{
    coefficient_bound, radial_profile_max, seminorm_general, seminorm_radial, NormResult,
};
use crate::poly::Coefficients;

/// `norm_ok` accepts `‖f_n‖_ℬ ≤ 1 + NORM_OK_SLACK`.
pub const NORM_OK_SLACK: f64 = 1e-10;
/// Largest `n` for which the dense vector of `f_n` is built or scanned.
pub const MAX_COUNTEREXAMPLE_N: usize = 10_000_000;
const COUNTEREXAMPLE_NORM_TOL: f64 = 1e-12;
const CHAIN_RADIAL_TOL: f64 = 1e-12;
const CHAIN_GENERAL_TOL: f64 = 1e-10;

fn check_t(t: f64) -> Result<()> {
    check_range("t", t, (0.0..1.0).contains(&t), "0 <= t < 1")
}

/// Smallest integer `≥ (2e²)^{2/(1−t)}`, the size past which `z + b_n z^n`
/// is guaranteed to lie in the unit ball.
pub fn threshold_n(t: f64) -> Result<u64> {
    check_t(t)?;
    let log = 2.0 / (1.0 - t) * (2.0 + std::f64::consts::LN_2);
    check_range(
        "t",
        t,
        log < 64.0 * std::f64::consts::LN_2,
        "threshold below 2^64",
    )?;
    Ok(log.exp().ceil() as u64)
}

/// `ε = (1−t)/2`.
pub fn counterexample_epsilon(t: f64) -> f64 {
    (1.0 - t) / 2.0
}

/// `b_n = sqrt(B_n² − n^{−(t+ε)})`.
pub fn counterexample_coefficient(t: f64, n: usize) -> Result<f64> {
    check_t(t)?;
    check_range(
        "n",
        n as f64,
        (2..=MAX_COUNTEREXAMPLE_N).contains(&n),
        "2 <= n <= 1e7",
    )?;
    let bn = coefficient_bound(n)?;
    let radicand = bn * bn - (n as f64).powf(-(t + counterexample_epsilon(t)));
    check_range("B_n^2 - n^-(t+eps)", radicand, radicand > 0.0, "> 0")?;
    Ok(radicand.sqrt())
}

/// `f_n(z) = z + b_n z^n`.
pub fn counterexample_function(t: f64, n: usize) -> Result<Coefficients> {
    let b = counterexample_coefficient(t, n)?;
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    c[0] = Complex64::new(1.0, 0.0);
    c[n - 1] = Complex64::new(b, 0.0);
    Coefficients::new(c)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleReport {
    pub t: f64,
    pub epsilon: f64,
    #[serde(rename = "threshold_N")]
    pub threshold_n: u64,
    pub n: usize,
    pub b_n: f64,
    pub norm: NormResult,
    /// `F_n^t(f_n) − n^t B_n²`, equal to `1 − n^{−ε}`.
    pub functional_margin: f64,
    pub norm_ok: bool,
}

/// Builds `f_n`, certifies its norm on the radial path and evaluates the
/// functional margin. Below the threshold the observed `norm_ok` is reported
/// as is.
pub fn counterexample_verify(t: f64, n: usize) -> Result<CounterexampleReport> {
    let f = counterexample_function(t, n)?;
    let spec = FunctionalSpec::new(n, t)?;
    let norm = seminorm_radial(&f, COUNTEREXAMPLE_NORM_TOL)?;
    let functional_margin = functional_value(&f, spec) - spec.conjectured_bound();
    Ok(CounterexampleReport {
        t,
        epsilon: counterexample_epsilon(t),
        threshold_n: threshold_n(t)?,
        n,
        b_n: f.coeff(n).re,
        norm_ok: norm.value <= 1.0 + NORM_OK_SLACK,
        norm,
        functional_margin,
    })
}

/// `‖z + b z^n‖_ℬ` from the two-term profile `(1 − r²)(1 + n b r^{n−1})`.
pub fn two_term_norm(n: usize, b: f64) -> f64 {
    let nb = n as f64 * b;
    let e = (n - 1) as f64;
    let g = |r: f64| {
        let p = if r > 0.0 { (e * r.ln()).exp() } else { 0.0 };
        (1.0 - r) * (1.0 + r) * (1.0 + nb * p)
    };
    radial_profile_max(g, n, COUNTEREXAMPLE_NORM_TOL).value
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdScan {
    pub t: f64,
    #[serde(rename = "threshold_N")]
    pub threshold_n: u64,
    /// Largest `n < N` with `‖f_n‖_ℬ > 1 + NORM_OK_SLACK`, if any.
    pub last_failing_n: Option<usize>,
    /// Smallest `n ≥ 2` with `‖f_n‖_ℬ ≤ 1 + NORM_OK_SLACK`, if any below `N`.
    pub first_ok_n: Option<usize>,
    /// Number of `n` in `[2, N)` whose norm test fails.
    pub failing_count: usize,
    /// The onset values are observations, not theorems.
    pub empirical: bool,
}

/// Checks `‖f_n‖_ℬ ≤ 1` for every `n` in `[2, N(t))`.
pub fn counterexample_scan(t: f64) -> Result<ThresholdScan> {
    let threshold = threshold_n(t)?;
    let upper = usize::try_from(threshold)
        .ok()
        .filter(|&n| n <= MAX_COUNTEREXAMPLE_N)
        .ok_or(Error::OutOfRange {
            name: "t",
            value: t,
            expected: "threshold N(t) <= 1e7",
        })?;
    let ok: Vec<(usize, bool)> = (2..upper)
        .into_par_iter()
        .map(|n| {
            let b = counterexample_coefficient(t, n).expect("n >= 2, t < 1");
            (n, two_term_norm(n, b) <= 1.0 + NORM_OK_SLACK)
        })
        .collect();
    Ok(ThresholdScan {
        t,
        threshold_n: threshold,
        last_failing_n: ok.iter().rev().find(|p| !p.1).map(|p| p.0),
        first_ok_n: ok.iter().find(|p| p.1).map(|p| p.0),
        failing_count: ok.iter().filter(|p| !p.1).count(),
        empirical: true,
    })
}

/// `max_{[0,1]} n b r^{n−3}(1 − r²) = n b ((n−3)/(n−1))^{(n−3)/2} · 2/(n−1)`,
/// with `0⁰ = 1` at `n = 3`.
pub fn hmax_closed_form(n: usize, b: f64) -> Result<f64> {
    check_range("n", n as f64, n >= 3, "n >= 3")?;
    check_range("b", b, b > 0.0, "b > 0")?;
    let nf = n as f64;
    let power = if n == 3 {
        1.0
    } else {
        ((nf - 3.0) / (nf - 1.0)).powf((nf - 3.0) / 2.0)
    };
    Ok(nf * b * power * 2.0 / (nf - 1.0))
}

/// `(1/n)[(n+1)²(1 + 2/(n−1))^{n−1} − (n−1)²(1 + 2/(n−3))^{n−3}]`, which the
/// threshold argument bounds by `8e²`.
///
/// Both terms grow like `e² n²`; the difference is formed as
/// `B · expm1(ln A − ln B)` to keep the cancellation harmless.
pub fn proof_bound_lhs(n: usize) -> Result<f64> {
    check_range("n", n as f64, n >= 4, "n >= 4")?;
    let nf = n as f64;
    let la = 2.0 * (nf + 1.0).ln() + (nf - 1.0) * (2.0 / (nf - 1.0)).ln_1p();
    let lb = 2.0 * (nf - 1.0).ln() + (nf - 3.0) * (2.0 / (nf - 3.0)).ln_1p();
    let d = 2.0 * (2.0 / (nf - 1.0)).ln_1p() + (nf - 1.0) * (2.0 / (nf - 1.0)).ln_1p()
        - (nf - 3.0) * (2.0 / (nf - 3.0)).ln_1p();
    debug_assert!((d - (la - lb)).abs() <= 1e-9 * la.abs());
    Ok(lb.exp() * d.exp_m1() / nf)
}

fn check_chain_params(n: usize, epsilon: f64) -> Result<()> {
    check_range("n", n as f64, n >= 2, "n >= 2")?;
    check_range(
        "epsilon",
        epsilon,
        epsilon > 0.0 && epsilon <= 0.2,
        "0 < epsilon <= 1/5",
    )
}

/// `(f, F, p_n)` with `p_n = z + B_n z^n` and `f, F = p_n ∓ (ε/(2n−1)) z^{2n−1}`.
pub fn example42_build(
    n: usize,
    epsilon: f64,
) -> Result<(Coefficients, Coefficients, Coefficients)> {
    check_chain_params(n, epsilon)?;
    let bn = coefficient_bound(n)?;
    let len = 2 * n - 1;
    let tail = epsilon / len as f64;
    let with_tail = |c: f64| {
        let mut v = vec![Complex64::new(0.0, 0.0); len];
        v[0] = Complex64::new(1.0, 0.0);
        v[n - 1] = Complex64::new(bn, 0.0);
        v[len - 1] = Complex64::new(c, 0.0);
        Coefficients::new(v)
    };
    let p = with_tail(0.0)?.resized(n);
    Ok((with_tail(-tail)?, with_tail(tail)?, p))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Example42Report {
    pub n: usize,
    pub epsilon: f64,
    pub norm_f: NormResult,
    pub norm_p: NormResult,
    #[serde(rename = "norm_F")]
    pub norm_big_f: NormResult,
    pub chain_ok: bool,
}

impl Example42Report {
    /// Smallest gap in `‖F‖ > ‖p_n‖ > ‖f‖` divided by the combined error
    /// bounds of the two norms involved (infinite when both bounds vanish).
    pub fn chain_margin_ratio(&self) -> f64 {
        let ratio = |hi: &NormResult, lo: &NormResult| {
            let gap = hi.value - lo.value;
            let err = hi.error_bound + lo.error_bound;
            if err > 0.0 {
                gap / err
            } else if gap > 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            }
        };
        ratio(&self.norm_big_f, &self.norm_p).min(ratio(&self.norm_p, &self.norm_f))
    }
}

/// Certifies `‖F‖_ℬ > ‖p_n‖_ℬ > ‖f‖_ℬ` and `‖p_n‖_ℬ > 1`.
pub fn example42_verify(n: usize, epsilon: f64) -> Result<Example42Report> {
    let (f, big_f, p) = example42_build(n, epsilon)?;
    let norm_f = seminorm_general(&f, CHAIN_GENERAL_TOL)?;
    let norm_p = seminorm_radial(&p, CHAIN_RADIAL_TOL)?;
    let norm_big_f = seminorm_radial(&big_f, CHAIN_RADIAL_TOL)?;
    let chain_ok = norm_big_f.value - norm_p.value > norm_big_f.error_bound + norm_p.error_bound
        && norm_p.value - norm_f.value > norm_p.error_bound + norm_f.error_bound
        && norm_p.value - norm_p.error_bound > 1.0;
    Ok(Example42Report {
        n,
        epsilon,
        norm_f,
        norm_p,
        norm_big_f,
        chain_ok,
    })
}

fn check_u_params(n: usize, epsilon: f64, r_pow: f64) -> Result<()> {
    check_range("n", n as f64, n >= 2, "n >= 2")?;
    check_range("epsilon", epsilon, epsilon >= 0.0, "epsilon >= 0")?;
    check_range("R", r_pow, (0.0..=1.0).contains(&r_pow), "0 <= R <= 1")
}

/// `u(x) = −4εR²x² + 2nB_nR(1 − εR²)x + 1 + n²B_n²R² + 2εR² + ε²R⁴`.
///
/// With `R = r^{n−1}` and `z = re^{is}`,
/// `u(cos((n−1)s)) = |1 + nB_n z^{n−1} − ε z^{2n−2}|²`.
pub fn u_value(x: f64, n: usize, epsilon: f64, r_pow: f64) -> Result<f64> {
    check_range("x", x, (-1.0..=1.0).contains(&x), "-1 <= x <= 1")?;
    check_u_params(n, epsilon, r_pow)?;
    let nb = n as f64 * coefficient_bound(n)?;
    let (e, r2) = (epsilon, r_pow * r_pow);
    Ok(-4.0 * e * r2 * x * x
        + 2.0 * nb * r_pow * (1.0 - e * r2) * x
        + 1.0
        + nb * nb * r2
        + 2.0 * e * r2
        + e * e * r2 * r2)
}

/// `u(1)` in the factored form `(1 + nB_nR)² + εR²(εR² − 2 − 2nB_nR)`.
pub fn u_at_one(n: usize, epsilon: f64, r_pow: f64) -> Result<f64> {
    check_u_params(n, epsilon, r_pow)?;
    let nbr = n as f64 * coefficient_bound(n)? * r_pow;
    let er2 = epsilon * r_pow * r_pow;
    Ok((1.0 + nbr).powi(2) + er2 * (er2 - 2.0 - 2.0 * nbr))
}
