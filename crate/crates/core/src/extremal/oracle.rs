//! Exhaustive grid oracle for the smallest instances.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Result};
use crate::maximize::{bracket_and_refine, radial_nodes};

const BOX: f64 = 1.5;
const ORACLE_NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub n: usize,
    pub t: f64,
    pub grid_step: f64,
    pub value: f64,
    pub argmax: Vec<f64>,
    /// True for `n = 3`: the reduction of complex coefficients to nonnegative
    /// reals is exact only when at most two coefficients are nonzero.
    pub lower_bound_only: bool,
}

/// Grid maximum of `F_n^t(f)/‖f‖_ℬ²` over nonnegative `(b_1, …, b_n) ∈ [0, 1.5]^n`.
///
/// The norm is computed directly from the radial profile
/// `(1 − r²) Σ k b_k r^{k−1}`, independent of the search code path.
pub fn brute_force_oracle(n: usize, t: f64, grid_step: f64) -> Result<OracleResult> {
    check_range("n", n as f64, (2..=3).contains(&n), "n in {2, 3}")?;
    check_range("t", t, t >= 0.0, "t >= 0")?;
    check_range(
        "grid_step",
        grid_step,
        grid_step > 0.0 && grid_step <= 1e-2,
        "0 < grid_step <= 1e-2",
    )?;
    let m = (BOX / grid_step + 1e-9).floor() as usize;
    let nodes = radial_nodes(256, n, 64);
    let weights: Vec<f64> = (1..=n).map(|k| (k as f64).powf(t)).collect();

    let value_at = |b: &[f64]| -> f64 {
        let functional: f64 = b.iter().zip(&weights).map(|(x, w)| w * x * x).sum();
        if functional == 0.0 {
            return f64::NEG_INFINITY;
        }
        let profile = |r: f64| {
            let mut d = 0.0;
            for (i, &x) in b.iter().enumerate().rev() {
                d = d * r + (i + 1) as f64 * x;
            }
            (1.0 - r * r) * d
        };
        let norm = bracket_and_refine(profile, &nodes, 4, ORACLE_NORM_TOL).value;
        functional / (norm * norm)
    };

    let rows: Vec<(f64, Vec<f64>)> = (0..=m)
        .into_par_iter()
        .map(|i| {
            let mut best = (f64::NEG_INFINITY, Vec::new());
            let mut b = vec![0.0; n];
            b[0] = i as f64 * grid_step;
            let inner = if n == 2 { 1 } else { m + 1 };
            for j in 0..inner {
                if n == 3 {
                    b[1] = j as f64 * grid_step;
                }
                for l in 0..=m {
                    b[n - 1] = l as f64 * grid_step;
                    let v = value_at(&b);
                    if v > best.0 {
                        best = (v, b.clone());
                    }
                }
            }
            best
        })
        .collect();
    let (value, argmax) = rows
        .into_iter()
        .fold((f64::NEG_INFINITY, Vec::new()), |acc, row| {
            if row.0 > acc.0 {
                row
            } else {
                acc
            }
        });

    Ok(OracleResult {
        n,
        t,
        grid_step,
        value,
        argmax,
        lower_bound_only: n == 3,
    })
}
