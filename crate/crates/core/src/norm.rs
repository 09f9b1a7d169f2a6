//! Bloch seminorm `sup (1 − |z|²)|f′(z)|` and the sharp coefficient bounds `B_n`.
//!
//! Two evaluation paths are provided. [`seminorm_general`] works for any
//! complex polynomial by scanning a polar grid and refining the best cells
//! with nested golden-section searches. [`seminorm_radial`] is restricted to
//! nonnegative real coefficients, where `|f′(z)| ≤ f′(|z|)` puts the supremum
//! on the positive radius, and reduces to a 1-D problem.
//!
//! Both paths return a [`NormResult`] whose `witness` reproduces `value`
//! exactly and whose `error_bound` estimates the gap to the true supremum.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::maximize::{bracket_and_refine, golden_max, radial_nodes, Peak, R_MAX};
use crate::poly::{Coefficients, ComplexPoint, Poly};

pub const DEFAULT_GENERAL_TOL: f64 = 1e-8;
pub const DEFAULT_RADIAL_TOL: f64 = 1e-10;

const RADIAL_UNIFORM: usize = 256;
const MIN_ANGLES: usize = 64;
const MAX_RECENTER: usize = 16;
const GENERAL_CANDIDATES: usize = 6;
const RADIAL_CANDIDATES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormMethod {
    General,
    Radial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormResult {
    pub value: f64,
    #[serde(with = "pair")]
    pub witness: ComplexPoint,
    pub method: NormMethod,
    pub error_bound: f64,
}

mod pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// `(1 − |z|²)|f′(z)|`.
pub fn bloch_weight(derivative: &Poly, z: ComplexPoint) -> f64 {
    let r = z.norm();
    (1.0 - r) * (1.0 + r) * derivative.eval(z).norm()
}

fn check_tol(tol: f64) -> Result<()> {
    check_range("tol", tol, tol > 0.0, "tol > 0")
}

fn zero_result(method: NormMethod) -> NormResult {
    NormResult {
        value: 0.0,
        witness: Complex64::new(0.0, 0.0),
        method,
        error_bound: 0.0,
    }
}

fn finish(result: NormResult, tol: f64) -> Result<NormResult> {
    if result.error_bound <= tol {
        Ok(result)
    } else {
        Err(Error::NoConvergence {
            tol,
            best: Box::new(result),
        })
    }
}

/// Bloch seminorm of an arbitrary complex polynomial.
pub fn seminorm_general(f: &Coefficients, tol: f64) -> Result<NormResult> {
    check_tol(tol)?;
    let degree = f.degree();
    if degree == 0 {
        return Ok(zero_result(NormMethod::General));
    }
    let df = Poly::new(f.derivative().as_slice()[..degree].to_vec());

    let m = MIN_ANGLES.max(8 * (degree - 1));
    let step = 2.0 * PI / m as f64;
    let units: Vec<Complex64> = (0..m)
        .map(|j| Complex64::from_polar(1.0, j as f64 * step))
        .collect();
    let radii = radial_nodes(RADIAL_UNIFORM, degree, 32);
    let nr = radii.len();

    let mut grid = vec![0.0; nr * m];
    for (i, &r) in radii.iter().enumerate() {
        let w = (1.0 - r) * (1.0 + r);
        let row = &mut grid[i * m..(i + 1) * m];
        for (cell, u) in row.iter_mut().zip(&units) {
            *cell = w * df.eval(u * r).norm();
        }
    }

    let at = |i: usize, j: usize| grid[i * m + j];
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for i in 0..nr {
        for j in 0..m {
            let v = at(i, j);
            let is_max = (i.saturating_sub(1)..=(i + 1).min(nr - 1)).all(|ii| {
                [(j + m - 1) % m, j, (j + 1) % m]
                    .iter()
                    .all(|&jj| at(ii, jj) <= v)
            });
            if is_max {
                cells.push((i, j));
            }
        }
    }
    cells.sort_by(|a, b| at(b.0, b.1).total_cmp(&at(a.0, a.1)).then(a.cmp(b)));
    cells.truncate(GENERAL_CANDIDATES);

    let weight = |r: f64, theta: f64| {
        let w = (1.0 - r) * (1.0 + r);
        w * df.eval(Complex64::from_polar(r, theta)).norm()
    };
    let inner_tol = tol / 4.0;
    let outer_tol = tol / 2.0;

    let mut best: Option<NormResult> = None;
    for (i, j) in cells {
        let half_r = 0.5 * (radii[(i + 1).min(nr - 1)] - radii[i.saturating_sub(1)]);
        let (mut r_c, mut theta_c) = (radii[i], j as f64 * step);
        let mut refined = None;
        // A grid maximum need not bracket the continuous one: the ridge can
        // leave the cell between grid angles. Re-center while the optimum
        // sits on an edge of the box.
        for _ in 0..MAX_RECENTER {
            let r_lo = (r_c - half_r).max(0.0);
            let r_hi = (r_c + half_r).min(R_MAX);
            let inner = |r: f64| {
                golden_max(
                    |th| weight(r, th),
                    theta_c - step,
                    theta_c + step,
                    inner_tol,
                )
            };
            let outer = golden_max(|r| inner(r).value, r_lo, r_hi, outer_tol);
            let in_best = inner(outer.x);
            let edge_r = (outer.x == r_lo && r_lo > 0.0) || (outer.x == r_hi && r_hi < R_MAX);
            let edge_theta = in_best.x == theta_c - step || in_best.x == theta_c + step;
            refined = Some((outer, in_best));
            if !(edge_r || edge_theta) {
                break;
            }
            r_c = outer.x;
            theta_c = in_best.x;
        }
        let (outer, in_best) = refined.expect("at least one refinement pass");
        let mut candidate = NormResult {
            value: in_best.value,
            witness: Complex64::from_polar(outer.x, in_best.x.rem_euclid(2.0 * PI)),
            method: NormMethod::General,
            error_bound: outer.spread + in_best.spread,
        };
        let cell_value = at(i, j);
        if cell_value > candidate.value {
            candidate.value = cell_value;
            candidate.witness = radii[i] * units[j];
        }
        best = Some(match best {
            Some(b) if prefer(&b, &candidate) => b,
            _ => candidate,
        });
    }
    finish(best.expect("grid has at least one maximum"), tol)
}

// Keep `a` over `b`: larger value, then smaller radius, then smaller angle.
fn prefer(a: &NormResult, b: &NormResult) -> bool {
    if a.value != b.value {
        return a.value > b.value;
    }
    let (ra, rb) = (a.witness.norm(), b.witness.norm());
    if ra != rb {
        return ra < rb;
    }
    a.witness.arg().rem_euclid(2.0 * PI) <= b.witness.arg().rem_euclid(2.0 * PI)
}

/// Maximum of a radial profile `r ↦ g(r)` on `[0, R_MAX]`.
///
/// `degree` sets how deep the sampling reaches toward `r = 1`.
pub fn radial_profile_max(g: impl Fn(f64) -> f64, degree: usize, tol: f64) -> Peak {
    let nodes = radial_nodes(RADIAL_UNIFORM, degree, 64);
    let mut peak = bracket_and_refine(g, &nodes, RADIAL_CANDIDATES, tol);
    peak.x = peak.x.clamp(0.0, R_MAX);
    peak
}

/// Bloch seminorm for nonnegative real coefficients, evaluated on `[0, 1)`.
pub fn seminorm_radial(f: &Coefficients, tol: f64) -> Result<NormResult> {
    check_tol(tol)?;
    if let Some((index, c)) = f.first_non_nonnegative() {
        return Err(Error::NotNonNegative {
            index,
            re: c.re,
            im: c.im,
        });
    }
    let degree = f.degree();
    if degree == 0 {
        return Ok(zero_result(NormMethod::Radial));
    }
    let df = f.derivative();
    let peak = radial_profile_max(|r| (1.0 - r) * (1.0 + r) * df.eval_real(r), degree, tol);
    finish(
        NormResult {
            value: peak.value,
            witness: Complex64::new(peak.x, 0.0),
            method: NormMethod::Radial,
            error_bound: peak.spread,
        },
        tol,
    )
}

/// Radial path for nonnegative real coefficients, general path otherwise.
pub fn seminorm(f: &Coefficients, tol: f64) -> Result<NormResult> {
    if f.is_nonnegative_real() {
        seminorm_radial(f, tol)
    } else {
        seminorm_general(f, tol)
    }
}

/// `S(x) = Σ_{k≥1} x^{2k} / (2k(2k+1))`, so that `ln B_n = 1 − ln 2 − S(1/n)`.
///
/// Summed without cancellation; `S(1/n)` is strictly decreasing in `n` even
/// where consecutive `B_n` agree to the last bit.
pub fn log_bound_deficit(n: usize) -> Result<f64> {
    check_range("n", n as f64, n >= 1, "n >= 1")?;
    if n == 1 {
        return Ok(1.0 - LN_2);
    }
    let x2 = (1.0 / n as f64).powi(2);
    let mut power = x2;
    let mut sum = 0.0;
    for k in 1..200u32 {
        let kk = 2.0 * k as f64;
        let term = power / (kk * (kk + 1.0));
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
        power *= x2;
    }
    Ok(sum)
}

/// Sharp bound `B_n = sup{|b_n| : ‖f‖_ℬ ≤ 1}`, with `B_1 = 1`.
pub fn coefficient_bound(n: usize) -> Result<f64> {
    check_range("n", n as f64, n >= 1, "n >= 1")?;
    Ok(match n {
        1 => 1.0,
        2..=1000 => {
            let nf = n as f64;
            (nf + 1.0) / (2.0 * nf) * ((nf + 1.0) / (nf - 1.0)).powf((nf - 1.0) / 2.0)
        }
        _ => (1.0 - LN_2 - log_bound_deficit(n)?).exp(),
    })
}

/// Radius `sqrt((n−1)/(n+1))` where `‖B_n z^n‖_ℬ` is attained.
pub fn attainment_radius(n: usize) -> Result<f64> {
    check_range("n", n as f64, n >= 2, "n >= 2")?;
    let nf = n as f64;
    Ok(((nf - 1.0) / (nf + 1.0)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(c: &[f64]) -> Coefficients {
        Coefficients::from_real(c).unwrap()
    }

    fn monomial_bn(n: usize) -> Coefficients {
        let bn = coefficient_bound(n).unwrap();
        Coefficients::monomial(n, Complex64::new(bn, 0.0)).unwrap()
    }

    // Independent 1-D oracle: dense scan of (1 − r²)(1 + 2 c r) plus a Newton
    // step is not needed here, the stationary point is explicit.
    fn two_term_stationary(c: f64) -> f64 {
        let r = (-1.0 + (1.0 + 3.0 * c * c).sqrt()) / (3.0 * c);
        (1.0 - r * r) * (1.0 + c * r)
    }

    #[test]
    fn identity_has_unit_norm_at_origin() {
        let f = real(&[1.0]);
        for res in [
            seminorm_general(&f, 1e-8).unwrap(),
            seminorm_radial(&f, 1e-10).unwrap(),
        ] {
            assert!((res.value - 1.0).abs() <= 1e-12);
            assert!(res.witness.norm() < 1e-4);
        }
    }

    #[test]
    fn monomial_b5_general() {
        let res = seminorm_general(&monomial_bn(5), 1e-8).unwrap();
        assert!((res.value - 1.0).abs() <= 1e-8, "{}", res.value);
        assert!((res.witness.norm() - (4.0f64 / 6.0).sqrt()).abs() <= 1e-4);
    }

    #[test]
    fn z_plus_z2_general() {
        let res = seminorm_general(&real(&[1.0, 1.0]), 1e-8).unwrap();
        let r = (-1.0 + 13f64.sqrt()) / 6.0;
        let want = (1.0 - r * r) * (1.0 + 2.0 * r);
        assert!((res.value - want).abs() <= 1e-8);
        assert!((res.value - 1.5162).abs() <= 1e-4);
    }

    #[test]
    fn z_plus_b2_z2_radial() {
        let b2 = coefficient_bound(2).unwrap();
        let res = seminorm_radial(&real(&[1.0, b2]), 1e-10).unwrap();
        let want = two_term_stationary(2.0 * b2);
        assert!((res.value - want).abs() <= 1e-10);
        assert!((res.value - 1.7306).abs() <= 1e-4);
    }

    #[test]
    fn radial_unit_monomials() {
        for n in 2..=64 {
            let res = seminorm_radial(&monomial_bn(n), 1e-10).unwrap();
            assert!((res.value - 1.0).abs() <= 1e-10, "n={n}: {}", res.value);
        }
    }

    #[test]
    fn radial_homogeneity_example() {
        let res = seminorm_radial(&real(&[0.5]), 1e-10).unwrap();
        assert!((res.value - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn radial_rejects_signed_or_complex() {
        assert!(matches!(
            seminorm_radial(&real(&[1.0, -0.1]), 1e-10),
            Err(Error::NotNonNegative { index: 2, .. })
        ));
        let f = Coefficients::new(vec![Complex64::new(1.0, 1e-300)]).unwrap();
        assert!(seminorm_radial(&f, 1e-10).is_err());
    }

    #[test]
    fn zero_polynomial_has_zero_norm() {
        let z = real(&[0.0, 0.0]);
        assert_eq!(seminorm_general(&z, 1e-8).unwrap().value, 0.0);
        assert_eq!(seminorm_radial(&z, 1e-8).unwrap().value, 0.0);
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(seminorm_general(&real(&[1.0]), 0.0).is_err());
        assert!(seminorm_radial(&real(&[1.0]), f64::NAN).is_err());
    }

    #[test]
    fn witness_certifies_value() {
        let f = Coefficients::new(vec![
            Complex64::new(0.3, -0.2),
            Complex64::new(-0.5, 0.1),
            Complex64::new(0.2, 0.7),
        ])
        .unwrap();
        let res = seminorm_general(&f, 1e-10).unwrap();
        let at_witness = bloch_weight(&f.derivative(), res.witness);
        assert!((res.value - at_witness).abs() <= res.error_bound + 1e-15);
        assert!(res.witness.norm() < 1.0);
    }

    #[test]
    fn bound_examples() {
        assert_eq!(coefficient_bound(1).unwrap(), 1.0);
        assert!((coefficient_bound(3).unwrap() - 4.0 / 3.0).abs() <= 1e-15);
        assert!((coefficient_bound(2).unwrap() - 0.75 * 3f64.sqrt()).abs() <= 1e-15);
        assert!((coefficient_bound(2).unwrap() - 1.299_038_105_676_658).abs() <= 1e-12);
        assert!(coefficient_bound(0).is_err());
    }

    #[test]
    fn log_space_agrees_with_direct() {
        for n in 2..=1000usize {
            let direct = coefficient_bound(n).unwrap();
            let logspace = (1.0 - LN_2 - log_bound_deficit(n).unwrap()).exp();
            assert!((direct - logspace).abs() <= 1e-13 * direct, "n={n}");
        }
        assert!((log_bound_deficit(1).unwrap() - (1.0 - LN_2)).abs() < 1e-16);
    }

    #[test]
    fn attainment_radius_examples() {
        assert!((attainment_radius(2).unwrap() - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((attainment_radius(3).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(attainment_radius(1).is_err());
        let res = seminorm_radial(&monomial_bn(9), 1e-10).unwrap();
        assert!((res.witness.norm() - attainment_radius(9).unwrap()).abs() <= 1e-6);
    }

    #[test]
    fn norm_result_json_shape() {
        let res = NormResult {
            value: 1.0,
            witness: Complex64::new(0.5, -0.25),
            method: NormMethod::Radial,
            error_bound: 0.0,
        };
        let json = serde_json::to_string(&res).unwrap();
        assert_eq!(
            json,
            r#"{"value":1.0,"witness":[0.5,-0.25],"method":"radial","error_bound":0.0}"#
        );
        let back: NormResult = serde_json::from_str(&json).unwrap();
        assert_eq!(back, res);
    }
}
