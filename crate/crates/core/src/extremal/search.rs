//! Multi-start estimation of `M_n^t = sup{F_n^t(f) : ‖f‖_ℬ ≤ 1}`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::compass::{self, CompassOptions};
use super::objective::{gauge_normalize, marty_residual};
use crate::error::{check_range, Error, Result};
use crate::functionals::{crude_bound, functional_value, FunctionalSpec};
use crate::norm::{coefficient_bound, seminorm_general, seminorm_radial, NormResult};
use crate::poly::Coefficients;

/// Norm tolerance inside the optimizer loop.
pub const SEARCH_NORM_TOL: f64 = 1e-8;
/// Norm tolerance for re-certifying restart results.
pub const CERTIFY_NORM_TOL: f64 = 1e-10;

const MIXING_WEIGHTS: [f64; 3] = [0.1, 0.5, 0.9];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n: usize,
    pub t: f64,
    pub degree_cap: usize,
    pub restarts: usize,
    pub nonneg: bool,
    pub seed: u64,
    pub tol: f64,
    pub max_iters: usize,
}

impl SearchConfig {
    /// Defaults: `D = n + 2` (or `n` when `nonneg`), 32 restarts, seed 0.
    pub fn new(n: usize, t: f64, nonneg: bool) -> Self {
        Self {
            n,
            t,
            degree_cap: if nonneg { n } else { n + 2 },
            restarts: 32,
            nonneg,
            seed: 0,
            tol: 1e-8,
            max_iters: 4000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        FunctionalSpec::new(self.n, self.t)?;
        check_range(
            "degree_cap",
            self.degree_cap as f64,
            self.degree_cap >= self.n,
            "degree_cap >= n",
        )?;
        check_range(
            "restarts",
            self.restarts as f64,
            self.restarts >= 1,
            "restarts >= 1",
        )?;
        check_range("tol", self.tol, self.tol > 0.0, "tol > 0")?;
        check_range(
            "max_iters",
            self.max_iters as f64,
            self.max_iters >= 1,
            "max_iters >= 1",
        )?;
        Ok(())
    }

    fn spec(&self) -> FunctionalSpec {
        FunctionalSpec {
            n: self.n,
            t: self.t,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestartTrace {
    pub restart: usize,
    pub start: String,
    pub objective: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchResult {
    pub n: usize,
    pub t: f64,
    pub objective: f64,
    #[serde(rename = "coeffs", with = "coeff_pairs")]
    pub best: Coefficients,
    pub marty_residual: f64,
    pub tail_mass: f64,
    /// `objective − n^t B_n²`.
    pub vs_conjectured: f64,
    /// `objective − n^n/(n−1)^{n−1}`, reported for `t = 1`, `n ≥ 2`.
    pub vs_crude: Option<f64>,
    pub trace: Vec<RestartTrace>,
}

mod coeff_pairs {
    use crate::poly::Coefficients;
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(f: &Coefficients, s: S) -> Result<S::Ok, S::Error> {
        f.to_pairs().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Coefficients, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Coefficients::from_pairs(&pairs).map_err(D::Error::custom)
    }
}

impl SearchResult {
    /// `|b_n|` of the reported extremal candidate.
    pub fn leading_modulus(&self) -> f64 {
        self.best.coeff(self.n).norm()
    }

    /// `Σ_{k≠n} |b_k|²` of the reported candidate.
    pub fn off_target_mass(&self) -> f64 {
        (1..=self.best.len())
            .filter(|&k| k != self.n)
            .map(|k| self.best.coeff(k).norm_sqr())
            .sum()
    }
}

struct Layout {
    dim: usize,
    nonneg: bool,
}

impl Layout {
    fn to_coeffs(&self, x: &[f64]) -> Coefficients {
        let coeffs = if self.nonneg {
            x.iter().map(|&v| Complex64::new(v, 0.0)).collect()
        } else {
            x.chunks_exact(2)
                .map(|p| Complex64::new(p[0], p[1]))
                .collect()
        };
        Coefficients::new(coeffs).expect("finite search point")
    }

    fn to_vector(&self, f: &Coefficients) -> Vec<f64> {
        if self.nonneg {
            f.as_slice().iter().map(|c| c.re).collect()
        } else {
            f.as_slice().iter().flat_map(|c| [c.re, c.im]).collect()
        }
    }

    fn random(&self, rng: &mut impl Rng) -> Vec<f64> {
        let lo = if self.nonneg { 0.0 } else { -1.0 };
        (0..self.dim).map(|_| rng.gen_range(lo..=1.0)).collect()
    }

    fn norm(&self, f: &Coefficients, tol: f64) -> Result<NormResult> {
        if self.nonneg {
            seminorm_radial(f, tol)
        } else {
            seminorm_general(f, tol)
        }
    }
}

/// Deterministic start points: `B_n z^n`, the mixtures `(1−w) z + w B_n z^n`,
/// then seeded random vectors.
fn start_points(config: &SearchConfig, layout: &Layout) -> Vec<(String, Option<Vec<f64>>)> {
    let d = config.degree_cap;
    let bn = coefficient_bound(config.n).expect("n >= 1");
    let mut starts = Vec::with_capacity(config.restarts);
    let monomial = Coefficients::monomial(config.n, Complex64::new(bn, 0.0))
        .expect("n >= 1")
        .resized(d);
    starts.push(("monomial".to_string(), Some(layout.to_vector(&monomial))));
    for w in MIXING_WEIGHTS {
        let mut c = vec![Complex64::new(0.0, 0.0); d];
        c[0] += 1.0 - w;
        c[config.n - 1] += w * bn;
        let f = Coefficients::new(c).expect("finite");
        starts.push((format!("mixture({w})"), Some(layout.to_vector(&f))));
    }
    while starts.len() < config.restarts {
        starts.push(("random".to_string(), None));
    }
    starts.truncate(config.restarts);
    starts
}

struct Candidate {
    coeffs: Coefficients,
    objective: f64,
    trace: RestartTrace,
}

fn certify(
    f: &Coefficients,
    config: &SearchConfig,
    layout: &Layout,
) -> Option<(Coefficients, f64)> {
    if f.is_zero() {
        return None;
    }
    let norm = layout.norm(f, CERTIFY_NORM_TOL).ok()?.value;
    let unit = gauge_normalize(&f.scaled(Complex64::new(1.0 / norm, 0.0))).ok()?;
    let unit_norm = layout.norm(&unit, CERTIFY_NORM_TOL).ok()?.value;
    let objective = functional_value(&unit, config.spec()) / (unit_norm * unit_norm);
    Some((unit, objective))
}

fn run_restart(
    index: usize,
    label: String,
    x0: Option<Vec<f64>>,
    config: &SearchConfig,
    layout: &Layout,
) -> Candidate {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(index as u64));
    let x0 = x0.unwrap_or_else(|| layout.random(&mut rng));
    let spec = config.spec();
    let objective = |x: &[f64]| {
        let f = layout.to_coeffs(x);
        if f.is_zero() {
            return f64::NEG_INFINITY;
        }
        match layout.norm(&f, SEARCH_NORM_TOL) {
            Ok(norm) if norm.value > 0.0 => functional_value(&f, spec) / (norm.value * norm.value),
            _ => f64::NEG_INFINITY,
        }
    };
    let opts = CompassOptions {
        max_iters: config.max_iters,
        nonneg: config.nonneg,
        ..Default::default()
    };
    let out = compass::maximize(objective, x0, opts, &mut rng);
    let raw = layout.to_coeffs(&out.x);
    let (coeffs, objective) = certify(&raw, config, layout).unwrap_or((raw, f64::NEG_INFINITY));
    Candidate {
        trace: RestartTrace {
            restart: index,
            start: label,
            objective,
            iterations: out.iterations,
            evaluations: out.evaluations,
            converged: out.converged,
        },
        coeffs,
        objective,
    }
}

fn magnitudes(f: &Coefficients) -> Vec<f64> {
    f.as_slice().iter().map(|c| c.norm()).collect()
}

/// Multi-start maximization of the Rayleigh quotient `F_n^t(f)/‖f‖_ℬ²`.
pub fn search_extremal(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let layout = Layout {
        dim: if config.nonneg {
            config.degree_cap
        } else {
            2 * config.degree_cap
        },
        nonneg: config.nonneg,
    };
    let candidates: Vec<Candidate> = start_points(config, &layout)
        .into_par_iter()
        .enumerate()
        .map(|(i, (label, x0))| run_restart(i, label, x0, config, &layout))
        .collect();

    let top = candidates
        .iter()
        .map(|c| c.objective)
        .fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return Err(Error::ZeroFunction);
    }
    let chosen = candidates
        .iter()
        .filter(|c| c.objective >= top - config.tol)
        .min_by(|a, b| {
            magnitudes(&a.coeffs)
                .iter()
                .zip(magnitudes(&b.coeffs).iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.trace.restart.cmp(&b.trace.restart))
        })
        .expect("top candidate exists");

    let best = chosen.coeffs.clone();
    let objective = chosen.objective;
    let n = config.n;
    let spec = config.spec();
    let tail_mass = (n + 1..=best.len()).map(|k| best.coeff(k).norm_sqr()).sum();
    let vs_crude = if config.t == 1.0 && n >= 2 {
        Some(objective - crude_bound(n)?)
    } else {
        None
    };
    Ok(SearchResult {
        n,
        t: config.t,
        objective,
        marty_residual: marty_residual(&best, n),
        tail_mass,
        vs_conjectured: objective - spec.conjectured_bound(),
        vs_crude,
        trace: candidates.into_iter().map(|c| c.trace).collect(),
        best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(SearchConfig::new(3, 1.0, false).validate().is_ok());
        let mut c = SearchConfig::new(3, 1.0, false);
        c.degree_cap = 2;
        assert!(c.validate().is_err());
        let mut c = SearchConfig::new(3, 1.0, true);
        c.restarts = 0;
        assert!(c.validate().is_err());
        let mut c = SearchConfig::new(3, -1.0, true);
        c.tol = 1e-8;
        assert!(c.validate().is_err());
    }

    #[test]
    fn start_set_always_contains_monomial() {
        let mut config = SearchConfig::new(4, 1.0, false);
        config.restarts = 1;
        let layout = Layout {
            dim: 12,
            nonneg: false,
        };
        let starts = start_points(&config, &layout);
        assert_eq!(starts.len(), 1);
        assert_eq!(starts[0].0, "monomial");
        config.restarts = 6;
        let starts = start_points(&config, &layout);
        let labels: Vec<_> = starts.iter().map(|s| s.0.as_str()).collect();
        assert_eq!(
            labels,
            [
                "monomial",
                "mixture(0.1)",
                "mixture(0.5)",
                "mixture(0.9)",
                "random",
                "random"
            ]
        );
    }

    #[test]
    fn nonneg_search_small_case() {
        let mut config = SearchConfig::new(3, 1.0, true);
        config.restarts = 6;
        let res = search_extremal(&config).unwrap();
        let b3 = coefficient_bound(3).unwrap();
        assert!((res.objective - 3.0 * b3 * b3).abs() <= 1e-8);
        assert!(res.off_target_mass() <= 1e-12);
        assert_eq!(res.marty_residual, 0.0);
        assert_eq!(res.tail_mass, 0.0);
        assert_eq!(res.trace.len(), 6);
    }

    #[test]
    fn search_result_json_fields() {
        let mut config = SearchConfig::new(2, 1.0, true);
        config.restarts = 2;
        let res = search_extremal(&config).unwrap();
        let v = serde_json::to_value(&res).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        for k in [
            "n",
            "t",
            "objective",
            "coeffs",
            "marty_residual",
            "tail_mass",
            "vs_conjectured",
            "vs_crude",
            "trace",
        ] {
            assert!(keys.iter().any(|x| x == k), "missing {k}");
        }
        let back: SearchResult = serde_json::from_value(v).unwrap();
        assert_eq!(back, res);
    }
}
