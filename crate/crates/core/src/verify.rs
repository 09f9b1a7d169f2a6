//! Property suites over every module, run with fixed seeds.

use std::f64::consts::E;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::{
    counterexample_scan, counterexample_verify, example42_build, example42_verify,
    hmax_closed_form, proof_bound_lhs, threshold_n, u_at_one, u_value, NORM_OK_SLACK,
};
use crate::error::{Error, Result};
use crate::extremal::{lemma_bound_check, lemma_perturbation, search_extremal, SearchConfig};
use crate::functionals::{
    crude_bound, functional_value, parseval_margin, ratio_to_conjectured, FunctionalSpec,
};
use crate::maximize::{bracket_and_refine, golden_max};
use crate::norm::{coefficient_bound, seminorm_radial};
use crate::poly::{marty_first_order, mobius_recenter, Coefficients, Mobius};
use crate::sampling::{normalized_samples, random_polynomial};

pub const DEFAULT_SEED: u64 = 0;
pub const SAMPLE_COUNT: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Lemma,
    Prop41,
    Example42,
    Parseval,
    Counterexample,
    Marty,
}

impl Suite {
    pub const INDIVIDUAL: [Suite; 6] = [
        Suite::Lemma,
        Suite::Prop41,
        Suite::Example42,
        Suite::Parseval,
        Suite::Counterexample,
        Suite::Marty,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Lemma => "lemma",
            Suite::Prop41 => "prop41",
            Suite::Example42 => "example42",
            Suite::Parseval => "parseval",
            Suite::Counterexample => "counterexample",
            Suite::Marty => "marty",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Suite::All]
            .into_iter()
            .chain(Suite::INDIVIDUAL)
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Format(format!("unknown suite {s:?}")))
    }
}

/// One invariant. `margin` is the observed distance to the threshold,
/// positive when the invariant holds with room to spare.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub margin: f64,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, margin: f64, detail: String) -> Self {
        // keep margins JSON-representable
        let margin = if margin.is_nan() {
            f64::MIN
        } else {
            margin.clamp(f64::MIN, f64::MAX)
        };
        Self {
            name: name.to_string(),
            passed: passed && margin >= 0.0,
            margin,
            detail,
        }
    }

    /// Passes when `margin ≥ 0`.
    fn margin(name: &str, margin: f64, detail: String) -> Self {
        Self::new(name, true, margin, detail)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySummary {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Runs the selected suite (or all of them) with the default seeds.
pub fn verify_suites(suite: Suite) -> Result<VerifySummary> {
    let checks = match suite {
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::INDIVIDUAL {
                for mut c in run_suite(s)? {
                    c.name = format!("{}/{}", s.name(), c.name);
                    all.push(c);
                }
            }
            all
        }
        s => run_suite(s)?,
    };
    Ok(VerifySummary {
        suite,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn run_suite(suite: Suite) -> Result<Vec<Check>> {
    match suite {
        Suite::All => unreachable!("expanded by verify_suites"),
        Suite::Lemma => lemma_suite(),
        Suite::Prop41 => prop41_suite(),
        Suite::Example42 => example42_suite(),
        Suite::Parseval => parseval_suite(),
        Suite::Counterexample => counterexample_suite(),
        Suite::Marty => marty_suite(),
    }
}

fn min_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::INFINITY, f64::min)
}

fn random_nonneg(rng: &mut impl Rng) -> Coefficients {
    let len = rng.gen_range(2..=8);
    let c: Vec<f64> = (0..len).map(|_| rng.gen_range(0.0..=1.0)).collect();
    Coefficients::from_real(&c).expect("finite draws")
}

fn lemma_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let s1 = lemma_bound_check(&Coefficients::from_real(&[1.0, 1.0])?, 2)?;
    let s2 = lemma_bound_check(&Coefficients::from_real(&[1.0, 0.2])?, 2)?;
    let err = (s1[0].slack + 0.75).abs().max((s2[0].slack - 0.05).abs());
    checks.push(Check::margin(
        "slack_examples",
        1e-15 - err,
        format!(
            "slack(z+z^2) = {}, slack(z+0.2z^2) = {}",
            s1[0].slack, s2[0].slack
        ),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let (mut delta_err, mut norm_slack, mut pointwise_slack) =
        (0.0f64, f64::INFINITY, f64::INFINITY);
    for _ in 0..200 {
        let f = random_nonneg(&mut rng);
        let n = f.len();
        let m = rng.gen_range(2..=n);
        let k = rng.gen_range(1..m);
        let (g, delta) = lemma_perturbation(&f, n, k, m)?;
        let spec = FunctionalSpec::new(n, 1.0)?;
        let direct = functional_value(&g, spec) - functional_value(&f, spec);
        delta_err = delta_err.max((delta - direct).abs() / functional_value(&f, spec).max(1.0));

        let nf = seminorm_radial(&f, 1e-12)?.value;
        let ng = seminorm_radial(&g, 1e-12)?.value;
        norm_slack = norm_slack.min(nf + 1e-10 - ng);

        let (df, dg) = (f.derivative(), g.derivative());
        for i in 0..=200 {
            let r = i as f64 / 200.0;
            pointwise_slack = pointwise_slack.min(df.eval_real(r) - dg.eval_real(r) + 1e-12);
        }
    }
    checks.push(Check::margin(
        "delta_identity",
        1e-12 - delta_err,
        format!("max relative |Δ − (F_n(g) − F_n(f))| = {delta_err:e} over 200 samples"),
    ));
    checks.push(Check::margin(
        "norm_monotonicity",
        norm_slack,
        format!("min ‖f‖ + 1e-10 − ‖g‖ = {norm_slack:e}"),
    ));
    checks.push(Check::margin(
        "pointwise_derivative",
        pointwise_slack,
        format!("min f'(r) − g'(r) + 1e-12 on a 201-point r grid = {pointwise_slack:e}"),
    ));

    let mut worst = f64::INFINITY;
    for n in 3..=5 {
        let mut config = SearchConfig::new(n, 1.0, true);
        config.restarts = 4;
        let res = search_extremal(&config)?;
        let slacks = lemma_bound_check(&res.best, n)?;
        worst = worst.min(min_of(slacks.iter().map(|s| s.slack)).min(0.0));
    }
    checks.push(Check::margin(
        "search_slacks",
        worst + 1e-8,
        format!(
            "min slack over nonneg search results n = 3..5 (empty lists count as 0): {worst:e}"
        ),
    ));
    Ok(checks)
}

fn prop41_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let (lo, hi) = (32.0 / 27.0, 4.0 / E);
    let (mut sandwich, mut step) = (f64::INFINITY, f64::INFINITY);
    let mut prev = 0.0;
    for n in 2..=10_000usize {
        let bn = coefficient_bound(n)?;
        let conj = n as f64 * bn * bn;
        let crude = crude_bound(n)?;
        sandwich = sandwich.min((crude / conj - lo).min(hi - crude / conj));
        let ratio = ratio_to_conjectured(n)?;
        if n > 2 {
            step = step.min(ratio - prev);
        }
        prev = ratio;
    }
    checks.push(Check::margin(
        "sandwich",
        sandwich + 1e-12,
        format!("min relative slack of (32/27) n B_n^2 <= crude <= (4/e) n B_n^2, n = 2..1e4: {sandwich:e}"),
    ));
    checks.push(Check::new(
        "ratio_increasing",
        step > 0.0,
        step,
        format!("min consecutive ratio increment for n = 2..1e4: {step:e}"),
    ));
    let r2 = ratio_to_conjectured(2)?;
    checks.push(Check::margin(
        "ratio_at_2",
        1e-12 - (r2 - lo).abs(),
        format!("ratio(2) = {r2:.17}"),
    ));
    let gap = (prev - hi).abs();
    checks.push(Check::margin(
        "ratio_limit",
        1e-4 - gap,
        format!("|ratio(1e4) − 4/e| = {gap:e}"),
    ));

    let samples = normalized_samples(SAMPLE_COUNT, DEFAULT_SEED)?;
    let (mut crude_slack, mut t2_slack) = (f64::INFINITY, f64::INFINITY);
    for f in &samples {
        let n = f.len();
        let bn = coefficient_bound(n)?;
        crude_slack = crude_slack
            .min(crude_bound(n)? + 1e-9 - functional_value(f, FunctionalSpec::new(n, 1.0)?));
        t2_slack = t2_slack.min(
            (n * n) as f64 * bn * bn + 1e-8 - functional_value(f, FunctionalSpec::new(n, 2.0)?),
        );
    }
    checks.push(Check::margin(
        "crude_bound_samples",
        crude_slack,
        format!(
            "min crude(n) + 1e-9 − F_n(f) over {SAMPLE_COUNT} unit-norm samples: {crude_slack:e}"
        ),
    ));
    checks.push(Check::margin(
        "t2_bound_samples",
        t2_slack,
        format!("min n^2 B_n^2 + 1e-8 − F_n^2(f) over {SAMPLE_COUNT} samples: {t2_slack:e}"),
    ));
    Ok(checks)
}

fn example42_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let (mut ratio, mut above_one, mut all_ok) = (f64::INFINITY, f64::INFINITY, true);
    for n in 2..=10 {
        for eps in [0.05, 0.1, 0.2] {
            let rep = example42_verify(n, eps)?;
            all_ok &= rep.chain_ok;
            ratio = ratio.min(rep.chain_margin_ratio());
            above_one = above_one.min(rep.norm_p.value - 1.0 - 1e-6);
        }
    }
    checks.push(Check::new(
        "norm_chain",
        all_ok,
        ratio - 10.0,
        format!("chain ‖F‖ > ‖p_n‖ > ‖f‖ for n = 2..10, eps in {{0.05, 0.1, 0.2}}; min gap/error ratio {ratio:e}"),
    ));
    checks.push(Check::margin(
        "p_above_one",
        above_one,
        format!("min ‖p_n‖ − 1 − 1e-6 = {above_one:e}"),
    ));
    let p2 = example42_verify(2, 0.2)?.norm_p.value;
    checks.push(Check::margin(
        "p2_value",
        1e-3 - (p2 - 1.7306).abs(),
        format!("‖p_2‖ = {p2}"),
    ));

    let mut slope = f64::INFINITY;
    for n in 2..=10 {
        for eps in [0.05, 0.1, 0.2] {
            for r_pow in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let mut prev = u_value(-1.0, n, eps, r_pow)?;
                for i in 1..=1000 {
                    let x = -1.0 + 2.0 * i as f64 / 1000.0;
                    let u = u_value(x.min(1.0), n, eps, r_pow)?;
                    slope = slope.min((u - prev) + 1e-12 * u.abs());
                    prev = u;
                }
            }
        }
    }
    checks.push(Check::margin(
        "u_monotone",
        slope,
        format!("min forward difference of u on a 1001-point grid: {slope:e}"),
    ));

    let mut circle_err = 0.0f64;
    for n in 2..=10 {
        let eps = 0.2;
        let (f, _, _) = example42_build(n, eps)?;
        let df = f.derivative();
        for r in [0.1, 0.3, 0.5, 0.7, 0.9, 0.97] {
            let g = |s: f64| df.eval(Complex64::from_polar(r, s)).norm_sqr();
            let m = 2048;
            let h = 2.0 * std::f64::consts::PI / m as f64;
            let best = (0..m).max_by(|&a, &b| g(a as f64 * h).total_cmp(&g(b as f64 * h)));
            let s0 = best.expect("non-empty grid") as f64 * h;
            let peak = golden_max(g, s0 - h, s0 + h, 1e-15);
            let want = u_at_one(n, eps, r.powi(n as i32 - 1))?;
            circle_err = circle_err.max((peak.value.max(g(s0)) - want).abs());
        }
    }
    checks.push(Check::margin(
        "circle_maximum",
        1e-9 - circle_err,
        format!("max |max_s |f'(re^(is))|^2 − u(1)| = {circle_err:e}"),
    ));
    Ok(checks)
}

fn parseval_suite() -> Result<Vec<Check>> {
    let samples = normalized_samples(SAMPLE_COUNT, DEFAULT_SEED)?;
    let mut worst = f64::INFINITY;
    for f in &samples {
        for i in 0..10 {
            worst = worst.min(parseval_margin(f, f.len(), i as f64 / 10.0)?);
        }
    }
    Ok(vec![Check::margin(
        "margins",
        worst + 1e-8,
        format!("min margin over {SAMPLE_COUNT} samples and rho in {{0, 0.1, …, 0.9}}: {worst:e}"),
    )])
}

fn counterexample_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut err = 0.0f64;
    for t in [0.0, 0.25, 0.5, 0.75] {
        for n in [2, 3, 10, 100, 219] {
            let rep = counterexample_verify(t, n)?;
            let want = 1.0 - (n as f64).powf(-(1.0 - t) / 2.0);
            err = err.max((rep.functional_margin - want).abs());
        }
    }
    checks.push(Check::margin(
        "margin_identity",
        1e-12 - err,
        format!("max |margin − (1 − n^(−eps))| = {err:e}"),
    ));

    let mut slack = f64::INFINITY;
    let mut all_ok = true;
    for t in [0.0, 0.25, 0.5] {
        let big_n = threshold_n(t)? as usize;
        for n in [big_n, big_n + 1, big_n + 17] {
            let rep = counterexample_verify(t, n)?;
            all_ok &= rep.norm_ok;
            slack = slack.min(1.0 + NORM_OK_SLACK - rep.norm.value);
        }
    }
    checks.push(Check::new(
        "threshold_soundness",
        all_ok,
        slack,
        format!("t in {{0, 0.25, 0.5}}, n in {{N, N+1, N+17}}: min 1 + 1e-10 − ‖f_n‖ = {slack:e}"),
    ));

    let nodes: Vec<f64> = (0..=2000).map(|i| i as f64 / 2000.0).collect();
    let mut rel = 0.0f64;
    for n in 3..=40 {
        for b in [0.1, 0.5, 1.3] {
            let e = (n - 3) as i32;
            let h = |r: f64| n as f64 * b * r.powi(e) * (1.0 - r * r);
            let numeric = bracket_and_refine(h, &nodes, 3, 1e-15).value;
            let closed = hmax_closed_form(n, b)?;
            rel = rel.max((numeric - closed).abs() / closed);
        }
    }
    checks.push(Check::margin(
        "hmax_agreement",
        1e-10 - rel,
        format!("max relative error vs 1-D maximization, n = 3..40: {rel:e}"),
    ));

    let cap = 8.0 * E * E;
    let mut worst = f64::NEG_INFINITY;
    for n in 219..=1_000_000 {
        worst = worst.max(proof_bound_lhs(n)?);
    }
    checks.push(Check::margin(
        "proof_bound",
        cap - worst,
        format!("max over n = 219..1e6 of the bound expression: {worst} (cap 8e^2 = {cap})"),
    ));

    let scan = counterexample_scan(0.0)?;
    let onset = scan.last_failing_n.map_or(1, |n| n + 1);
    checks.push(Check::new(
        "onset_t0",
        (onset as u64) <= scan.threshold_n,
        (scan.threshold_n - onset as u64) as f64,
        format!(
            "empirical: every n in [{onset}, {}) passes the norm test; threshold N = {}",
            scan.threshold_n, scan.threshold_n
        ),
    ));
    Ok(checks)
}

fn marty_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let h = 1e-5;
    let mut fd_err = 0.0f64;
    for _ in 0..100 {
        let f = random_polynomial(&mut rng);
        let k = rng.gen_range(1..=f.len());
        let u = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        let plus = mobius_recenter(&f, u * h, k)?.coeff(k).norm_sqr();
        let minus = mobius_recenter(&f, -u * h, k)?.coeff(k).norm_sqr();
        let fd = (plus - minus) / (2.0 * h);
        let want = 2.0 * (marty_first_order(&f, k) * u).re;
        fd_err = fd_err.max((fd - want).abs());
    }
    checks.push(Check::margin(
        "finite_difference",
        1e-5 - fd_err,
        format!("max |central difference − 2 Re(c_k u)| over 100 inputs: {fd_err:e}"),
    ));

    let mut mob_err = 0.0f64;
    let f = random_polynomial(&mut rng);
    let df = f.derivative();
    let disc = |rng: &mut ChaCha8Rng| {
        Complex64::from_polar(
            0.9 * rng.gen_range(0.0f64..1.0).sqrt(),
            rng.gen_range(0.0..std::f64::consts::TAU),
        )
    };
    for _ in 0..10_000 {
        let (z, lambda) = (disc(&mut rng), disc(&mut rng));
        let phi = Mobius::new(lambda)?;
        let w = phi.apply(z);
        let lhs = (1.0 - z.norm_sqr()) * (df.eval(w) * phi.derivative(z)).norm();
        let rhs = (1.0 - w.norm_sqr()) * df.eval(w).norm();
        mob_err = mob_err.max((lhs - rhs).abs() / rhs.max(1.0));
    }
    checks.push(Check::margin(
        "mobius_pointwise",
        1e-12 - mob_err,
        format!("max relative |(1−|z|²)|(f∘φ)'(z)| − (1−|φ(z)|²)|f'(φ(z))|| over 1e4 pairs: {mob_err:e}"),
    ));

    let mut residual = 0.0f64;
    for n in 2..=3 {
        let mut config = SearchConfig::new(n, 1.0, false);
        config.restarts = 4;
        residual = residual.max(search_extremal(&config)?.marty_residual);
    }
    checks.push(Check::margin(
        "search_residual",
        1e-6 - residual,
        format!("max marty_residual of general search bests, n = 2, 3: {residual:e}"),
    ));
    Ok(checks)
}
