//! Derivative-free pattern search for scale-invariant objectives.
//!
//! Polls `x ± δ d` over the coordinate basis and, when that fails, over one
//! random orthonormal basis before halving `δ`. Iterates are kept on the unit
//! sphere, which is harmless because the objective is invariant under
//! positive scaling.

use rand::Rng;

#[derive(Debug, Clone, Copy)]
pub struct CompassOptions {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_iters: usize,
    /// Project every trial point onto the nonnegative orthant.
    pub nonneg: bool,
}

impl Default for CompassOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.25,
            min_step: 1e-9,
            max_iters: 4000,
            nonneg: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CompassOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    /// True when the step shrank below `min_step` within `max_iters` polls.
    pub converged: bool,
}

fn normalize(x: &mut [f64]) -> bool {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 && norm.is_finite() {
        x.iter_mut().for_each(|v| *v /= norm);
        true
    } else {
        false
    }
}

/// Columns of the Householder reflection `I − 2 v vᵀ` for a random unit `v`.
fn random_basis(dim: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let mut v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    if !normalize(&mut v) {
        v = vec![0.0; dim];
        v[0] = 1.0;
    }
    (0..dim)
        .map(|j| {
            (0..dim)
                .map(|i| f64::from(u8::from(i == j)) - 2.0 * v[i] * v[j])
                .collect()
        })
        .collect()
}

struct Poller<'a, F> {
    objective: &'a mut F,
    nonneg: bool,
    evaluations: usize,
}

impl<F: FnMut(&[f64]) -> f64> Poller<'_, F> {
    /// Opportunistic poll over `±δ d` for each direction, starting at `start`.
    /// Returns the index of the first improving signed direction.
    fn poll(
        &mut self,
        x: &mut Vec<f64>,
        fx: &mut f64,
        step: f64,
        dirs: &[Vec<f64>],
        start: usize,
    ) -> Option<usize> {
        let count = 2 * dirs.len();
        let mut trial = vec![0.0; x.len()];
        for offset in 0..count {
            let s = (start + offset) % count;
            let sign = if s.is_multiple_of(2) { 1.0 } else { -1.0 };
            let d = &dirs[s / 2];
            for ((t, xi), di) in trial.iter_mut().zip(x.iter()).zip(d) {
                *t = xi + sign * step * di;
                if self.nonneg && *t < 0.0 {
                    *t = 0.0;
                }
            }
            if trial == *x || !normalize(&mut trial) {
                continue;
            }
            let value = (self.objective)(&trial);
            self.evaluations += 1;
            if value > *fx {
                x.copy_from_slice(&trial);
                *fx = value;
                return Some(s);
            }
        }
        None
    }
}

/// Maximizes `objective` starting from `x0`.
pub fn maximize(
    mut objective: impl FnMut(&[f64]) -> f64,
    x0: Vec<f64>,
    opts: CompassOptions,
    rng: &mut impl Rng,
) -> CompassOutcome {
    let dim = x0.len();
    let mut x = x0;
    if opts.nonneg {
        x.iter_mut().for_each(|v| *v = v.max(0.0));
    }
    normalize(&mut x);
    let mut fx = objective(&x);
    let coordinate: Vec<Vec<f64>> = (0..dim)
        .map(|j| (0..dim).map(|i| f64::from(u8::from(i == j))).collect())
        .collect();

    let mut poller = Poller {
        objective: &mut objective,
        nonneg: opts.nonneg,
        evaluations: 1,
    };
    let mut step = opts.initial_step;
    let mut start = 0;
    let mut iterations = 0;
    while step >= opts.min_step && iterations < opts.max_iters {
        iterations += 1;
        if let Some(s) = poller.poll(&mut x, &mut fx, step, &coordinate, start) {
            start = s;
            continue;
        }
        let rotated = random_basis(dim, rng);
        if poller.poll(&mut x, &mut fx, step, &rotated, 0).is_some() {
            continue;
        }
        step *= 0.5;
    }
    CompassOutcome {
        x,
        value: fx,
        iterations,
        evaluations: poller.evaluations,
        converged: step < opts.min_step,
    }
}
