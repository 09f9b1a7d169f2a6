//! One-dimensional bracketing and golden-section maximization.

/// Largest radius the refiners may probe.
pub const R_MAX: f64 = 1.0 - 1e-12;

const INV_PHI: f64 = 0.618_033_988_749_894_8;
const MAX_GOLDEN_ITERS: usize = 200;

/// A refined local maximum.
#[derive(Debug, Clone, Copy)]
pub struct Peak {
    pub x: f64,
    pub value: f64,
    /// Spread of the function values over the final bracket; used as the
    /// error estimate of `value`.
    pub spread: f64,
    pub converged: bool,
}

/// Golden-section maximization of `g` over `[a, b]`.
///
/// Stops once the values at the bracket ends and both probes agree to
/// within `tol`, or when the bracket collapses to rounding level.
pub fn golden_max(mut g: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> Peak {
    let mut fa = g(a);
    let mut fb = g(b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = g(c);
    let mut fd = g(d);

    let mut iters = 0;
    loop {
        let pts = [(a, fa), (c, fc), (d, fd), (b, fb)];
        let hi = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        let lo = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let spread = hi - lo;
        let width = b - a;
        let collapsed = width <= 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1e-300);
        if spread <= tol || collapsed || iters >= MAX_GOLDEN_ITERS {
            // first maximal point in ascending x order
            let k = pts.iter().position(|p| p.1 == hi).unwrap_or(1);
            let (mut x, mut value) = pts[k];
            if (1..=2).contains(&k) {
                if let Some(v) = parabola_vertex(pts[k - 1], pts[k], pts[k + 1]) {
                    let fv = g(v);
                    if fv > value {
                        x = v;
                        value = fv;
                    }
                }
            }
            return Peak {
                x,
                value,
                spread,
                converged: spread <= tol,
            };
        }
        iters += 1;
        if fc >= fd {
            b = d;
            fb = fd;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = g(c);
        } else {
            a = c;
            fa = fc;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = g(d);
        }
    }
}

/// Vertex of the parabola through three points, if it lies strictly between
/// the outer two and the parabola opens downward.
fn parabola_vertex(p0: (f64, f64), p1: (f64, f64), p2: (f64, f64)) -> Option<f64> {
    let (x0, f0) = p0;
    let (x1, f1) = p1;
    let (x2, f2) = p2;
    let num = (x1 - x0).powi(2) * (f1 - f2) - (x1 - x2).powi(2) * (f1 - f0);
    let den = (x1 - x0) * (f1 - f2) - (x1 - x2) * (f1 - f0);
    if den == 0.0 || !(den.is_finite() && num.is_finite()) {
        return None;
    }
    // curvature sign: a max needs f1 above the chord
    let chord = f0 + (f2 - f0) * (x1 - x0) / (x2 - x0);
    if f1 <= chord {
        return None;
    }
    let v = x1 - 0.5 * num / den;
    (v > x0 && v < x2).then_some(v)
}

/// Sample radii on `[0, R_MAX]`: a uniform grid plus a geometric tail
/// toward the boundary whose depth scales with the polynomial degree.
pub fn radial_nodes(uniform: usize, degree: usize, per_decade: usize) -> Vec<f64> {
    let mut nodes: Vec<f64> = (0..=uniform)
        .map(|i| (i as f64 / uniform as f64).min(R_MAX))
        .collect();
    let start = (uniform as f64).log10();
    let stop = (64.0 * (degree as f64 + 1.0)).log10().min(12.0);
    if stop > start {
        let steps = ((stop - start) * per_decade as f64).ceil() as usize;
        for s in 1..=steps {
            let e = start + (stop - start) * s as f64 / steps as f64;
            nodes.push((1.0 - 10f64.powf(-e)).min(R_MAX));
        }
    }
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    nodes
}

/// Indices of local maxima of `values`, best first (ties to the smaller index).
pub fn local_maxima(values: &[f64], keep: usize) -> Vec<usize> {
    let n = values.len();
    let mut idx: Vec<usize> = (0..n)
        .filter(|&i| {
            let v = values[i];
            (i == 0 || v >= values[i - 1]) && (i + 1 == n || v >= values[i + 1])
        })
        .collect();
    idx.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
    idx.truncate(keep);
    idx
}

/// Maximize `g` on sampled nodes, then refine the best local maxima by
/// golden section within their neighbouring nodes.
pub fn bracket_and_refine(g: impl Fn(f64) -> f64, nodes: &[f64], keep: usize, tol: f64) -> Peak {
    let values: Vec<f64> = nodes.iter().map(|&x| g(x)).collect();
    let mut best: Option<Peak> = None;
    for i in local_maxima(&values, keep) {
        let lo = nodes[i.saturating_sub(1)];
        let hi = nodes[(i + 1).min(nodes.len() - 1)];
        let mut peak = golden_max(&g, lo, hi, tol);
        if values[i] > peak.value {
            peak.x = nodes[i];
            peak.value = values[i];
        }
        best = match best {
            Some(b) if b.value > peak.value || (b.value == peak.value && b.x <= peak.x) => Some(b),
            _ => Some(peak),
        };
    }
    best.expect("at least one node")
}
