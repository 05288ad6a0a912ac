//! Small numerical utilities shared across subsystems: a sum tree for
//! O(log n) categorical sampling, an adaptive Runge-Kutta integrator,
//! composite Simpson quadrature, bisection, and a chi-square quantile.

/// Binary sum tree over nonnegative leaf weights.
///
/// Supports point updates and sampling a leaf index proportional to its
/// weight in O(log n). Used by the event engine to pick the next site.
#[derive(Debug, Clone)]
pub struct SumTree {
    n: usize,
    // nodes[1] is the root; leaf i lives at nodes[base + i].
    nodes: Vec<f64>,
    base: usize,
}

impl SumTree {
    pub fn new(n: usize) -> Self {
        let base = n.next_power_of_two();
        SumTree {
            n,
            nodes: vec![0.0; 2 * base],
            base,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn total(&self) -> f64 {
        self.nodes[1]
    }

    pub fn get(&self, i: usize) -> f64 {
        self.nodes[self.base + i]
    }

    pub fn set(&mut self, i: usize, w: f64) {
        debug_assert!(i < self.n && w >= 0.0);
        let mut k = self.base + i;
        self.nodes[k] = w;
        k /= 2;
        while k >= 1 {
            self.nodes[k] = self.nodes[2 * k] + self.nodes[2 * k + 1];
            k /= 2;
        }
    }

    /// Leaf index whose cumulative weight interval contains `target`,
    /// together with the offset of `target` into that interval.
    ///
    /// `target` must lie in `[0, total())`.
    pub fn locate(&self, mut target: f64) -> (usize, f64) {
        let mut k = 1;
        while k < self.base {
            let left = self.nodes[2 * k];
            if target < left {
                k = 2 * k;
            } else {
                target -= left;
                k = 2 * k + 1;
            }
        }
        let mut i = k - self.base;
        // Guard against fp drift pushing us past the last active leaf.
        if i >= self.n {
            i = self.n - 1;
            target = 0.0;
        }
        (i, target)
    }
}

/// One adaptive Runge-Kutta-Fehlberg 4(5) step attempt for a planar ODE.
///
/// Returns (new_state, error_estimate).
fn rkf45_step(f: &dyn Fn(f64, f64) -> (f64, f64), y: (f64, f64), h: f64) -> ((f64, f64), f64) {
    let add = |a: (f64, f64), terms: &[(f64, (f64, f64))]| {
        let mut u = a.0;
        let mut v = a.1;
        for (c, k) in terms {
            u += c * k.0;
            v += c * k.1;
        }
        (u, v)
    };
    let k1 = f(y.0, y.1);
    let y2 = add(y, &[(h / 4.0, k1)]);
    let k2 = f(y2.0, y2.1);
    let y3 = add(y, &[(3.0 * h / 32.0, k1), (9.0 * h / 32.0, k2)]);
    let k3 = f(y3.0, y3.1);
    let y4 = add(
        y,
        &[
            (1932.0 * h / 2197.0, k1),
            (-7200.0 * h / 2197.0, k2),
            (7296.0 * h / 2197.0, k3),
        ],
    );
    let k4 = f(y4.0, y4.1);
    let y5 = add(
        y,
        &[
            (439.0 * h / 216.0, k1),
            (-8.0 * h, k2),
            (3680.0 * h / 513.0, k3),
            (-845.0 * h / 4104.0, k4),
        ],
    );
    let k5 = f(y5.0, y5.1);
    let y6 = add(
        y,
        &[
            (-8.0 * h / 27.0, k1),
            (2.0 * h, k2),
            (-3544.0 * h / 2565.0, k3),
            (1859.0 * h / 4104.0, k4),
            (-11.0 * h / 40.0, k5),
        ],
    );
    let k6 = f(y6.0, y6.1);

    let fifth = add(
        y,
        &[
            (16.0 * h / 135.0, k1),
            (6656.0 * h / 12825.0, k3),
            (28561.0 * h / 56430.0, k4),
            (-9.0 * h / 50.0, k5),
            (2.0 * h / 55.0, k6),
        ],
    );
    let fourth = add(
        y,
        &[
            (25.0 * h / 216.0, k1),
            (1408.0 * h / 2565.0, k3),
            (2197.0 * h / 4104.0, k4),
            (-h / 5.0, k5),
        ],
    );
    let err = ((fifth.0 - fourth.0).abs()).max((fifth.1 - fourth.1).abs());
    (fifth, err)
}

/// Integrate a planar ODE `y' = f(y)` over `[0, t]` with adaptive RKF45.
///
/// `rel_tol` controls the per-step error relative to `1 + |y|`.
pub fn integrate_planar(
    f: &dyn Fn(f64, f64) -> (f64, f64),
    y0: (f64, f64),
    t: f64,
    rel_tol: f64,
) -> (f64, f64) {
    integrate_planar_watch(f, y0, t, rel_tol, |_, _| true).0
}

/// As [`integrate_planar`] but with a per-step acceptance watch.
///
/// After each accepted step the watch is called with (elapsed, state); if it
/// returns false, integration stops and the function returns the state with
/// the elapsed time and `false`. Used to localise region crossings.
pub fn integrate_planar_watch(
    f: &dyn Fn(f64, f64) -> (f64, f64),
    y0: (f64, f64),
    t: f64,
    rel_tol: f64,
    mut watch: impl FnMut(f64, (f64, f64)) -> bool,
) -> ((f64, f64), f64, bool) {
    if t <= 0.0 {
        return (y0, 0.0, true);
    }
    let mut y = y0;
    let mut s = 0.0;
    let mut h = t;
    let min_h = t * 1e-14;
    loop {
        h = h.min(t - s);
        let (y_new, err) = rkf45_step(f, y, h);
        let scale = 1.0 + y.0.abs().max(y.1.abs());
        let tol = rel_tol * scale;
        if err <= tol || h <= min_h {
            s += h;
            y = y_new;
            if !watch(s, y) {
                return (y, s, false);
            }
            if s >= t - min_h {
                return (y, t, true);
            }
        }
        let ratio = if err > 0.0 { tol / err } else { 4.0 };
        h = (h * 0.9 * ratio.powf(0.2)).clamp(min_h, t - s);
    }
}

/// Composite Simpson quadrature of `f` over `[a, b]` with `panels` panels.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels >= 1);
    let n = 2 * panels;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Sign-change bisection for a continuous scalar function.
///
/// Requires `f(lo)` and `f(hi)` to have opposite signs; returns the midpoint
/// of the final bracket of width `<= tol`.
pub fn bisect_root(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo);
    let fhi = f(hi);
    assert!(
        flo * fhi <= 0.0,
        "bisect_root: no sign change on [{lo}, {hi}]"
    );
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if flo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    0.5 * (lo + hi)
}

/// Upper quantile of the chi-square distribution via the Wilson-Hilferty
/// cube approximation. Accurate to a few percent for df >= 3, which is
/// enough for the 99%-level goodness-of-fit gates used in tests.
pub fn chi2_quantile(df: usize, p: f64) -> f64 {
    let z = normal_quantile(p);
    let k = df as f64;
    let t = 1.0 - 2.0 / (9.0 * k) + z * (2.0 / (9.0 * k)).sqrt();
    k * t * t * t
}

/// Standard normal quantile (Acklam's rational approximation).
pub fn normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0);
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    let p_low = 0.02425;
    if p < p_low {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - p_low {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -normal_quantile(1.0 - p)
    }
}
