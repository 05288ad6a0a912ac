//! Smoothed-indicator profiles used by the expansion lemmas.

/// C^1 ramp: 0 below -l, 1 above l, two parabolic arcs in between, point
/// symmetric about (0, 1/2). Its second derivative is +-1/l^2.
pub fn bump_h(x: f64, l: f64) -> f64 {
    assert!(l > 0.0);
    if x < -l {
        0.0
    } else if x <= 0.0 {
        0.5 * ((x + l) / l).powi(2)
    } else if x <= l {
        1.0 - 0.5 * ((l - x) / l).powi(2)
    } else {
        1.0
    }
}

/// Smoothed indicator of [-L, L]: 1 on [-L+l, L-l], ramps over the
/// transition regions [-L-l, -L+l] and [L-l, L+l], 0 outside.
pub fn bump_f0(x: f64, big_l: f64, l: f64) -> f64 {
    assert!(big_l > l && l > 0.0);
    if x < 0.0 {
        return bump_f0(-x, big_l, l);
    }
    if x <= big_l - l {
        1.0
    } else if x <= big_l + l {
        bump_h(big_l - x, l)
    } else {
        0.0
    }
}

/// The profile with its transition regions translated outward by
/// `delta1 * s`: the same shape around the widened plateau.
pub fn bump_f_s(x: f64, big_l: f64, l: f64, delta1: f64, s: f64) -> f64 {
    bump_f0(x, big_l + delta1 * s, l)
}

/// The lifted-and-truncated profile: f0 + m s inside (-L-l-s, L+l+s), zero
/// outside.
pub fn bump_f_hat(x: f64, big_l: f64, l: f64, m: f64, s: f64) -> f64 {
    if x.abs() < big_l + l + s {
        bump_f0(x, big_l, l) + m * s
    } else {
        0.0
    }
}
