//! Discrete heat propagator: convolution with the sampled Gaussian kernel
//! of variance 2s, truncated at eight standard deviations, renormalised to
//! unit mass, with reflecting (zero-flux) ends.

/// Sampled heat kernel weights for time `s` and spacing `dx`, normalised to
/// sum exactly to one. The kernel radius is `ceil(8 sigma / dx)` cells with
/// `sigma = sqrt(2 s)`.
pub fn heat_kernel_weights(s: f64, dx: f64) -> Vec<f64> {
    assert!(s > 0.0 && dx > 0.0);
    assert!(
        dx <= s.sqrt() / 10.0,
        "dx = {dx} too coarse to resolve the kernel for s = {s}"
    );
    let sigma = (2.0 * s).sqrt();
    let radius = (8.0 * sigma / dx).ceil() as usize;
    let mut w: Vec<f64> = (0..=2 * radius)
        .map(|j| {
            let y = (j as f64 - radius as f64) * dx;
            (-y * y / (4.0 * s)).exp()
        })
        .collect();
    let total: f64 = w.iter().sum();
    for x in w.iter_mut() {
        *x /= total;
    }
    w
}

/// Apply the discrete propagator once. Out-of-range indices reflect about
/// the half-sample boundary, which makes the matrix doubly stochastic and
/// exactly mass preserving.
pub fn heat_step(u: &[f64], s: f64, dx: f64) -> Vec<f64> {
    let w = heat_kernel_weights(s, dx);
    let radius = (w.len() - 1) / 2;
    let n = u.len() as isize;
    let fold = |mut idx: isize| -> usize {
        loop {
            if idx < 0 {
                idx = -idx - 1;
            } else if idx >= n {
                idx = 2 * n - 1 - idx;
            } else {
                return idx as usize;
            }
        }
    };
    (0..u.len())
        .map(|i| {
            w.iter()
                .enumerate()
                .map(|(j, &wj)| wj * u[fold(i as isize + j as isize - radius as isize)])
                .sum()
        })
        .collect()
}
