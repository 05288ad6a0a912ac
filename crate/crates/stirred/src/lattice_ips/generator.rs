//! Exact generator matrices on tiny tori and the matrix-exponential oracle.
//!
//! State spaces are the full products {0,1}^2 per site (4^sites states) for
//! the two-sex chain and {0,1,2} per site (3^sites) for the count
//! projection. Transient solutions use uniformisation, which keeps matrix
//! exponentials of generators stochastic and accurate to near machine
//! precision for the small rate scales used in tests.

use nalgebra::{DMatrix, DVector};

use super::rates::{birth_rate, zeta_rates};
use super::{IpsError, IpsParams, Sex, SiteState, Stirring, Torus, DEATH_RATE};

const MAX_STATES: usize = 4096;

pub fn state_count(n_sites: usize) -> usize {
    4usize.pow(n_sites as u32)
}

/// Decode a two-sex state id into a configuration (2 bits per site).
pub fn state_to_config(state: usize, n_sites: usize) -> Vec<SiteState> {
    (0..n_sites)
        .map(|i| SiteState::from_code((state >> (2 * i)) & 3))
        .collect()
}

pub fn config_to_state(config: &[SiteState]) -> usize {
    config
        .iter()
        .enumerate()
        .map(|(i, s)| s.code() << (2 * i))
        .sum()
}

/// Decode a count-projection state id (base 3, one digit per site).
pub fn zeta_state_to_config(state: usize, n_sites: usize) -> Vec<u8> {
    let mut s = state;
    (0..n_sites)
        .map(|_| {
            let c = (s % 3) as u8;
            s /= 3;
            c
        })
        .collect()
}

pub fn zeta_config_to_state(counts: &[u8]) -> usize {
    counts
        .iter()
        .rev()
        .fold(0usize, |acc, &c| acc * 3 + c as usize)
}

/// Full generator matrix of the two-sex chain for the given parameters.
///
/// Row `s` holds the rates out of state `s`; rows sum to zero.
pub fn exact_generator_matrix(params: &IpsParams) -> Result<DMatrix<f64>, IpsError> {
    params.validate()?;
    let torus = Torus::new(params.torus_side, params.dim);
    let n_sites = torus.n_sites();
    if state_count(n_sites) > MAX_STATES {
        return Err(IpsError::StateSpaceTooLarge { sites: n_sites });
    }
    let n_states = state_count(n_sites);
    let mut q = DMatrix::<f64>::zeros(n_states, n_states);
    let stir = params.stirring.rate();
    for s in 0..n_states {
        let config = state_to_config(s, n_sites);
        let mut add = |target: Vec<SiteState>, rate: f64| {
            if rate > 0.0 {
                let t = config_to_state(&target);
                debug_assert_ne!(t, s);
                q[(s, t)] += rate;
                q[(s, s)] -= rate;
            }
        };
        for x in 0..n_sites {
            for sex in Sex::BOTH {
                if config[x].occupied(sex) {
                    let mut c2 = config.clone();
                    c2[x] = c2[x].with(sex, false);
                    add(c2, DEATH_RATE);
                } else {
                    let r = birth_rate(params.model, &torus, &config, x, sex, params.lambda);
                    if r > 0.0 {
                        let mut c2 = config.clone();
                        c2[x] = c2[x].with(sex, true);
                        add(c2, r);
                    }
                }
            }
            if stir > 0.0 {
                for &y in torus.owned_edges(x) {
                    match params.stirring {
                        Stirring::LilyPad { .. } => {
                            if config[x] != config[y] {
                                let mut c2 = config.clone();
                                c2.swap(x, y);
                                add(c2, stir);
                            }
                        }
                        Stirring::Individual { .. } => {
                            for sex in Sex::BOTH {
                                let vx = config[x].occupied(sex);
                                let vy = config[y].occupied(sex);
                                if vx != vy {
                                    let mut c2 = config.clone();
                                    c2[x] = c2[x].with(sex, vy);
                                    c2[y] = c2[y].with(sex, vx);
                                    add(c2, stir);
                                }
                            }
                        }
                        Stirring::None => {}
                    }
                }
            }
        }
    }
    Ok(q)
}

/// Generator of the count-projection chain. Defined for lily-pad stirring
/// (whole-pair exchange) or no stirring; individual stirring does not
/// project onto per-site counts.
pub fn zeta_generator_matrix(params: &IpsParams) -> Result<DMatrix<f64>, IpsError> {
    params.validate()?;
    if matches!(params.stirring, Stirring::Individual { .. }) {
        return Err(IpsError::InvalidParams(
            "count projection is not Markov under individual stirring".into(),
        ));
    }
    let torus = Torus::new(params.torus_side, params.dim);
    let n_sites = torus.n_sites();
    let n_states = 3usize.pow(n_sites as u32);
    if n_states > MAX_STATES {
        return Err(IpsError::StateSpaceTooLarge { sites: n_sites });
    }
    let mut q = DMatrix::<f64>::zeros(n_states, n_states);
    let stir = params.stirring.rate();
    for s in 0..n_states {
        let counts = zeta_state_to_config(s, n_sites);
        let mut add = |target: Vec<u8>, rate: f64| {
            if rate > 0.0 {
                let t = zeta_config_to_state(&target);
                q[(s, t)] += rate;
                q[(s, s)] -= rate;
            }
        };
        for x in 0..n_sites {
            let table = zeta_rates(&torus, &counts, x, params.lambda);
            match counts[x] {
                0 => {
                    let mut c2 = counts.clone();
                    c2[x] = 1;
                    add(c2, table.up_from_0);
                }
                1 => {
                    let mut down = counts.clone();
                    down[x] = 0;
                    add(down, table.down_from_1);
                    let mut up = counts.clone();
                    up[x] = 2;
                    add(up, table.up_from_1);
                }
                2 => {
                    let mut down = counts.clone();
                    down[x] = 1;
                    add(down, table.down_from_2);
                }
                _ => unreachable!(),
            }
            if stir > 0.0 {
                for &y in torus.owned_edges(x) {
                    if counts[x] != counts[y] {
                        let mut c2 = counts.clone();
                        c2.swap(x, y);
                        add(c2, stir);
                    }
                }
            }
        }
    }
    Ok(q)
}

/// Uniformisation order sufficient to drop the Poisson tail below ~1e-16.
fn uniformisation_terms(rate_t: f64) -> usize {
    (rate_t + 40.0 * rate_t.sqrt() + 40.0).ceil() as usize
}

/// `p0^T e^{Q t}` by uniformisation.
pub fn transient_distribution(q: &DMatrix<f64>, p0: &DVector<f64>, t: f64) -> DVector<f64> {
    let n = q.nrows();
    let lambda = (0..n).map(|i| -q[(i, i)]).fold(0.0f64, f64::max);
    if lambda * t == 0.0 {
        return p0.clone();
    }
    // P = I + Q/lambda, row-stochastic.
    let p_mat = DMatrix::<f64>::identity(n, n) + q / lambda;
    let terms = uniformisation_terms(lambda * t);
    let mut acc = DVector::<f64>::zeros(n);
    let mut cur = p0.clone();
    // Poisson(lambda t) weights built up iteratively.
    let mut log_w = -lambda * t;
    let mut w = log_w.exp();
    for k in 0..=terms {
        if k > 0 {
            cur = p_mat.transpose() * cur;
            w *= lambda * t / k as f64;
            if w == 0.0 && log_w < -700.0 {
                // Underflow guard: recompute the weight in log space.
                log_w += (lambda * t / k as f64).ln();
                w = log_w.exp();
            }
        }
        acc += &cur * w;
    }
    acc
}

/// `e^{Q t}` by uniformisation (matrix version).
pub fn expm(q: &DMatrix<f64>, t: f64) -> DMatrix<f64> {
    let n = q.nrows();
    let lambda = (0..n).map(|i| -q[(i, i)]).fold(0.0f64, f64::max);
    if lambda * t == 0.0 {
        return DMatrix::identity(n, n);
    }
    let p_mat = DMatrix::<f64>::identity(n, n) + q / lambda;
    let terms = uniformisation_terms(lambda * t);
    let mut acc = DMatrix::<f64>::zeros(n, n);
    let mut cur = DMatrix::<f64>::identity(n, n);
    let mut w = (-lambda * t).exp();
    for k in 0..=terms {
        if k > 0 {
            cur = &cur * &p_mat;
            w *= lambda * t / k as f64;
        }
        acc += &cur * w;
    }
    acc
}

/// Total-variation distance between two distributions.
pub fn tv_distance(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p
        .iter()
        .zip(q)
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
}

/// Monte Carlo distribution over full states at time `t`, starting from
/// `initial`, over `replicas` trajectories.
pub fn mc_state_distribution(
    params: &IpsParams,
    initial: &[SiteState],
    t: f64,
    replicas: usize,
    seed: u64,
) -> Result<Vec<f64>, IpsError> {
    let n_sites = initial.len();
    let mut counts = vec![0u64; state_count(n_sites)];
    for rep in 0..replicas {
        let mut sim =
            super::engine::Simulator::new(params.clone(), initial.to_vec(), seed, rep as u64)?;
        sim.advance_to(t)?;
        counts[config_to_state(sim.config())] += 1;
    }
    Ok(counts
        .into_iter()
        .map(|c| c as f64 / replicas as f64)
        .collect())
}
