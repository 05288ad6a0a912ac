//! Density observables and the upper-invariant-measure decay experiment.

use super::engine::Simulator;
use super::{IpsError, IpsParams, Sex, SiteState};

/// `(occupied fraction, doubly-occupied fraction)` of a configuration.
pub fn densities(config: &[SiteState]) -> (f64, f64) {
    let n = config.len() as f64;
    let any = config.iter().filter(|s| s.any()).count() as f64 / n;
    let both = config.iter().filter(|s| s.both()).count() as f64 / n;
    (any, both)
}

/// One grid point of the decay experiment.
#[derive(Debug, Clone, Copy)]
pub struct DecayPoint {
    pub time: f64,
    /// Estimate of P(male nest at a fixed site is empty), averaged over
    /// sites (the all-occupied start is translation invariant) and replicas.
    pub p_male_empty: f64,
    /// Plain occupied-site density, for qualitative checks.
    pub density_any: f64,
}

/// Start from the all-(1,1) configuration and estimate the empty-nest
/// probability on a fixed time grid, averaged over `replicas` independent
/// trajectories. The estimated function is increasing in time up to Monte
/// Carlo noise.
pub fn run_decay_experiment(
    params: &IpsParams,
    t_grid: &[f64],
    replicas: usize,
    seed: u64,
) -> Result<Vec<DecayPoint>, IpsError> {
    params.validate()?;
    assert!(!t_grid.is_empty() && replicas > 0);
    let mut empty_acc = vec![0.0f64; t_grid.len()];
    let mut any_acc = vec![0.0f64; t_grid.len()];
    for rep in 0..replicas {
        let mut sim = Simulator::from_all_both(params.clone(), seed, rep as u64)?;
        let mut prev_t = 0.0;
        for (i, &t) in t_grid.iter().enumerate() {
            assert!(t >= prev_t, "t_grid must be nondecreasing");
            sim.advance_to(t)?;
            prev_t = t;
            let n = sim.config().len() as f64;
            let empties = sim
                .config()
                .iter()
                .filter(|s| !s.occupied(Sex::Male))
                .count() as f64;
            empty_acc[i] += empties / n;
            let (any, _) = densities(sim.config());
            any_acc[i] += any;
        }
    }
    Ok(t_grid
        .iter()
        .enumerate()
        .map(|(i, &time)| DecayPoint {
            time,
            p_male_empty: empty_acc[i] / replicas as f64,
            density_any: any_acc[i] / replicas as f64,
        })
        .collect())
}
