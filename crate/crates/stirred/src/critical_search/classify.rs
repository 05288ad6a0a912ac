//! Front-tracking survival classification.

use crate::mean_field_pde::{
    stability_limit, sys10_fixed_points, sys11_roots, upper_fixed_state, Boundary, Grid, PdeError,
    PdeField, RdStepper, ReactionSpec, ReactionSystem,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Survives,
    Dies,
    Undecided,
}

/// Outcome of one classification run.
#[derive(Debug, Clone)]
pub struct SurvivalVerdict {
    pub verdict: Verdict,
    /// (time, rightmost threshold crossing of the monitored component);
    /// a crossing of `None` means the component sat below threshold
    /// everywhere.
    pub front_positions: Vec<(f64, Option<f64>)>,
    pub t_used: f64,
    pub sup_end: f64,
    pub threshold: f64,
}

/// Discretisation and decision parameters of a classification run.
#[derive(Debug, Clone)]
pub struct ClassifyConfig {
    pub dx: f64,
    /// Base horizon; a run that stays undecided is retried once with
    /// `horizon_max`.
    pub horizon: f64,
    pub horizon_max: f64,
    /// Half-width of the initial plateau. Below roughly the critical-nucleus
    /// width (which grows like log(1/|wave speed|)) a plateau can collapse
    /// even when fronts would advance, so this errs wide.
    pub bump_halfwidth: f64,
    /// Shoulder half-width of the smoothed indicator.
    pub bump_shoulder: f64,
    /// Extra room right of the plateau; the domain is `[0, bump_halfwidth +
    /// bump_shoulder + headroom]` with the left boundary acting as the
    /// symmetry plane of the full two-sided bump.
    pub headroom: f64,
    /// Fraction of the upper state used as the bump amplitude.
    pub amplitude: f64,
    /// Spacing of the front/sup samples used for verdicts and early exits.
    pub sample_dt: f64,
    /// Extinction means sup-norm below this fraction of the threshold.
    pub extinction_frac: f64,
    /// Early survive exit once the front advanced this many cells with a
    /// strictly increasing tail.
    pub early_advance_cells: f64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            dx: 0.1,
            horizon: 300.0,
            horizon_max: 4500.0,
            bump_halfwidth: 16.0,
            bump_shoulder: 1.0,
            headroom: 12.0,
            amplitude: 0.9,
            sample_dt: 1.0,
            extinction_frac: 0.2,
            early_advance_cells: 20.0,
        }
    }
}

impl ClassifyConfig {
    /// Cheaper settings for smoke tests; too coarse for the headline
    /// brackets.
    pub fn coarse() -> Self {
        ClassifyConfig {
            dx: 0.2,
            horizon: 150.0,
            horizon_max: 600.0,
            bump_halfwidth: 10.0,
            headroom: 10.0,
            ..Default::default()
        }
    }
}

/// Smoothed indicator shoulder: 0 below -l, 1 above l, C^1 in between.
fn shoulder(x: f64, l: f64) -> f64 {
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

/// Rightmost interpolated crossing of `threshold`, or `None` if the whole
/// profile sits below it.
fn front_position(u: &[f64], grid: &Grid, threshold: f64) -> Option<f64> {
    let n = u.len();
    for i in (0..n).rev() {
        if u[i] >= threshold {
            if i + 1 >= n {
                return Some(grid.x(i));
            }
            let (a, b) = (u[i], u[i + 1]);
            let frac = if a > b { (a - threshold) / (a - b) } else { 0.0 };
            return Some(grid.x(i) + frac * grid.dx);
        }
    }
    None
}

/// Threshold for front tracking: halfway between the unstable and stable
/// levels of the monitored component where those are known in closed form,
/// else half the bump amplitude.
fn tracking_threshold(spec: &ReactionSpec, bump_amp: f64) -> f64 {
    match spec.system {
        ReactionSystem::Sys11 => match sys11_roots(spec.beta()) {
            Ok((rho1, rho0)) => 0.5 * (rho1 + rho0),
            Err(_) => 0.5 * bump_amp,
        },
        ReactionSystem::Contact => {
            let beta = spec.beta();
            if beta > 1.0 {
                0.5 * (1.0 - 1.0 / beta)
            } else {
                0.5 * bump_amp
            }
        }
        ReactionSystem::Sys10 => match sys10_fixed_points(spec.c()) {
            Some(((_, v_minus), (_, v_plus))) => 0.5 * (v_minus + v_plus),
            None => 0.5 * bump_amp,
        },
        _ => 0.5 * bump_amp,
    }
}

/// Classify survival of a localised bump under the given reaction system.
///
/// The initial condition interpolates between the vacuum state and
/// `amplitude` times the upper equilibrium with the smoothed-indicator
/// profile; the run is symmetric about the left boundary.
pub fn classify_survival(
    spec: &ReactionSpec,
    cfg: &ClassifyConfig,
) -> Result<SurvivalVerdict, PdeError> {
    let verdict = run_once(spec, cfg, cfg.horizon)?;
    if verdict.verdict == Verdict::Undecided && cfg.horizon_max > cfg.horizon {
        return run_once(spec, cfg, cfg.horizon_max);
    }
    Ok(verdict)
}

fn run_once(spec: &ReactionSpec, cfg: &ClassifyConfig, horizon: f64) -> Result<SurvivalVerdict, PdeError> {
    let k = spec.n_components();
    let mon = spec.monitored_component();
    let upper = upper_fixed_state(spec).unwrap_or_else(|| spec.full_state());
    let vacuum = spec.vacuum_state();
    let bump_amp = cfg.amplitude * upper[mon] + (1.0 - cfg.amplitude) * vacuum[mon];
    let threshold = tracking_threshold(spec, bump_amp);
    let extinction = cfg.extinction_frac * threshold;

    let width = cfg.bump_halfwidth + cfg.bump_shoulder + cfg.headroom;
    let n = (width / cfg.dx).round() as usize + 1;
    let grid = Grid::line(n, cfg.dx, 0.0);
    let mut field = PdeField {
        grid,
        boundary: Boundary::Neumann,
        names: spec.component_names(),
        data: vec![vec![0.0; n]; k],
        time: 0.0,
    };
    for i in 0..n {
        let profile = shoulder(cfg.bump_halfwidth - grid.x(i), cfg.bump_shoulder);
        for c in 0..k {
            let target = cfg.amplitude * upper[c] + (1.0 - cfg.amplitude) * vacuum[c];
            field.data[c][i] = vacuum[c] + profile * (target - vacuum[c]);
        }
    }

    let dt = stability_limit(cfg.dx, 1);
    let mut stepper = RdStepper::new(*spec, dt, &field)?;
    let n_samples = (horizon / cfg.sample_dt).ceil() as usize + 1;
    let mut fronts: Vec<(f64, Option<f64>)> = Vec::with_capacity(n_samples);
    fronts.push((0.0, front_position(&field.data[mon], &field.grid, threshold)));
    let first_front = fronts[0].1;

    for s in 1..n_samples {
        let t_target = (s as f64 * cfg.sample_dt).min(horizon);
        stepper.run_until(&mut field, t_target)?;
        let sup = field.sup_norm(mon);
        let front = front_position(&field.data[mon], &field.grid, threshold);
        fronts.push((field.time, front));
        if sup < extinction {
            return Ok(SurvivalVerdict {
                verdict: Verdict::Dies,
                front_positions: fronts,
                t_used: field.time,
                sup_end: sup,
                threshold,
            });
        }
        // Early survive exit: advanced well beyond any relaxation transient
        // and still strictly moving. The sample cadence keeps the fastest
        // admissible fronts far from the right boundary when this fires.
        if let (Some(f0), Some(fnow)) = (first_front, front) {
            if fnow - f0 >= cfg.early_advance_cells * cfg.dx
                && strictly_increasing_tail(&fronts, 4)
            {
                return Ok(SurvivalVerdict {
                    verdict: Verdict::Survives,
                    front_positions: fronts,
                    t_used: field.time,
                    sup_end: sup,
                    threshold,
                });
            }
        }
    }

    let sup_end = field.sup_norm(mon);
    let verdict = final_verdict(&fronts, sup_end, extinction, cfg);
    Ok(SurvivalVerdict {
        verdict,
        front_positions: fronts,
        t_used: field.time,
        sup_end,
        threshold,
    })
}

fn strictly_increasing_tail(fronts: &[(f64, Option<f64>)], tail: usize) -> bool {
    if fronts.len() < tail {
        return false;
    }
    fronts[fronts.len() - tail..]
        .windows(2)
        .all(|w| match (w[0].1, w[1].1) {
            (Some(a), Some(b)) => b > a,
            _ => false,
        })
}

fn final_verdict(
    fronts: &[(f64, Option<f64>)],
    sup_end: f64,
    extinction: f64,
    cfg: &ClassifyConfig,
) -> Verdict {
    if sup_end < extinction {
        return Verdict::Dies;
    }
    // Survival: strictly increasing front across checkpoints spanning the
    // last half of the run, with a total advance of at least two cells.
    let n = fronts.len();
    let checks = [n / 2, (3 * n) / 4, n - 1];
    let vals: Vec<Option<f64>> = checks.iter().map(|&i| fronts[i].1).collect();
    if let (Some(a), Some(b), Some(c)) = (vals[0], vals[1], vals[2]) {
        let advanced = match (fronts[0].1, fronts[n - 1].1) {
            (Some(f0), Some(f1)) => f1 - f0,
            _ => 0.0,
        };
        if b > a && c > b && advanced >= 2.0 * cfg.dx {
            return Verdict::Survives;
        }
    }
    Verdict::Undecided
}
