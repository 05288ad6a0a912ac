//! Monotone coupling of two trajectories on shared Poisson clocks.
//!
//! This path uses the uniformised construction directly: per nest and
//! target state there is a conceptual rate-`c*` clock, and a flip happens
//! when the attached uniform falls below `c_i / c*`. Both trajectories read
//! the same clocks and uniforms, which preserves the componentwise partial
//! order whenever the upper trajectory's birth law dominates the lower's on
//! ordered configurations. Exchange clocks always ring (no-op swaps
//! included) and swap both trajectories at once.

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use super::rates::{birth_rate, decoupled_contact_rate};
use super::{config_le, IpsError, Model, Sex, SiteState, Stirring, Torus, DEATH_RATE};
use crate::rng::{exp_time, stream_rng};

/// Birth law of one side of a coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoupleLaw {
    /// One of the two-sex mechanisms at the given rate.
    Model { model: Model, lambda: f64 },
    /// The decoupled per-sex contact process at rate `lambda |N| n_sex`,
    /// which dominates both two-sex mechanisms at the same `lambda`.
    Decoupled { lambda: f64 },
}

impl CoupleLaw {
    fn birth(&self, torus: &Torus, config: &[SiteState], x: usize, sex: Sex) -> f64 {
        match *self {
            CoupleLaw::Model { model, lambda } => birth_rate(model, torus, config, x, sex, lambda),
            CoupleLaw::Decoupled { lambda } => {
                decoupled_contact_rate(torus, config, x, sex, lambda)
            }
        }
    }

    /// Supremum over configurations of the per-nest flip rate.
    fn sup_rate(&self, hood: usize) -> f64 {
        let h = hood as f64;
        let birth_sup = match *self {
            CoupleLaw::Model {
                model: Model::G1,
                lambda,
            } => lambda * h * h,
            CoupleLaw::Model {
                model: Model::G2,
                lambda,
            } => lambda * h,
            CoupleLaw::Decoupled { lambda } => lambda * h * h,
        };
        birth_sup.max(DEATH_RATE)
    }
}

/// Two configurations driven by the same clocks, with `lower <= upper`.
#[derive(Debug, Clone)]
pub struct CoupledPair {
    pub lower: Vec<SiteState>,
    pub upper: Vec<SiteState>,
    pub time: f64,
}

impl CoupledPair {
    pub fn new(lower: Vec<SiteState>, upper: Vec<SiteState>) -> Result<Self, IpsError> {
        if !config_le(&lower, &upper) {
            return Err(IpsError::InvalidParams(
                "coupled pair must start ordered lower <= upper".into(),
            ));
        }
        Ok(CoupledPair {
            lower,
            upper,
            time: 0.0,
        })
    }

    pub fn ordered(&self) -> bool {
        config_le(&self.lower, &self.upper)
    }
}

/// Shared-clock runner for one coupled pair.
#[derive(Debug)]
pub struct CoupledRunner {
    torus: Torus,
    lower_law: CoupleLaw,
    upper_law: CoupleLaw,
    stirring: Stirring,
    cstar: f64,
    edges: Vec<(usize, usize)>,
    rng: ChaCha12Rng,
}

impl CoupledRunner {
    /// The caller is responsible for choosing a dominating pair of laws
    /// (same mechanism with `lambda_lo <= lambda_hi`, or any mechanism under
    /// its decoupled majorant); an order violation at run time is reported
    /// as an error rather than silently ignored.
    pub fn new(
        torus: Torus,
        lower_law: CoupleLaw,
        upper_law: CoupleLaw,
        stirring: Stirring,
        seed: u64,
        stream: u64,
    ) -> Self {
        let hood = torus.hood_size();
        let cstar = lower_law.sup_rate(hood).max(upper_law.sup_rate(hood));
        let edges = (0..torus.n_sites())
            .flat_map(|x| torus.owned_edges(x).iter().map(move |&y| (x, y)).collect::<Vec<_>>())
            .collect();
        CoupledRunner {
            torus,
            lower_law,
            upper_law,
            stirring,
            cstar,
            edges,
            rng: stream_rng(seed, stream),
        }
    }

    /// Drive the pair to `t_end` on shared clocks, checking the order after
    /// every applied event.
    pub fn run(&mut self, pair: &mut CoupledPair, t_end: f64) -> Result<(), IpsError> {
        assert!(t_end >= pair.time);
        let n = self.torus.n_sites();
        // One conceptual rate-c* clock per (site, target state, nest).
        let demographic_total = 4.0 * n as f64 * self.cstar;
        let channels = match self.stirring {
            Stirring::None => 0.0,
            Stirring::LilyPad { .. } => 1.0,
            Stirring::Individual { .. } => 2.0,
        };
        let stir_total = self.stirring.rate() * channels * self.edges.len() as f64;
        let total = demographic_total + stir_total;
        if total <= 0.0 {
            pair.time = t_end;
            return Ok(());
        }
        loop {
            let dt = exp_time(&mut self.rng, total);
            if pair.time + dt > t_end {
                pair.time = t_end;
                return Ok(());
            }
            pair.time += dt;
            if self.rng.gen::<f64>() * total < demographic_total {
                let x = self.rng.gen_range(0..n);
                let sex = if self.rng.gen::<bool>() { Sex::Male } else { Sex::Female };
                let to_occupied = self.rng.gen::<bool>();
                let u: f64 = self.rng.gen();
                self.flip(pair, x, sex, to_occupied, u)?;
            } else {
                let (a, b) = self.edges[self.rng.gen_range(0..self.edges.len())];
                match self.stirring {
                    Stirring::LilyPad { .. } => {
                        pair.lower.swap(a, b);
                        pair.upper.swap(a, b);
                    }
                    Stirring::Individual { .. } => {
                        let sex = if self.rng.gen::<bool>() { Sex::Male } else { Sex::Female };
                        for cfg in [&mut pair.lower, &mut pair.upper] {
                            let va = cfg[a].occupied(sex);
                            let vb = cfg[b].occupied(sex);
                            cfg[a] = cfg[a].with(sex, vb);
                            cfg[b] = cfg[b].with(sex, va);
                        }
                    }
                    Stirring::None => unreachable!(),
                }
                self.check_sites(pair, &[a, b])?;
            }
        }
    }

    fn flip(
        &self,
        pair: &mut CoupledPair,
        x: usize,
        sex: Sex,
        to_occupied: bool,
        u: f64,
    ) -> Result<(), IpsError> {
        {
            let rate = self.nest_rate(self.lower_law, &pair.lower, x, sex, to_occupied);
            if u <= rate / self.cstar {
                pair.lower[x] = pair.lower[x].with(sex, to_occupied);
            }
        }
        {
            let rate = self.nest_rate(self.upper_law, &pair.upper, x, sex, to_occupied);
            if u <= rate / self.cstar {
                pair.upper[x] = pair.upper[x].with(sex, to_occupied);
            }
        }
        self.check_sites(pair, &[x])
    }

    fn nest_rate(
        &self,
        law: CoupleLaw,
        config: &[SiteState],
        x: usize,
        sex: Sex,
        to_occupied: bool,
    ) -> f64 {
        if to_occupied {
            law.birth(&self.torus, config, x, sex)
        } else if config[x].occupied(sex) {
            DEATH_RATE
        } else {
            0.0
        }
    }

    fn check_sites(&self, pair: &CoupledPair, sites: &[usize]) -> Result<(), IpsError> {
        for &s in sites {
            if !pair.lower[s].le(pair.upper[s]) {
                return Err(IpsError::CouplingViolation {
                    site: s,
                    time: pair.time,
                });
            }
        }
        Ok(())
    }
}

/// Random configuration pair ordered by construction: `upper` has each nest
/// occupied with probability `p_upper`, and `lower` keeps each occupied nest
/// of `upper` with probability `p_keep`.
pub fn random_ordered_pair<R: Rng>(
    torus: &Torus,
    p_upper: f64,
    p_keep: f64,
    rng: &mut R,
) -> (Vec<SiteState>, Vec<SiteState>) {
    let mut lower = Vec::with_capacity(torus.n_sites());
    let mut upper = Vec::with_capacity(torus.n_sites());
    for _ in 0..torus.n_sites() {
        let mut up = SiteState::EMPTY;
        let mut lo = SiteState::EMPTY;
        for sex in Sex::BOTH {
            if rng.gen::<f64>() < p_upper {
                up = up.with(sex, true);
                if rng.gen::<f64>() < p_keep {
                    lo = lo.with(sex, true);
                }
            }
        }
        lower.push(lo);
        upper.push(up);
    }
    (lower, upper)
}
