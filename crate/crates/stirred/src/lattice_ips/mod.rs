//! Exact continuous-time simulation of two-sex birth-death particle systems
//! on a finite torus, with optional rapid stirring, monotone couplings, the
//! count-projection rate table, a dominating decoupled process, and an exact
//! generator-matrix oracle for tiny lattices.
//!
//! Each lattice site carries two nests (one per sex); a nest holds at most
//! one particle. Particles die at rate 1 (time is measured in mean
//! lifetimes). Births into an empty nest require both sexes among the
//! nearest-neighbour ball around the target site, in one of two flavours:
//! the pair may live anywhere in the neighbourhood ([`Model::G1`]) or must
//! share a site ([`Model::G2`]).

mod coupled;
mod engine;
mod generator;
mod observables;
mod rates;

pub use coupled::{random_ordered_pair, CoupleLaw, CoupledPair, CoupledRunner};
pub use engine::{random_config, DensitySeries, EventKind, Simulator, StepOutcome};
pub use generator::{
    config_to_state, exact_generator_matrix, expm, mc_state_distribution, state_count,
    state_to_config, transient_distribution, tv_distance, zeta_config_to_state,
    zeta_generator_matrix, zeta_state_to_config,
};
pub use observables::{densities, run_decay_experiment, DecayPoint};
pub use rates::{
    birth_rate, birth_rate_g1, birth_rate_g2, decoupled_contact_rate, zeta_rates, ZetaRateTable,
};

use thiserror::Error;

/// Death rate of every occupied nest; fixing it to 1 sets the time unit to
/// the mean particle lifetime.
pub const DEATH_RATE: f64 = 1.0;

/// Relative tolerance for the incremental total-rate bookkeeping against a
/// from-scratch recomputation.
pub const RATE_BOOKKEEPING_RTOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum IpsError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("state space too large: {sites} sites gives 4^{sites} states (limit 4096)")]
    StateSpaceTooLarge { sites: usize },
    #[error("coupling order violated at site {site} at time {time}")]
    CouplingViolation { site: usize, time: f64 },
}

/// One of the two per-site nests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sex {
    Male,
    Female,
}

impl Sex {
    pub const BOTH: [Sex; 2] = [Sex::Male, Sex::Female];

    fn bit(self) -> u8 {
        match self {
            Sex::Male => 0b01,
            Sex::Female => 0b10,
        }
    }
}

/// Occupancy of one site: a (male, female) pair of indicators.
///
/// The partial order used by the monotone couplings is componentwise:
/// `(0,0) <= (0,1) <= (1,1)` and `(0,0) <= (1,0) <= (1,1)`, with `(0,1)`
/// and `(1,0)` incomparable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SiteState(u8);

impl SiteState {
    pub const EMPTY: SiteState = SiteState(0b00);
    pub const MALE_ONLY: SiteState = SiteState(0b01);
    pub const FEMALE_ONLY: SiteState = SiteState(0b10);
    pub const BOTH: SiteState = SiteState(0b11);

    pub fn new(male: bool, female: bool) -> Self {
        SiteState((male as u8) | ((female as u8) << 1))
    }

    pub fn occupied(self, sex: Sex) -> bool {
        self.0 & sex.bit() != 0
    }

    pub fn with(self, sex: Sex, occupied: bool) -> Self {
        if occupied {
            SiteState(self.0 | sex.bit())
        } else {
            SiteState(self.0 & !sex.bit())
        }
    }

    pub fn any(self) -> bool {
        self.0 != 0
    }

    pub fn both(self) -> bool {
        self.0 == 0b11
    }

    /// Number of particles at the site (the count projection value 0, 1, 2).
    pub fn count(self) -> u8 {
        self.0.count_ones() as u8
    }

    /// Componentwise partial order.
    pub fn le(self, other: SiteState) -> bool {
        self.0 & other.0 == self.0
    }

    /// Per-site code in 0..4 used by the generator-matrix state encoding:
    /// male bit 0, female bit 1.
    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn from_code(code: usize) -> Self {
        debug_assert!(code < 4);
        SiteState(code as u8)
    }
}

/// Birth mechanism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// A male-female pair anywhere in the neighbourhood produces offspring:
    /// rate `lambda * n1 * n2` into each empty nest.
    G1,
    /// Both parents must share a site: rate `lambda * n_{1+2}` into each
    /// empty nest.
    G2,
}

/// Particle-exchange mechanism between nearest-neighbour sites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stirring {
    None,
    /// The whole (male, female) pair at two neighbouring sites is exchanged
    /// at rate `eps^-2` per lattice edge.
    LilyPad { eps: f64 },
    /// Each sex's occupancy is exchanged independently between neighbours,
    /// at rate `eps^-2` per edge and sex.
    Individual { eps: f64 },
}

impl Stirring {
    pub fn rate(&self) -> f64 {
        match self {
            Stirring::None => 0.0,
            Stirring::LilyPad { eps } | Stirring::Individual { eps } => eps.powi(-2),
        }
    }
}

/// Static parameters of one particle-system run.
#[derive(Debug, Clone)]
pub struct IpsParams {
    pub lambda: f64,
    pub model: Model,
    pub stirring: Stirring,
    pub torus_side: usize,
    pub dim: usize,
}

impl IpsParams {
    pub fn validate(&self) -> Result<(), IpsError> {
        if !(self.lambda >= 0.0) {
            return Err(IpsError::InvalidParams(format!(
                "lambda must be >= 0, got {}",
                self.lambda
            )));
        }
        if self.dim != 1 && self.dim != 2 {
            return Err(IpsError::InvalidParams(format!(
                "dim must be 1 or 2, got {}",
                self.dim
            )));
        }
        if self.torus_side == 0 {
            return Err(IpsError::InvalidParams("torus_side must be >= 1".into()));
        }
        match self.stirring {
            Stirring::LilyPad { eps } | Stirring::Individual { eps } if !(eps > 0.0) => {
                return Err(IpsError::InvalidParams(format!(
                    "stirring eps must be > 0, got {eps}"
                )));
            }
            _ => {}
        }
        Ok(())
    }
}

/// Finite torus of side `side` in dimension `dim` (1 or 2), with the
/// interaction neighbourhood of a site being the site itself plus its `2*dim`
/// nearest neighbours, deduplicated (on a side-2 torus the two lattice
/// directions reach the same site).
#[derive(Debug, Clone)]
pub struct Torus {
    side: usize,
    dim: usize,
    // Deduplicated neighbourhood of each site, self included.
    hoods: Vec<Vec<usize>>,
    // Positive-direction lattice edges owned by each site: (self, self + e_k).
    // On a side-2 torus both directions give the same unordered pair, which
    // correctly doubles the exchange rate (the cycle C_2 has two edges).
    edges: Vec<Vec<usize>>,
}

impl Torus {
    pub fn new(side: usize, dim: usize) -> Self {
        assert!(dim == 1 || dim == 2, "dim must be 1 or 2");
        assert!(side >= 1);
        let n = side.pow(dim as u32);
        let mut hoods = Vec::with_capacity(n);
        let mut edges = Vec::with_capacity(n);
        for idx in 0..n {
            let mut hood = vec![idx];
            let mut owned = Vec::with_capacity(dim);
            for k in 0..dim {
                let up = Self::shift(idx, side, dim, k, 1);
                let down = Self::shift(idx, side, dim, k, side - 1);
                owned.push(up);
                for nb in [up, down] {
                    if !hood.contains(&nb) {
                        hood.push(nb);
                    }
                }
            }
            // Degenerate side-1 torus: the only "edge" is a self-loop, which
            // can never change the configuration; drop it.
            owned.retain(|&y| y != idx);
            hoods.push(hood);
            edges.push(owned);
        }
        Torus {
            side,
            dim,
            hoods,
            edges,
        }
    }

    fn shift(idx: usize, side: usize, dim: usize, axis: usize, by: usize) -> usize {
        match dim {
            1 => (idx + by) % side,
            2 => {
                let (x, y) = (idx % side, idx / side);
                if axis == 0 {
                    ((x + by) % side) + y * side
                } else {
                    x + ((y + by) % side) * side
                }
            }
            _ => unreachable!(),
        }
    }

    pub fn n_sites(&self) -> usize {
        self.hoods.len()
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Interaction neighbourhood of `x` (distinct sites, `x` included).
    pub fn hood(&self, x: usize) -> &[usize] {
        &self.hoods[x]
    }

    /// Neighbourhood size |N|; equals `2*dim + 1` once `side >= 3`.
    pub fn hood_size(&self) -> usize {
        self.hoods[0].len()
    }

    /// Positive-direction edges owned by site `x`.
    pub fn owned_edges(&self, x: usize) -> &[usize] {
        &self.edges[x]
    }

    pub fn all_empty(&self) -> Vec<SiteState> {
        vec![SiteState::EMPTY; self.n_sites()]
    }

    pub fn all_both(&self) -> Vec<SiteState> {
        vec![SiteState::BOTH; self.n_sites()]
    }
}

/// Componentwise configuration order check.
pub fn config_le(lower: &[SiteState], upper: &[SiteState]) -> bool {
    lower.iter().zip(upper).all(|(a, b)| a.le(*b))
}
