//! Per-nest transition rates for the birth mechanisms, the dominating
//! decoupled (single-sex contact) process, and the count-projection chain.

use super::{Model, Sex, SiteState, Torus};

/// Number of sites in the neighbourhood of `x` holding a particle of `sex`.
fn n_sex(torus: &Torus, config: &[SiteState], x: usize, sex: Sex) -> usize {
    torus
        .hood(x)
        .iter()
        .filter(|&&z| config[z].occupied(sex))
        .count()
}

/// Number of doubly-occupied sites in the neighbourhood of `x`.
fn n_both(torus: &Torus, config: &[SiteState], x: usize) -> usize {
    torus.hood(x).iter().filter(|&&z| config[z].both()).count()
}

/// Birth rate into nest `(x, sex)` when any male-female pair in the
/// neighbourhood may parent: `lambda * n1 * n2`, zero if the nest is full.
pub fn birth_rate_g1(
    torus: &Torus,
    config: &[SiteState],
    x: usize,
    sex: Sex,
    lambda: f64,
) -> f64 {
    if config[x].occupied(sex) {
        return 0.0;
    }
    let n1 = n_sex(torus, config, x, Sex::Male);
    let n2 = n_sex(torus, config, x, Sex::Female);
    lambda * (n1 * n2) as f64
}

/// Birth rate into nest `(x, sex)` when parents must share a site:
/// `lambda * n_{1+2}`, zero if the nest is full.
pub fn birth_rate_g2(
    torus: &Torus,
    config: &[SiteState],
    x: usize,
    sex: Sex,
    lambda: f64,
) -> f64 {
    if config[x].occupied(sex) {
        return 0.0;
    }
    lambda * n_both(torus, config, x) as f64
}

pub fn birth_rate(
    model: Model,
    torus: &Torus,
    config: &[SiteState],
    x: usize,
    sex: Sex,
    lambda: f64,
) -> f64 {
    match model {
        Model::G1 => birth_rate_g1(torus, config, x, sex, lambda),
        Model::G2 => birth_rate_g2(torus, config, x, sex, lambda),
    }
}

/// Birth rate of the decoupled process in which each sex reproduces as an
/// independent contact process: `lambda * |N| * n_sex`, zero if the nest is
/// full. Dominates both [`birth_rate_g1`] and [`birth_rate_g2`] pointwise.
pub fn decoupled_contact_rate(
    torus: &Torus,
    config: &[SiteState],
    x: usize,
    sex: Sex,
    lambda: f64,
) -> f64 {
    if config[x].occupied(sex) {
        return 0.0;
    }
    lambda * (torus.hood_size() * n_sex(torus, config, x, sex)) as f64
}

/// Rate table of the count-projection chain on {0, 1, 2} particles per site.
///
/// `down_from_1` and `down_from_2` apply when the site currently holds 1 or
/// 2 particles; `up_from_0` and `up_from_1` when it holds 0 or 1. `n2` is
/// the number of doubly-occupied neighbours.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaRateTable {
    pub down_from_1: f64,
    pub down_from_2: f64,
    pub up_from_0: f64,
    pub up_from_1: f64,
}

/// Transition rates of the projected chain at site `x` for a configuration
/// of per-site particle counts in {0, 1, 2}.
pub fn zeta_rates(torus: &Torus, counts: &[u8], x: usize, lambda: f64) -> ZetaRateTable {
    debug_assert!(counts.iter().all(|&c| c <= 2));
    let n2 = torus.hood(x).iter().filter(|&&z| counts[z] == 2).count() as f64;
    ZetaRateTable {
        down_from_1: 1.0,
        down_from_2: 2.0,
        up_from_0: 2.0 * lambda * n2,
        up_from_1: lambda * n2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_ips::SiteState as S;

    /// Brute-force recount of occupied nests of one sex over the
    /// neighbourhood, written independently of the production counters.
    fn hand_count(torus: &Torus, config: &[S], x: usize, sex: Sex) -> usize {
        let mut seen = Vec::new();
        for &z in torus.hood(x) {
            if !seen.contains(&z) {
                seen.push(z);
            }
        }
        seen.into_iter()
            .filter(|&z| config[z].occupied(sex))
            .count()
    }

    #[test]
    fn g1_occupied_nest_rate_zero() {
        let t = Torus::new(5, 1);
        let config = t.all_both();
        assert_eq!(birth_rate_g1(&t, &config, 2, Sex::Male, 3.0), 0.0);
    }

    #[test]
    fn g1_single_pair_neighbourhood() {
        // xi(x-1) = (1,0), xi(x) = (0,0), xi(x+1) = (0,1), lambda = 2.
        let t = Torus::new(5, 1);
        let mut config = t.all_empty();
        config[1] = S::MALE_ONLY;
        config[3] = S::FEMALE_ONLY;
        assert_eq!(birth_rate_g1(&t, &config, 2, Sex::Male, 2.0), 2.0);
        assert_eq!(birth_rate_g1(&t, &config, 2, Sex::Female, 2.0), 2.0);
    }

    #[test]
    fn g1_hand_count_oracle() {
        // xi(x-1) = xi(x+1) = (1,1), xi(x) = (0,1), male nest empty,
        // lambda = 0.5: n1 = 2, n2 = 3, rate 3.0.
        let t = Torus::new(5, 1);
        let mut config = t.all_empty();
        config[1] = S::BOTH;
        config[3] = S::BOTH;
        config[2] = S::FEMALE_ONLY;
        let n1 = hand_count(&t, &config, 2, Sex::Male);
        let n2 = hand_count(&t, &config, 2, Sex::Female);
        assert_eq!((n1, n2), (2, 3));
        assert_eq!(
            birth_rate_g1(&t, &config, 2, Sex::Male, 0.5),
            0.5 * (n1 * n2) as f64
        );
        assert_eq!(birth_rate_g1(&t, &config, 2, Sex::Male, 0.5), 3.0);
    }

    #[test]
    fn g2_single_double_neighbour() {
        let t = Torus::new(5, 1);
        let mut config = t.all_empty();
        config[1] = S::BOTH;
        assert_eq!(birth_rate_g2(&t, &config, 2, Sex::Male, 2.0), 2.0);
    }

    #[test]
    fn g2_split_pair_is_zero() {
        let t = Torus::new(5, 1);
        let mut config = t.all_empty();
        config[1] = S::MALE_ONLY;
        config[3] = S::FEMALE_ONLY;
        assert_eq!(birth_rate_g2(&t, &config, 2, Sex::Male, 2.0), 0.0);
    }

    #[test]
    fn g2_occupied_and_hand_count() {
        let t = Torus::new(5, 1);
        let mut config = t.all_empty();
        for i in 1..=3 {
            config[i] = S::BOTH;
        }
        // Nest occupied: rate 0 regardless of neighbours.
        assert_eq!(birth_rate_g2(&t, &config, 2, Sex::Male, 1.0), 0.0);
        // Same neighbourhood with the male nest at x freed: two doubly
        // occupied neighbours remain.
        config[2] = S::FEMALE_ONLY;
        assert_eq!(birth_rate_g2(&t, &config, 2, Sex::Male, 1.0), 2.0);
    }

    #[test]
    fn decoupled_empty_neighbourhood() {
        let t = Torus::new(5, 1);
        let config = t.all_empty();
        assert_eq!(decoupled_contact_rate(&t, &config, 2, Sex::Male, 0.2), 0.0);
    }

    #[test]
    fn decoupled_single_parent() {
        // |N| = 3 in d = 1, one male neighbour, lambda = 0.2: rate 0.6.
        let t = Torus::new(5, 1);
        let mut config = t.all_empty();
        config[1] = S::MALE_ONLY;
        let r = decoupled_contact_rate(&t, &config, 2, Sex::Male, 0.2);
        assert!((r - 0.6).abs() < 1e-15);
    }

    #[test]
    fn decoupled_dominates_exhaustively_on_2_torus() {
        let t = Torus::new(2, 1);
        for code in 0..16usize {
            let config = vec![S::from_code(code % 4), S::from_code(code / 4)];
            for x in 0..2 {
                for sex in Sex::BOTH {
                    let c1 = birth_rate_g1(&t, &config, x, sex, 1.3);
                    let c2 = birth_rate_g2(&t, &config, x, sex, 1.3);
                    let cd = decoupled_contact_rate(&t, &config, x, sex, 1.3);
                    assert!(cd >= c1 && cd >= c2, "config code {code} x {x}");
                }
            }
        }
    }

    #[test]
    fn decoupled_dominates_random_configs() {
        use rand::Rng;
        let t = Torus::new(4, 2);
        let mut rng = crate::rng::stream_rng(5, 0);
        for _ in 0..10_000 {
            let config: Vec<S> = (0..t.n_sites())
                .map(|_| S::from_code(rng.gen_range(0..4)))
                .collect();
            let x = rng.gen_range(0..t.n_sites());
            for sex in Sex::BOTH {
                let c1 = birth_rate_g1(&t, &config, x, sex, 0.7);
                let c2 = birth_rate_g2(&t, &config, x, sex, 0.7);
                let cd = decoupled_contact_rate(&t, &config, x, sex, 0.7);
                assert!(cd >= c1 && cd >= c2);
            }
        }
    }

    #[test]
    fn zeta_rates_isolated_two() {
        let t = Torus::new(5, 1);
        let mut counts = vec![0u8; 5];
        counts[2] = 2;
        let r = zeta_rates(&t, &counts, 2, 1.0);
        assert_eq!(r.down_from_2, 2.0);
        // The site itself is doubly occupied and the neighbourhood includes
        // it, but a birth at x never reads the count at x when x holds fewer
        // than two particles; the table is still well defined. With no
        // doubly-occupied *other* neighbour of site 1:
        let r1 = zeta_rates(&t, &counts, 1, 1.5);
        assert_eq!(r1.up_from_0, 3.0); // one 2-neighbour (site 2), 2*lambda*n2
        assert_eq!(r1.up_from_1, 1.5);
    }

    #[test]
    fn zeta_rates_no_two_neighbours() {
        let t = Torus::new(5, 1);
        let counts = vec![1u8; 5];
        let r = zeta_rates(&t, &counts, 0, 2.0);
        assert_eq!(r.up_from_0, 0.0);
        assert_eq!(r.up_from_1, 0.0);
        assert_eq!(r.down_from_1, 1.0);
    }
}
