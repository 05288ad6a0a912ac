//! Numerical certificates for the interval-expansion survival machinery of
//! the two-density reaction flow: the comparison vector field and its
//! closed-form piecewise flows, the nested curve family and its projection
//! maps, the smoothed-indicator profiles with their heat-flow lemmas, a
//! nonlinear Trotter iteration, and the end-to-end expansion check.
//!
//! Everything here is a grid-based certificate, not an interval-arithmetic
//! proof: each check reports its sample density and worst margin so the
//! slack is visible.

mod assumption;
mod bump;
mod check;
mod fields;
mod flow;
mod gamma;
mod heat;
mod lemmas;
mod trotter;

pub use assumption::{check_assumption41, AssumptionCertificate, AssumptionSample};
pub use bump::{bump_f0, bump_f_hat, bump_f_s, bump_h};
pub use check::{condition_star_check, ConditionStarCertificate, ConditionStarParams};
pub use fields::{eta, eta_fixed_points, verify_domination, xi, xi_for_region, DominationCertificate};
pub use flow::flow_xi;
pub use gamma::{gamma_polyline, gamma_sample_points, phi_theta, ray_polyline_intersection};
pub use heat::heat_step;
pub use lemmas::{
    check_constants, check_lemma44, check_lemma45, lemma45_parameters, search_lemma45_deltas,
    ConstantsReport, Lemma44Report, Lemma45Report,
};
pub use trotter::trotter_run;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CsError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("ray through ({u}, {v}) does not meet the curve at theta = {theta}")]
    NoIntersection { u: f64, v: f64, theta: f64 },
    #[error(transparent)]
    Pde(#[from] crate::mean_field_pde::PdeError),
}

/// Point in the (u, v) phase plane.
pub type Pt = (f64, f64);

/// Piecewise regions of the comparison field, in tie-break order: a point
/// on a shared boundary belongs to the first region that claims it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Wedge below the v = eps' line: field (F1 u, -2 v).
    R1,
    /// Strip left of the u = 1.1 v line between eps' and 0.6: same field.
    R2,
    /// The segment u = 1.1 v between its bottom and top anchor points:
    /// field (1.1 F2 v, F2 v), which flows along the segment.
    L1,
    /// Trapezoid right of that segment up to u = 0.9 (right edge included):
    /// field (0, F2 v).
    R3,
    /// Open rectangle 0.9 < u < 1: field (-u, F2 v).
    R4,
    /// Everywhere else the comparison field coincides with the reaction
    /// field itself.
    Outside,
}

/// The anchor points, curve family range, and constants of the comparison
/// construction.
#[derive(Debug, Clone, Copy)]
pub struct FlowGeometry {
    pub a: Pt,
    pub b: Pt,
    pub c_pt: Pt,
    pub d: Pt,
    pub theta_min: f64,
    pub theta_max: f64,
    pub f1: f64,
    pub f2: f64,
    pub k1: f64,
    pub k2: f64,
    pub eps: f64,
    pub eps_prime: f64,
}

impl Default for FlowGeometry {
    fn default() -> Self {
        FlowGeometry {
            a: (0.51, 0.51),
            b: (0.55, 0.5),
            c_pt: (0.9, 0.5),
            d: (1.0, 0.5),
            theta_min: -0.54,
            theta_max: 0.2,
            f1: 400.0,
            f2: 75.0,
            k1: 44.0,
            k2: 2.0,
            eps: 0.24,
            eps_prime: 0.23,
        }
    }
}

impl FlowGeometry {
    /// Flow horizon of the curve-family argument:
    /// min(ln(12/11)/F2, ln(45/23)/(F1 + 2)).
    pub fn s0(&self) -> f64 {
        self.s0_terms().0.min(self.s0_terms().1)
    }

    /// Both candidate horizons; the first term is the binding one for the
    /// shipped constants.
    pub fn s0_terms(&self) -> (f64, f64) {
        (
            (12.0f64 / 11.0).ln() / self.f2,
            (45.0f64 / 23.0).ln() / (self.f1 + 2.0),
        )
    }

    /// Bottom scaling of the curve family: the bottom curve's horizontal
    /// part sits on {v = eps'}.
    pub fn v_bottom(&self) -> f64 {
        (1.0 + self.theta_min) * self.b.1
    }

    /// Top scaling: the top curve's horizontal part sits on {v = 0.6}.
    pub fn v_top(&self) -> f64 {
        (1.0 + self.theta_max) * self.b.1
    }

    /// v-coordinate of the top curve's left corner as computed from the
    /// scaling, (1 + theta_max) * 0.51 = 0.612.
    pub fn a_top_v_computed(&self) -> f64 {
        (1.0 + self.theta_max) * self.a.1
    }

    /// Region of a point of the order triangle {0 <= v <= u <= 1}, with
    /// shared boundaries resolved in declaration order.
    pub fn region(&self, u: f64, v: f64) -> Region {
        let ep = self.eps_prime;
        if ep * u < v && v <= ep && u <= 0.9 {
            return Region::R1;
        }
        if ep < v && v <= 0.6 && u < 1.1 * v {
            return Region::R2;
        }
        if (ep..=0.6).contains(&v) && u == 1.1 * v {
            return Region::L1;
        }
        let in_trapezoid_interior = v > ep && v < 0.6 && u > 1.1 * v && u < 0.9;
        let on_right_edge = u == 0.9 && (ep..=0.6).contains(&v);
        if in_trapezoid_interior || on_right_edge {
            return Region::R3;
        }
        if u > 0.9 && u < 1.0 && v > ep && v < 0.6 {
            return Region::R4;
        }
        Region::Outside
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s0_value_and_binding_term() {
        let g = FlowGeometry::default();
        let (first, second) = g.s0_terms();
        assert!((first - 1.160_148e-3).abs() < 1e-8, "first {first}");
        assert!(first < second, "the first term must bind");
        assert_eq!(g.s0(), first);
    }

    #[test]
    fn region_membership_samples() {
        let g = FlowGeometry::default();
        // 0.23 * 0.5 < 0.2 <= 0.23 and u <= 0.9.
        assert_eq!(g.region(0.5, 0.2), Region::R1);
        assert_eq!(g.region(0.3, 0.4), Region::R2);
        let v = 0.4;
        assert_eq!(g.region(1.1 * v, v), Region::L1);
        assert_eq!(g.region(0.7, 0.4), Region::R3);
        assert_eq!(g.region(0.9, 0.4), Region::R3); // right edge included
        assert_eq!(g.region(0.95, 0.4), Region::R4);
        assert_eq!(g.region(0.98, 0.7), Region::Outside); // above the band
        assert_eq!(g.region(0.5, 0.05), Region::Outside); // below the wedge
        assert_eq!(g.region(0.95, 0.1), Region::Outside); // right strip
        assert_eq!(g.region(1.0, 0.4), Region::Outside); // u = 1 edge
    }

    #[test]
    fn top_corner_scaling_disagrees_with_quoted_constant() {
        // The printed claim that the top curve's left corner has
        // v = 0.2346 is irreconcilable with (1 + 0.2) * 0.51; certificates
        // use only the computed value.
        let g = FlowGeometry::default();
        assert!((g.a_top_v_computed() - 0.612).abs() < 1e-12);
        assert!((g.a_top_v_computed() - 0.2346).abs() > 0.3);
    }

    #[test]
    fn family_bottom_and_top_levels() {
        let g = FlowGeometry::default();
        assert!((g.v_bottom() - 0.23).abs() < 1e-12);
        assert!((g.v_top() - 0.6).abs() < 1e-12);
    }
}
