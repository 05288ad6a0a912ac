//! The reaction vector field, its piecewise-linear minorant, and the
//! domination certificate.

use super::{FlowGeometry, Pt, Region};
use crate::mean_field_pde::{rhs_sys10, sys10_fixed_points};

/// Reaction field of the two-density system at coupling c.
pub fn eta(u: f64, v: f64, c: f64) -> Pt {
    rhs_sys10(u, v, c)
}

/// Interior equilibria of the reaction field for c >= 4 (saddle, stable).
pub fn eta_fixed_points(c: f64) -> Option<(Pt, Pt)> {
    sys10_fixed_points(c)
}

/// The comparison field evaluated with an explicit region assignment;
/// boundary points can be probed under each adjacent region.
pub fn xi_for_region(geom: &FlowGeometry, region: Region, u: f64, v: f64, c: f64) -> Pt {
    match region {
        Region::R1 | Region::R2 => (geom.f1 * u, -2.0 * v),
        Region::L1 => (1.1 * geom.f2 * v, geom.f2 * v),
        Region::R3 => (0.0, geom.f2 * v),
        Region::R4 => (-u, geom.f2 * v),
        Region::Outside => eta(u, v, c),
    }
}

/// The comparison field with the standard tie-broken region assignment.
pub fn xi(geom: &FlowGeometry, u: f64, v: f64, c: f64) -> Pt {
    xi_for_region(geom, geom.region(u, v), u, v, c)
}

/// Componentwise domination certificate over the order triangle.
#[derive(Debug, Clone)]
pub struct DominationCertificate {
    pub c: f64,
    pub grid_n: usize,
    pub evaluated: usize,
    /// Worst values of eta - xi per component (negative means violated).
    pub worst_margin: (f64, f64),
    pub worst_point: Pt,
    pub pass: bool,
}

const MARGIN_TOL: f64 = -1e-12;

/// Evaluate both fields on a triangular grid over {0 <= v <= u <= 1} plus a
/// refinement along every region boundary, probing boundary points under
/// each adjacent region assignment so the tie-break cannot hide a gap.
pub fn verify_domination(geom: &FlowGeometry, c: f64, grid_n: usize) -> DominationCertificate {
    assert!(grid_n >= 100, "need at least 100 points per axis");
    let mut cert = DominationCertificate {
        c,
        grid_n,
        evaluated: 0,
        worst_margin: (f64::INFINITY, f64::INFINITY),
        worst_point: (0.0, 0.0),
        pass: true,
    };
    let mut probe_region = |cert: &mut DominationCertificate, r: Region, u: f64, v: f64| {
        let (e1, e2) = eta(u, v, c);
        let (x1, x2) = xi_for_region(geom, r, u, v, c);
        let m = (e1 - x1, e2 - x2);
        cert.evaluated += 1;
        if m.0 < cert.worst_margin.0 || m.1 < cert.worst_margin.1 {
            if m.0.min(m.1) < cert.worst_margin.0.min(cert.worst_margin.1) {
                cert.worst_point = (u, v);
            }
            cert.worst_margin.0 = cert.worst_margin.0.min(m.0);
            cert.worst_margin.1 = cert.worst_margin.1.min(m.1);
        }
    };
    let mut probe = |cert: &mut DominationCertificate, u: f64, v: f64| {
        let r = geom.region(u, v);
        probe_region(cert, r, u, v);
    };

    let n = grid_n;
    for i in 0..=n {
        let u = i as f64 / n as f64;
        for j in 0..=n {
            let v = u * j as f64 / n as f64;
            probe(&mut cert, u, v);
        }
    }

    // Region boundaries, each sampled densely and evaluated under every
    // region adjacent to it.
    let ep = geom.eps_prime;
    let m = 4 * n;
    for i in 0..=m {
        let t = i as f64 / m as f64;
        // v = eps' * u (lower wedge edge): R1 above, outside below.
        let u = t;
        probe_region(&mut cert, Region::R1, u, ep * u);
        probe_region(&mut cert, Region::Outside, u, ep * u);
        // v = eps' horizontal, u in [eps', 1]: R1 below, R2/R3 above.
        let u2 = ep + (1.0 - ep) * t;
        probe_region(&mut cert, Region::R1, u2.min(0.9), ep);
        probe_region(&mut cert, Region::R2, u2, ep);
        probe_region(&mut cert, Region::R3, u2, ep);
        // Segment u = 1.1 v, v in [eps', 0.6]: L1, R2 left, R3 right.
        let v3 = ep + (0.6 - ep) * t;
        for r in [Region::L1, Region::R2, Region::R3] {
            probe_region(&mut cert, r, 1.1 * v3, v3);
        }
        // u = 0.9 vertical edge, v in [eps', 0.6]: R3 and R4.
        for r in [Region::R3, Region::R4] {
            probe_region(&mut cert, r, 0.9, v3);
        }
        // u = 1.0 edge, v in [eps', 0.6]: R4 and outside.
        for r in [Region::R4, Region::Outside] {
            probe_region(&mut cert, r, 1.0, v3);
        }
        // v = 0.6 top edge, u in [0.6, 1]: R2/R3/R4 below, outside above.
        let u4 = 0.6 + 0.4 * t;
        for r in [Region::R2, Region::R3, Region::R4, Region::Outside] {
            if u4 >= 0.6 {
                probe_region(&mut cert, r, u4, 0.6);
            }
        }
    }
    cert.pass = cert.worst_margin.0 >= MARGIN_TOL && cert.worst_margin.1 >= MARGIN_TOL;
    cert
}
