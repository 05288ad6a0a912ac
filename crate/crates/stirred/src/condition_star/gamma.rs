//! The nested curve family and its flow-projection map.

use super::flow::flow_xi;
use super::{CsError, FlowGeometry, Pt};

/// Vertices of the scaled curve: the slanted segment's endpoints scale with
/// (1 + theta) while the horizontal tail keeps its u-extent and scales only
/// in v. The polyline runs A -> B -> C -> D with B -> D horizontal.
pub fn gamma_polyline(geom: &FlowGeometry, theta: f64) -> [Pt; 4] {
    assert!(
        theta >= geom.theta_min - 1e-12 && theta <= geom.theta_max + 1e-12,
        "theta {theta} outside [{}, {}]",
        geom.theta_min,
        geom.theta_max
    );
    let k = 1.0 + theta;
    [
        (k * geom.a.0, k * geom.a.1),
        (k * geom.b.0, k * geom.b.1),
        (geom.c_pt.0, k * geom.c_pt.1),
        (geom.d.0, k * geom.d.1),
    ]
}

/// `n` points along the polyline, parameterised by arc length, vertices
/// included.
pub fn gamma_sample_points(geom: &FlowGeometry, theta: f64, n: usize) -> Vec<Pt> {
    assert!(n >= 4);
    let verts = gamma_polyline(geom, theta);
    let seg_len = |a: Pt, b: Pt| ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
    let lens: Vec<f64> = verts.windows(2).map(|w| seg_len(w[0], w[1])).collect();
    let total: f64 = lens.iter().sum();
    let mut pts = Vec::with_capacity(n);
    for i in 0..n {
        let mut target = total * i as f64 / (n - 1) as f64;
        let mut p = verts[3];
        for (k, len) in lens.iter().enumerate() {
            if target <= *len || k == lens.len() - 1 {
                let a = verts[k];
                let b = verts[k + 1];
                let frac = (target / len).clamp(0.0, 1.0);
                p = (a.0 + frac * (b.0 - a.0), a.1 + frac * (b.1 - a.1));
                break;
            }
            target -= len;
        }
        pts.push(p);
    }
    pts
}

/// First intersection of the ray from the origin through `q` with the
/// polyline, if any.
pub fn ray_polyline_intersection(q: Pt, polyline: &[Pt]) -> Option<Pt> {
    const TOL: f64 = 1e-12;
    let cross = |a: Pt, b: Pt| a.0 * b.1 - a.1 * b.0;
    for w in polyline.windows(2) {
        let (p1, p2) = (w[0], w[1]);
        let d = (p2.0 - p1.0, p2.1 - p1.1);
        let denom = cross(d, q);
        if denom.abs() < 1e-300 {
            continue;
        }
        let alpha = cross(q, p1) / denom;
        if !(-TOL..=1.0 + TOL).contains(&alpha) {
            continue;
        }
        let a = alpha.clamp(0.0, 1.0);
        let point = (p1.0 + a * d.0, p1.1 + a * d.1);
        // Must be on the forward ray.
        let t = if q.0.abs() > q.1.abs() {
            point.0 / q.0
        } else {
            point.1 / q.1
        };
        if t > 0.0 {
            return Some(point);
        }
    }
    None
}

/// Projection along the comparison flow: flow `p0` for time `s`, then slide
/// back to the curve along the ray through the origin.
pub fn phi_theta(
    geom: &FlowGeometry,
    c: f64,
    theta: f64,
    s: f64,
    p0: Pt,
) -> Result<Pt, CsError> {
    let q = flow_xi(geom, c, s, p0);
    let polyline = gamma_polyline(geom, theta);
    ray_polyline_intersection(q, &polyline).ok_or(CsError::NoIntersection {
        u: q.0,
        v: q.1,
        theta,
    })
}
