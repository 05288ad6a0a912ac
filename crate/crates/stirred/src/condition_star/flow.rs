//! Closed-form flow of the piecewise comparison field with analytic
//! region-crossing detection; only stretches through the unnamed remainder
//! region (where the field is the nonlinear reaction field) fall back to
//! adaptive integration with a bisected crossing time.

use super::fields::eta;
use super::{FlowGeometry, Pt, Region};
use crate::numeric::integrate_planar_watch;

const MAX_CROSSINGS: usize = 10_000;
const ETA_TOL: f64 = 1e-12;

/// Flow the comparison field for time `s` from `p0`.
pub fn flow_xi(geom: &FlowGeometry, c: f64, s: f64, p0: Pt) -> Pt {
    assert!(s >= 0.0);
    let mut p = p0;
    let mut zone = geom.region(p.0, p.1);
    let mut s_left = s;
    let mut crossings = 0usize;
    while s_left > 0.0 {
        let (p_new, used, next) = match zone {
            Region::R1 | Region::R2 => wedge_advance(geom, p, s_left),
            Region::L1 => l1_advance(geom, p, s_left),
            Region::R3 => r3_advance(geom, p, s_left),
            Region::R4 => r4_advance(geom, p, s_left),
            Region::Outside => outside_advance(geom, c, p, s_left),
        };
        p = p_new;
        s_left -= used;
        match next {
            Some(z) => zone = z,
            None => break,
        }
        crossings += 1;
        assert!(
            crossings < MAX_CROSSINGS,
            "flow chattering at {:?} (zone {:?})",
            p,
            zone
        );
    }
    p
}

/// Advance within the wedge zones (field (F1 u, -2 v)). Returns the point,
/// the time consumed, and the next zone when a boundary was hit.
fn wedge_advance(geom: &FlowGeometry, p: Pt, s_left: f64) -> (Pt, f64, Option<Region>) {
    let (u, v) = p;
    let ep = geom.eps_prime;
    let rate = geom.f1 + 2.0;
    // Candidate exits: the u = 1.1 v segment (only while v >= eps'), the
    // u = 0.9 edge, and the lower wedge edge v = eps' u.
    let mut t_exit = f64::INFINITY;
    let mut kind = 0u8;
    if u < 1.1 * v {
        let t = (1.1 * v / u).ln() / rate;
        if v * (-2.0 * t).exp() >= ep && t < t_exit {
            t_exit = t;
            kind = 1;
        }
    }
    if u <= 0.9 {
        let t = (0.9 / u).ln() / geom.f1;
        if t < t_exit {
            t_exit = t;
            kind = 2;
        }
    }
    {
        let t = ((v / u) / ep).ln() / rate;
        if t < t_exit {
            t_exit = t;
            kind = 3;
        }
    }
    if s_left < t_exit {
        return (
            (u * (geom.f1 * s_left).exp(), v * (-2.0 * s_left).exp()),
            s_left,
            None,
        );
    }
    match kind {
        1 => {
            let vh = v * (-2.0 * t_exit).exp();
            ((1.1 * vh, vh), t_exit, Some(Region::L1))
        }
        2 => {
            let vh = v * (-2.0 * t_exit).exp();
            ((0.9 + 1e-15, vh), t_exit, Some(Region::Outside))
        }
        _ => {
            let uh = u * (geom.f1 * t_exit).exp();
            ((uh, ep * uh), t_exit, Some(Region::Outside))
        }
    }
}

/// Advance along the u = 1.1 v segment (field keeps the ratio).
fn l1_advance(geom: &FlowGeometry, p: Pt, s_left: f64) -> (Pt, f64, Option<Region>) {
    let v = p.1;
    let t_top = (0.6 / v).ln() / geom.f2;
    if s_left < t_top {
        let vh = v * (geom.f2 * s_left).exp();
        ((1.1 * vh, vh), s_left, None)
    } else {
        ((0.66, 0.6 + 1e-15), t_top, Some(Region::Outside))
    }
}

/// Advance inside the trapezoid (field (0, F2 v)).
fn r3_advance(geom: &FlowGeometry, p: Pt, s_left: f64) -> (Pt, f64, Option<Region>) {
    let (u, v) = p;
    // Rising v meets either the left segment u = 1.1 v or the top edge.
    let v_stop = (u / 1.1).min(0.6);
    let t_stop = (v_stop / v).ln() / geom.f2;
    if s_left < t_stop {
        ((u, v * (geom.f2 * s_left).exp()), s_left, None)
    } else if u / 1.1 < 0.6 {
        let vh = u / 1.1;
        ((1.1 * vh, vh), t_stop, Some(Region::L1))
    } else {
        ((u, 0.6 + 1e-15), t_stop, Some(Region::Outside))
    }
}

/// Advance inside the open rectangle (field (-u, F2 v)).
fn r4_advance(geom: &FlowGeometry, p: Pt, s_left: f64) -> (Pt, f64, Option<Region>) {
    let (u, v) = p;
    let t_left = (u / 0.9).ln();
    let t_top = (0.6 / v).ln() / geom.f2;
    let t_exit = t_left.min(t_top);
    if s_left < t_exit {
        (
            (u * (-s_left).exp(), v * (geom.f2 * s_left).exp()),
            s_left,
            None,
        )
    } else if t_left <= t_top {
        // The leftward drift stops on the trapezoid's right edge.
        ((0.9, v * (geom.f2 * t_exit).exp()), t_exit, Some(Region::R3))
    } else {
        ((u * (-t_exit).exp(), 0.6 + 1e-15), t_exit, Some(Region::Outside))
    }
}

/// Advance through the remainder region under the reaction field, stopping
/// at the first membership change (bisected in time).
fn outside_advance(geom: &FlowGeometry, c: f64, p: Pt, s_left: f64) -> (Pt, f64, Option<Region>) {
    let f = move |u: f64, v: f64| eta(u, v, c);
    let mut last_inside = (0.0f64, p);
    let (_, _, completed) = integrate_planar_watch(&f, p, s_left, ETA_TOL, |t, y| {
        if geom.region(y.0, y.1) == Region::Outside {
            last_inside = (t, y);
            true
        } else {
            false
        }
    });
    if completed {
        let (end, _, _) = integrate_planar_watch(&f, p, s_left, ETA_TOL, |_, _| true);
        return (end, s_left, None);
    }
    // A crossing happened after `last_inside`; bisect the remaining stretch.
    let (mut t_in, mut y_in) = last_inside;
    let mut t_out = s_left.min(t_in + (s_left - t_in));
    // Establish an out point by stepping from the last inside state.
    let mut step = (t_out - t_in).max(1e-18);
    let mut y_out;
    loop {
        let (y_try, _, _) = integrate_planar_watch(&f, y_in, step, ETA_TOL, |_, _| true);
        if geom.region(y_try.0, y_try.1) != Region::Outside {
            y_out = y_try;
            t_out = t_in + step;
            break;
        }
        y_in = y_try;
        t_in += step;
        if t_in >= s_left {
            return (y_in, s_left, None);
        }
        step = (s_left - t_in).min(step * 2.0);
    }
    for _ in 0..80 {
        if t_out - t_in <= 1e-16 {
            break;
        }
        let mid = 0.5 * (t_in + t_out);
        let (y_mid, _, _) = integrate_planar_watch(&f, y_in, mid - t_in, ETA_TOL, |_, _| true);
        if geom.region(y_mid.0, y_mid.1) == Region::Outside {
            t_in = mid;
            y_in = y_mid;
        } else {
            t_out = mid;
            y_out = y_mid;
        }
    }
    let next = geom.region(y_out.0, y_out.1);
    (y_out, t_out, Some(next))
}
