//! Explicit Euler time stepping with 3-point / 5-point Laplacians.

use super::{Boundary, GridShape, PdeError, PdeField, ReactionSpec};

/// Largest admissible explicit Euler step for unit diffusivity:
/// 0.4 dx^2 / (2 dim).
pub fn stability_limit(dx: f64, dim: usize) -> f64 {
    0.4 * dx * dx / (2.0 * dim as f64)
}

/// Tolerance band around [0, 1] outside which a component is declared
/// unstable rather than clamped.
const RANGE_TOL: f64 = 1e-6;

/// Reusable stepper: owns the Laplacian scratch buffers.
#[derive(Debug)]
pub struct RdStepper {
    spec: ReactionSpec,
    dt: f64,
    lap: Vec<Vec<f64>>,
}

impl RdStepper {
    pub fn new(spec: ReactionSpec, dt: f64, field: &PdeField) -> Result<Self, PdeError> {
        let k = spec.n_components();
        if field.data.len() != k {
            return Err(PdeError::InvalidParams(format!(
                "field has {} components, system needs {k}",
                field.data.len()
            )));
        }
        let limit = stability_limit(field.grid.dx, field.grid.dim());
        if dt > limit * (1.0 + 1e-12) {
            return Err(PdeError::InvalidParams(format!(
                "dt = {dt} exceeds stability limit {limit}"
            )));
        }
        Ok(RdStepper {
            spec,
            dt,
            lap: vec![vec![0.0; field.grid.len()]; k],
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn spec(&self) -> &ReactionSpec {
        &self.spec
    }

    /// One Euler step: diffusion plus reaction. Out-of-range values signal
    /// instability; nothing is clamped.
    pub fn step(&mut self, field: &mut PdeField) -> Result<(), PdeError> {
        let k = self.spec.n_components();
        for c in 0..k {
            laplacian(&field.data[c], &field.grid.shape, field.boundary, field.grid.dx, &mut self.lap[c]);
        }
        let n = field.grid.len();
        let dt = self.dt;
        let mut state = vec![0.0f64; k];
        let mut f = vec![0.0f64; k];
        for i in 0..n {
            for c in 0..k {
                state[c] = field.data[c][i];
            }
            self.spec.reaction(&state, &mut f);
            for c in 0..k {
                field.data[c][i] = state[c] + dt * (self.lap[c][i] + f[c]);
            }
        }
        field.time += dt;
        for (c, comp) in field.data.iter().enumerate() {
            for &v in comp {
                if !((-RANGE_TOL..=1.0 + RANGE_TOL).contains(&v)) {
                    return Err(PdeError::Instability {
                        component: field.names[c],
                        value: v,
                        time: field.time,
                    });
                }
            }
        }
        Ok(())
    }

    /// Step until `field.time >= t_end`.
    pub fn run_until(&mut self, field: &mut PdeField, t_end: f64) -> Result<(), PdeError> {
        while field.time < t_end - 1e-12 {
            self.step(field)?;
        }
        Ok(())
    }
}

fn laplacian(u: &[f64], shape: &GridShape, bc: Boundary, dx: f64, out: &mut [f64]) {
    let inv = 1.0 / (dx * dx);
    match *shape {
        GridShape::One(n) => {
            debug_assert_eq!(u.len(), n);
            if n == 1 {
                out[0] = 0.0;
                return;
            }
            for i in 1..n - 1 {
                out[i] = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * inv;
            }
            let (first_ghost, last_ghost) = match bc {
                Boundary::Periodic => (u[n - 1], u[0]),
                Boundary::Neumann => (u[0], u[n - 1]),
            };
            out[0] = (first_ghost - 2.0 * u[0] + u[1]) * inv;
            out[n - 1] = (u[n - 2] - 2.0 * u[n - 1] + last_ghost) * inv;
        }
        GridShape::Two(nx, ny) => {
            debug_assert_eq!(u.len(), nx * ny);
            let at = |x: usize, y: usize| u[y * nx + x];
            for y in 0..ny {
                for x in 0..nx {
                    let (xl, xr) = neighbour_pair(x, nx, bc);
                    let (yl, yr) = neighbour_pair(y, ny, bc);
                    let c = at(x, y);
                    let xs = match (xl, xr) {
                        (Some(l), Some(r)) => at(l, y) + at(r, y),
                        (None, Some(r)) => c + at(r, y),
                        (Some(l), None) => at(l, y) + c,
                        (None, None) => 2.0 * c,
                    };
                    let ys = match (yl, yr) {
                        (Some(l), Some(r)) => at(x, l) + at(x, r),
                        (None, Some(r)) => c + at(x, r),
                        (Some(l), None) => at(x, l) + c,
                        (None, None) => 2.0 * c,
                    };
                    out[y * nx + x] = (xs + ys - 4.0 * c) * inv;
                }
            }
        }
    }
}

/// Left/right neighbour indices along one axis; `None` means the zero-flux
/// ghost (mirror of the cell itself).
fn neighbour_pair(i: usize, n: usize, bc: Boundary) -> (Option<usize>, Option<usize>) {
    match bc {
        Boundary::Periodic => (Some((i + n - 1) % n), Some((i + 1) % n)),
        Boundary::Neumann => (
            if i > 0 { Some(i - 1) } else { None },
            if i + 1 < n { Some(i + 1) } else { None },
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mean_field_pde::reaction::integrate_reaction_ode;
    use crate::mean_field_pde::{Grid, Model, ReactionSystem};

    fn heat_spec() -> ReactionSpec {
        ReactionSpec::new(ReactionSystem::Heat, 0.0, 1, Model::G2)
    }

    fn moments(u: &[f64], grid: &Grid) -> (f64, f64) {
        let mass: f64 = u.iter().sum();
        let mean: f64 = u
            .iter()
            .enumerate()
            .map(|(i, &v)| grid.x(i) * v)
            .sum::<f64>()
            / mass;
        let var: f64 = u
            .iter()
            .enumerate()
            .map(|(i, &v)| (grid.x(i) - mean).powi(2) * v)
            .sum::<f64>()
            / mass;
        (mean, var)
    }

    #[test]
    fn heat_mode_spreads_gaussian_variance_2t() {
        let dx = 0.01;
        let n = 1601; // [-8, 8]
        let grid = Grid::line(n, dx, -8.0);
        let sigma0sq = 0.25;
        let profile = move |x: f64| 0.5 * (-x * x / (2.0 * sigma0sq)).exp();
        let mut field = super::super::PdeField::from_profiles(
            grid,
            Boundary::Periodic,
            vec!["u"],
            &[&profile],
        );
        let dt = stability_limit(dx, 1);
        let mut stepper = RdStepper::new(heat_spec(), dt, &field).unwrap();
        stepper.run_until(&mut field, 0.5).unwrap();
        let (_, var) = moments(&field.data[0], &field.grid);
        let expect = sigma0sq + 2.0 * field.time;
        assert!(
            (var - expect).abs() / expect < 0.02,
            "var {var} vs {expect}"
        );
    }

    #[test]
    fn heat_mode_2d_variance_per_dimension() {
        let dx = 0.1;
        let n = 121; // [-6, 6]^2
        let grid = Grid::plane(n, n, dx, -6.0);
        let sigma0sq = 0.25f64;
        let mut field = super::super::PdeField::constant(
            grid,
            Boundary::Periodic,
            vec!["u"],
            &[0.0],
        );
        for y in 0..n {
            for x in 0..n {
                let (px, py) = (grid.x(x), grid.x(y));
                field.data[0][y * n + x] =
                    0.5 * (-(px * px + py * py) / (2.0 * sigma0sq)).exp();
            }
        }
        let dt = stability_limit(dx, 2);
        let mut stepper = RdStepper::new(heat_spec(), dt, &field).unwrap();
        stepper.run_until(&mut field, 0.5).unwrap();
        // x-marginal variance.
        let mut marg = vec![0.0f64; n];
        for y in 0..n {
            for x in 0..n {
                marg[x] += field.data[0][y * n + x];
            }
        }
        let (_, var) = moments(&marg, &field.grid);
        let expect = sigma0sq + 2.0 * field.time;
        assert!(
            (var - expect).abs() / expect < 0.02,
            "var {var} vs {expect}"
        );
    }

    #[test]
    fn constant_fields_reduce_to_ode() {
        let spec = ReactionSpec::new(ReactionSystem::Sys10, 1.5, 2, Model::G2);
        let grid = Grid::line(4, 0.05, 0.0);
        let mut field =
            super::super::PdeField::constant(grid, Boundary::Periodic, vec!["u", "v"], &[0.8, 0.5]);
        let dt = 2e-7;
        let mut stepper = RdStepper::new(spec, dt, &field).unwrap();
        stepper.run_until(&mut field, 1.0).unwrap();
        let reference = integrate_reaction_ode(&spec, &[0.8, 0.5], 1.0, dt * 100.0);
        assert!((field.data[0][0] - reference[0]).abs() < 1e-5);
        assert!((field.data[1][0] - reference[1]).abs() < 1e-5);
    }

    #[test]
    fn sys9_total_probability_conserved_many_steps() {
        let spec = ReactionSpec::new(ReactionSystem::Sys9, 1.2, 2, Model::G2);
        let grid = Grid::line(64, 0.1, 0.0);
        let bump = |x: f64| 0.5 + 0.3 * (x * 0.9).sin();
        let u11 = move |x: f64| 0.25 * bump(x);
        let u01 = move |x: f64| 0.2 * bump(x);
        let u10 = move |x: f64| 0.15 * bump(x);
        let u00 = move |x: f64| 1.0 - u11(x) - u01(x) - u10(x);
        let mut field = super::super::PdeField::from_profiles(
            grid,
            Boundary::Periodic,
            vec!["u00", "u01", "u10", "u11"],
            &[&u00, &u01, &u10, &u11],
        );
        let dt = stability_limit(0.1, 1);
        let mut stepper = RdStepper::new(spec, dt, &field).unwrap();
        for _ in 0..10_000 {
            stepper.step(&mut field).unwrap();
        }
        for i in 0..field.grid.len() {
            let s: f64 = field.data.iter().map(|c| c[i]).sum();
            assert!((s - 1.0).abs() < 1e-8, "sum {s} at cell {i}");
        }
    }

    #[test]
    fn sys10_stays_in_order_region() {
        // Region invariance: 0 <= v <= u <= 1 along the flow.
        let spec = ReactionSpec::new(ReactionSystem::Sys10, 2.0, 2, Model::G2);
        let grid = Grid::line(128, 0.1, -6.4);
        let u0 = |x: f64| 0.6 + 0.35 * (-x * x / 4.0).exp();
        let v0 = |x: f64| 0.5 * (-x * x / 2.0).exp();
        let mut field = super::super::PdeField::from_profiles(
            grid,
            Boundary::Neumann,
            vec!["u", "v"],
            &[&u0, &v0],
        );
        let dt = stability_limit(0.1, 1);
        let mut stepper = RdStepper::new(spec, dt, &field).unwrap();
        for _ in 0..4000 {
            stepper.step(&mut field).unwrap();
            for i in 0..field.grid.len() {
                let (u, v) = (field.data[0][i], field.data[1][i]);
                assert!(v >= -1e-9 && v <= u + 1e-9 && u <= 1.0 + 1e-9);
            }
        }
    }

    #[test]
    fn ordered_initial_data_stay_ordered() {
        use rand::Rng;
        let spec = ReactionSpec::new(ReactionSystem::Sys10, 1.5, 2, Model::G2);
        let mut rng = crate::rng::stream_rng(21, 0);
        for trial in 0..20 {
            let grid = Grid::line(48, 0.2, 0.0);
            let a = rng.gen::<f64>() * 0.3;
            let b = rng.gen::<f64>() * 0.25;
            let phase = rng.gen::<f64>() * 6.28;
            let lo_u = move |x: f64| 0.35 + a * (x * 0.65 + phase).sin().powi(2);
            let lo_v = move |x: f64| 0.2 + b * (x * 0.65 + phase).cos().powi(2) * 0.5;
            let hi_u = move |x: f64| lo_u(x) + 0.15;
            let hi_v = move |x: f64| lo_v(x) + 0.1;
            let mut lo = super::super::PdeField::from_profiles(
                grid,
                Boundary::Periodic,
                vec!["u", "v"],
                &[&lo_u, &lo_v],
            );
            let mut hi = super::super::PdeField::from_profiles(
                grid,
                Boundary::Periodic,
                vec!["u", "v"],
                &[&hi_u, &hi_v],
            );
            let dt = stability_limit(0.2, 1);
            let mut s1 = RdStepper::new(spec, dt, &lo).unwrap();
            let mut s2 = RdStepper::new(spec, dt, &hi).unwrap();
            for _ in 0..(5.0 / dt) as usize {
                s1.step(&mut lo).unwrap();
                s2.step(&mut hi).unwrap();
            }
            assert!(lo.le(&hi), "trial {trial}");
        }
    }

    #[test]
    fn scalar_ordered_pairs_stay_ordered() {
        let spec = ReactionSpec::new(ReactionSystem::Sys11, 1.5, 2, Model::G2);
        let grid = Grid::line(64, 0.15, 0.0);
        let lo_p = |x: f64| 0.3 + 0.2 * (x * 0.5).sin().powi(2);
        let hi_p = |x: f64| 0.55 + 0.2 * (x * 0.4).cos().powi(2);
        let mut lo =
            super::super::PdeField::from_profiles(grid, Boundary::Periodic, vec!["u"], &[&lo_p]);
        let mut hi =
            super::super::PdeField::from_profiles(grid, Boundary::Periodic, vec!["u"], &[&hi_p]);
        let dt = stability_limit(0.15, 1);
        let mut s1 = RdStepper::new(spec, dt, &lo).unwrap();
        let mut s2 = RdStepper::new(spec, dt, &hi).unwrap();
        for _ in 0..(5.0 / dt) as usize {
            s1.step(&mut lo).unwrap();
            s2.step(&mut hi).unwrap();
        }
        assert!(lo.le(&hi));
    }

    #[test]
    fn symmetric_pair_system_reduces_to_scalar() {
        let spec_pair = ReactionSpec::new(ReactionSystem::Sys11Pair, 1.5, 2, Model::G2);
        let spec_scalar = ReactionSpec::new(ReactionSystem::Sys11, 1.5, 2, Model::G2);
        let grid = Grid::line(96, 0.1, 0.0);
        let p = |x: f64| 0.5 + 0.3 * (x * 0.6).sin();
        let mut pair = super::super::PdeField::from_profiles(
            grid,
            Boundary::Periodic,
            vec!["u1", "u2"],
            &[&p, &p],
        );
        let mut scalar =
            super::super::PdeField::from_profiles(grid, Boundary::Periodic, vec!["u"], &[&p]);
        let dt = stability_limit(0.1, 1);
        let mut s1 = RdStepper::new(spec_pair, dt, &pair).unwrap();
        let mut s2 = RdStepper::new(spec_scalar, dt, &scalar).unwrap();
        s1.run_until(&mut pair, 1.0).unwrap();
        s2.run_until(&mut scalar, 1.0).unwrap();
        for i in 0..grid.len() {
            assert!((pair.data[0][i] - pair.data[1][i]).abs() < 1e-10);
            assert!((pair.data[0][i] - scalar.data[0][i]).abs() < 1e-10);
        }
    }

    #[test]
    fn four_state_reduction_matches_two_density_system() {
        // (u00, u01, u10, u11) -> (u, v) = (u01 + u10 + u11, u11) is an
        // exact, linear reduction of the four-state system, so evolving
        // then mapping agrees with mapping then evolving up to rounding.
        let lambda = 1.3;
        let grid = Grid::line(96, 0.1, 0.0);
        let u11 = |x: f64| 0.2 + 0.15 * (x * 0.7).sin().powi(2);
        let u01 = |x: f64| 0.15 + 0.1 * (x * 0.4).cos().powi(2);
        let u10 = |x: f64| 0.1 + 0.12 * (x * 0.9 + 1.0).sin().powi(2);
        let u00 = |x: f64| 1.0 - u11(x) - u01(x) - u10(x);
        let mut four = super::super::PdeField::from_profiles(
            grid,
            Boundary::Periodic,
            vec!["u00", "u01", "u10", "u11"],
            &[&u00, &u01, &u10, &u11],
        );
        let u_init = |x: f64| u01(x) + u10(x) + u11(x);
        let mut two = super::super::PdeField::from_profiles(
            grid,
            Boundary::Periodic,
            vec!["u", "v"],
            &[&u_init, &u11],
        );
        let dt = stability_limit(0.1, 1);
        let mut s9 = RdStepper::new(
            ReactionSpec::new(ReactionSystem::Sys9, lambda, 2, Model::G2),
            dt,
            &four,
        )
        .unwrap();
        let mut s10 = RdStepper::new(
            ReactionSpec::new(ReactionSystem::Sys10, lambda, 2, Model::G2),
            dt,
            &two,
        )
        .unwrap();
        s9.run_until(&mut four, 1.0).unwrap();
        s10.run_until(&mut two, 1.0).unwrap();
        for i in 0..grid.len() {
            let u_mapped = four.data[1][i] + four.data[2][i] + four.data[3][i];
            let v_mapped = four.data[3][i];
            assert!((u_mapped - two.data[0][i]).abs() < 1e-6);
            assert!((v_mapped - two.data[1][i]).abs() < 1e-6);
        }
    }

    #[test]
    fn grid_refinement_second_order() {
        let spec = ReactionSpec::new(ReactionSystem::Sys11, 1.5, 2, Model::G2);
        let len = 12.8;
        let profile = |x: f64| 0.5 + 0.25 * (x * std::f64::consts::TAU / 12.8).sin();
        let solve = |n: usize| {
            let dx = len / n as f64;
            let grid = Grid::line(n, dx, 0.0);
            let mut f = super::super::PdeField::from_profiles(
                grid,
                Boundary::Periodic,
                vec!["u"],
                &[&profile],
            );
            // dt fixed by the finest grid so the time error is common.
            let dt = stability_limit(len / 256.0, 1);
            let mut stepper = RdStepper::new(spec, dt, &f).unwrap();
            stepper.run_until(&mut f, 1.0).unwrap();
            f
        };
        let coarse = solve(64);
        let mid = solve(128);
        let fine = solve(256);
        let diff_cm: f64 = (0..64)
            .map(|i| (coarse.data[0][i] - mid.data[0][2 * i]).abs())
            .fold(0.0, f64::max);
        let diff_mf: f64 = (0..128)
            .map(|i| (mid.data[0][i] - fine.data[0][2 * i]).abs())
            .fold(0.0, f64::max);
        let order = (diff_cm / diff_mf).log2();
        assert!(order >= 1.8, "observed order {order}");
    }

    #[test]
    fn instability_is_reported_not_clamped() {
        let spec = heat_spec();
        let grid = Grid::line(8, 0.1, 0.0);
        let mut field =
            super::super::PdeField::constant(grid, Boundary::Periodic, vec!["u"], &[0.5]);
        // Poison one cell well outside [0, 1].
        field.data[0][3] = 2.0;
        let dt = stability_limit(0.1, 1);
        let mut stepper = RdStepper::new(spec, dt, &field).unwrap();
        assert!(matches!(
            stepper.step(&mut field),
            Err(PdeError::Instability { .. })
        ));
    }

    #[test]
    fn oversized_dt_rejected() {
        let spec = heat_spec();
        let grid = Grid::line(8, 0.1, 0.0);
        let field = super::super::PdeField::constant(grid, Boundary::Periodic, vec!["u"], &[0.5]);
        assert!(RdStepper::new(spec, 0.01, &field).is_err());
    }
}
