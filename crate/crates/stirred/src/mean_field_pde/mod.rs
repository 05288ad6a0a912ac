//! Finite-difference solvers and reaction kernels for the fast-stirring
//! limit systems: the four-state site-distribution system, its reduction to
//! occupied/doubly-occupied densities, the scalar bistable equation for
//! symmetric individual stirring, the neighbourhood-pair lily-pad system,
//! and the single-sex contact limit.
//!
//! All systems share one explicit Euler stepper with 3-point (1D) or
//! 5-point (2D) Laplacians; the schemes never clamp, and out-of-range
//! values are reported as instability instead of being silently repaired.

mod reaction;
mod stepper;
mod wave;

pub use reaction::{
    contact_positive_root, integrate_reaction_ode, rhs_contact, rhs_sys10, rhs_sys11,
    rhs_sys11_pair, rhs_sys12, rhs_sys9, sys10_fixed_points, sys11_roots, upper_fixed_state,
    ReactionSpec, ReactionSystem,
};
pub use stepper::{stability_limit, RdStepper};
pub use wave::{wave_integral_closed_form, wave_integral_criterion};

use thiserror::Error;

pub use crate::lattice_ips::Model;

#[derive(Debug, Error)]
pub enum PdeError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("scheme went unstable: component {component} hit {value} at t = {time}")]
    Instability {
        component: &'static str,
        value: f64,
        time: f64,
    },
    #[error("no nonzero equilibria for beta = {beta} (need beta > 4)")]
    NoRoots { beta: f64 },
}

/// Boundary handling for the Laplacian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    /// Zero-flux: the ghost value mirrors the boundary cell.
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridShape {
    One(usize),
    Two(usize, usize),
}

/// Uniform node-centred mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub dx: f64,
    pub x0: f64,
    pub shape: GridShape,
}

impl Grid {
    pub fn line(n: usize, dx: f64, x0: f64) -> Self {
        Grid {
            dx,
            x0,
            shape: GridShape::One(n),
        }
    }

    pub fn plane(nx: usize, ny: usize, dx: f64, x0: f64) -> Self {
        Grid {
            dx,
            x0,
            shape: GridShape::Two(nx, ny),
        }
    }

    pub fn len(&self) -> usize {
        match self.shape {
            GridShape::One(n) => n,
            GridShape::Two(nx, ny) => nx * ny,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        match self.shape {
            GridShape::One(_) => 1,
            GridShape::Two(_, _) => 2,
        }
    }

    /// x-coordinate of node `i` (1D grids).
    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }
}

/// Named scalar fields on a grid.
#[derive(Debug, Clone)]
pub struct PdeField {
    pub grid: Grid,
    pub boundary: Boundary,
    pub names: Vec<&'static str>,
    pub data: Vec<Vec<f64>>,
    pub time: f64,
}

impl PdeField {
    pub fn constant(grid: Grid, boundary: Boundary, names: Vec<&'static str>, values: &[f64]) -> Self {
        assert_eq!(names.len(), values.len());
        let n = grid.len();
        PdeField {
            grid,
            boundary,
            data: values.iter().map(|&v| vec![v; n]).collect(),
            names,
            time: 0.0,
        }
    }

    /// 1D field built from per-component profiles of x.
    pub fn from_profiles(
        grid: Grid,
        boundary: Boundary,
        names: Vec<&'static str>,
        profiles: &[&dyn Fn(f64) -> f64],
    ) -> Self {
        assert_eq!(names.len(), profiles.len());
        let n = grid.len();
        let data = profiles
            .iter()
            .map(|p| (0..n).map(|i| p(grid.x(i))).collect())
            .collect();
        PdeField {
            grid,
            boundary,
            names,
            data,
            time: 0.0,
        }
    }

    pub fn component(&self, name: &str) -> &[f64] {
        let idx = self
            .names
            .iter()
            .position(|&n| n == name)
            .unwrap_or_else(|| panic!("no component named {name}"));
        &self.data[idx]
    }

    pub fn sup_norm(&self, component: usize) -> f64 {
        self.data[component]
            .iter()
            .fold(0.0f64, |m, &v| m.max(v.abs()))
    }

    /// Pointwise componentwise order against another field on the same grid.
    pub fn le(&self, other: &PdeField) -> bool {
        self.data
            .iter()
            .zip(&other.data)
            .all(|(a, b)| a.iter().zip(b).all(|(x, y)| x <= y))
    }
}
