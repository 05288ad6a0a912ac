//! Two-sex lattice birth-death simulators with rapid stirring, the
//! reaction-diffusion systems that arise in their fast-stirring limits,
//! critical-rate bisection, oriented-percolation comparison runs, and a
//! numerical certificate suite for the interval-expansion (survival)
//! machinery of the associated two-component PDE.
//!
//! The crate is organised around five subsystems:
//!
//! - [`lattice_ips`]: exact event-driven simulation of the two-sex particle
//!   systems on finite tori, monotone couplings, and a small-state-space
//!   generator-matrix oracle.
//! - [`mean_field_pde`]: explicit finite-difference solvers and reaction
//!   kernels for the limiting PDE/ODE systems.
//! - [`critical_search`]: front-tracking survival classification and
//!   bisection brackets for the critical birth rate.
//! - [`condition_star`]: piecewise-linear comparison fields, curve families,
//!   profile/heat lemmas and the end-to-end interval-expansion check.
//! - [`percolation`]: M-dependent oriented percolation and the good-event
//!   probability calculator.
//!
//! The [`cli`] module wires everything to a batch command-line interface.

pub mod cli;
pub mod condition_star;
pub mod config;
pub mod critical_search;
pub mod lattice_ips;
pub mod mean_field_pde;
pub mod numeric;
pub mod percolation;
pub mod report;
pub mod rng;
pub mod svg;
