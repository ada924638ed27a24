//! Exact solvers and seeded simulations for road-user crossing games.
//!
//! * [`normal_form`]: two-player bimatrix games: dominance, IESDS, pure and mixed equilibria.
//! * [`bayesian`]: games where nature draws the vehicle type and both players observe it.
//! * [`sequential`]: perfect-information game trees and backward induction.
//! * [`kinematics`]: pedestrian/vehicle arrival times and the entry game built from them.
//! * [`scenario`]: the zebra-crossing and fined-regulation payoff tables.
//! * [`montecarlo`]: reproducible experiments with counter-based random streams.

pub mod bayesian;
pub mod error;
pub mod kinematics;
pub mod linalg;
pub mod lp;
pub mod montecarlo;
pub mod normal_form;
pub mod rational;
pub mod scenario;
pub mod sequential;

pub use error::{Error, Result};
pub use rational::Rational;
