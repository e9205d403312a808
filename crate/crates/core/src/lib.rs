//! Closed-loop simulator and solvers for joint delay-budget decomposition and
//! service-provider selection across multi-domain networks.
//!
//! The crate is organized around five layers:
//!
//! - [`env`] — analytic ground truth: per-provider time-varying load, minimum
//!   supportable delay, acceptance probability, and admission feedback.
//! - [`risk`] — per-provider monotonic neural risk models trained online from
//!   binary admission feedback held in FIFO buffers.
//! - [`decompose`] — continuous split of an end-to-end delay budget across
//!   domains for a fixed provider choice (grid search plus local refinement).
//! - [`search`] — discrete provider selection: iterated local search (RAILS)
//!   and the NRA / RAES / OPT baselines.
//! - [`harness`] — the experiment driver: feedback generation, model updates,
//!   per-step solving and ground-truth scoring, aggregation, and persistence.
//!
//! Every source of randomness is an explicitly seeded stream, so a whole
//! experiment is a pure function of its configuration and master seed.

pub mod decompose;
pub mod env;
pub mod harness;
pub mod risk;
pub mod search;
