//! Physical-layer secrecy of vehicular links assisted by a reconfigurable
//! intelligent surface (RIS).
//!
//! Two topologies are covered: a vehicle transmitting through an on-board
//! surface used as access point ([`Model::V2vRisAp`]) and a fixed source
//! reflecting off a building-mounted surface ([`Model::VanetRisRelay`]). For
//! each, the crate computes the average secrecy capacity (exactly through the
//! MGF capacity integral, and in closed form through Jensen's bound) and the
//! secrecy outage probability (Gaussian approximation), plus Monte-Carlo
//! estimates of the same quantities.
//!
//! ```
//! use risec_core::{asc_approx, Model, SystemParams};
//!
//! let params = SystemParams::defaults(Model::V2vRisAp);
//! assert!((asc_approx(&params) - 1.8594).abs() < 1e-4);
//! ```

#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod channels;
pub mod error;
pub mod montecarlo;
pub mod secrecy;
pub mod specfun;

pub use channels::{ChannelMoments, ChannelStream, FadingKind};
pub use error::{Error, Result};
pub use montecarlo::{
    mc_asc, mc_gain_sum_moments, mc_snr_pair, mc_sop, simulate, McConfig, McEstimate, McRun,
    SampleMoments,
};
pub use secrecy::{
    asc_approx, asc_exact, asc_exact_clamped, avg_capacity, capacities, jensen_bound, link_mgf,
    report, snr_scale, sop, Link, Model, SecrecyReport, SopMode, SystemParams,
};
pub use specfun::QuadratureSpec;
