//! Causal wavelet features for univariate forecasting.
//!
//! The core of the crate is a single-pass, strictly causal engine that
//! computes non-decimated wavelet (NDWT) and non-decimated wavelet packet
//! (NWPT) coefficients one observation at a time ([`transform`]). On top of
//! it sit feature-matrix construction and selection ([`featureset`]),
//! linear baselines with wavelet-number cross-validation ([`forecast`]),
//! the SMAPE metric ([`metrics`]) and simulated test signals ([`signals`]).

pub mod error;
pub mod featureset;
pub mod filterbank;
pub mod forecast;
pub mod metrics;
pub mod numfmt;
pub mod signals;
pub mod transform;

pub use error::{Error, Result};

/// Library version, recorded in run directories.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use filterbank::{daubechies_filter, mirror, FilterPair};
pub use transform::{
    ndwt_push, nwpt_push, transform_series, CoefficientFrame, Mode, NodeId, TransformConfig,
    TransformState,
};
