//! Multi-sector capacity expansion engine.
//!
//! Co-optimizes investment and hourly operation of power, hydrogen, CO2
//! (capture/transport/storage/utilization) and liquid-fuel supply chains under
//! a joint emissions cap, fed by a bottom-up transportation energy demand
//! generator. Everything runs on canonical internal units: MWh, tonne, MW,
//! tonne-per-hour, EUR, hour.

pub mod demand;
pub mod error;
pub mod fixtures;
pub mod fuels;
pub mod lp;
pub mod model;
pub mod reduction;
pub mod report;
pub mod scenario;
pub mod supply;
pub mod system;
pub mod units;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
