//! Entanglement-assisted quantum LDPC codes from Steiner designs and finite
//! geometries.

pub mod field;
pub mod decoder;
pub mod designs;
pub mod eaqecc;
pub mod geometry;
pub mod gf2;
pub mod io;
pub mod simulator;
pub mod tables;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
