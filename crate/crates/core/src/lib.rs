//! Exact simulation of transfinite Blum-Shub-Smale register machines.

pub mod analysis;
pub mod batch;
pub mod codec;
pub mod engine;
pub mod lang;
pub mod number;
pub mod ordinal;
pub mod transforms;
