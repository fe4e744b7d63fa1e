//! Parameters, weight functions, the Θ integral and the kernel variants.

pub mod kernel;
pub mod params;
pub mod theta;
pub mod weight;
