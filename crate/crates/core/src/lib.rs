//! ARDL bounds-testing cointegration toolkit.

pub mod ardl;
pub mod bounds;
pub mod checks;
pub mod dist;
pub mod forecast;
pub mod frame;
pub mod ols;
pub mod pipeline;
pub mod report;
pub mod rng;
pub mod sim;
pub mod unitroot;
