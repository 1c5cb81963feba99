//! Collaborative decoding of interleaved Reed-Solomon and Gabidulin codes
//! by Gaussian elimination on the syndrome matrix, with failure-probability
//! analysis and Monte Carlo validation.

pub mod analysis;
pub mod collab;
pub mod field;
pub mod gabidulin;
pub mod io;
pub mod linalg;
pub mod rng;
pub mod rs;
