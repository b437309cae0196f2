pub mod checks;
pub mod eigenmodes;
pub mod error;
pub mod experiments;
pub mod harmonics;
pub mod herglotz;
pub mod media;
pub mod mie;
pub mod sobolev;
pub mod spectral;
pub mod specfun;
pub mod transmission;
pub mod vec3;

pub use error::{Error, Result};
