//! Characters of the cohomology groups H^i(G/B, μ) for G = SL3 over a field of
//! characteristic p, with the filtration data that organizes them.

pub mod charring;
pub mod cohom;
pub mod dfilt;
pub mod error;
pub mod hifilt;
pub mod lattice;
pub mod verify;

pub use charring::Character;
pub use cohom::Engine;
pub use error::{Error, Result};
pub use lattice::{Prime, Root, Weight};
