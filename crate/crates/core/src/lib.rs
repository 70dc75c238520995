pub mod abelian;
pub mod complexes;
pub mod error;
pub mod factor;
pub mod groupring;
pub mod intlinalg;
pub mod lifting;
pub mod modelcls;
pub mod pushout;

pub use error::{Error, Result};
pub mod random;
pub mod verify;
pub mod cli;
