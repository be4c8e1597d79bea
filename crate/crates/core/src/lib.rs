pub mod binomial;
pub mod error;
pub mod fixtures;
pub mod lattice;
pub mod linalg;
pub mod numerics;
pub mod par;
pub mod qfield;
pub mod quartic_pib;
pub mod relthue;
pub mod sextic;

mod smallint;
mod textual;

pub use error::{Error, Result};
