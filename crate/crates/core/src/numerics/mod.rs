//! Ball arithmetic, relative polynomials and certified root isolation.

pub mod ball;
pub mod poly;
pub mod roots;

pub use ball::{ArbComplex, ArbReal};
pub use poly::{resultant, RelPoly};
pub use roots::{complex_roots, MAX_ESCALATIONS};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 1200;

/// Horner evaluation of `p` at a complex ball.
pub fn eval(p: &RelPoly, z: &ArbComplex) -> ArbComplex {
    p.eval(z)
}
