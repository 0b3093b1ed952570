pub mod dynamics;
pub mod mebuilder;
pub mod model;
pub mod numkernel;
pub mod protocol;

use num_complex::Complex;

pub use num_complex::Complex64 as C64;

/// Double-precision complex matrix used by the physics layers.
pub type CMatrix = numkernel::Matrix<f64>;
/// Single-precision complex matrix.
pub type CMatrix32 = numkernel::Matrix<f32>;
/// State vector in the computational basis.
pub type Ket = Vec<Complex<f64>>;
