//! Small numerical kernels shared by the physics modules.

pub mod pchip;
pub mod quadrature;
pub mod search;

pub use pchip::Pchip;
pub use quadrature::{integrate, Integral, QuadratureOptions};
pub use search::{bisect_root, golden_section_max};
