//! Small numerical toolkit shared by the geometry and billiard layers.

pub mod nelder_mead;
pub mod roots;
pub mod sphere;

pub use nelder_mead::{minimize, minimize_restarting, Minimum, NelderMeadConfig};
pub use roots::{first_crossing, golden_min};
pub use sphere::minimize_on_sphere;
