//! Special functions with numerically safe (log-scaled) evaluation.
//!
//! Everything here is a pure function of its arguments; no shared mutable
//! state, safe for concurrent use.

pub mod bessel;
pub mod factorial;
pub mod harmonics;
pub mod lambert;

pub use bessel::{
    cyl_j_ladder, cyl_y_ladder, cylindrical_bessel, spherical_bessel_j, spherical_h1_ladder,
    spherical_hankel_h1, spherical_jn_ladder, CylKind,
};
pub use factorial::{ln_double_factorial, log10_odd_double_factorial};
pub use harmonics::{
    angular_functions, spherical_harmonic, surface_gradient_y, vector_spherical_harmonics,
    AngularFunctions, SphericalHarmonicIndex, VectorHarmonicTriple,
};
pub use lambert::lambert_w0;
