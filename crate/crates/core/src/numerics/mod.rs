//! Shared numerical kernels: quadrature, a bisection eigensolver for
//! symmetric tridiagonal matrices, Hermite functions and Landau-level norms.

pub mod hermite;
pub mod landau;
pub mod quadrature;
pub mod tridiag;

pub use hermite::{hermite_phi, hermite_phi_all, hermite_tail, log_hermite_tail};
pub use landau::log_landau_norm_sq;
pub use quadrature::{integrate_1d, integrate_annulus, QuadratureRule};
pub use tridiag::{eig_window, sturm_count, TridiagonalSym};
