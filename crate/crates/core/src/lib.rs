//! Geometry of the moduli space of degree-one holomorphic maps `S² → CP^k`.
//!
//! The space is `{M ∈ C^{(k+1)×2} : rank M = 2}/C^×`, an open subset of
//! CP^{2k+1}. It is a cohomogeneity-one manifold for `U(k+1) × U(2)`, with
//! orbit parameter μ ≥ 1 and representatives `φ_μ = [μ z0, z1, 0, …, 0]`.
//!
//! - [`projective`]: Fubini-Study metric on lifts.
//! - [`quadrature`]: tensor grids on the domain sphere.
//! - [`moduli`]: maps, the canonical family, tangent fields and the L² product.
//! - [`lie`]: the reductive splitting `g = k ⊕ p`, brackets, the complex structure.
//! - [`kahler`]: invariant Kähler metrics and their profiles.
//! - [`volume`]: volume forms, total volumes, ray lengths.
//! - [`cylinder`]: the cylinder `[1, μ z^d]` and its volume.

pub mod cylinder;
mod error;
pub mod kahler;
pub mod lie;
pub mod moduli;
pub mod projective;
pub mod quadrature;
pub mod volume;

pub use error::{Error, Result};
pub use kahler::{coefficients, KahlerProfile, MetricCoefficients};
pub use lie::{LieElement, PCoords, Tangent};
pub use moduli::{phi_mu, HoloMap};
pub use projective::ProjectivePoint;
pub use quadrature::QuadGrid;
