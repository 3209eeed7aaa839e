//! Degree-one maps `S² → CP^k` as `(k+1)×2` matrices, the canonical family
//! `φ_μ`, and tangent vectors sampled on a quadrature grid.
//!
//! A matrix `M` acts on homogeneous coordinates of the domain by `ζ ↦ Mζ`.
//! The group `U(k+1) × U(2)` acts by `(U1, U2)·M = U1 M U2†`, and a Lie algebra
//! element `(A, B)` generates the curve `exp(−tA) M exp(tB)`, with velocity
//! `M B − A M`.

use nalgebra::SVD;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, usage, Result};
use crate::lie::{embed_coords, is_unitary, CMatrix, LieElement, Tangent};
use crate::projective::fs_inner_raw;
use crate::quadrature::{GridKey, QuadGrid};

const RANK_TOL: f64 = 1e-10;

/// A holomorphic map of degree at most one, `[ζ] ↦ [Mζ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HoloMap {
    m: CMatrix,
}

impl HoloMap {
    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        if m.ncols() != 2 || m.nrows() < 2 {
            return Err(usage(format!(
                "a map matrix must be (k+1)×2 with k ≥ 1, got {}×{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(usage("map matrix has non-finite entries"));
        }
        if m.iter().all(|z| z.norm_sqr() == 0.0) {
            return Err(domain("the zero matrix does not define a map"));
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn k(&self) -> usize {
        self.m.nrows() - 1
    }

    /// Singular values in decreasing order.
    pub fn singular_values(&self) -> (f64, f64) {
        let sv = SVD::new(self.m.clone(), false, false).singular_values;
        let (a, b) = (sv[0], sv[1]);
        if a >= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Degree exactly one: σ2 > 10⁻¹⁰ σ1.
    pub fn is_rank_two(&self) -> bool {
        let (s1, s2) = self.singular_values();
        s2 > RANK_TOL * s1
    }

    /// Lift `Mζ` of the image of a domain point.
    pub fn apply(&self, zeta: [Complex64; 2]) -> Vec<Complex64> {
        (0..self.m.nrows())
            .map(|r| self.m[(r, 0)] * zeta[0] + self.m[(r, 1)] * zeta[1])
            .collect()
    }
}

/// Parameters shared by the moduli-space computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModuliConfig {
    pub k: usize,
    pub c1: f64,
    pub c2: f64,
}

impl ModuliConfig {
    pub fn new(k: usize, c1: f64, c2: f64) -> Result<Self> {
        if k == 0 {
            return Err(usage("k must be at least 1"));
        }
        for (name, c) in [("c1", c1), ("c2", c2)] {
            if !(c > 0.0 && c.is_finite()) {
                return Err(usage(format!("{name} must be positive, got {c}")));
            }
        }
        Ok(Self { k, c1, c2 })
    }
}

/// The canonical map `[z0, z1] ↦ [μ z0, z1, 0, …, 0]`.
pub fn phi_mu(mu: f64, k: usize) -> Result<HoloMap> {
    if !(mu >= 1.0 && mu.is_finite()) {
        return Err(usage(format!("μ must be ≥ 1, got {mu}")));
    }
    if k == 0 {
        return Err(usage("k must be at least 1"));
    }
    let mut m = CMatrix::zeros(k + 1, 2);
    m[(0, 0)] = Complex64::new(mu, 0.0);
    m[(1, 1)] = Complex64::new(1.0, 0.0);
    HoloMap::from_matrix(m)
}

/// Group action `U1 M U2†`.
pub fn g_act(u1: &CMatrix, u2: &CMatrix, map: &HoloMap) -> Result<HoloMap> {
    let k = map.k();
    if u1.shape() != (k + 1, k + 1) || u2.shape() != (2, 2) {
        return Err(usage("group element has the wrong shape"));
    }
    if !is_unitary(u1, 1e-10) || !is_unitary(u2, 1e-10) {
        return Err(usage("group element is not unitary"));
    }
    HoloMap::from_matrix(u1 * map.matrix() * u2.adjoint())
}

/// Velocity `M B − A M` of `exp(−tA) M exp(tB)` at t = 0.
pub fn matrix_velocity(map: &HoloMap, xi: &LieElement) -> CMatrix {
    map.matrix() * &xi.b - &xi.a * map.matrix()
}

/// A tangent vector to the space of maps sampled at the nodes of a grid:
/// at each node, the lift `Mζ` and the lift velocity.
#[derive(Debug, Clone)]
pub struct TangentField {
    dim: usize,
    lifts: Vec<Complex64>,
    velocities: Vec<Complex64>,
    key: GridKey,
}

impl TangentField {
    pub fn n_nodes(&self) -> usize {
        self.lifts.len() / self.dim
    }

    pub fn lift(&self, node: usize) -> &[Complex64] {
        &self.lifts[node * self.dim..(node + 1) * self.dim]
    }

    pub fn velocity(&self, node: usize) -> &[Complex64] {
        &self.velocities[node * self.dim..(node + 1) * self.dim]
    }

    /// `max_z |v1(z) − s·v2(z)|_FS`, the pointwise distance between `self` and
    /// `s·other` as tangent vectors to CP^k.
    pub fn max_distance(&self, other: &TangentField, s: Complex64, c2: f64) -> Result<f64> {
        self.check_compatible(other)?;
        let mut worst = 0.0f64;
        for i in 0..self.n_nodes() {
            let w = self.lift(i);
            let diff: Vec<Complex64> = self
                .velocity(i)
                .iter()
                .zip(other.velocity(i))
                .map(|(a, b)| a - s * b)
                .collect();
            worst = worst.max(fs_inner_raw(w, &diff, &diff, c2).max(0.0).sqrt());
        }
        Ok(worst)
    }

    fn check_compatible(&self, other: &TangentField) -> Result<()> {
        if self.key != other.key || self.dim != other.dim {
            return Err(usage("tangent fields were sampled on different grids"));
        }
        if self.lifts != other.lifts {
            return Err(usage("tangent fields are based at different maps"));
        }
        Ok(())
    }
}

fn sample(map: &HoloMap, vel: &CMatrix, grid: &QuadGrid) -> TangentField {
    let dim = map.k() + 1;
    let vel_map = HoloMap { m: vel.clone() };
    let per_node: Vec<(Vec<Complex64>, Vec<Complex64>)> = grid
        .nodes()
        .par_iter()
        .map(|node| (map.apply(node.homogeneous), vel_map.apply(node.homogeneous)))
        .collect();
    let mut lifts = Vec::with_capacity(dim * per_node.len());
    let mut velocities = Vec::with_capacity(dim * per_node.len());
    for (w, v) in per_node {
        lifts.extend(w);
        velocities.extend(v);
    }
    TangentField {
        dim,
        lifts,
        velocities,
        key: grid.key(),
    }
}

/// Pushforward of `xi ∈ g` at `map`, sampled on `grid`.
pub fn pushforward_field(map: &HoloMap, xi: &LieElement, grid: &QuadGrid) -> Result<TangentField> {
    if xi.k() != map.k() {
        return Err(usage("Lie algebra element and map have different k"));
    }
    Ok(sample(map, &matrix_velocity(map, xi), grid))
}

/// The field `∂φ_μ/∂μ`, i.e. `ζ0 e0` at each node.
pub fn mu_velocity_field(mu: f64, k: usize, grid: &QuadGrid) -> Result<TangentField> {
    let map = phi_mu(mu, k)?;
    let mut vel = CMatrix::zeros(k + 1, 2);
    vel[(0, 0)] = Complex64::new(1.0, 0.0);
    Ok(sample(&map, &vel, grid))
}

/// Field of a tangent vector `dμ ∂/∂μ + p` at `φ_μ`.
pub fn tangent_field(mu: f64, k: usize, t: &Tangent, grid: &QuadGrid) -> Result<TangentField> {
    let map = phi_mu(mu, k)?;
    let xi = embed_coords(&t.p, mu, k)?;
    let mut vel = matrix_velocity(&map, &xi);
    vel[(0, 0)] += Complex64::new(t.dmu, 0.0);
    Ok(sample(&map, &vel, grid))
}

/// L² inner product `∫ h(f1, f2) dA` with the target FS metric of curvature `c2`.
pub fn l2_inner(f1: &TangentField, f2: &TangentField, grid: &QuadGrid, c2: f64) -> Result<f64> {
    f1.check_compatible(f2)?;
    if f1.key != grid.key() {
        return Err(usage("tangent fields were sampled on a different grid"));
    }
    if !(c2 > 0.0 && c2.is_finite()) {
        return Err(usage(format!("c2 must be positive, got {c2}")));
    }
    let values: Vec<f64> = (0..f1.n_nodes())
        .into_par_iter()
        .map(|i| fs_inner_raw(f1.lift(i), f1.velocity(i), f2.velocity(i), c2))
        .collect();
    grid.integrate_values(&values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::PCoords;
    use crate::projective::flatten;

    const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

    #[test]
    fn phi_mu_shapes() {
        let m = phi_mu(2.0, 3).unwrap();
        assert_eq!(m.k(), 3);
        assert_eq!(m.matrix()[(0, 0)], Complex64::new(2.0, 0.0));
        assert!(m.is_rank_two());
        assert!(phi_mu(0.5, 2).is_err());
        let flat = flatten(&m);
        assert!(!flat.excluded);
        assert_eq!(flat.point.dimension(), 7);
    }

    #[test]
    fn rank_one_matrix_is_excluded() {
        let mut m = CMatrix::zeros(3, 2);
        m[(0, 0)] = ONE;
        m[(0, 1)] = ONE * 2.0;
        let map = HoloMap::from_matrix(m).unwrap();
        assert!(!map.is_rank_two());
        assert!(flatten(&map).excluded);
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(HoloMap::from_matrix(CMatrix::zeros(3, 2)).is_err());
        assert!(HoloMap::from_matrix(CMatrix::from_element(3, 3, ONE)).is_err());
    }

    #[test]
    fn mu_direction_length_at_mu_one() {
        // |∂μ|² = (4/c2) ∫ t(1−t)/(μ²t + 1 − t)² dA; at μ = 1 this is
        // (4/c2)(2/c1)·2π·(1/6)
        let grid = QuadGrid::new(32, 8, 4.0).unwrap();
        let f = mu_velocity_field(1.0, 2, &grid).unwrap();
        let got = l2_inner(&f, &f, &grid, 4.0).unwrap();
        let want = 2.0 * std::f64::consts::PI / 12.0;
        assert!((got - want).abs() < 1e-13);
    }

    #[test]
    fn grid_mismatch_is_usage_error() {
        let g1 = QuadGrid::new(16, 8, 4.0).unwrap();
        let g2 = QuadGrid::new(24, 8, 4.0).unwrap();
        let f1 = mu_velocity_field(2.0, 2, &g1).unwrap();
        let f2 = mu_velocity_field(2.0, 2, &g2).unwrap();
        assert!(matches!(l2_inner(&f1, &f2, &g1, 4.0), Err(crate::Error::Usage(_))));
        assert!(matches!(l2_inner(&f1, &f1, &g2, 4.0), Err(crate::Error::Usage(_))));
    }

    #[test]
    fn phat_field_closed_form() {
        // velocity −μ ζ0 e2 at φ_μ
        let mu = 2.0;
        let grid = QuadGrid::new(8, 4, 4.0).unwrap();
        let t = Tangent::from_p(PCoords::phat_unit(0, ONE, 2));
        let f = tangent_field(mu, 2, &t, &grid).unwrap();
        for (i, node) in grid.nodes().iter().enumerate() {
            let v = f.velocity(i);
            assert!((v[2] + node.homogeneous[0] * mu).norm() < 1e-15);
            assert!(v[0].norm() < 1e-15 && v[1].norm() < 1e-15);
        }
    }
}
