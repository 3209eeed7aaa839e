//! Points of complex projective space and the Fubini-Study metric.
//!
//! The metric of holomorphic sectional curvature `c` is written in terms of a
//! lift `w ∈ C^{N+1}` and a lift velocity `v`:
//!
//! ```text
//! |v|²_FS = (4/c) · [ (v†v)(w†w) − |w†v|² ] / (w†w)²
//! ```
//!
//! With this normalization CP^1 at curvature `c` is the round sphere of radius
//! `1/√c`. Velocities along the lift (`v = s·w`) carry zero length.

use num_complex::Complex64;

use crate::error::{domain, usage, Result};
use crate::moduli::HoloMap;

const SAME_POINT_TOL: f64 = 1e-12;

/// A point of CP^N given by a nonzero lift in C^{N+1}.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivePoint {
    lift: Vec<Complex64>,
}

impl ProjectivePoint {
    pub fn new(lift: Vec<Complex64>) -> Result<Self> {
        if lift.len() < 2 {
            return Err(usage("a projective point needs at least two homogeneous coordinates"));
        }
        if lift.iter().all(|z| z.norm_sqr() == 0.0) {
            return Err(domain("zero vector does not define a projective point"));
        }
        Ok(Self { lift })
    }

    pub fn from_reals(lift: &[f64]) -> Result<Self> {
        Self::new(lift.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn lift(&self) -> &[Complex64] {
        &self.lift
    }

    /// Complex dimension N of the ambient CP^N.
    pub fn dimension(&self) -> usize {
        self.lift.len() - 1
    }

    /// Projective equality: all 2×2 minors of the pair of lifts vanish relative
    /// to the product of their norms.
    pub fn same_point(&self, other: &ProjectivePoint) -> bool {
        if self.lift.len() != other.lift.len() {
            return false;
        }
        let scale = norm(&self.lift) * norm(&other.lift);
        let n = self.lift.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let minor = self.lift[i] * other.lift[j] - self.lift[j] * other.lift[i];
                if minor.norm() > SAME_POINT_TOL * scale {
                    return false;
                }
            }
        }
        true
    }

    /// Multiply the lift by a nonzero scalar (same projective point).
    pub fn rescaled(&self, s: Complex64) -> Result<Self> {
        Self::new(self.lift.iter().map(|z| z * s).collect())
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn hdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Real Fubini-Study inner product on raw slices; no validation.
///
/// The velocities are projected orthogonally to `w` first, which avoids the
/// cancellation in the expanded formula for velocities nearly along the lift.
pub(crate) fn fs_inner_raw(w: &[Complex64], v1: &[Complex64], v2: &[Complex64], c: f64) -> f64 {
    let ww = hdot(w, w).re;
    let s1 = hdot(w, v1) / ww;
    let s2 = hdot(w, v2) / ww;
    let dot: Complex64 = w
        .iter()
        .zip(v1.iter().zip(v2))
        .map(|(wi, (a, b))| (a - s1 * wi).conj() * (b - s2 * wi))
        .sum();
    4.0 / c * dot.re / ww
}

fn check_args(w: &ProjectivePoint, v: &[Complex64], c: f64) -> Result<()> {
    if v.len() != w.lift.len() {
        return Err(usage(format!(
            "velocity has length {} but the lift has length {}",
            v.len(),
            w.lift.len()
        )));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(usage(format!("curvature must be positive, got {c}")));
    }
    Ok(())
}

/// Squared Fubini-Study length of the tangent vector represented by `(w, v)`.
pub fn fs_norm_sq(w: &ProjectivePoint, v: &[Complex64], c: f64) -> Result<f64> {
    check_args(w, v, c)?;
    Ok(fs_inner_raw(&w.lift, v, v, c).max(0.0))
}

/// Real polarization of [`fs_norm_sq`].
pub fn fs_inner(w: &ProjectivePoint, v1: &[Complex64], v2: &[Complex64], c: f64) -> Result<f64> {
    check_args(w, v1, c)?;
    check_args(w, v2, c)?;
    Ok(fs_inner_raw(&w.lift, v1, v2, c))
}

/// Image of a holomorphic map in CP^{2k+1}.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatPoint {
    pub point: ProjectivePoint,
    /// True when the matrix has rank < 2, i.e. the point lies on the Segre
    /// variety CP^1 × CP^k that is removed from CP^{2k+1}.
    pub excluded: bool,
}

/// `[M] ↦ [a_0, …, a_k, b_0, …, b_k]`, first column first.
pub fn flatten(map: &HoloMap) -> FlatPoint {
    let m = map.matrix();
    let lift: Vec<Complex64> = m.column(0).iter().chain(m.column(1).iter()).copied().collect();
    FlatPoint {
        point: ProjectivePoint { lift },
        excluded: !map.is_rank_two(),
    }
}

/// Segre embedding `([x0,x1],[y0..yk]) ↦ [x0 y0, …, x0 yk, x1 y0, …, x1 yk]`.
pub fn segre(x: [Complex64; 2], y: &[Complex64]) -> Result<ProjectivePoint> {
    let lift = x.iter().flat_map(|xi| y.iter().map(move |yj| xi * yj)).collect();
    ProjectivePoint::new(lift)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn orthonormal_unit_case() {
        let w = ProjectivePoint::from_reals(&[1.0, 0.0]).unwrap();
        assert!((fs_norm_sq(&w, &[c(0., 0.), c(1., 0.)], 4.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn velocity_along_lift_is_gauge() {
        let w = ProjectivePoint::from_reals(&[1.0, 0.0]).unwrap();
        assert_eq!(fs_norm_sq(&w, &[c(1., 0.), c(0., 0.)], 4.0).unwrap(), 0.0);
    }

    #[test]
    fn matches_affine_chart_at_zeta_one() {
        // 4/c · |dζ|²/(1+|ζ|²)² with ζ = w1/w0 = 1, dζ = -1 for v = (1,0).
        let w = ProjectivePoint::from_reals(&[1.0, 1.0]).unwrap();
        let chart = 4.0 / 4.0 * 1.0 / (2.0f64 * 2.0);
        let got = fs_norm_sq(&w, &[c(1., 0.), c(0., 0.)], 4.0).unwrap();
        assert!((got - 0.25).abs() < 1e-15);
        assert!((got - chart).abs() < 1e-15);
    }

    #[test]
    fn inner_product_examples() {
        let w = ProjectivePoint::from_reals(&[1.0, 0.0]).unwrap();
        let e1 = [c(0., 0.), c(1., 0.)];
        let ie1 = [c(0., 0.), c(0., 1.)];
        assert_eq!(fs_inner(&w, &e1, &ie1, 4.0).unwrap(), 0.0);
        assert!((fs_inner(&w, &e1, &e1, 4.0).unwrap() - 1.0).abs() < 1e-15);

        // polarization oracle from norms of v1, v2, v1+v2
        let w = ProjectivePoint::from_reals(&[1.0, 1.0]).unwrap();
        let v1 = [c(1., 0.), c(0., 0.)];
        let v2 = [c(0., 0.), c(1., 0.)];
        let sum = [c(1., 0.), c(1., 0.)];
        let n = |v: &[Complex64]| fs_norm_sq(&w, v, 4.0).unwrap();
        let polar = 0.5 * (n(&sum) - n(&v1) - n(&v2));
        let got = fs_inner(&w, &v1, &v2, 4.0).unwrap();
        assert!((got + 0.25).abs() < 1e-15);
        assert!((got - polar).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            ProjectivePoint::from_reals(&[0.0, 0.0]),
            Err(crate::Error::Domain(_))
        ));
        let w = ProjectivePoint::from_reals(&[1.0, 0.0]).unwrap();
        assert!(matches!(fs_norm_sq(&w, &[c(1., 0.)], 4.0), Err(crate::Error::Usage(_))));
        assert!(matches!(
            fs_norm_sq(&w, &[c(1., 0.), c(0., 0.)], 0.0),
            Err(crate::Error::Usage(_))
        ));
    }

    #[test]
    fn projective_equality_respects_scaling() {
        let p = ProjectivePoint::new(vec![c(1., 2.), c(-0.5, 0.3), c(0., 1.)]).unwrap();
        let q = p.rescaled(c(0.3, -4.0)).unwrap();
        assert!(p.same_point(&q));
        let r = ProjectivePoint::new(vec![c(1., 2.), c(-0.5, 0.3), c(0., 1.1)]).unwrap();
        assert!(!p.same_point(&r));
    }
}
