//! Volume forms and total volumes of the moduli space.
//!
//! The volume form of an invariant metric is `F(μ) dμ ∧ vol_{G/K}` where
//! `vol_{G/K}` is the Riemannian volume of the orbit directions measured by
//! `⟨,⟩`. Total volumes are `Vol(G/K) · ∫₁^∞ F dμ`.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::DMatrix;

use crate::error::{usage, Error, Result};
use crate::kahler::{KahlerProfile, MetricCoefficients};
use crate::lie::y_frame;
use crate::moduli::{l2_inner, tangent_field, TangentField};
use crate::quadrature::{GaussLegendre, PanelRule, QuadGrid};

/// Upper end of the log-variable integrals, `μ = e^60`.
const LOG_MU_MAX: f64 = 60.0;

fn log_rule() -> PanelRule {
    PanelRule::new(24, 0.5)
}

fn check_mu_k(mu: f64, k: usize) -> Result<()> {
    if !(mu > 1.0 && mu.is_finite()) {
        return Err(usage(format!("μ must exceed 1, got {mu}")));
    }
    if k == 0 {
        return Err(usage("k must be at least 1"));
    }
    Ok(())
}

/// `F = √8 μ ((μ²+1)/(μ²−1))² A0 A1 A2 (A3 A4)^{k−1}` for any invariant hermitian metric.
pub fn volume_factor_hermitian(co: &MetricCoefficients, mu: f64, k: usize) -> f64 {
    let r = (mu * mu + 1.0) / (mu * mu - 1.0);
    (8.0f64).sqrt() * mu * r * r * co.a0 * co.a1 * co.a2 * (co.a3 * co.a4).powi(k as i32 - 1)
}

/// `F = A² (B² − A²/4)^{k−1} A' / √2` for the Kähler metric with this profile.
pub fn volume_factor_closed(profile: &KahlerProfile, mu: f64, k: usize) -> Result<f64> {
    check_mu_k(mu, k)?;
    Ok(kahler_factor(profile, mu, k))
}

fn kahler_factor(profile: &KahlerProfile, mu: f64, k: usize) -> f64 {
    let (a, b) = (profile.a(mu), profile.b());
    a * a * (b * b - 0.25 * a * a).powi(k as i32 - 1) * profile.da(mu) / SQRT_2
}

/// Volume factor of the L² metric measured by quadrature: `√det` of the Gram
/// matrix of the `γ0`-orthonormal frame.
pub fn volume_factor_gram(k: usize, mu: f64, c1: f64, c2: f64, grid: &QuadGrid) -> Result<f64> {
    let gram = l2_gram(k, mu, c1, c2, grid)?;
    let n = gram.nrows();
    let chol = gram.clone().cholesky().ok_or_else(|| {
        Error::Numerical(format!("Gram matrix at μ = {mu} is not positive definite"))
    })?;
    let l = chol.l();
    Ok((0..n).map(|i| l[(i, i)]).product())
}

/// Gram matrix of the L² metric on the frame returned by [`y_frame`].
pub fn l2_gram(k: usize, mu: f64, c1: f64, c2: f64, grid: &QuadGrid) -> Result<DMatrix<f64>> {
    check_mu_k(mu, k)?;
    if (grid.c1() - c1).abs() > 1e-15 * c1 {
        return Err(usage("grid curvature does not match c1"));
    }
    let frame = y_frame(mu, k)?;
    let fields: Vec<TangentField> = frame
        .iter()
        .map(|t| tangent_field(mu, k, t, grid))
        .collect::<Result<_>>()?;
    let n = fields.len();
    let mut gram = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let g = l2_inner(&fields[i], &fields[j], grid, c2)?;
            gram[(i, j)] = g;
            gram[(j, i)] = g;
        }
    }
    Ok(gram)
}

/// `α_k = (2π)^{2k+1}/(2k+1)!`.
pub fn alpha_const(k: usize) -> f64 {
    let n = 2 * k + 1;
    (1..=n).fold(1.0, |acc, i| acc * 2.0 * PI / i as f64)
}

/// `∫₀^upper t² (1 − t²)^{k−1} dt`, exact by Gauss-Legendre.
pub fn t_integral(k: usize, upper: f64) -> f64 {
    GaussLegendre::new(k + 2).integrate(0.0, upper, |t| t * t * (1.0 - t * t).powi(k as i32 - 1))
}

/// `Vol(G/K)` computed two ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupVolume {
    /// `α_k / (4√2 ∫₀¹ t²(1−t²)^{k−1} dt) = π^{2k+1}/(√2 k!(k−1)!)`, the value for
    /// which the Fubini-Study total volume equals `(4π/c)^{2k+1}/(2k+1)!`.
    pub adjudicated: f64,
    /// `2^k π^{2k+1}/(√2 (k−1)! k!)`, the frequently quoted closed form.
    pub printed: f64,
    /// `printed / adjudicated`, equal to `2^k`.
    pub ratio: f64,
}

/// Volume of `G/K = (U(k+1) × U(2))/K` with respect to `⟨,⟩`.
pub fn vol_g_mod_k(k: usize) -> Result<GroupVolume> {
    if k == 0 {
        return Err(usage("k must be at least 1"));
    }
    let adjudicated = alpha_const(k) / (4.0 * SQRT_2 * t_integral(k, 1.0));
    let fact = |n: usize| (1..=n).fold(1.0, |acc, i| acc * i as f64);
    let printed = 2f64.powi(k as i32) * PI.powi(2 * k as i32 + 1) / (SQRT_2 * fact(k - 1) * fact(k));
    Ok(GroupVolume {
        adjudicated,
        printed,
        ratio: printed / adjudicated,
    })
}

fn check_total_volume_args(profile: &KahlerProfile, k: usize) -> Result<()> {
    if k == 0 {
        return Err(usage("k must be at least 1"));
    }
    if k == 1 && (profile.a_infinity() - 2.0 * profile.b()).abs() > 1e-12 * profile.b() {
        return Err(usage(
            "k = 1 total volume is only defined for profiles with A(∞) = 2B",
        ));
    }
    Ok(())
}

/// `4√2 B^{2k+1} Vol(G/K) ∫₀^{A(∞)/2B} t²(1−t²)^{k−1} dt`.
pub fn total_volume(profile: &KahlerProfile, k: usize) -> Result<f64> {
    check_total_volume_args(profile, k)?;
    let b = profile.b();
    let upper = profile.a_infinity() / (2.0 * b);
    Ok(4.0 * SQRT_2 * b.powi(2 * k as i32 + 1) * vol_g_mod_k(k)?.adjudicated * t_integral(k, upper))
}

/// `∫₁^∞ F(μ) dμ` by composite Gauss-Legendre in `log μ`.
pub fn integrated_volume_factor(profile: &KahlerProfile, k: usize) -> Result<f64> {
    check_total_volume_args(profile, k)?;
    let value = log_rule().integrate(0.0, LOG_MU_MAX, |x| {
        let mu = x.exp();
        if mu <= 1.0 {
            0.0
        } else {
            kahler_factor(profile, mu, k) * mu
        }
    });
    if !value.is_finite() {
        return Err(Error::Numerical("volume integral is not finite".into()));
    }
    Ok(value)
}

/// Total volume by direct quadrature of the volume factor.
pub fn total_volume_numeric(profile: &KahlerProfile, k: usize) -> Result<f64> {
    Ok(integrated_volume_factor(profile, k)? * vol_g_mod_k(k)?.adjudicated)
}

/// Parameters of the degree-d, genus-g vortex-type volume formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaptistaParams {
    pub d: usize,
    pub k: usize,
    pub g: usize,
    pub c2: f64,
    pub vol_sigma: f64,
}

impl BaptistaParams {
    pub fn new(d: usize, k: usize, g: usize, c2: f64, vol_sigma: f64) -> Result<Self> {
        if d == 0 || k == 0 {
            return Err(usage("d and k must be at least 1"));
        }
        if d < 2 * g {
            return Err(usage(format!("formula needs d > 2g − 1, got d = {d}, g = {g}")));
        }
        if !(c2 > 0.0 && c2.is_finite()) || !(vol_sigma > 0.0 && vol_sigma.is_finite()) {
            return Err(usage("c2 and the domain area must be positive"));
        }
        Ok(Self { d, k, g, c2, vol_sigma })
    }

    /// Complex dimension `N = (k+1)(d+1−g) + g − 1`.
    pub fn dimension(&self) -> usize {
        (self.k + 1) * (self.d + 1 - self.g) + self.g - 1
    }
}

/// `(k+1)^g (4π Vol(Σ)/c2)^N / N!`.
pub fn baptista_volume(p: &BaptistaParams) -> f64 {
    let x = 4.0 * PI * p.vol_sigma / p.c2;
    let n = p.dimension();
    let power = (1..=n).fold(1.0, |acc, i| acc * x / i as f64);
    ((p.k + 1) as f64).powi(p.g as i32) * power
}

/// Length `∫₁^{μ_max} √A0 dμ` of the ray `φ_μ`; `μ_max` may be infinite.
pub fn ray_length(profile: &KahlerProfile, mu_max: f64) -> Result<f64> {
    if !(mu_max > 1.0) {
        return Err(usage(format!("μ_max must exceed 1, got {mu_max}")));
    }
    let x_max = mu_max.ln().min(LOG_MU_MAX);
    Ok(log_rule().integrate(0.0, x_max, |x| {
        let mu = x.exp();
        (profile.da(mu) / (4.0 * mu)).max(0.0).sqrt() * mu
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kahler::coefficients;

    fn fact(n: usize) -> f64 {
        (1..=n).fold(1.0, |a, i| a * i as f64)
    }

    #[test]
    fn alpha_examples() {
        assert!((alpha_const(2) - 81.6052492).abs() < 1e-6);
        assert!((alpha_const(3) - (2.0 * PI).powi(7) / 5040.0).abs() < 1e-12);
        for k in 1..6 {
            let lhs = 2f64.powi(2 * k as i32 + 1) * alpha_const(k);
            let rhs = (4.0 * PI).powi(2 * k as i32 + 1) / fact(2 * k + 1);
            assert!((lhs - rhs).abs() < 1e-12 * rhs);
        }
    }

    #[test]
    fn t_integral_closed_form() {
        assert!((t_integral(2, 1.0) - 2.0 / 15.0).abs() < 1e-15);
        for k in 1..7usize {
            let double_fact: f64 = (1..=2 * k + 1).step_by(2).map(|i| i as f64).product();
            let want = fact(k - 1) * 2f64.powi(k as i32 - 1) / double_fact;
            assert!((t_integral(k, 1.0) - want).abs() < 1e-14);
        }
    }

    #[test]
    fn group_volume_k2() {
        let v = vol_g_mod_k(2).unwrap();
        assert!((v.adjudicated - PI.powi(5) / (2.0 * SQRT_2)).abs() < 1e-12);
        assert!((v.ratio - 4.0).abs() < 1e-12);
    }

    #[test]
    fn fs_total_volume_is_projective_space_volume() {
        for k in [2usize, 3] {
            let got = total_volume(&KahlerProfile::fubini_study(1.0), k).unwrap();
            let want = (4.0 * PI).powi(2 * k as i32 + 1) / fact(2 * k + 1);
            assert!((got - want).abs() < 1e-10 * want);
        }
    }

    #[test]
    fn hermitian_and_kahler_forms_agree() {
        let p = KahlerProfile::l2(4.0, 4.0);
        for mu in [1.01, 1.3, 2.0, 9.0] {
            for k in 1..4 {
                let h = volume_factor_hermitian(&coefficients(&p, mu).unwrap(), mu, k);
                let c = volume_factor_closed(&p, mu, k).unwrap();
                assert!((h - c).abs() < 1e-12 * c);
            }
        }
    }

    #[test]
    fn k1_requires_full_profile() {
        let b = 1.0;
        let half = KahlerProfile::custom(
            move |m: f64| b * (m * m - 1.0) / (m * m + 1.0),
            move |m: f64| b * 4.0 * m / (m * m + 1.0).powi(2),
            b,
            b,
        )
        .unwrap();
        assert!(matches!(total_volume(&half, 1), Err(Error::Usage(_))));
        assert!(total_volume(&half, 2).is_ok());
        assert!(total_volume(&KahlerProfile::l2(4.0, 4.0), 1).is_ok());
    }

    #[test]
    fn baptista_examples() {
        let p = BaptistaParams::new(2, 1, 1, 2.0, 3.0).unwrap();
        assert_eq!(p.dimension(), 4);
        let want = 2.0 / 24.0 * (4.0 * PI * 3.0 / 2.0f64).powi(4);
        assert!((baptista_volume(&p) - want).abs() < 1e-12 * want);
        assert!(BaptistaParams::new(1, 2, 1, 4.0, 1.0).is_err());
    }

    #[test]
    fn ray_length_near_one() {
        let p = KahlerProfile::l2(4.0, 4.0);
        assert!(ray_length(&p, 1.0 + 1e-10).unwrap() < 1e-9);
        assert!(ray_length(&p, 1.0).is_err());
        let l1 = ray_length(&p, 10.0).unwrap();
        let l2 = ray_length(&p, 100.0).unwrap();
        assert!(l2 > l1);
    }
}
