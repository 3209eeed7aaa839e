//! Invariant Kähler metrics on the moduli space.
//!
//! Every `G`-invariant Kähler metric is fixed by an increasing profile `A(μ)`
//! with `A(1) = 0`, `A < 2B`, and a constant `B > 0`:
//!
//! ```text
//! A0 = A'/(4μ),  A1 = A2 = A (μ²−1)/(μ²+1),  A3 = B + A/2,  A4 = B − A/2
//! γ_μ = A0 (dμ² + 8μ² ⟨,⟩_{p0}) + A1 ⟨,⟩_{pμ} + A2 ⟨,⟩_{p̃μ} + A3 ⟨,⟩_{p̂} + A4 ⟨,⟩_{p̌}
//! ```

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{usage, Result};
use crate::lie::{bracket_p, embed_coords, jmap, project_p, LieElement, PCoords, Tangent};
use crate::moduli::{l2_inner, phi_mu, matrix_velocity, tangent_field, HoloMap};
use crate::projective::{flatten, fs_norm_sq};
use crate::quadrature::QuadGrid;

/// Below this μ the L² profile is evaluated from its series in `h = μ² − 1`.
pub const L2_SERIES_SWITCH: f64 = 1.05;
const L2_SERIES_TERMS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileLabel {
    L2,
    FubiniStudy,
    Custom,
}

impl fmt::Display for ProfileLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProfileLabel::L2 => "l2",
            ProfileLabel::FubiniStudy => "fs",
            ProfileLabel::Custom => "custom",
        })
    }
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    L2 { scale: f64 },
    FubiniStudy { c: f64 },
    Custom { a: ScalarFn, da: ScalarFn, a_inf: f64 },
}

/// The pair `(A(μ), B)` fixing an invariant Kähler metric.
#[derive(Clone)]
pub struct KahlerProfile {
    kind: Kind,
    b: f64,
}

impl fmt::Debug for KahlerProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KahlerProfile")
            .field("label", &self.label())
            .field("b", &self.b)
            .field("a_infinity", &self.a_infinity())
            .finish()
    }
}

impl KahlerProfile {
    /// The L² metric for domain curvature `c1` and target curvature `c2`:
    /// `A = (16π/(c1 c2)) (μ⁴ − 4μ² log μ − 1)/(μ² − 1)²`, `B = 8π/(c1 c2)`.
    pub fn l2(c1: f64, c2: f64) -> Self {
        let scale = 16.0 * PI / (c1 * c2);
        Self {
            kind: Kind::L2 { scale },
            b: 0.5 * scale,
        }
    }

    /// Metric induced from CP^{2k+1} at curvature `c`:
    /// `A = (4/c)(μ²−1)/(μ²+1)`, `B = 2/c`.
    pub fn fubini_study(c: f64) -> Self {
        Self {
            kind: Kind::FubiniStudy { c },
            b: 2.0 / c,
        }
    }

    /// A user-supplied profile; `a_inf` is `lim A(μ)` as μ → ∞.
    ///
    /// Checked on a log-spaced grid μ ∈ (1 + 10⁻⁶, 10⁶): `A(1⁺) ≈ 0`, `A' ≥ 0`,
    /// `A` non-decreasing, `0 < A < 2B` and `A ≤ a_inf ≤ 2B`. Non-strict
    /// monotonicity admits profiles that saturate in double precision.
    pub fn custom<A, D>(a: A, da: D, b: f64, a_inf: f64) -> Result<Self>
    where
        A: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(b > 0.0 && b.is_finite()) {
            return Err(usage(format!("B must be positive, got {b}")));
        }
        if !(a_inf > 0.0 && a_inf <= 2.0 * b * (1.0 + 1e-12)) {
            return Err(usage(format!("A(∞) = {a_inf} must lie in (0, 2B]")));
        }
        let a0 = a(1.0 + 1e-9);
        if !(a0.abs() <= 1e-6 * b) {
            return Err(usage(format!("A(1⁺) must vanish, got A(1 + 1e-9) = {a0}")));
        }
        let mut prev = 0.0;
        for mu in validation_grid() {
            let (av, dv) = (a(mu), da(mu));
            if !(av >= prev && av > 0.0 && av < 2.0 * b && av <= a_inf * (1.0 + 1e-12)) {
                return Err(usage(format!(
                    "A must be increasing with 0 < A < 2B: A({mu}) = {av}"
                )));
            }
            if !(dv >= 0.0 && dv.is_finite()) {
                return Err(usage(format!("A'({mu}) = {dv} must be non-negative")));
            }
            prev = av;
        }
        Ok(Self {
            kind: Kind::Custom {
                a: Arc::new(a),
                da: Arc::new(da),
                a_inf,
            },
            b,
        })
    }

    pub fn label(&self) -> ProfileLabel {
        match self.kind {
            Kind::L2 { .. } => ProfileLabel::L2,
            Kind::FubiniStudy { .. } => ProfileLabel::FubiniStudy,
            Kind::Custom { .. } => ProfileLabel::Custom,
        }
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn a_infinity(&self) -> f64 {
        match &self.kind {
            Kind::L2 { .. } | Kind::FubiniStudy { .. } => 2.0 * self.b,
            Kind::Custom { a_inf, .. } => *a_inf,
        }
    }

    /// `A(μ)` for μ ≥ 1.
    pub fn a(&self, mu: f64) -> f64 {
        match &self.kind {
            Kind::L2 { scale } => {
                if mu < L2_SERIES_SWITCH {
                    scale * l2_shape_series(mu * mu - 1.0)
                } else {
                    scale * l2_shape_direct(mu)
                }
            }
            Kind::FubiniStudy { c } => 4.0 / c * (mu * mu - 1.0) / (mu * mu + 1.0),
            Kind::Custom { a, .. } => a(mu),
        }
    }

    /// `dA/dμ`, analytic.
    pub fn da(&self, mu: f64) -> f64 {
        match &self.kind {
            Kind::L2 { scale } => {
                if mu < L2_SERIES_SWITCH {
                    scale * 2.0 * mu * l2_shape_series_dh(mu * mu - 1.0)
                } else {
                    scale * l2_shape_direct_dmu(mu)
                }
            }
            Kind::FubiniStudy { c } => {
                let q = mu * mu + 1.0;
                4.0 / c * 4.0 * mu / (q * q)
            }
            Kind::Custom { da, .. } => da(mu),
        }
    }

    /// Taylor coefficients of `A` in `h = μ² − 1` (constant term first), where known.
    pub fn near_one_series(&self) -> Option<Vec<f64>> {
        match &self.kind {
            Kind::L2 { scale } => {
                let mut coeffs = vec![0.0];
                coeffs.extend((1..=L2_SERIES_TERMS).map(|m| scale * l2_series_coefficient(m)));
                Some(coeffs)
            }
            // (μ²−1)/(μ²+1) = (h/2) / (1 + h/2)
            Kind::FubiniStudy { c } => {
                let mut coeffs = vec![0.0];
                coeffs.extend((1..=L2_SERIES_TERMS).map(|m| {
                    let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
                    4.0 / c * sign * 0.5f64.powi(m as i32)
                }));
                Some(coeffs)
            }
            Kind::Custom { .. } => None,
        }
    }

    /// L² profile evaluated from the closed form only (no series switch).
    /// Loses accuracy like ε/(μ−1)² close to μ = 1.
    pub fn a_direct(&self, mu: f64) -> Option<f64> {
        match &self.kind {
            Kind::L2 { scale } => Some(scale * l2_shape_direct(mu)),
            _ => None,
        }
    }

    /// L² profile evaluated from the series only.
    pub fn a_series(&self, mu: f64) -> Option<f64> {
        match &self.kind {
            Kind::L2 { scale } => Some(scale * l2_shape_series(mu * mu - 1.0)),
            _ => None,
        }
    }
}

fn validation_grid() -> impl Iterator<Item = f64> {
    let (lo, hi) = ((1e-6f64).ln(), (1e6f64).ln());
    let n = 200;
    (0..=n).map(move |i| {
        let x = lo + (hi - lo) * i as f64 / n as f64;
        1.0 + x.exp()
    })
}

// (μ⁴ − 4μ² log μ − 1)/(μ² − 1)² = Σ_{m≥1} 2(−1)^{m+1} h^m / ((m+1)(m+2)),  h = μ² − 1
fn l2_series_coefficient(m: usize) -> f64 {
    let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
    2.0 * sign / ((m as f64 + 1.0) * (m as f64 + 2.0))
}

fn l2_shape_series(h: f64) -> f64 {
    let mut acc = 0.0;
    for m in (1..=L2_SERIES_TERMS).rev() {
        acc = acc * h + l2_series_coefficient(m);
    }
    acc * h
}

fn l2_shape_series_dh(h: f64) -> f64 {
    let mut acc = 0.0;
    for m in (1..=L2_SERIES_TERMS).rev() {
        acc = acc * h + m as f64 * l2_series_coefficient(m);
    }
    acc
}

// Written in s = 1/μ² to avoid cancellation for large μ:
// f = (1 − s² − 4 s log μ)/(1 − s)²
fn l2_shape_direct(mu: f64) -> f64 {
    let s = 1.0 / (mu * mu);
    let one_minus = 1.0 - s;
    (1.0 - s * s - 4.0 * s * mu.ln()) / (one_minus * one_minus)
}

// df/dμ = 8 μ⁻³ ((1+s) log μ − (1−s)) / (1−s)³
fn l2_shape_direct_dmu(mu: f64) -> f64 {
    let s = 1.0 / (mu * mu);
    let one_minus = 1.0 - s;
    8.0 / (mu * mu * mu) * ((1.0 + s) * mu.ln() - one_minus) / one_minus.powi(3)
}

/// The five coefficient functions of an invariant hermitian metric at one μ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricCoefficients {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
}

impl MetricCoefficients {
    pub fn all_positive(&self) -> bool {
        [self.a0, self.a1, self.a2, self.a3, self.a4].iter().all(|&a| a > 0.0)
    }
}

/// Coefficients `A0 … A4` of the Kähler metric with this profile.
pub fn coefficients(profile: &KahlerProfile, mu: f64) -> Result<MetricCoefficients> {
    if !(mu > 1.0 && mu.is_finite()) {
        return Err(usage(format!("coefficients need μ > 1, got {mu}")));
    }
    let a = profile.a(mu);
    let b = profile.b();
    let r = (mu * mu - 1.0) / (mu * mu + 1.0);
    Ok(MetricCoefficients {
        a0: profile.da(mu) / (4.0 * mu),
        a1: a * r,
        a2: a * r,
        a3: b + 0.5 * a,
        a4: b - 0.5 * a,
    })
}

fn re_dot(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x * y.conj()).re).sum()
}

/// `γ_μ(t1, t2)` for the hermitian metric with coefficients `co`.
pub fn gamma_eval(co: &MetricCoefficients, mu: f64, t1: &Tangent, t2: &Tangent) -> f64 {
    let (p, q) = (&t1.p, &t2.p);
    let m2 = mu * mu;
    co.a0 * (t1.dmu * t2.dmu + 8.0 * m2 * 2.0 * p.lambda * q.lambda)
        + co.a1 * (1.0 + m2) * (p.x * q.x.conj()).re
        + co.a2 * (1.0 + m2) * (p.y * q.y.conj()).re
        + co.a3 * re_dot(&p.u, &q.u)
        + co.a4 * re_dot(&p.v, &q.v)
}

/// Kähler form `ω(t1, t2) = γ(J t1, t2)`.
pub fn omega(co: &MetricCoefficients, mu: f64, t1: &Tangent, t2: &Tangent) -> f64 {
    gamma_eval(co, mu, &jmap(t1, mu), t2)
}

/// Profile values recovered from quadrature of the L² metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasuredProfile {
    pub a: f64,
    /// Absent for k = 1, where p̂ and p̌ are empty.
    pub b: Option<f64>,
}

/// Measure `(A, B)` at μ from the squared L² lengths of `p̂(e1)` and `p̌(e1)`,
/// or for k = 1 from the length of `pμ(1)`.
pub fn measure_profile(k: usize, mu: f64, grid: &QuadGrid, c1: f64, c2: f64) -> Result<MeasuredProfile> {
    if (grid.c1() - c1).abs() > 1e-15 * c1 {
        return Err(usage(format!(
            "grid was built for c1 = {}, but c1 = {c1} was requested",
            grid.c1()
        )));
    }
    let sq = |t: &Tangent| -> Result<f64> {
        let f = tangent_field(mu, k, t, grid)?;
        l2_inner(&f, &f, grid, c2)
    };
    if k == 1 {
        let g = sq(&Tangent::from_p(PCoords::pmu(Complex64::new(1.0, 0.0), 1)))?;
        return Ok(MeasuredProfile {
            a: g / (mu * mu - 1.0),
            b: None,
        });
    }
    let one = Complex64::new(1.0, 0.0);
    let a3 = sq(&Tangent::from_p(PCoords::phat_unit(0, one, k)))?;
    let a4 = sq(&Tangent::from_p(PCoords::pcheck_unit(0, one, k)))?;
    Ok(MeasuredProfile {
        a: a3 - a4,
        b: Some(0.5 * (a3 + a4)),
    })
}

/// Cyclic residual `ω([X,Y]_p, Z) + ω([Y,Z]_p, X) + ω([Z,X]_p, Y)`.
pub fn check_k1(co: &MetricCoefficients, mu: f64, x: &PCoords, y: &PCoords, z: &PCoords) -> Result<f64> {
    let term = |a: &PCoords, b: &PCoords, c: &PCoords| -> Result<f64> {
        let br = bracket_p(a, b, mu)?;
        Ok(omega(co, mu, &Tangent::from_p(br), &Tangent::from_p(c.clone())))
    };
    Ok(term(x, y, z)? + term(y, z, x)? + term(z, x, y)?)
}

/// The three generator pairs `(X, JX)` in `pμ`, `p̂`, `p̌` used to derive the
/// profile relations (the last two need k ≥ 2).
pub fn generator_pairs(k: usize) -> Vec<(&'static str, PCoords, PCoords)> {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let mut pairs = vec![("p_mu", PCoords::pmu(one, k), PCoords::pmu(i, k))];
    if k >= 2 {
        pairs.push(("p_hat", PCoords::phat_unit(0, one, k), PCoords::phat_unit(0, i, k)));
        pairs.push(("p_check", PCoords::pcheck_unit(0, one, k), PCoords::pcheck_unit(0, i, k)));
    }
    pairs
}

fn richardson<F: Fn(f64) -> Result<f64>>(f: F, mu: f64, h: f64) -> Result<f64> {
    let d = |h: f64| -> Result<f64> { Ok((f(mu + h)? - f(mu - h)?) / (2.0 * h)) };
    let (d1, d2) = (d(h)?, d(0.5 * h)?);
    Ok((4.0 * d2 - d1) / 3.0)
}

fn richardson_lie<F: Fn(f64) -> Result<LieElement>>(f: F, mu: f64, h: f64) -> Result<LieElement> {
    let d = |h: f64| -> Result<LieElement> { Ok(f(mu + h)?.sub(&f(mu - h)?).scale(1.0 / (2.0 * h))) };
    let (d1, d2) = (d(h)?, d(0.5 * h)?);
    Ok(d2.scale(4.0).sub(&d1).scale(1.0 / 3.0))
}

/// Residual of the second closedness condition for μ-dependent `X(μ), Y(μ) ∈ p`:
///
/// `∂_μ ω(X,Y) − ω(∂_μX, Y) − ω(X, ∂_μY) + ω(∂/∂μ, [X,Y]_p)`,
///
/// with all μ-derivatives taken by Richardson-extrapolated central differences
/// (steps `h` and `h/2`). `∂_μX` is the derivative of the Lie algebra element,
/// projected back to `p` at μ. Tangent vectors here are generated by
/// `ξ ↦ d/dt exp(−tξ)·φ`, for which the bracket in this condition is the
/// negated matrix commutator.
pub fn check_k2<C, FX, FY>(coeffs_at: C, mu: f64, x: FX, y: FY, h: f64) -> Result<f64>
where
    C: Fn(f64) -> Result<MetricCoefficients>,
    FX: Fn(f64) -> PCoords,
    FY: Fn(f64) -> PCoords,
{
    if !(h > 0.0 && h.is_finite()) || h < 1e-9 * mu {
        return Err(usage(format!("finite-difference step {h} underflows at μ = {mu}")));
    }
    if !(mu - 2.0 * h > 1.0) {
        return Err(usage(format!("step {h} reaches the exceptional orbit from μ = {mu}")));
    }
    let k = x(mu).k();
    let co = coeffs_at(mu)?;
    let d_omega = richardson(
        |m| Ok(omega(&coeffs_at(m)?, m, &Tangent::from_p(x(m)), &Tangent::from_p(y(m)))),
        mu,
        h,
    )?;
    let dx = project_p(&richardson_lie(|m| embed_coords(&x(m), m, k), mu, h)?, mu)?;
    let dy = project_p(&richardson_lie(|m| embed_coords(&y(m), m, k), mu, h)?, mu)?;
    let (xm, ym) = (Tangent::from_p(x(mu)), Tangent::from_p(y(mu)));
    let br = bracket_p(&xm.p, &ym.p, mu)?.scale(-1.0);
    Ok(d_omega - omega(&co, mu, &Tangent::from_p(dx), &ym) - omega(&co, mu, &xm, &Tangent::from_p(dy))
        + omega(&co, mu, &Tangent::d_mu(k), &Tangent::from_p(br)))
}

/// [`check_k2`] with coefficients taken from a profile.
pub fn check_k2_profile<FX, FY>(profile: &KahlerProfile, mu: f64, x: FX, y: FY, h: f64) -> Result<f64>
where
    FX: Fn(f64) -> PCoords,
    FY: Fn(f64) -> PCoords,
{
    check_k2(|m| coefficients(profile, m), mu, x, y, h)
}

/// Default finite-difference step for [`check_k2`] at μ.
pub fn default_k2_step(mu: f64) -> f64 {
    (1e-3 * mu).min(0.25 * (mu - 1.0))
}

/// Squared Fubini-Study length of `t` at `flatten(φ_μ) ∈ CP^{2k+1}` (curvature
/// `c`), next to the value predicted by the FS profile. Returns
/// `(embedded, closed_form)`.
pub fn fs_pullback_check(k: usize, mu: f64, c: f64, t: &Tangent) -> Result<(f64, f64)> {
    let map = phi_mu(mu, k)?;
    let embedded = fs_pullback_norm_sq(&map, mu, c, t)?;
    let co = coefficients(&KahlerProfile::fubini_study(c), mu)?;
    Ok((embedded, gamma_eval(&co, mu, t, t)))
}

fn fs_pullback_norm_sq(map: &HoloMap, mu: f64, c: f64, t: &Tangent) -> Result<f64> {
    let k = map.k();
    let xi = embed_coords(&t.p, mu, k)?;
    let mut vel = matrix_velocity(map, &xi);
    vel[(0, 0)] += Complex64::new(t.dmu, 0.0);
    let flat = flatten(map);
    let v: Vec<Complex64> = vel.column(0).iter().chain(vel.column(1).iter()).copied().collect();
    fs_norm_sq(&flat.point, &v, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    const C: Complex64 = Complex64 { re: 1.0, im: 0.0 };

    #[test]
    fn l2_constants() {
        let p = KahlerProfile::l2(4.0, 4.0);
        assert!((p.b() - PI / 2.0).abs() < 1e-15);
        let a2 = PI * (15.0 - 16.0 * 2f64.ln()) / 9.0;
        assert!((p.a(2.0) - a2).abs() < 1e-14 * a2);
        assert!((p.a(1e8) - PI).abs() < 1e-12);
    }

    #[test]
    fn l2_series_leading_terms() {
        // h/3 − h²/6 + h³/10 …
        assert!((l2_series_coefficient(1) - 1.0 / 3.0).abs() < 1e-16);
        assert!((l2_series_coefficient(2) + 1.0 / 6.0).abs() < 1e-16);
        assert!((l2_series_coefficient(3) - 1.0 / 10.0).abs() < 1e-16);
    }

    #[test]
    fn l2_series_and_direct_meet_at_switch() {
        let p = KahlerProfile::l2(4.0, 4.0);
        let mu = L2_SERIES_SWITCH;
        let (s, d) = (p.a_series(mu).unwrap(), p.a_direct(mu).unwrap());
        assert!((s - d).abs() < 1e-13 * d);
        let h = mu * mu - 1.0;
        let ds = 16.0 * PI / 16.0 * 2.0 * mu * l2_shape_series_dh(h);
        let dd = 16.0 * PI / 16.0 * l2_shape_direct_dmu(mu);
        assert!((ds - dd).abs() < 1e-12 * dd);
    }

    #[test]
    fn l2_derivative_matches_richardson() {
        let p = KahlerProfile::l2(4.0, 4.0);
        for mu in [1.01, 1.2, 2.0, 7.0, 300.0] {
            let h = 1e-3 * (mu - 1.0f64).min(mu);
            let d = |h: f64| (p.a(mu + h) - p.a(mu - h)) / (2.0 * h);
            let r = (4.0 * d(h / 2.0) - d(h)) / 3.0;
            assert!((r - p.da(mu)).abs() < 1e-8 * p.da(mu), "μ={mu}: {r} vs {}", p.da(mu));
        }
    }

    #[test]
    fn fs_profile_examples() {
        let p = KahlerProfile::fubini_study(1.0);
        assert_eq!(p.a(1.0), 0.0);
        assert!((p.a(3f64.sqrt()) - 2.0).abs() < 1e-15);
        assert!((p.a(1e9) - 4.0).abs() < 1e-12);
        assert_eq!(p.a_infinity(), 2.0 * p.b());
        let co = coefficients(&p, 2.0).unwrap();
        assert!((co.a1 - 36.0 / 25.0).abs() < 1e-15);
    }

    #[test]
    fn l2_coefficients_at_two() {
        let co = coefficients(&KahlerProfile::l2(4.0, 4.0), 2.0).unwrap();
        let a = PI * (15.0 - 16.0 * 2f64.ln()) / 9.0;
        assert!((co.a1 - a * 0.6).abs() < 1e-14);
        assert!((co.a3 - (PI / 2.0 + a / 2.0)).abs() < 1e-14);
        assert!((co.a3 - co.a4 - a).abs() < 1e-14);
        assert!((co.a0 - 0.10838166598).abs() < 1e-10);
    }

    #[test]
    fn coefficients_reject_mu_le_one() {
        assert!(matches!(
            coefficients(&KahlerProfile::l2(4.0, 4.0), 1.0),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn gamma_eval_examples() {
        let co = coefficients(&KahlerProfile::l2(4.0, 4.0), 2.0).unwrap();
        let k = 2;
        let dmu = Tangent::d_mu(k);
        assert_eq!(gamma_eval(&co, 2.0, &dmu, &dmu), co.a0);
        let p0 = Tangent::from_p(PCoords::p0(1.0, k));
        assert!((gamma_eval(&co, 2.0, &p0, &p0) - 64.0 * co.a0).abs() < 1e-14);
        let pm = Tangent::from_p(PCoords::pmu(C, k));
        let ph = Tangent::from_p(PCoords::phat_unit(0, C, k));
        assert_eq!(gamma_eval(&co, 2.0, &pm, &ph), 0.0);
        assert_eq!(gamma_eval(&co, 2.0, &dmu, &p0), 0.0);
    }

    #[test]
    fn custom_profile_validation() {
        let b = 1.0;
        let ok = KahlerProfile::custom(
            move |m: f64| b * (m * m - 1.0) / (m * m + 1.0),
            move |m: f64| b * 4.0 * m / (m * m + 1.0).powi(2),
            b,
            b,
        );
        assert!(ok.is_ok());
        // decreasing profile
        let bad = KahlerProfile::custom(|m: f64| 1.0 / m - 1.0, |m: f64| -1.0 / (m * m), 1.0, 1.0);
        assert!(bad.is_err());
        // exceeds 2B
        let bad = KahlerProfile::custom(
            |m: f64| 3.0 * (m - 1.0) / m,
            |m: f64| 3.0 / (m * m),
            1.0,
            3.0,
        );
        assert!(bad.is_err());
        // A(1) ≠ 0
        let bad = KahlerProfile::custom(|m: f64| 0.5 + 0.1 * (1.0 - 1.0 / m), |m: f64| 0.1 / (m * m), 1.0, 0.6);
        assert!(bad.is_err());
    }

    #[test]
    fn k2_step_validation() {
        let p = KahlerProfile::l2(4.0, 4.0);
        let x = |_m: f64| PCoords::pmu(C, 2);
        assert!(matches!(check_k2_profile(&p, 1.001, x, x, 0.01), Err(Error::Usage(_))));
        assert!(matches!(check_k2_profile(&p, 2.0, x, x, 1e-12), Err(Error::Usage(_))));
        assert!(matches!(check_k2_profile(&p, 2.0, x, x, 0.0), Err(Error::Usage(_))));
    }

    #[test]
    fn fs_pullback_phat() {
        let t = Tangent::from_p(PCoords::phat_unit(0, C, 2));
        let (e, c) = fs_pullback_check(2, 2.0, 1.0, &t).unwrap();
        assert!((e - 3.2).abs() < 1e-14);
        assert!((c - 3.2).abs() < 1e-14);
    }
}
