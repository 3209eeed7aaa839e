//! The cylinder of maps `z ↦ [1, μ W(z)]`, `μ ∈ C^×`, for `W = z^d` on the
//! round sphere.
//!
//! Its induced L² metric is `F(|μ|) |dμ|²` with
//! `F(ρ) = (4/c2) ∫_Σ |W|²/(1 + ρ²|W|²)² dA`, and its volume is
//! `(4π/c2) Vol(Σ)` whatever the degree.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{usage, Error, Result};
use crate::quadrature::{pairwise_sum, GaussLegendre, PanelRule, QuadGrid, DEFAULT_N_RAD};

/// Width of the log-scale window kept on each side of the integrand's features.
const LOG_MARGIN: f64 = 15.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderSpec {
    pub d: usize,
    pub c1: f64,
    pub c2: f64,
    pub mu: Complex64,
}

impl CylinderSpec {
    pub fn new(d: usize, c1: f64, c2: f64, mu: Complex64) -> Result<Self> {
        if d == 0 {
            return Err(usage("the degree of W must be at least 1"));
        }
        for (name, c) in [("c1", c1), ("c2", c2)] {
            if !(c > 0.0 && c.is_finite()) {
                return Err(usage(format!("{name} must be positive, got {c}")));
            }
        }
        if mu.norm() == 0.0 || !mu.norm().is_finite() {
            return Err(usage("μ must be a nonzero complex number"));
        }
        Ok(Self { d, c1, c2, mu })
    }

    /// Area of the domain sphere, `4π/c1`.
    pub fn domain_area(&self) -> f64 {
        4.0 * PI / self.c1
    }

    /// The exact volume `(4π/c2) Vol(Σ)`.
    pub fn expected_volume(&self) -> f64 {
        4.0 * PI / self.c2 * self.domain_area()
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(usage(format!("|μ| must be positive, got {rho}")));
    }
    Ok(())
}

/// `F(ρ)` on a quadrature grid. In `t = |z|²/(1+|z|²)` the integrand is
/// `t^d (1−t)^d / ((1−t)^d + ρ² t^d)²`.
pub fn cyl_density(rho: f64, spec: &CylinderSpec, grid: &QuadGrid) -> Result<f64> {
    check_rho(rho)?;
    if (grid.c1() - spec.c1).abs() > 1e-15 * spec.c1 {
        return Err(usage("grid curvature does not match the cylinder's c1"));
    }
    let d = spec.d as i32;
    let r2 = rho * rho;
    let integral = grid.integrate(|node| {
        let (a, b) = (node.t.powi(d), (1.0 - node.t).powi(d));
        let den = b + r2 * a;
        a * b / (den * den)
    })?;
    Ok(4.0 / spec.c2 * integral)
}

// q/(1+ρ²q)² given log q, without overflow
fn lump_term(log_q: f64, r2: f64) -> f64 {
    if log_q <= 0.0 {
        let q = log_q.exp();
        let den = 1.0 + r2 * q;
        q / (den * den)
    } else {
        let iq = (-log_q).exp();
        let den = iq + r2;
        iq / (den * den)
    }
}

fn inner_rule() -> PanelRule {
    PanelRule::new(20, 1.0)
}

/// `F(ρ)` by one-dimensional quadrature in `log |z|`, independent of the grid.
pub fn cyl_density_radial(rho: f64, spec: &CylinderSpec) -> Result<f64> {
    check_rho(rho)?;
    Ok(radial_density(rho, spec, &inner_rule()))
}

fn radial_density(rho: f64, spec: &CylinderSpec, rule: &PanelRule) -> f64 {
    let d = spec.d as f64;
    let r2 = rho * rho;
    // lump sits where ρ |z|^d = 1
    let centre = -rho.ln() / d;
    let (lo, hi) = (centre.min(0.0) - LOG_MARGIN, centre.max(0.0) + LOG_MARGIN);
    let integral = rule.integrate(lo, hi, |x| {
        // r²/(1+r²)² · |W|²/(1+ρ²|W|²)²
        let c = x.cosh();
        lump_term(2.0 * d * x, r2) / (4.0 * c * c)
    });
    4.0 / spec.c2 * 4.0 / spec.c1 * 2.0 * PI * integral
}

fn outer_integral(spec: &CylinderSpec, nodes_per_panel: usize) -> Result<f64> {
    let d = spec.d as f64;
    // ρ² F(ρ) is even in log ρ and decays like e^{−2|log ρ|/d}
    let half_width = 20.0 * d;
    let gl = GaussLegendre::new(nodes_per_panel);
    let n_panels = (2.0 * half_width).ceil() as usize;
    let h = 2.0 * half_width / n_panels as f64;
    let rule = inner_rule();
    let panels: Vec<f64> = (0..n_panels)
        .into_par_iter()
        .map(|i| {
            let a = -half_width + h * i as f64;
            gl.integrate(a, a + h, |y| {
                let rho = y.exp();
                rho * rho * radial_density(rho, spec, &rule)
            })
        })
        .collect();
    let value = 2.0 * PI * pairwise_sum(&panels);
    if !value.is_finite() {
        return Err(Error::Numerical("cylinder volume integral is not finite".into()));
    }
    Ok(value)
}

/// `Vol(C_W) = 2π ∫₀^∞ ρ F(ρ) dρ`, integrating in `log ρ` with `n_mu`
/// Gauss-Legendre nodes per unit panel and checking against a doubled rule.
pub fn cylinder_volume(spec: &CylinderSpec, n_mu: usize) -> Result<f64> {
    if n_mu < 16 {
        return Err(usage(format!("n_mu must be at least 16, got {n_mu}")));
    }
    let coarse = outer_integral(spec, n_mu)?;
    let fine = outer_integral(spec, 2 * n_mu)?;
    if (fine - coarse).abs() > 1e-10 * fine.abs() {
        return Err(Error::Numerical(format!(
            "cylinder volume did not converge: {coarse} vs {fine} after doubling"
        )));
    }
    Ok(fine)
}

/// `∫₀^∞ ρ q/(1+ρ²q)² dρ` for `q = |W(z)|²`; equal to ½ for every `q > 0`.
pub fn inner_mu_integral(q: f64) -> f64 {
    if !(q > 0.0) {
        return 0.0;
    }
    // in y = log ρ the integrand is 1/(4 cosh²(y + ½ log q))
    let shift = 0.5 * q.ln();
    inner_rule().integrate(-shift - 2.0 * LOG_MARGIN, -shift + 2.0 * LOG_MARGIN, |y| {
        let c = (y + shift).cosh();
        1.0 / (4.0 * c * c)
    })
}

/// Volume of the cylinder in both orders of integration: `(μ first, z first)`.
pub fn fubini_crosscheck(spec: &CylinderSpec) -> Result<(f64, f64)> {
    let mu_first = cylinder_volume(spec, 16)?;
    // the integrand is rotation invariant, so few angular nodes suffice
    let grid = QuadGrid::new(DEFAULT_N_RAD, 8, spec.c1)?;
    let d = spec.d as f64;
    let values: Vec<f64> = grid
        .nodes()
        .par_iter()
        .map(|node| inner_mu_integral((d * (node.t.ln() - (1.0 - node.t).ln())).exp()))
        .collect();
    let z_first = 4.0 / spec.c2 * 2.0 * PI * grid.integrate_values(&values)?;
    Ok((mu_first, z_first))
}
