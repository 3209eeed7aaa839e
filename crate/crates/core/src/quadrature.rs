//! Quadrature rules.
//!
//! The domain sphere CP^1 with its curvature-`c1` Fubini-Study area element is
//! discretized on a tensor grid in `(t, θ)`, where `z = r e^{iθ}` is the
//! stereographic coordinate and `t = r²/(1+r²)`. Under this substitution the
//! area element `(4/c1) r dr dθ / (1+r²)²` becomes exactly `(2/c1) dt dθ`, so a
//! Gauss-Legendre rule in `t` and the trapezoidal rule in `θ` integrate the
//! smooth integrands arising here spectrally.
//!
//! Also provided: one-dimensional Gauss-Legendre rules and composite rules on
//! half-lines used by the volume and cylinder integrals.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{usage, Error, Result};

/// Gauss-Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on P_n from the Chebyshev-like initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        let nf = n as f64;
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Integrate `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .collect();
        half * pairwise_sum(&terms)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Ordered pairwise summation. The result depends only on the order of
/// `terms`, never on thread scheduling.
pub fn pairwise_sum(terms: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if terms.len() <= BLOCK {
        return terms.iter().sum();
    }
    let mid = terms.len() / 2;
    pairwise_sum(&terms[..mid]) + pairwise_sum(&terms[mid..])
}

/// A quadrature node on the domain sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    /// Stereographic coordinate `z = z0/z1`.
    pub z: Complex64,
    /// Unit-norm homogeneous coordinates `(z0, z1) = (√t e^{iθ}, √(1−t))`.
    pub homogeneous: [Complex64; 2],
    /// Compactified radial variable `t = |z|²/(1+|z|²)`.
    pub t: f64,
    pub theta: f64,
    pub weight: f64,
}

/// Tensor-product quadrature grid on CP^1 with the curvature-`c1` area element.
#[derive(Debug, Clone)]
pub struct QuadGrid {
    nodes: Vec<Node>,
    c1: f64,
    n_rad: usize,
    n_ang: usize,
}

/// Default grid resolution used by the library front ends.
pub const DEFAULT_N_RAD: usize = 128;
pub const DEFAULT_N_ANG: usize = 128;

impl QuadGrid {
    pub fn new(n_rad: usize, n_ang: usize, c1: f64) -> Result<Self> {
        if n_rad < 2 {
            return Err(usage(format!("n_rad must be at least 2, got {n_rad}")));
        }
        if n_ang < 4 {
            return Err(usage(format!("n_ang must be at least 4, got {n_ang}")));
        }
        if !(c1 > 0.0 && c1.is_finite()) {
            return Err(usage(format!("c1 must be positive, got {c1}")));
        }
        let gl = GaussLegendre::new(n_rad);
        let dtheta = 2.0 * PI / n_ang as f64;
        let mut nodes = Vec::with_capacity(n_rad * n_ang);
        for (x, wx) in gl.nodes.iter().zip(&gl.weights) {
            let t = 0.5 * (x + 1.0);
            let wt = 0.5 * wx;
            let r = (t / (1.0 - t)).sqrt();
            for j in 0..n_ang {
                let theta = dtheta * j as f64;
                let phase = Complex64::from_polar(1.0, theta);
                nodes.push(Node {
                    z: phase * r,
                    homogeneous: [phase * t.sqrt(), Complex64::new((1.0 - t).sqrt(), 0.0)],
                    t,
                    theta,
                    weight: 2.0 / c1 * wt * dtheta,
                });
            }
        }
        Ok(Self { nodes, c1, n_rad, n_ang })
    }

    /// Grid with the radial count raised for strongly concentrated maps.
    ///
    /// For `φ_μ` the integrands have a pole at `t ≈ −1/μ²`, so Gauss-Legendre
    /// in `t` needs O(μ) nodes once μ is large.
    pub fn for_mu(n_rad: usize, n_ang: usize, c1: f64, mu: f64) -> Result<Self> {
        Self::new(radial_nodes_for_mu(n_rad, mu), n_ang, c1)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn n_rad(&self) -> usize {
        self.n_rad
    }

    pub fn n_ang(&self) -> usize {
        self.n_ang
    }

    /// Total area, `4π/c1` up to rounding.
    pub fn total_weight(&self) -> f64 {
        let w: Vec<f64> = self.nodes.iter().map(|n| n.weight).collect();
        pairwise_sum(&w)
    }

    /// Identifies the grid for compatibility checks between sampled fields.
    pub(crate) fn key(&self) -> GridKey {
        GridKey {
            n_rad: self.n_rad,
            n_ang: self.n_ang,
            c1_bits: self.c1.to_bits(),
        }
    }

    /// Weighted sum of `f` over the nodes.
    pub fn integrate<F: Fn(&Node) -> f64>(&self, f: F) -> Result<f64> {
        let mut terms = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let value = f(node);
            if !value.is_finite() {
                return Err(Error::NonFinite { z: node.z, value });
            }
            terms.push(node.weight * value);
        }
        Ok(pairwise_sum(&terms))
    }

    /// Weighted sum of precomputed per-node values (same order as `nodes()`).
    pub fn integrate_values(&self, values: &[f64]) -> Result<f64> {
        if values.len() != self.nodes.len() {
            return Err(usage(format!(
                "{} values supplied for a grid of {} nodes",
                values.len(),
                self.nodes.len()
            )));
        }
        let mut terms = Vec::with_capacity(values.len());
        for (node, &value) in self.nodes.iter().zip(values) {
            if !value.is_finite() {
                return Err(Error::NonFinite { z: node.z, value });
            }
            terms.push(node.weight * value);
        }
        Ok(pairwise_sum(&terms))
    }
}

/// Radial node count needed for `φ_μ` integrands: the nearest pole sits at
/// distance ~1/μ² from t = 0, and Gauss-Legendre converges like e^{-4n/μ}.
pub fn radial_nodes_for_mu(base: usize, mu: f64) -> usize {
    let needed = (8.0 * mu).ceil() as usize;
    base.max(needed.div_ceil(8) * 8)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct GridKey {
    n_rad: usize,
    n_ang: usize,
    c1_bits: u64,
}

/// Composite Gauss-Legendre rule on `[0, ∞)` in a logarithmic variable.
///
/// Integrates `∫_{x0}^{x1} g(x) dx` over unit-width panels, intended for
/// integrands that decay exponentially in `x = ln μ`.
#[derive(Debug, Clone)]
pub struct PanelRule {
    rule: GaussLegendre,
    panel_width: f64,
}

impl PanelRule {
    pub fn new(nodes_per_panel: usize, panel_width: f64) -> Self {
        Self {
            rule: GaussLegendre::new(nodes_per_panel),
            panel_width,
        }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, x0: f64, x1: f64, mut f: F) -> f64 {
        if x1 <= x0 {
            return 0.0;
        }
        let n_panels = ((x1 - x0) / self.panel_width).ceil().max(1.0) as usize;
        let h = (x1 - x0) / n_panels as f64;
        let parts: Vec<f64> = (0..n_panels)
            .map(|i| {
                let a = x0 + h * i as f64;
                self.rule.integrate(a, a + h, &mut f)
            })
            .collect();
        pairwise_sum(&parts)
    }
}
