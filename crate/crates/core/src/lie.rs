//! The Lie algebra `g = u(k+1) ⊕ u(2)` of the symmetry group, its invariant
//! inner product, and the decomposition of the tangent complement at `φ_μ`.
//!
//! At `φ_μ` (μ > 1) the isotropy algebra `k` consists of the pairs
//! `(diag(iα, iβ, X), diag(i(α+ξ), i(β+ξ)))` with `X ∈ u(k−1)`, and
//! `p = k^⊥` splits as a direct sum `p0 ⊕ pμ ⊕ p̃μ ⊕ p̂ ⊕ p̌` with coordinates
//! `(λ, x, y, u, v)`. The split of the (0,1)-block into `pμ ⊕ p̃μ` is a direct
//! sum but not an orthogonal one: `⟨pμ(x), p̃μ(y)⟩ = −2μ Re(xy)`. It is the
//! split that diagonalizes every invariant hermitian metric.
//!
//! Tangent vectors at `φ_μ` are pairs `(dμ, p-coordinates)`; see [`Tangent`].

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{domain, usage, Result};
use crate::kahler::{coefficients, KahlerProfile, MetricCoefficients};

pub type CMatrix = DMatrix<Complex64>;

const ANTI_HERMITIAN_TOL: f64 = 1e-12;
pub(crate) const UNITARY_TOL: f64 = 1e-12;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

pub(crate) fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    let n = m.nrows();
    (m.adjoint() * m - CMatrix::identity(n, n)).norm() <= tol * n as f64
}

fn is_anti_hermitian(m: &CMatrix) -> bool {
    m.is_square() && (m + m.adjoint()).norm() <= ANTI_HERMITIAN_TOL * m.norm().max(1.0)
}

/// An element `(A, B)` of `u(k+1) ⊕ u(2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieElement {
    pub a: CMatrix,
    pub b: CMatrix,
}

impl LieElement {
    pub fn new(a: CMatrix, b: CMatrix) -> Result<Self> {
        if a.nrows() < 2 || !a.is_square() {
            return Err(usage("A must be a square matrix of size k+1 ≥ 2"));
        }
        if b.shape() != (2, 2) {
            return Err(usage("B must be 2×2"));
        }
        if !is_anti_hermitian(&a) || !is_anti_hermitian(&b) {
            return Err(usage("Lie algebra elements must be anti-hermitian"));
        }
        Ok(Self { a, b })
    }

    pub fn zero(k: usize) -> Self {
        Self {
            a: CMatrix::zeros(k + 1, k + 1),
            b: CMatrix::zeros(2, 2),
        }
    }

    pub fn k(&self) -> usize {
        self.a.nrows() - 1
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            a: &self.a * Complex64::new(s, 0.0),
            b: &self.b * Complex64::new(s, 0.0),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            a: &self.a - &other.a,
            b: &self.b - &other.b,
        }
    }

    /// Matrix commutator in each factor.
    pub fn commutator(&self, other: &Self) -> Self {
        Self {
            a: &self.a * &other.a - &other.a * &self.a,
            b: &self.b * &other.b - &other.b * &self.b,
        }
    }

    /// `Ad_g` for `g = (U1, U2)`.
    pub fn adjoint_by(&self, u1: &CMatrix, u2: &CMatrix) -> Self {
        Self {
            a: u1 * &self.a * u1.adjoint(),
            b: u2 * &self.b * u2.adjoint(),
        }
    }

    pub fn norm(&self) -> f64 {
        (self.a.norm_squared() + self.b.norm_squared()).sqrt()
    }
}

/// The invariant inner product `⟨(A,B),(A',B')⟩ = −½ (tr AA' + tr BB')`.
pub fn ip(xi: &LieElement, eta: &LieElement) -> Result<f64> {
    if xi.a.shape() != eta.a.shape() {
        return Err(usage(format!(
            "dimension mismatch: u({}) vs u({})",
            xi.a.nrows(),
            eta.a.nrows()
        )));
    }
    Ok(ip_raw(xi, eta))
}

fn ip_raw(xi: &LieElement, eta: &LieElement) -> f64 {
    let ta: Complex64 = xi.a.iter().zip(eta.a.transpose().iter()).map(|(p, q)| p * q).sum();
    let tb: Complex64 = xi.b.iter().zip(eta.b.transpose().iter()).map(|(p, q)| p * q).sum();
    -0.5 * (ta + tb).re
}

/// Coordinates `(λ, x, y, u, v)` on `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct PCoords {
    pub lambda: f64,
    pub x: Complex64,
    pub y: Complex64,
    pub u: Vec<Complex64>,
    pub v: Vec<Complex64>,
}

impl PCoords {
    pub fn zero(k: usize) -> Self {
        Self {
            lambda: 0.0,
            x: ZERO,
            y: ZERO,
            u: vec![ZERO; k.saturating_sub(1)],
            v: vec![ZERO; k.saturating_sub(1)],
        }
    }

    pub fn p0(lambda: f64, k: usize) -> Self {
        Self { lambda, ..Self::zero(k) }
    }

    pub fn pmu(x: Complex64, k: usize) -> Self {
        Self { x, ..Self::zero(k) }
    }

    pub fn ptilde(y: Complex64, k: usize) -> Self {
        Self { y, ..Self::zero(k) }
    }

    pub fn phat(u: Vec<Complex64>) -> Self {
        let k = u.len() + 1;
        Self { u, ..Self::zero(k) }
    }

    pub fn pcheck(v: Vec<Complex64>) -> Self {
        let k = v.len() + 1;
        Self { v, ..Self::zero(k) }
    }

    /// `p̂` element with `u = s·e_j`.
    pub fn phat_unit(j: usize, s: Complex64, k: usize) -> Self {
        let mut c = Self::zero(k);
        c.u[j] = s;
        c
    }

    /// `p̌` element with `v = s·e_j`.
    pub fn pcheck_unit(j: usize, s: Complex64, k: usize) -> Self {
        let mut c = Self::zero(k);
        c.v[j] = s;
        c
    }

    pub fn k(&self) -> usize {
        self.u.len() + 1
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            lambda: self.lambda + o.lambda,
            x: self.x + o.x,
            y: self.y + o.y,
            u: self.u.iter().zip(&o.u).map(|(a, b)| a + b).collect(),
            v: self.v.iter().zip(&o.v).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            lambda: self.lambda * s,
            x: self.x * s,
            y: self.y * s,
            u: self.u.iter().map(|a| a * s).collect(),
            v: self.v.iter().map(|a| a * s).collect(),
        }
    }

    /// Largest absolute coordinate.
    pub fn max_abs(&self) -> f64 {
        let mut m = self.lambda.abs().max(self.x.norm()).max(self.y.norm());
        for z in self.u.iter().chain(&self.v) {
            m = m.max(z.norm());
        }
        m
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k == 1 && (!self.u.is_empty() || !self.v.is_empty()) {
            return Err(usage("for k = 1 the p̂ and p̌ coordinates must be empty"));
        }
        if self.u.len() != k.saturating_sub(1) || self.v.len() != k.saturating_sub(1) {
            return Err(usage(format!(
                "u and v must have length k−1 = {}, got {} and {}",
                k.saturating_sub(1),
                self.u.len(),
                self.v.len()
            )));
        }
        Ok(())
    }
}

/// A tangent vector `dμ·∂/∂μ + p` at `φ_μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tangent {
    pub dmu: f64,
    pub p: PCoords,
}

impl Tangent {
    pub fn new(dmu: f64, p: PCoords) -> Self {
        Self { dmu, p }
    }

    pub fn d_mu(k: usize) -> Self {
        Self::new(1.0, PCoords::zero(k))
    }

    pub fn from_p(p: PCoords) -> Self {
        Self::new(0.0, p)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.dmu + o.dmu, self.p.add(&o.p))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.dmu * s, self.p.scale(s))
    }

    pub fn max_abs(&self) -> f64 {
        self.dmu.abs().max(self.p.max_abs())
    }
}

/// Unit-coordinate representatives of the blocks `∂μ, p0, pμ, p̃μ, p̂, p̌`
/// (the last two only for k ≥ 2), labelled.
pub fn canonical_directions(k: usize) -> Vec<(&'static str, Tangent)> {
    let mut dirs = vec![
        ("d_mu", Tangent::d_mu(k)),
        ("p0", Tangent::from_p(PCoords::p0(1.0, k))),
        ("p_mu", Tangent::from_p(PCoords::pmu(ONE, k))),
        ("p_tilde", Tangent::from_p(PCoords::ptilde(ONE, k))),
    ];
    if k >= 2 {
        dirs.push(("p_hat", Tangent::from_p(PCoords::phat_unit(0, ONE, k))));
        dirs.push(("p_check", Tangent::from_p(PCoords::pcheck_unit(0, ONE, k))));
    }
    dirs
}

fn check_mu(mu: f64) -> Result<()> {
    if !(mu > 1.0 && mu.is_finite()) {
        return Err(domain(format!("μ must lie in (1, ∞), got {mu}")));
    }
    Ok(())
}

/// Sum of the five block embeddings of `c` into `g` at `φ_μ`.
pub fn embed_coords(c: &PCoords, mu: f64, k: usize) -> Result<LieElement> {
    check_mu(mu)?;
    if k == 0 {
        return Err(usage("k must be at least 1"));
    }
    c.check_k(k)?;
    let mut a = CMatrix::zeros(k + 1, k + 1);
    let mut b = CMatrix::zeros(2, 2);

    let il = I * c.lambda;
    a[(0, 0)] += il;
    a[(1, 1)] -= il;
    b[(0, 0)] -= il;
    b[(1, 1)] += il;

    // pμ
    a[(0, 1)] += c.x;
    a[(1, 0)] -= c.x.conj();
    b[(0, 1)] += c.x * mu;
    b[(1, 0)] -= c.x.conj() * mu;

    // p̃μ
    a[(0, 1)] -= c.y.conj() * mu;
    a[(1, 0)] += c.y * mu;
    b[(0, 1)] -= c.y.conj();
    b[(1, 0)] += c.y;

    for (j, (u, v)) in c.u.iter().zip(&c.v).enumerate() {
        let r = j + 2;
        a[(r, 0)] += u;
        a[(0, r)] -= u.conj();
        a[(r, 1)] += v;
        a[(1, r)] -= v.conj();
    }
    Ok(LieElement { a, b })
}

/// Orthogonal projection of `xi` onto `p`, returned in coordinates.
pub fn project_p(xi: &LieElement, mu: f64) -> Result<PCoords> {
    check_mu(mu)?;
    let k = xi.k();
    let a = &xi.a;
    let b = &xi.b;
    // p0 is orthogonal to both k and the off-diagonal blocks, and ⟨p0(1),p0(1)⟩ = 2.
    let lambda = 0.25 * (a[(0, 0)].im - a[(1, 1)].im - b[(0, 0)].im + b[(1, 1)].im);
    // Solve x − μȳ = A01, μx − ȳ = B01.
    let (a01, b01) = (a[(0, 1)], b[(0, 1)]);
    let den = mu * mu - 1.0;
    let x = (b01 * mu - a01) / den;
    let y = ((b01 - a01 * mu) / den).conj();
    let u = (2..=k).map(|r| a[(r, 0)]).collect();
    let v = (2..=k).map(|r| a[(r, 1)]).collect();
    Ok(PCoords { lambda, x, y, u, v })
}

/// The `k`-component of `xi`, i.e. `xi − embed(project_p(xi))`.
pub fn k_residual(xi: &LieElement, mu: f64) -> Result<LieElement> {
    let c = project_p(xi, mu)?;
    Ok(xi.sub(&embed_coords(&c, mu, xi.k())?))
}

/// Element of the isotropy algebra `k` with parameters `(ξ, α, β, X)`.
pub fn isotropy_algebra_element(xi: f64, alpha: f64, beta: f64, x: &CMatrix) -> Result<LieElement> {
    let k = x.nrows() + 1;
    if !x.is_square() || (k > 1 && !is_anti_hermitian(x)) {
        return Err(usage("X must be an anti-hermitian (k−1)×(k−1) matrix"));
    }
    let mut a = CMatrix::zeros(k + 1, k + 1);
    a[(0, 0)] = I * alpha;
    a[(1, 1)] = I * beta;
    a.view_mut((2, 2), (k - 1, k - 1)).copy_from(x);
    let mut b = CMatrix::zeros(2, 2);
    b[(0, 0)] = I * (alpha + xi);
    b[(1, 1)] = I * (beta + xi);
    Ok(LieElement { a, b })
}

/// Element `(e^{iξ}, e^{iα}, e^{iβ}, U)` of the isotropy group `K ≅ T³ × U(k−1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KElement {
    pub xi: f64,
    pub alpha: f64,
    pub beta: f64,
    pub u: CMatrix,
}

impl KElement {
    pub fn identity(k: usize) -> Self {
        let n = k.saturating_sub(1);
        Self {
            xi: 0.0,
            alpha: 0.0,
            beta: 0.0,
            u: CMatrix::identity(n, n),
        }
    }

    pub fn k(&self) -> usize {
        self.u.nrows() + 1
    }

    /// Image `(U1, U2) ∈ U(k+1) × U(2)`.
    pub fn to_group(&self) -> (CMatrix, CMatrix) {
        let k = self.k();
        let mut u1 = CMatrix::zeros(k + 1, k + 1);
        u1[(0, 0)] = Complex64::from_polar(1.0, self.alpha);
        u1[(1, 1)] = Complex64::from_polar(1.0, self.beta);
        u1.view_mut((2, 2), (k - 1, k - 1)).copy_from(&self.u);
        let mut u2 = CMatrix::zeros(2, 2);
        u2[(0, 0)] = Complex64::from_polar(1.0, self.alpha + self.xi);
        u2[(1, 1)] = Complex64::from_polar(1.0, self.beta + self.xi);
        (u1, u2)
    }
}

/// Adjoint action of `K` on coordinates:
/// `(λ, e^{i(α−β)}x, e^{−i(α−β)}y, e^{−iα}Uu, e^{−iβ}Uv)`.
pub fn ad_k(g: &KElement, c: &PCoords) -> Result<PCoords> {
    let k = c.k();
    if g.u.shape() != (k - 1, k - 1) {
        return Err(usage("U must be (k−1)×(k−1)"));
    }
    if k > 1 && !is_unitary(&g.u, UNITARY_TOL) {
        return Err(usage("U must be unitary"));
    }
    let rot = |v: &[Complex64], phase: f64| -> Vec<Complex64> {
        let col = nalgebra::DVector::from_column_slice(v);
        let out = &g.u * col * Complex64::from_polar(1.0, phase);
        out.iter().copied().collect()
    };
    Ok(PCoords {
        lambda: c.lambda,
        x: c.x * Complex64::from_polar(1.0, g.alpha - g.beta),
        y: c.y * Complex64::from_polar(1.0, g.beta - g.alpha),
        u: rot(&c.u, -g.alpha),
        v: rot(&c.v, -g.beta),
    })
}

/// `[ξ, η]_p`: matrix commutator of the embeddings, projected back to `p`.
pub fn bracket_p(xi: &PCoords, eta: &PCoords, mu: f64) -> Result<PCoords> {
    let k = xi.k();
    if eta.k() != k {
        return Err(usage("bracket arguments must have the same k"));
    }
    let a = embed_coords(xi, mu, k)?;
    let b = embed_coords(eta, mu, k)?;
    project_p(&a.commutator(&b), mu)
}

/// The complex structure on `V_μ = ⟨∂/∂μ⟩ ⊕ p`:
/// `J(λ,x,y,u,v) = 4μλ ∂/∂μ + (0, ix, iy, iu, iv)` and `J ∂/∂μ = −p0(1)/(4μ)`.
pub fn jmap(t: &Tangent, mu: f64) -> Tangent {
    let p = &t.p;
    Tangent {
        dmu: 4.0 * mu * p.lambda,
        p: PCoords {
            lambda: -t.dmu / (4.0 * mu),
            x: I * p.x,
            y: I * p.y,
            u: p.u.iter().map(|z| I * z).collect(),
            v: p.v.iter().map(|z| I * z).collect(),
        },
    }
}

/// Product metric `γ0 = dμ² + ⟨,⟩_p`.
pub fn gamma0(t1: &Tangent, t2: &Tangent, mu: f64) -> Result<f64> {
    let k = t1.p.k();
    let a = embed_coords(&t1.p, mu, k)?;
    let b = embed_coords(&t2.p, mu, k)?;
    Ok(t1.dmu * t2.dmu + ip_raw(&a, &b))
}

/// Orthonormal frames for `γ0` (the `Y` frame) and for an invariant Kähler
/// metric `γ` (the `X` frame), ordered
/// `1..6, p̂ (2k−2 vectors), p̌ (2k−2 vectors)`.
#[derive(Debug, Clone)]
pub struct FrameBasis {
    pub mu: f64,
    pub k: usize,
    pub y: Vec<Tangent>,
    pub x: Vec<Tangent>,
    pub coefficients: MetricCoefficients,
}

fn lie_tangent(a_entries: &[(usize, usize, Complex64)], b_entries: &[(usize, usize, Complex64)], mu: f64, k: usize) -> Result<Tangent> {
    let mut a = CMatrix::zeros(k + 1, k + 1);
    let mut b = CMatrix::zeros(2, 2);
    for &(i, j, z) in a_entries {
        a[(i, j)] += z;
    }
    for &(i, j, z) in b_entries {
        b[(i, j)] += z;
    }
    Ok(Tangent::from_p(project_p(&LieElement { a, b }, mu)?))
}

/// The `γ0`-orthonormal frame `Y_1 … Y_{4k+2}`.
pub fn y_frame(mu: f64, k: usize) -> Result<Vec<Tangent>> {
    check_mu(mu)?;
    if k == 0 {
        return Err(usage("k must be at least 1"));
    }
    let mut y = Vec::with_capacity(4 * k + 2);
    y.push(Tangent::d_mu(k));
    y.push(Tangent::from_p(PCoords::p0(FRAC_1_SQRT_2, k)));
    // (e12 − e21, 0), (i e12 + i e21, 0), (0, −e12 + e21), (0, i e12 + i e21)
    y.push(lie_tangent(&[(0, 1, ONE), (1, 0, -ONE)], &[], mu, k)?);
    y.push(lie_tangent(&[(0, 1, I), (1, 0, I)], &[], mu, k)?);
    y.push(lie_tangent(&[], &[(0, 1, -ONE), (1, 0, ONE)], mu, k)?);
    y.push(lie_tangent(&[], &[(0, 1, I), (1, 0, I)], mu, k)?);
    for row in [0usize, 1] {
        for j in 0..k - 1 {
            let r = j + 2;
            y.push(lie_tangent(&[(row, r, -ONE), (r, row, ONE)], &[], mu, k)?);
            y.push(lie_tangent(&[(row, r, I), (r, row, I)], &[], mu, k)?);
        }
    }
    Ok(y)
}

/// Build both frames for the Kähler metric determined by `profile` at `μ`.
pub fn frame_basis(mu: f64, k: usize, profile: &KahlerProfile) -> Result<FrameBasis> {
    let y = y_frame(mu, k)?;
    let co = coefficients(profile, mu)?;
    if !co.all_positive() {
        return Err(crate::Error::Numerical(format!(
            "metric coefficients are not positive at μ = {mu}: {co:?}"
        )));
    }
    let s1 = ((1.0 + mu * mu) * co.a1).sqrt();
    let s2 = ((1.0 + mu * mu) * co.a2).sqrt();
    let mut x = Vec::with_capacity(y.len());
    x.push(y[0].scale(1.0 / co.a0.sqrt()));
    x.push(y[1].scale(1.0 / (mu * (8.0 * co.a0).sqrt())));
    x.push(y[2].add(&y[4].scale(-mu)).scale(1.0 / s1));
    x.push(y[3].add(&y[5].scale(mu)).scale(1.0 / s1));
    x.push(y[2].scale(-mu).add(&y[4]).scale(1.0 / s2));
    x.push(y[3].scale(mu).add(&y[5]).scale(1.0 / s2));
    let n_hat = 2 * (k - 1);
    for yi in &y[6..6 + n_hat] {
        x.push(yi.scale(1.0 / co.a3.sqrt()));
    }
    for yi in &y[6 + n_hat..] {
        x.push(yi.scale(1.0 / co.a4.sqrt()));
    }
    Ok(FrameBasis {
        mu,
        k,
        y,
        x,
        coefficients: co,
    })
}
