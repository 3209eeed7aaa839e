//! Python bindings: profiles, metric coefficients, measured profiles, volumes and lengths.

use lumpspace::cylinder::{cylinder_volume as cyl_volume, CylinderSpec};
use lumpspace::kahler::{check_k1, check_k2_profile, default_k2_step, generator_pairs};
use lumpspace::lie::canonical_directions;
use lumpspace::moduli::{l2_inner, tangent_field};
use lumpspace::projective::{fs_norm_sq as fs_norm, ProjectivePoint};
use lumpspace::volume::{self, BaptistaParams};
use lumpspace::{kahler, PCoords};
use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: lumpspace::Error) -> PyErr {
    match e {
        lumpspace::Error::Usage(_) | lumpspace::Error::Domain(_) => PyValueError::new_err(e.to_string()),
        other => PyArithmeticError::new_err(other.to_string()),
    }
}

/// The profile `(A(μ), B)` of an invariant Kähler metric.
#[pyclass(name = "KahlerProfile", module = "lumpspace_py", frozen)]
struct PyKahlerProfile {
    inner: kahler::KahlerProfile,
}

#[pymethods]
impl PyKahlerProfile {
    /// L² metric for domain curvature `c1` and target curvature `c2`.
    #[staticmethod]
    #[pyo3(signature = (c1 = 4.0, c2 = 4.0))]
    fn l2(c1: f64, c2: f64) -> PyResult<Self> {
        if !(c1 > 0.0 && c2 > 0.0 && c1.is_finite() && c2.is_finite()) {
            return Err(PyValueError::new_err("c1 and c2 must be positive"));
        }
        Ok(Self { inner: kahler::KahlerProfile::l2(c1, c2) })
    }

    /// Fubini-Study metric of curvature `c`.
    #[staticmethod]
    #[pyo3(signature = (c = 4.0))]
    fn fubini_study(c: f64) -> PyResult<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(PyValueError::new_err("c must be positive"));
        }
        Ok(Self { inner: kahler::KahlerProfile::fubini_study(c) })
    }

    /// Profile from Python callables `a(μ)` and `da(μ)`; exceptions become NaN.
    #[staticmethod]
    fn custom(a: Py<PyAny>, da: Py<PyAny>, b: f64, a_infinity: f64) -> PyResult<Self> {
        let wrap = |f: Py<PyAny>| {
            move |mu: f64| {
                Python::attach(|py| f.call1(py, (mu,)).and_then(|v| v.extract::<f64>(py)).unwrap_or(f64::NAN))
            }
        };
        let inner = kahler::KahlerProfile::custom(wrap(a), wrap(da), b, a_infinity).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    #[getter]
    fn b(&self) -> f64 {
        self.inner.b()
    }

    #[getter]
    fn a_infinity(&self) -> f64 {
        self.inner.a_infinity()
    }

    fn a(&self, mu: f64) -> f64 {
        self.inner.a(mu)
    }

    fn da(&self, mu: f64) -> f64 {
        self.inner.da(mu)
    }

    /// Coefficients `(A0, …, A4)` of the hermitian form at μ.
    fn coefficients(&self, mu: f64) -> PyResult<(f64, f64, f64, f64, f64)> {
        let c = kahler::coefficients(&self.inner, mu).map_err(to_py)?;
        Ok((c.a0, c.a1, c.a2, c.a3, c.a4))
    }

    /// Closedness residuals keyed by check name; all vanish for a Kähler profile.
    fn kahler_residuals<'py>(&self, py: Python<'py>, mu: f64, k: usize) -> PyResult<Bound<'py, PyDict>> {
        let co = kahler::coefficients(&self.inner, mu).map_err(to_py)?;
        let one = Complex64::new(1.0, 0.0);
        let out = PyDict::new(py);
        let r = check_k1(&co, mu, &PCoords::pmu(one, k), &PCoords::ptilde(one, k), &PCoords::p0(1.0, k))
            .map_err(to_py)?;
        out.set_item("k1_pmu_ptilde_p0", r)?;
        for (name, x, jx) in generator_pairs(k) {
            let r = check_k2_profile(&self.inner, mu, |_| x.clone(), |_| jx.clone(), default_k2_step(mu))
                .map_err(to_py)?;
            out.set_item(format!("k2_{name}"), r)?;
        }
        Ok(out)
    }

    fn __repr__(&self) -> String {
        format!(
            "KahlerProfile(label={}, b={}, a_infinity={})",
            self.inner.label(),
            self.inner.b(),
            self.inner.a_infinity()
        )
    }
}

/// Tensor Gauss-Legendre × trapezoid grid on the domain sphere.
#[pyclass(name = "QuadGrid", module = "lumpspace_py", frozen)]
struct PyQuadGrid {
    inner: lumpspace::QuadGrid,
}

#[pymethods]
impl PyQuadGrid {
    #[new]
    #[pyo3(signature = (n_rad = 128, n_ang = 128, c1 = 4.0))]
    fn new(n_rad: usize, n_ang: usize, c1: f64) -> PyResult<Self> {
        Ok(Self { inner: lumpspace::QuadGrid::new(n_rad, n_ang, c1).map_err(to_py)? })
    }

    /// Grid with the radial node count raised as needed for orbit parameter μ.
    #[staticmethod]
    #[pyo3(signature = (mu, n_rad = 128, n_ang = 128, c1 = 4.0))]
    fn for_mu(mu: f64, n_rad: usize, n_ang: usize, c1: f64) -> PyResult<Self> {
        Ok(Self { inner: lumpspace::QuadGrid::for_mu(n_rad, n_ang, c1, mu).map_err(to_py)? })
    }

    #[getter]
    fn n_rad(&self) -> usize {
        self.inner.n_rad()
    }

    #[getter]
    fn n_ang(&self) -> usize {
        self.inner.n_ang()
    }

    #[getter]
    fn c1(&self) -> f64 {
        self.inner.c1()
    }

    /// Sum of weights, the area `4π/c1`.
    fn total_weight(&self) -> f64 {
        self.inner.total_weight()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// Measured `(A, B)` at μ from the L² product; B is None for k = 1.
#[pyfunction]
#[pyo3(signature = (k, mu, grid, c1 = 4.0, c2 = 4.0))]
fn measure_profile(k: usize, mu: f64, grid: &PyQuadGrid, c1: f64, c2: f64) -> PyResult<(f64, Option<f64>)> {
    let m = kahler::measure_profile(k, mu, &grid.inner, c1, c2).map_err(to_py)?;
    Ok((m.a, m.b))
}

/// Names of the canonical directions and their L² Gram matrix by quadrature.
#[pyfunction]
#[pyo3(signature = (k, mu, grid, c2 = 4.0))]
fn canonical_gram(k: usize, mu: f64, grid: &PyQuadGrid, c2: f64) -> PyResult<(Vec<String>, Vec<Vec<f64>>)> {
    let dirs = canonical_directions(k);
    let fields = dirs
        .iter()
        .map(|(_, t)| tangent_field(mu, k, t, &grid.inner))
        .collect::<lumpspace::Result<Vec<_>>>()
        .map_err(to_py)?;
    let mut gram = vec![vec![0.0; fields.len()]; fields.len()];
    for i in 0..fields.len() {
        for j in i..fields.len() {
            let g = l2_inner(&fields[i], &fields[j], &grid.inner, c2).map_err(to_py)?;
            gram[i][j] = g;
            gram[j][i] = g;
        }
    }
    Ok((dirs.iter().map(|(n, _)| n.to_string()).collect(), gram))
}

/// Closed-form volume factor `F(μ)` of a Kähler profile.
#[pyfunction]
fn volume_factor_closed(profile: &PyKahlerProfile, mu: f64, k: usize) -> PyResult<f64> {
    volume::volume_factor_closed(&profile.inner, mu, k).map_err(to_py)
}

/// Volume factor of the L² metric from the quadrature Gram determinant.
#[pyfunction]
#[pyo3(signature = (k, mu, grid, c1 = 4.0, c2 = 4.0))]
fn volume_factor_gram(k: usize, mu: f64, grid: &PyQuadGrid, c1: f64, c2: f64) -> PyResult<f64> {
    volume::volume_factor_gram(k, mu, c1, c2, &grid.inner).map_err(to_py)
}

/// Closed-form total volume.
#[pyfunction]
fn total_volume(profile: &PyKahlerProfile, k: usize) -> PyResult<f64> {
    volume::total_volume(&profile.inner, k).map_err(to_py)
}

/// Total volume by quadrature of the volume factor.
#[pyfunction]
fn total_volume_numeric(profile: &PyKahlerProfile, k: usize) -> PyResult<f64> {
    volume::total_volume_numeric(&profile.inner, k).map_err(to_py)
}

/// `Vol(G/K)` as `(adjudicated, printed, ratio)`.
#[pyfunction]
fn vol_g_mod_k(k: usize) -> PyResult<(f64, f64, f64)> {
    let v = volume::vol_g_mod_k(k).map_err(to_py)?;
    Ok((v.adjudicated, v.printed, v.ratio))
}

/// Vortex-type volume formula for degree d, genus g.
#[pyfunction]
fn baptista_volume(d: usize, k: usize, g: usize, c2: f64, vol_sigma: f64) -> PyResult<f64> {
    Ok(volume::baptista_volume(&BaptistaParams::new(d, k, g, c2, vol_sigma).map_err(to_py)?))
}

/// Length of the ray `φ_μ` from μ = 1 to `mu_max` (may be `inf`).
#[pyfunction]
fn ray_length(profile: &PyKahlerProfile, mu_max: f64) -> PyResult<f64> {
    volume::ray_length(&profile.inner, mu_max).map_err(to_py)
}

/// Volume of the cylinder `[1, μ z^d]`.
#[pyfunction]
#[pyo3(signature = (d, c1 = 4.0, c2 = 4.0, mu = Complex64::new(1.0, 0.0)))]
fn cylinder_volume(d: usize, c1: f64, c2: f64, mu: Complex64) -> PyResult<f64> {
    cyl_volume(&CylinderSpec::new(d, c1, c2, mu).map_err(to_py)?, 16).map_err(to_py)
}

/// Fubini-Study squared norm of velocity `v` at the point with lift `w`.
#[pyfunction]
#[pyo3(signature = (w, v, c = 4.0))]
fn fs_norm_sq(w: Vec<Complex64>, v: Vec<Complex64>, c: f64) -> PyResult<f64> {
    let p = ProjectivePoint::new(w).map_err(to_py)?;
    fs_norm(&p, &v, c).map_err(to_py)
}

#[pymodule]
fn lumpspace_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyKahlerProfile>()?;
    m.add_class::<PyQuadGrid>()?;
    m.add_function(wrap_pyfunction!(measure_profile, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_gram, m)?)?;
    m.add_function(wrap_pyfunction!(volume_factor_closed, m)?)?;
    m.add_function(wrap_pyfunction!(volume_factor_gram, m)?)?;
    m.add_function(wrap_pyfunction!(total_volume, m)?)?;
    m.add_function(wrap_pyfunction!(total_volume_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(vol_g_mod_k, m)?)?;
    m.add_function(wrap_pyfunction!(baptista_volume, m)?)?;
    m.add_function(wrap_pyfunction!(ray_length, m)?)?;
    m.add_function(wrap_pyfunction!(cylinder_volume, m)?)?;
    m.add_function(wrap_pyfunction!(fs_norm_sq, m)?)?;
    Ok(())
}
