//! The subcommands, each producing a [`Report`].

use std::f64::consts::PI;
use std::io::Write;
use std::str::FromStr;

use lumpspace::kahler::{check_k1, check_k2_profile, default_k2_step, gamma_eval, generator_pairs, measure_profile};
use lumpspace::lie::canonical_directions;
use lumpspace::moduli::{l2_inner, tangent_field};
use lumpspace::volume::{
    baptista_volume, total_volume, total_volume_numeric, vol_g_mod_k, volume_factor_closed, volume_factor_gram,
    volume_factor_hermitian, BaptistaParams,
};
use lumpspace::cylinder::{cylinder_volume, fubini_crosscheck, CylinderSpec};
use lumpspace::{coefficients, KahlerProfile, PCoords, QuadGrid};
use num_complex::Complex64;

use crate::error::{usage, CliError};
use crate::report::{format_f64, Report};

type Result<T> = std::result::Result<T, CliError>;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Base tensor grid `NRxNT`; the radial count is raised for large μ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub n_rad: usize,
    pub n_ang: usize,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (r, t) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("grid must look like NRxNT, got {s:?}"))?;
        let parse = |p: &str| p.trim().parse::<usize>().map_err(|e| format!("bad grid size {p:?}: {e}"));
        let (n_rad, n_ang) = (parse(r)?, parse(t)?);
        if n_rad == 0 || n_ang == 0 {
            return Err("grid sizes must be positive".into());
        }
        Ok(Self { n_rad, n_ang })
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.n_rad, self.n_ang)
    }
}

/// `start:stop:count`, expanded to log-spaced samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuRange {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl FromStr for MuRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts[..] else {
            return Err(format!("range must look like start:stop:count, got {s:?}"));
        };
        let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("bad range bound {p:?}: {e}"));
        let (start, stop) = (num(start)?, num(stop)?);
        let count = count.trim().parse::<usize>().map_err(|e| format!("bad count {count:?}: {e}"))?;
        if !(start > 0.0 && stop > 0.0 && start.is_finite() && stop.is_finite()) {
            return Err("range bounds must be positive and finite".into());
        }
        if count == 0 {
            return Err("range count must be positive".into());
        }
        Ok(Self { start, stop, count })
    }
}

impl MuRange {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let (a, b) = (self.start.ln(), self.stop.ln());
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| match i {
                0 => self.start,
                i if i + 1 == self.count => self.stop,
                i => (a + (b - a) * i as f64 / n).exp(),
            })
            .collect()
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("{name} must be positive and finite, got {x}")))
    }
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(usage("k must be at least 1"));
    }
    Ok(())
}

fn curvature_params(r: &mut Report, c1: f64, c2: f64) -> Result<()> {
    positive("c1", c1)?;
    positive("c2", c2)?;
    r.param_f64("c1", c1).param_f64("c2", c2);
    Ok(())
}

fn grid_for(grid: GridSpec, c1: f64, mu: f64) -> Result<QuadGrid> {
    Ok(QuadGrid::for_mu(grid.n_rad, grid.n_ang, c1, mu)?)
}

/// Quadrature L² Gram entries of the canonical directions against the closed form.
pub fn verify_metric(k: usize, mu: f64, c1: f64, c2: f64, grid: GridSpec, tol: f64) -> Result<Report> {
    let mut r = Report::new("verify metric");
    check_k(k)?;
    positive("tol", tol)?;
    r.param("k", k).param_f64("mu", mu);
    curvature_params(&mut r, c1, c2)?;
    let co = coefficients(&KahlerProfile::l2(c1, c2), mu)?;
    let quad = grid_for(grid, c1, mu)?;
    r.param("grid", grid.to_string()).param("n_rad", quad.n_rad()).param_f64("tol", tol);

    let dirs = canonical_directions(k);
    let fields = dirs
        .iter()
        .map(|(_, t)| tangent_field(mu, k, t, &quad))
        .collect::<lumpspace::Result<Vec<_>>>()?;
    for (i, (name, t)) in dirs.iter().enumerate() {
        let actual = l2_inner(&fields[i], &fields[i], &quad, c2)?;
        r.check(format!("norm_sq_{name}"), gamma_eval(&co, mu, t, t), actual, tol);
    }
    for i in 0..dirs.len() {
        for j in i + 1..dirs.len() {
            let actual = l2_inner(&fields[i], &fields[j], &quad, c2)?;
            r.check(format!("cross_{}_{}", dirs[i].0, dirs[j].0), 0.0, actual, tol);
        }
    }
    Ok(r)
}

fn k1_triples(k: usize) -> Vec<(&'static str, [PCoords; 3])> {
    let mut triples = vec![(
        "pmu_ptilde_p0",
        [PCoords::pmu(ONE, k), PCoords::ptilde(ONE, k), PCoords::p0(1.0, k)],
    )];
    if k >= 2 {
        triples.push((
            "pmu_phat_pcheck",
            [PCoords::pmu(ONE, k), PCoords::phat_unit(0, ONE, k), PCoords::pcheck_unit(0, I, k)],
        ));
        triples.push((
            "ptilde_phat_pcheck",
            [PCoords::ptilde(ONE, k), PCoords::phat_unit(0, ONE, k), PCoords::pcheck_unit(0, ONE, k)],
        ));
        triples.push((
            "p0_phat_phat",
            [PCoords::p0(1.0, k), PCoords::phat_unit(0, ONE, k), PCoords::phat_unit(0, I, k)],
        ));
    }
    triples
}

/// Both closedness conditions for the L² and Fubini-Study profiles.
pub fn verify_kahler(k: usize, mus: &[f64], c1: f64, c2: f64, c: f64, tol: f64) -> Result<Report> {
    let mut r = Report::new("verify kahler");
    check_k(k)?;
    positive("tol", tol)?;
    positive("c", c)?;
    if mus.is_empty() {
        return Err(usage("at least one μ is required"));
    }
    r.param("k", k);
    r.param("mu", mus.iter().map(|m| crate::report::number(*m)).collect::<Vec<_>>());
    curvature_params(&mut r, c1, c2)?;
    r.param_f64("c", c).param_f64("tol", tol);

    for (label, profile) in [("l2", KahlerProfile::l2(c1, c2)), ("fs", KahlerProfile::fubini_study(c))] {
        for &mu in mus {
            let co = coefficients(&profile, mu)?;
            for (name, [x, y, z]) in k1_triples(k) {
                let residual = check_k1(&co, mu, &x, &y, &z)?;
                r.check(format!("k1_{label}_mu_{mu}_{name}"), 0.0, residual, tol);
            }
            for (name, x, jx) in generator_pairs(k) {
                let residual = check_k2_profile(&profile, mu, |_| x.clone(), |_| jx.clone(), default_k2_step(mu))?;
                r.check(format!("k2_{label}_mu_{mu}_{name}"), 0.0, residual, tol);
            }
        }
    }
    Ok(r)
}

/// Gram-determinant volume factor against the closed form.
pub fn verify_volume_form(k: usize, mu: f64, c1: f64, c2: f64, grid: GridSpec, tol: f64) -> Result<Report> {
    let mut r = Report::new("verify volume-form");
    check_k(k)?;
    positive("tol", tol)?;
    r.param("k", k).param_f64("mu", mu);
    curvature_params(&mut r, c1, c2)?;
    let profile = KahlerProfile::l2(c1, c2);
    let closed = volume_factor_closed(&profile, mu, k)?;
    let quad = grid_for(grid, c1, mu)?;
    r.param("grid", grid.to_string()).param("n_rad", quad.n_rad()).param_f64("tol", tol);
    let gram = volume_factor_gram(k, mu, c1, c2, &quad)?;
    let hermitian = volume_factor_hermitian(&coefficients(&profile, mu)?, mu, k);
    r.value("volume_factor", closed);
    r.check("gram_vs_closed", closed, gram, tol);
    r.check("hermitian_vs_closed", closed, hermitian, tol);
    Ok(r)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Total volume of the L² metric, or of the Fubini-Study metric when `c` is given.
pub fn volume_total(k: usize, c1: f64, c2: f64, c: Option<f64>, tol: f64) -> Result<Report> {
    let mut r = Report::new("volume total");
    check_k(k)?;
    positive("tol", tol)?;
    r.param("k", k);
    let profile = match c {
        Some(c) => {
            positive("c", c)?;
            r.param("profile", "fubini_study").param_f64("c", c);
            KahlerProfile::fubini_study(c)
        }
        None => {
            curvature_params(&mut r, c1, c2)?;
            r.param("profile", "l2");
            KahlerProfile::l2(c1, c2)
        }
    };
    r.param_f64("tol", tol);
    let closed = total_volume(&profile, k)?;
    let numeric = total_volume_numeric(&profile, k)?;
    let group = vol_g_mod_k(k)?;
    let n = 2 * k + 1;
    let ball = (2.0 * profile.b() * PI).powi(n as i32) / factorial(n);
    r.value("volume", closed);
    r.value("volume_numeric", numeric);
    r.value("vol_g_mod_k", group.adjudicated);
    r.value("vol_g_mod_k_printed", group.printed);
    r.value("vol_g_mod_k_ratio", group.ratio);
    r.check("closed_form", ball, closed, tol);
    r.check("quadrature", closed, numeric, tol);
    Ok(r)
}

/// Volume of the cylinder `[1, μ z^d]`, with the Fubini cross-check.
pub fn volume_cylinder(d: usize, c1: f64, c2: f64, mu: f64, tol: f64) -> Result<Report> {
    let mut r = Report::new("volume cylinder");
    positive("tol", tol)?;
    r.param("d", d);
    curvature_params(&mut r, c1, c2)?;
    r.param_f64("mu", mu).param_f64("tol", tol);
    let spec = CylinderSpec::new(d, c1, c2, Complex64::new(mu, 0.0))?;
    let volume = cylinder_volume(&spec, 16)?;
    let (mu_first, z_first) = fubini_crosscheck(&spec)?;
    r.value("volume", volume);
    r.value("expected_volume", spec.expected_volume());
    r.check("volume", spec.expected_volume(), volume, tol);
    r.check("fubini_orders", mu_first, z_first, tol);
    Ok(r)
}

/// The vortex-type volume formula; for d = 1, g = 0 it is compared with the L² total volume.
pub fn volume_baptista(d: usize, k: usize, g: usize, c2: f64, vol_sigma: f64, tol: f64) -> Result<Report> {
    let mut r = Report::new("volume baptista");
    positive("tol", tol)?;
    r.param("d", d).param("k", k).param("g", g);
    r.param_f64("c2", c2).param_f64("vol_sigma", vol_sigma).param_f64("tol", tol);
    let p = BaptistaParams::new(d, k, g, c2, vol_sigma)?;
    let value = baptista_volume(&p);
    r.param("dimension", p.dimension());
    r.value("value", value);
    if d == 1 && g == 0 {
        let l2 = total_volume(&KahlerProfile::l2(4.0 * PI / vol_sigma, c2), k)?;
        r.check("l2_total_volume", l2, value, tol);
    }
    Ok(r)
}

/// One sample of the profile sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub mu: f64,
    pub a_numeric: f64,
    pub b_numeric: Option<f64>,
    pub a_closed: f64,
    pub b_closed: f64,
}

impl SweepRow {
    pub fn rel_err_a(&self) -> f64 {
        ((self.a_numeric - self.a_closed) / self.a_closed).abs()
    }

    pub fn rel_err_b(&self) -> Option<f64> {
        self.b_numeric.map(|b| ((b - self.b_closed) / self.b_closed).abs())
    }
}

/// Measured profile functions over a log-spaced μ range.
pub fn sweep_profile(
    k: usize,
    range: MuRange,
    c1: f64,
    c2: f64,
    grid: GridSpec,
    tol: f64,
) -> Result<(Report, Vec<SweepRow>)> {
    let mut r = Report::new("sweep profile");
    check_k(k)?;
    positive("tol", tol)?;
    r.param("k", k);
    r.param_f64("mu_start", range.start).param_f64("mu_stop", range.stop).param("mu_count", range.count);
    curvature_params(&mut r, c1, c2)?;
    r.param("grid", grid.to_string()).param_f64("tol", tol);
    let profile = KahlerProfile::l2(c1, c2);
    let mut rows = Vec::with_capacity(range.count);
    for mu in range.values() {
        let quad = grid_for(grid, c1, mu)?;
        let m = measure_profile(k, mu, &quad, c1, c2)?;
        let row = SweepRow {
            mu,
            a_numeric: m.a,
            b_numeric: m.b,
            a_closed: profile.a(mu),
            b_closed: profile.b(),
        };
        r.check(format!("a_mu_{mu}"), row.a_closed, row.a_numeric, tol);
        if let Some(b) = row.b_numeric {
            r.check(format!("b_mu_{mu}"), row.b_closed, b, tol);
        }
        rows.push(row);
    }
    Ok((r, rows))
}

/// CSV with columns `mu, A_numeric, B_numeric, A_closed, B_closed, rel_err_A, rel_err_B`;
/// B_numeric and rel_err_B are empty for k = 1.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["mu", "A_numeric", "B_numeric", "A_closed", "B_closed", "rel_err_A", "rel_err_B"])?;
    let opt = |x: Option<f64>| x.map(format_f64).unwrap_or_default();
    for row in rows {
        w.write_record([
            format_f64(row.mu),
            format_f64(row.a_numeric),
            opt(row.b_numeric),
            format_f64(row.a_closed),
            format_f64(row.b_closed),
            format_f64(row.rel_err_a()),
            opt(row.rel_err_b()),
        ])?;
    }
    w.flush()?;
    Ok(())
}
