//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::{PI, SQRT_2};
use std::time::Instant;

use lumpspace::cylinder::{cylinder_volume, fubini_crosscheck, inner_mu_integral, CylinderSpec};
use lumpspace::kahler::{
    check_k1, check_k2, check_k2_profile, coefficients, default_k2_step, gamma_eval, generator_pairs,
    measure_profile, KahlerProfile, MetricCoefficients,
};
use lumpspace::lie::{canonical_directions, jmap, PCoords, Tangent};
use lumpspace::moduli::{l2_inner, tangent_field};
use lumpspace::quadrature::QuadGrid;
use lumpspace::volume::{
    baptista_volume, ray_length, total_volume, total_volume_numeric, vol_g_mod_k, volume_factor_closed,
    volume_factor_gram, volume_factor_hermitian, BaptistaParams,
};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `L(∞)` for the L² profile at c1 = c2 = 4 (60-digit adaptive quadrature).
const RAY_LENGTH_LIMIT: f64 = 1.6308119320197113;

struct Outcome {
    pass: bool,
    detail: String,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn fact(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn double_fact(n: usize) -> f64 {
    (1..=n).rev().step_by(2).map(|i| i as f64).product()
}

// squared lengths predicted by the hermitian form with L² coefficients
fn closed_square(name: &str, co: &MetricCoefficients, mu: f64) -> f64 {
    match name {
        "d_mu" => co.a0,
        "p0" => 16.0 * mu * mu * co.a0,
        "p_mu" => co.a1 * (1.0 + mu * mu),
        "p_tilde" => co.a2 * (1.0 + mu * mu),
        "p_hat" => co.a3,
        "p_check" => co.a4,
        _ => unreachable!(),
    }
}

fn criterion_1() -> Outcome {
    let grid = QuadGrid::new(128, 128, 4.0).unwrap();
    let profile = KahlerProfile::l2(4.0, 4.0);
    let (mut worst_rel, mut worst_cross) = (0.0f64, 0.0f64);
    for k in 1..=3 {
        for mu in [1.05, 1.5, 2.0, 5.0] {
            let co = coefficients(&profile, mu).unwrap();
            let dirs = canonical_directions(k);
            let fields: Vec<_> = dirs.iter().map(|(_, t)| tangent_field(mu, k, t, &grid).unwrap()).collect();
            for i in 0..dirs.len() {
                let sq = l2_inner(&fields[i], &fields[i], &grid, 4.0).unwrap();
                let want = closed_square(dirs[i].0, &co, mu);
                assert!((gamma_eval(&co, mu, &dirs[i].1, &dirs[i].1) - want).abs() < 1e-14 * want);
                worst_rel = worst_rel.max(rel(sq, want));
                for j in i + 1..dirs.len() {
                    worst_cross = worst_cross.max(l2_inner(&fields[i], &fields[j], &grid, 4.0).unwrap().abs());
                }
            }
        }
    }
    Outcome {
        pass: worst_rel <= 1e-8 && worst_cross <= 1e-10,
        detail: format!("max rel err {worst_rel:.2e}, max |cross| {worst_cross:.2e}"),
    }
}

fn criterion_2() -> Outcome {
    let b_exact = 8.0 * PI / 16.0;
    let a2 = PI * (15.0 - 16.0 * 2f64.ln()) / 9.0;
    let mut worst_b = 0.0f64;
    let mut a_at_2 = f64::NAN;
    for mu in [1.1, 2.0, 10.0, 100.0] {
        let grid = QuadGrid::for_mu(128, 128, 4.0, mu).unwrap();
        let m = measure_profile(2, mu, &grid, 4.0, 4.0).unwrap();
        worst_b = worst_b.max(rel(m.b.unwrap(), b_exact));
        if mu == 2.0 {
            a_at_2 = m.a;
        }
    }
    let err_a = rel(a_at_2, a2);
    Outcome {
        pass: worst_b <= 1e-9 && err_a <= 1e-9,
        detail: format!("max rel err B {worst_b:.2e}, rel err A(2) {err_a:.2e}"),
    }
}

fn random_coords(rng: &mut StdRng, k: usize) -> PCoords {
    let mut z = || Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    let mut c = PCoords::zero(k);
    c.x = z();
    c.y = z();
    for j in 0..k - 1 {
        c.u[j] = z();
        c.v[j] = z();
    }
    c.lambda = rng.sample(StandardNormal);
    c
}

fn criterion_3() -> Outcome {
    let mut rng = StdRng::seed_from_u64(20_261_019);
    let l2 = KahlerProfile::l2(4.0, 4.0);
    let fs = KahlerProfile::fubini_study(4.0);

    let mu = 2.0;
    let co = coefficients(&l2, mu).unwrap();
    let k = 2;
    let t1 = check_k1(&co, mu, &PCoords::pmu(ONE, k), &PCoords::ptilde(ONE, k), &PCoords::p0(1.0, k)).unwrap();
    let triple2 = (
        PCoords::pmu(ONE, k),
        PCoords::phat_unit(0, ONE, k),
        PCoords::pcheck_unit(0, I, k),
    );
    let t2 = check_k1(&co, mu, &triple2.0, &triple2.1, &triple2.2).unwrap();
    let mut worst_k1 = t1.abs().max(t2.abs());
    for _ in 0..100 {
        let k = rng.random_range(1..=4);
        let mu = 1.0 + 10f64.powf(rng.random_range(-2.0..1.5));
        let profile = if rng.random_bool(0.5) { &l2 } else { &fs };
        let co = coefficients(profile, mu).unwrap();
        let (x, y, z) = (random_coords(&mut rng, k), random_coords(&mut rng, k), random_coords(&mut rng, k));
        let scale = x.max_abs() * y.max_abs() * z.max_abs();
        worst_k1 = worst_k1.max(check_k1(&co, mu, &x, &y, &z).unwrap().abs() / scale.max(1.0));
    }

    let mut worst_k2 = 0.0f64;
    for _ in 0..20 {
        let mu = 1.0 + 10f64.powf(rng.random_range(-1.3..1.3));
        for profile in [&l2, &fs] {
            for (_, x, jx) in generator_pairs(2) {
                let r = check_k2_profile(profile, mu, |_| x.clone(), |_| jx.clone(), default_k2_step(mu)).unwrap();
                worst_k2 = worst_k2.max(r.abs());
            }
        }
    }

    // negative controls: A3 scaled on the second triple; A1, A2 doubled on the pμ pair
    let mut bad = co;
    bad.a3 *= 1.1;
    let neg_k1 = check_k1(&bad, mu, &triple2.0, &triple2.1, &triple2.2).unwrap().abs();
    let (_, x, jx) = generator_pairs(2).remove(0);
    let doubled = |m: f64| {
        let mut c = coefficients(&l2, m)?;
        c.a1 *= 2.0;
        c.a2 *= 2.0;
        Ok(c)
    };
    let neg_k2 = check_k2(doubled, mu, |_| x.clone(), |_| jx.clone(), default_k2_step(mu)).unwrap().abs();

    Outcome {
        pass: worst_k1 <= 1e-10 && worst_k2 <= 1e-6 && neg_k1 >= 1e-3 && neg_k2 >= 1e-3,
        detail: format!(
            "k1 max {worst_k1:.2e}, k2 max {worst_k2:.2e}, controls k1 {neg_k1:.2e} k2 {neg_k2:.2e}"
        ),
    }
}

fn criterion_4() -> Outcome {
    let grid = QuadGrid::new(32, 32, 4.0).unwrap();
    let mut worst_field = 0.0f64;
    let mut worst_j2 = 0.0f64;
    let mut rng = StdRng::seed_from_u64(4);
    for k in 1..=3 {
        for mu in [1.05, 2.0, 7.0] {
            let mut vectors = canonical_directions(k);
            vectors.push(("p0_scaled", Tangent::from_p(PCoords::p0(-0.7, k))));
            vectors.push(("p_mu_i", Tangent::from_p(PCoords::pmu(I, k))));
            vectors.push(("random", Tangent::new(0.3, random_coords(&mut rng, k))));
            for (_, t) in &vectors {
                let jt = jmap(t, mu);
                let f = tangent_field(mu, k, t, &grid).unwrap();
                let jf = tangent_field(mu, k, &jt, &grid).unwrap();
                let norm = f.max_distance(&f, Complex64::new(0.0, 0.0), 4.0).unwrap().max(1.0);
                worst_field = worst_field.max(jf.max_distance(&f, I, 4.0).unwrap() / norm);
                let jj = jmap(&jt, mu).add(t);
                worst_j2 = worst_j2.max(jj.max_abs() / t.max_abs());
            }
        }
    }
    Outcome {
        pass: worst_field <= 1e-10 && worst_j2 <= 4.0 * f64::EPSILON,
        detail: format!("max |φ*(Jξ) − iφ*(ξ)| {worst_field:.2e}, max |J²+1| {worst_j2:.2e}"),
    }
}

fn criterion_5() -> Outcome {
    let grid = QuadGrid::new(128, 128, 4.0).unwrap();
    let l2 = KahlerProfile::l2(4.0, 4.0);
    let mut worst_gram = 0.0f64;
    let mut worst_forms = 0.0f64;
    for k in 1..=2 {
        for mu in [1.1, 1.5, 2.0, 5.0] {
            let closed = volume_factor_closed(&l2, mu, k).unwrap();
            let gram = volume_factor_gram(k, mu, 4.0, 4.0, &grid).unwrap();
            worst_gram = worst_gram.max(rel(gram, closed));
            let herm = volume_factor_hermitian(&coefficients(&l2, mu).unwrap(), mu, k);
            worst_forms = worst_forms.max(rel(herm, closed));
        }
    }
    Outcome {
        pass: worst_gram <= 1e-8 && worst_forms <= 1e-12,
        detail: format!("Gram vs closed {worst_gram:.2e}, hermitian vs Kähler {worst_forms:.2e}"),
    }
}

fn criterion_6() -> Outcome {
    let fs = KahlerProfile::fubini_study(1.0);
    let mut worst_vol = 0.0f64;
    let mut worst_gk = 0.0f64;
    let mut ratios = Vec::new();
    for k in [2usize, 3] {
        let want = (4.0 * PI).powi(2 * k as i32 + 1) / fact(2 * k + 1);
        worst_vol = worst_vol.max(rel(total_volume_numeric(&fs, k).unwrap(), want));
        let alpha = (2.0 * PI).powi(2 * k as i32 + 1) / fact(2 * k + 1);
        let t_int = fact(k - 1) * 2f64.powi(k as i32 - 1) / double_fact(2 * k + 1);
        let gk = vol_g_mod_k(k).unwrap();
        worst_gk = worst_gk.max(rel(gk.adjudicated, alpha / (4.0 * SQRT_2 * t_int)));
        ratios.push(format!("k={k}: {:.6}", gk.ratio));
    }
    Outcome {
        pass: worst_vol <= 1e-6 && worst_gk <= 1e-9,
        detail: format!(
            "FS volume rel err {worst_vol:.2e}, Vol(G/K) rel err {worst_gk:.2e}, printed/adjudicated {}",
            ratios.join(", ")
        ),
    }
}

fn criterion_7() -> Outcome {
    let l2 = KahlerProfile::l2(4.0, 4.0);
    let v2 = total_volume(&l2, 2).unwrap();
    let err_k2 = rel(v2, PI.powi(10) / 120.0);
    let mut worst = 0.0f64;
    for k in 2..=4 {
        let b = baptista_volume(&BaptistaParams::new(1, k, 0, 4.0, PI).unwrap());
        worst = worst.max(rel(total_volume(&l2, k).unwrap(), b));
        worst = worst.max(rel(total_volume_numeric(&l2, k).unwrap(), b));
    }
    Outcome {
        pass: err_k2 <= 1e-6 && worst <= 1e-6,
        detail: format!("k=2 volume {v2:.6} (rel err {err_k2:.2e}), max rel err vs vortex formula {worst:.2e}"),
    }
}

fn criterion_8() -> Outcome {
    let mut worst_vol = 0.0f64;
    let mut worst_fubini = 0.0f64;
    for d in 1..=3 {
        let spec = CylinderSpec::new(d, 4.0, 4.0, ONE).unwrap();
        let v = cylinder_volume(&spec, 16).unwrap();
        worst_vol = worst_vol.max(rel(v, 4.0 * PI / 4.0 * 4.0 * PI / 4.0));
        let (a, b) = fubini_crosscheck(&spec).unwrap();
        worst_fubini = worst_fubini.max(rel(a, b));
    }
    let worst_inner = [1e-6, 0.25, 1.0, 3.0, 1e6]
        .iter()
        .map(|&q| (inner_mu_integral(q) - 0.5).abs())
        .fold(0.0, f64::max);
    Outcome {
        pass: worst_vol <= 1e-6 && worst_fubini <= 1e-8 && worst_inner <= 1e-12,
        detail: format!(
            "volume rel err {worst_vol:.2e}, Fubini orders {worst_fubini:.2e}, inner integral {worst_inner:.2e}"
        ),
    }
}

fn criterion_9() -> Outcome {
    let l2 = KahlerProfile::l2(4.0, 4.0);
    let l3 = ray_length(&l2, 1e3).unwrap();
    let l6 = ray_length(&l2, 1e6).unwrap();
    let linf = ray_length(&l2, f64::INFINITY).unwrap();
    let gap = (l6 - l3).abs();
    let pinned = rel(linf, RAY_LENGTH_LIMIT);
    Outcome {
        pass: gap <= 1e-3 && linf.is_finite() && linf > 0.0 && pinned <= 1e-10,
        detail: format!("|L(1e6) − L(1e3)| = {gap:.3e}, L(∞) = {linf:.16}, pinned rel err {pinned:.1e}"),
    }
}

// double-double arithmetic for an extended-precision evaluation of the closed form
#[derive(Clone, Copy)]
struct Dd(f64, f64);

impl Dd {
    fn from(x: f64) -> Self {
        Dd(x, 0.0)
    }
    fn add(self, o: Dd) -> Dd {
        let s = self.0 + o.0;
        let bb = s - self.0;
        let err = (self.0 - (s - bb)) + (o.0 - bb);
        Dd::renorm(s, err + self.1 + o.1)
    }
    fn neg(self) -> Dd {
        Dd(-self.0, -self.1)
    }
    fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }
    fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let err = self.0.mul_add(o.0, -p);
        Dd::renorm(p, err + self.0 * o.1 + self.1 * o.0)
    }
    fn div(self, o: Dd) -> Dd {
        let q1 = self.0 / o.0;
        let r = self.sub(o.mul(Dd::from(q1)));
        let q2 = r.0 / o.0;
        let r = r.sub(o.mul(Dd::from(q2)));
        let q3 = r.0 / o.0;
        Dd::renorm(q1, q2).add(Dd::from(q3))
    }
    fn renorm(a: f64, b: f64) -> Dd {
        let s = a + b;
        Dd(s, b - (s - a))
    }
}

// (μ⁴ − 4μ² log μ − 1)/(μ² − 1)² with log(1+x) summed in double-double
fn l2_shape_extended(mu: f64) -> f64 {
    let x = Dd::from(mu - 1.0);
    let mut log = Dd::from(0.0);
    let mut power = x;
    for n in 1..=20 {
        let term = power.div(Dd::from(n as f64));
        log = if n % 2 == 1 { log.add(term) } else { log.sub(term) };
        power = power.mul(x);
    }
    let m = Dd::from(mu);
    let h = m.mul(m).sub(Dd::from(1.0));
    let num = h.mul(h.add(Dd::from(2.0))).sub(Dd::from(4.0).mul(m.mul(m)).mul(log));
    let r = num.div(h.mul(h));
    r.0 + r.1
}

fn criterion_10() -> Outcome {
    let mut monotone = true;
    let mut bounded = true;
    for profile in [KahlerProfile::l2(4.0, 4.0), KahlerProfile::fubini_study(4.0)] {
        let two_b = 2.0 * profile.b();
        let mut prev = 0.0;
        for i in 0..=2000 {
            let x = -6.0 + 12.0 * i as f64 / 2000.0;
            let mu = 1.0 + 10f64.powf(x);
            let a = profile.a(mu);
            monotone &= a > prev && profile.da(mu) > 0.0;
            bounded &= a > 0.0 && a < two_b;
            prev = a;
        }
    }
    let mu = 1.0 + 1e-4;
    let l2 = KahlerProfile::l2(4.0, 4.0);
    let series = l2.a_series(mu).unwrap();
    let direct = 16.0 * PI / 16.0 * l2_shape_extended(mu);
    let err = rel(series, direct);
    let naive = rel(l2.a_direct(mu).unwrap(), direct);
    Outcome {
        pass: monotone && bounded && err <= 1e-10,
        detail: format!(
            "monotone {monotone}, 0 < A < 2B {bounded}, series vs extended-precision direct {err:.2e} (double-precision direct {naive:.1e})"
        ),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("metric reproduction", criterion_1),
        ("profile measurement", criterion_2),
        ("Kähler constraints", criterion_3),
        ("complex structure", criterion_4),
        ("volume form", criterion_5),
        ("FS oracle and Vol(G/K)", criterion_6),
        ("total volume vs vortex formula", criterion_7),
        ("cylinder and Fubini", criterion_8),
        ("incompleteness", criterion_9),
        ("profile validity", criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {status} {name}: {} [{:.2} s]",
            i + 1,
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
        if !outcome.pass {
            failures += 1;
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
