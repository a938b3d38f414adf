//! Independent reference computations for the integration tests.
//!
//! Nothing here calls into the closed forms under test. Geometry is rebuilt
//! from first principles and integrated numerically.

#![allow(dead_code)]

use bpa_core::calibration::{CalibrationDataset, ModelParameters, Sample};
use bpa_core::statics::tip_push_force;
use bpa_core::PatternSpec;

/// Adaptive Simpson quadrature.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

pub fn gl_integrate<F: Fn(f64) -> f64>(rule: &[(f64, f64)], f: F, a: f64, b: f64) -> f64 {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    rule.iter().map(|&(x, w)| w * f(c + h * x)).sum::<f64>() * h
}

/// An inextensible film of length `b` laid as an arc whose tangent turns
/// uniformly from `-theta` to `+theta`, built by integrating the tangent.
pub struct ArcFilm {
    pub b: f64,
    pub theta: f64,
    rule: Vec<(f64, f64)>,
}

impl ArcFilm {
    pub fn new(b: f64, theta: f64) -> Self {
        ArcFilm {
            b,
            theta,
            rule: gauss_legendre(24),
        }
    }

    fn heading(&self, s: f64) -> f64 {
        -self.theta + 2.0 * self.theta * s / self.b
    }

    /// Position after arclength `s`, starting at the origin; the film
    /// rises into -y first and returns to y = 0 at `s = b`.
    pub fn point(&self, s: f64) -> (f64, f64) {
        if s == 0.0 {
            return (0.0, 0.0);
        }
        let x = gl_integrate(&self.rule, |u| self.heading(u).cos(), 0.0, s);
        let y = gl_integrate(&self.rule, |u| self.heading(u).sin(), 0.0, s);
        (x, y)
    }

    pub fn chord(&self) -> f64 {
        self.point(self.b).0
    }

    pub fn contraction(&self) -> f64 {
        1.0 - self.chord() / self.b
    }

    pub fn height(&self) -> f64 {
        -self.point(0.5 * self.b).1
    }

    /// Area between the film and its chord: ∮ for the closed curve via
    /// `∫ -y dx` along the film.
    pub fn area(&self) -> f64 {
        gl_integrate(
            &self.rule,
            |s| -self.point(s).1 * self.heading(s).cos(),
            0.0,
            self.b,
        )
    }
}

pub const SYNTHETIC_TRUTH: ModelParameters = ModelParameters {
    section_height: 9.0,
    kappa0: 150.0,
    kappa1: 2500.0,
    onset_pressure: 15.0,
};

/// Noise-free dataset produced by the model at [`SYNTHETIC_TRUTH`].
pub fn synthetic_dataset() -> CalibrationDataset {
    let template = PatternSpec::default();
    let mut samples = Vec::new();
    for b in [25.0, 40.0] {
        let act = SYNTHETIC_TRUTH.actuator(&template, b).unwrap();
        for p in [20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0, 55.0] {
            let deg = act.state(p).unwrap().bend_angle.to_degrees();
            samples.push(Sample::angle(b, p, deg));
        }
        for p in [40.0, 50.0] {
            let f = tip_push_force(&act, p, 2.0).unwrap().reaction_force;
            samples.push(Sample::force(b, p, 2.0, f));
        }
    }
    CalibrationDataset::new(samples).unwrap()
}

/// Seeded generator so the random-instance suites are reproducible.
pub fn rng(seed: u64) -> rand::rngs::StdRng {
    rand::SeedableRng::seed_from_u64(seed)
}
