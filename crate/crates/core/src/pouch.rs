//! Circular-arc pouch mechanics of a single wave.
//!
//! The film over one wave has material length `b`. Inflated, it bulges into a
//! circular arc of half-angle `θ` and radius `R = b/(2θ)` while the opposite
//! face stays flat, so the chord shrinks to `b·sinθ/θ`. All expressions have
//! removable singularities at `θ = 0`; below [`SERIES_THRESHOLD`] they switch
//! to truncated Taylor series.

use std::f64::consts::FRAC_PI_2;

use crate::error::{require_positive, Error, Result};
use crate::roots;

pub const SERIES_THRESHOLD: f64 = 1e-4;

/// Bisection tolerance for [`theta_max`], rad.
pub const THETA_MAX_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PouchSegment {
    /// Flat chord of the wave at zero inflation (the wavelength), mm.
    pub flat_length_b: f64,
    /// Extent of the wave across the actuator, mm.
    pub depth_w: f64,
    /// Maximum bulge height the sleeve admits, mm.
    pub amplitude_cap_a: f64,
}

impl PouchSegment {
    pub fn new(flat_length_b: f64, depth_w: f64, amplitude_cap_a: f64) -> Result<Self> {
        require_positive("wavelength_b", flat_length_b)?;
        require_positive("width", depth_w)?;
        require_positive("amplitude_a", amplitude_cap_a)?;
        Ok(PouchSegment {
            flat_length_b,
            depth_w,
            amplitude_cap_a,
        })
    }
}

fn check_theta(theta: f64, hi: f64) -> Result<()> {
    if !(0.0..=hi).contains(&theta) {
        return Err(Error::Domain {
            quantity: "theta",
            value: theta,
            lo: 0.0,
            hi,
        });
    }
    Ok(())
}

// Unchecked kernels, valid on [0, π/2].

pub(crate) fn eps(t: f64) -> f64 {
    if t < SERIES_THRESHOLD {
        let t2 = t * t;
        t2 / 6.0 - t2 * t2 / 120.0
    } else {
        1.0 - t.sin() / t
    }
}

/// dε/dθ
pub(crate) fn eps_prime(t: f64) -> f64 {
    if t < SERIES_THRESHOLD {
        t / 3.0 - t * t * t / 30.0
    } else {
        (t.sin() - t * t.cos()) / (t * t)
    }
}

/// Bulge height per unit `b`.
pub(crate) fn height_unit(t: f64) -> f64 {
    if t < SERIES_THRESHOLD {
        t / 4.0 - t * t * t / 48.0
    } else {
        // 1 − cos θ = 2 sin²(θ/2), without the cancellation.
        let h = (0.5 * t).sin();
        h * h / t
    }
}

/// Cross-section area per unit `b²`.
pub(crate) fn area_unit(t: f64) -> f64 {
    if t < SERIES_THRESHOLD {
        t / 6.0 - t * t * t / 30.0
    } else {
        (t - t.sin() * t.cos()) / (4.0 * t * t)
    }
}

/// dA/dθ per unit `b²`.
pub(crate) fn area_prime_unit(t: f64) -> f64 {
    if t < SERIES_THRESHOLD {
        1.0 / 6.0 - t * t / 10.0
    } else {
        let (s, c) = t.sin_cos();
        0.5 * c * (s - t * c) / (t * t * t)
    }
}

/// Fractional chord shortening `ε(θ) = 1 − sinθ/θ`.
pub fn contraction_ratio(theta: f64) -> Result<f64> {
    check_theta(theta, FRAC_PI_2)?;
    Ok(eps(theta))
}

pub fn contraction_ratio_derivative(theta: f64) -> Result<f64> {
    check_theta(theta, FRAC_PI_2)?;
    Ok(eps_prime(theta))
}

/// Current chord `b′ = b·(1 − ε)`.
pub fn chord(segment: &PouchSegment, theta: f64) -> Result<f64> {
    Ok(segment.flat_length_b * (1.0 - contraction_ratio(theta)?))
}

pub fn bulge_height(segment: &PouchSegment, theta: f64) -> Result<f64> {
    check_theta(theta, FRAC_PI_2)?;
    Ok(segment.flat_length_b * height_unit(theta))
}

/// Largest admissible half-angle: the bulge may not exceed the rim amplitude
/// nor go past a half circle.
pub fn theta_max(segment: &PouchSegment) -> f64 {
    let b = segment.flat_length_b;
    let cap = segment.amplitude_cap_a;
    roots::last_true(|t| b * height_unit(t) <= cap, 0.0, FRAC_PI_2, THETA_MAX_TOL)
}

pub fn segment_area(segment: &PouchSegment, theta: f64) -> Result<f64> {
    check_theta(theta, theta_max(segment))?;
    let b = segment.flat_length_b;
    Ok(b * b * area_unit(theta))
}

/// Gas volume held by one wave, mm³.
pub fn segment_volume(segment: &PouchSegment, theta: f64) -> Result<f64> {
    Ok(segment_area(segment, theta)? * segment.depth_w)
}

/// Analytic `dA/dθ`, mm²/rad. Accepts `θ = 0` through the continuous
/// extension `b²/6`.
pub fn segment_area_derivative(segment: &PouchSegment, theta: f64) -> Result<f64> {
    check_theta(theta, theta_max(segment))?;
    let b = segment.flat_length_b;
    Ok(b * b * area_prime_unit(theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn seg(b: f64, a: f64) -> PouchSegment {
        PouchSegment::new(b, 20.0, a).unwrap()
    }

    #[test]
    fn contraction_endpoints() {
        assert_eq!(contraction_ratio(0.0).unwrap(), 0.0);
        assert!((contraction_ratio(FRAC_PI_2).unwrap() - (1.0 - 2.0 / PI)).abs() < 1e-15);
        assert!((contraction_ratio(PI / 4.0).unwrap() - 0.09968).abs() < 1e-5);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(contraction_ratio(-0.1), Err(Error::Domain { .. })));
        assert!(matches!(contraction_ratio(1.6), Err(Error::Domain { .. })));
        let s = seg(30.0, 5.0);
        assert!(segment_area(&s, 1.0).is_err());
        assert!(bulge_height(&s, f64::NAN).is_err());
    }

    #[test]
    fn semicircle_height_and_area() {
        let s = seg(30.0, 10.0);
        let r = 30.0 / PI;
        assert!((bulge_height(&s, FRAC_PI_2).unwrap() - r).abs() < 1e-12);
        assert!((segment_area(&s, FRAC_PI_2).unwrap() - PI * r * r / 2.0).abs() < 1e-10);
        assert!((segment_area(&s, FRAC_PI_2).unwrap() - 143.24).abs() < 0.01);
    }

    #[test]
    fn theta_max_cases() {
        assert_eq!(theta_max(&seg(30.0, 10.0)), FRAC_PI_2);
        assert_eq!(theta_max(&seg(30.0, 30.0 / PI)), FRAC_PI_2);
        let t = theta_max(&seg(30.0, 5.0));
        assert!((t - 0.69).abs() < 0.01, "{t}");
        assert!(((1.0 - t.cos()) / t - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn series_branch_is_continuous() {
        let t = SERIES_THRESHOLD;
        let below = t * (1.0 - 1e-12);
        for f in [eps, eps_prime, height_unit, area_unit, area_prime_unit] {
            let (a, b) = (f(below), f(t));
            // The closed forms lose about eight digits to cancellation here.
            assert!((a - b).abs() <= 1e-6 * b.abs(), "{a} vs {b}");
        }
    }

    #[test]
    fn chord_identity() {
        let s = seg(30.0, 10.0);
        for t in [0.0, 0.3, 1.0, FRAC_PI_2] {
            let e = contraction_ratio(t).unwrap();
            assert!((chord(&s, t).unwrap() + 30.0 * e - 30.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn zero_amplitude_rejected() {
        assert!(PouchSegment::new(30.0, 20.0, 0.0).is_err());
    }
}
