//! Unit conventions and the conversion constants that go with them.
//!
//! Pressures are kPa, lengths mm, forces N, masses g, energies mJ.

/// kPa · mm³ expressed in mJ (1 kPa · mm³ = 1 µJ).
pub const KPA_MM3_TO_MJ: f64 = 1e-3;

/// Weight of one gram, N/g.
pub const GRAVITY_N_PER_G: f64 = 0.0098;

/// kg/m³ · mm³ expressed in g.
pub const KG_M3_MM3_TO_G: f64 = 1e-6;

pub fn deg(rad: f64) -> f64 {
    rad.to_degrees()
}

pub fn rad(deg: f64) -> f64 {
    deg.to_radians()
}
