//! Deterministic random streams.
//!
//! Every randomized computation takes a `u64` seed and draws from
//! independent ChaCha streams indexed by sample number, so results never
//! depend on thread scheduling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream `index` of the generator seeded by `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform point of the open disc `|λ − center| < radius`.
pub fn in_disc<R: Rng + ?Sized>(rng: &mut R, center: Complex64, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    let t = rng.gen::<f64>() * std::f64::consts::TAU;
    center + Complex64::from_polar(r, t)
}

/// Uniform point of the annulus `inner ≤ |λ| < outer`.
pub fn in_annulus<R: Rng + ?Sized>(rng: &mut R, inner: f64, outer: f64) -> Complex64 {
    let r2 = inner * inner + (outer * outer - inner * inner) * rng.gen::<f64>();
    let t = rng.gen::<f64>() * std::f64::consts::TAU;
    Complex64::from_polar(r2.sqrt(), t)
}

/// Uniform point of the square `[-half, half]²`.
pub fn in_square<R: Rng + ?Sized>(rng: &mut R, half: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-half..half), rng.gen_range(-half..half))
}

/// Uniform point on the unit circle.
pub fn on_circle<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen::<f64>() * std::f64::consts::TAU)
}
