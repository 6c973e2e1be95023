#![allow(dead_code)]

use proptest::prelude::*;
use symprod::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Point of the open disc of radius `r` about the origin.
pub fn in_disc(r: f64) -> impl Strategy<Value = Complex64> {
    (0.0..1.0f64, 0.0..std::f64::consts::TAU).prop_map(move |(t, a)| Complex64::from_polar(r * t.sqrt(), a))
}

pub fn roots_in_disc(n: usize, r: f64) -> impl Strategy<Value = Vec<Complex64>> {
    proptest::collection::vec(in_disc(r), n)
}

pub fn on_circle() -> impl Strategy<Value = Complex64> {
    (0.0..std::f64::consts::TAU).prop_map(|a| Complex64::from_polar(1.0, a))
}
