//! Conversion between root multisets and elementary-symmetric coordinates.
//!
//! Coordinates are the elementary symmetric polynomials themselves,
//! `z_j = σ_j(λ_1, …, λ_n)`. The alternating signs live only in the monic
//! polynomial `p_z(μ) = μⁿ + Σ_j (−1)ʲ z_j μⁿ⁻ʲ`.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use itertools::Itertools;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::tol;

/// A point of `ℂⁿ` in elementary-symmetric coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct ComplexPoint(Vec<Complex64>);

impl ComplexPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::precondition("a point needs at least one coordinate"));
        }
        if let Some(j) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite(format!("coordinate {} is {}", j + 1, coords[j])));
        }
        Ok(ComplexPoint(coords))
    }

    pub fn from_reals(coords: &[f64]) -> Result<Self> {
        Self::new(coords.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Complex64> {
        self.0
    }

    /// Coefficients of `p_z` in descending powers, leading `1` included.
    pub fn monic_coefficients(&self) -> Vec<Complex64> {
        let mut c = Vec::with_capacity(self.0.len() + 1);
        c.push(Complex64::new(1.0, 0.0));
        for (j, z) in self.0.iter().enumerate() {
            c.push(if j % 2 == 0 { -z } else { *z });
        }
        c
    }

    pub fn max_distance(&self, other: &ComplexPoint) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl TryFrom<Vec<Complex64>> for ComplexPoint {
    type Error = Error;

    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        ComplexPoint::new(v)
    }
}

impl From<ComplexPoint> for Vec<Complex64> {
    fn from(p: ComplexPoint) -> Self {
        p.0
    }
}

/// Unordered n-tuple of roots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootMultiset {
    pub roots: Vec<Complex64>,
}

impl RootMultiset {
    pub fn new(roots: Vec<Complex64>) -> Self {
        RootMultiset { roots }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Minimum pairwise distance; `0` for repeated roots and for `n = 1`
    /// the value is `+∞`.
    pub fn collision_gap(&self) -> f64 {
        self.roots
            .iter()
            .tuple_combinations()
            .map(|(a, b)| (a - b).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Optimal bijection between two multisets: `a[i]` is paired with
/// `b[permutation[i]]` (0-based).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootMatch {
    pub permutation: Vec<usize>,
    pub max_error: f64,
}

fn canonical_cmp(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// `(σ_1, …, σ_n)` of the given roots.
///
/// Roots are put in a canonical order before accumulation, so the result
/// is bitwise identical for every permutation of the input.
pub fn symmetrize(roots: &[Complex64]) -> Result<ComplexPoint> {
    if roots.is_empty() {
        return Err(Error::precondition("symmetrize needs at least one root"));
    }
    if let Some(r) = roots.iter().find(|r| !r.is_finite()) {
        return Err(Error::NonFinite(format!("root {r}")));
    }
    let mut sorted = roots.to_vec();
    sorted.sort_by(canonical_cmp);

    let n = sorted.len();
    let mut e = vec![Complex64::new(0.0, 0.0); n + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for (k, r) in sorted.iter().enumerate() {
        for j in (1..=k + 1).rev() {
            e[j] = e[j] + r * e[j - 1];
        }
    }
    e.remove(0);
    ComplexPoint::new(e)
}

/// `p_z(μ)`, evaluated by Horner's rule.
pub fn monic_eval(z: &ComplexPoint, mu: Complex64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for (j, c) in z.0.iter().enumerate() {
        acc = acc * mu + if j % 2 == 0 { -c } else { *c };
    }
    acc
}

/// `p(x)` and `p'(x)` for coefficients in descending powers.
fn horner_with_derivative(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = coeffs[0];
    let mut dp = Complex64::new(0.0, 0.0);
    for c in &coeffs[1..] {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// `max(1, Σ |c_k| |x|^k)`: absolute tolerance near small values of the
/// terms, relative (backward error) when they are large.
fn evaluation_scale(abs_coeffs: &[f64], x: Complex64) -> f64 {
    let r = x.norm();
    abs_coeffs.iter().fold(0.0, |acc, c| acc * r + c).max(1.0)
}

const POLISH_SWEEPS: usize = 48;

struct AberthRun {
    roots: Vec<Complex64>,
    residuals: Vec<f64>,
    iterations: usize,
    converged: bool,
}

impl AberthRun {
    fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

fn scaled_residuals(coeffs: &[Complex64], abs_coeffs: &[f64], roots: &[Complex64]) -> Vec<f64> {
    roots
        .iter()
        .map(|&r| {
            let (p, _) = horner_with_derivative(coeffs, r);
            p.norm() / evaluation_scale(abs_coeffs, r)
        })
        .collect()
}

fn aberth(coeffs: &[Complex64], mut z: Vec<Complex64>, max_iter: usize, tol_res: f64) -> AberthRun {
    let abs_coeffs: Vec<f64> = coeffs.iter().map(|c| c.norm()).collect();
    let n = z.len();
    let mut settled_sweeps = 0;
    let mut iterations = 0;
    let mut converged = false;

    for it in 1..=max_iter {
        iterations = it;
        let mut all_small = true;
        let mut max_step = 0.0_f64;
        for k in 0..n {
            let zk = z[k];
            let (p, dp) = horner_with_derivative(coeffs, zk);
            let scale = evaluation_scale(&abs_coeffs, zk);
            if p.norm() > tol_res * scale {
                all_small = false;
            }
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let step = if dp == Complex64::new(0.0, 0.0) {
                Complex64::new(1e-8 * (1.0 + zk.norm()), 0.0)
            } else {
                let ratio = p / dp;
                let mut repulsion = Complex64::new(0.0, 0.0);
                for (j, zj) in z.iter().enumerate() {
                    let d = zk - zj;
                    if j != k && d != Complex64::new(0.0, 0.0) {
                        repulsion += d.inv();
                    }
                }
                let denom = Complex64::new(1.0, 0.0) - ratio * repulsion;
                if denom.norm() == 0.0 || !denom.is_finite() {
                    ratio
                } else {
                    ratio / denom
                }
            };
            if !step.is_finite() {
                return AberthRun {
                    residuals: vec![f64::INFINITY; n],
                    roots: z,
                    iterations,
                    converged: false,
                };
            }
            z[k] = zk - step;
            max_step = max_step.max(step.norm() / zk.norm().max(1.0));
        }
        if all_small {
            settled_sweeps += 1;
            // simple roots stop on a negligible step within a sweep or two;
            // clustered roots converge linearly and get a bounded polish
            if max_step <= 4.0 * f64::EPSILON || settled_sweeps >= POLISH_SWEEPS {
                converged = true;
                break;
            }
        } else {
            settled_sweeps = 0;
        }
    }

    let residuals = scaled_residuals(coeffs, &abs_coeffs, &z);
    if residuals.iter().any(|r| *r > tol_res || !r.is_finite()) {
        converged = false;
    }
    AberthRun {
        roots: z,
        residuals,
        iterations,
        converged,
    }
}

fn initial_guesses(z: &ComplexPoint, rotation: f64) -> Vec<Complex64> {
    let n = z.dim();
    let radius = 1.0
        + z.coords()
            .iter()
            .enumerate()
            .map(|(j, c)| c.norm().powf(1.0 / (j as f64 + 1.0)))
            .fold(0.0, f64::max);
    (0..n)
        .map(|k| Complex64::from_polar(radius, rotation + TAU * k as f64 / n as f64))
        .collect()
}

// Fixed offset keeps the starting circle off the real axis, where real
// polynomials would otherwise produce conjugate-symmetric stalls.
const GUESS_ROTATION: f64 = 0.4;
const RESTART_SEED: u64 = 0x5eed_ab3e;

/// All roots of `p_z` by Aberth–Ehrlich simultaneous iteration.
///
/// Accepts a root when `|p(r)| / max(1, Σ|c_k||r|^k)` is at most
/// [`tol::ROOT_RESIDUAL`]. One restart from a randomly rotated
/// starting circle is attempted before giving up.
pub fn roots_of_point(z: &ComplexPoint) -> Result<RootMultiset> {
    let n = z.dim();
    if n > tol::MAX_DEGREE {
        return Err(Error::unsupported(format!("degree {n} exceeds {}", tol::MAX_DEGREE)));
    }
    if n == 1 {
        return Ok(RootMultiset::new(vec![z.coords()[0]]));
    }
    let coeffs = z.monic_coefficients();
    let first = aberth(&coeffs, initial_guesses(z, GUESS_ROTATION), tol::ROOT_MAX_ITER, tol::ROOT_RESIDUAL);
    if first.converged {
        return Ok(RootMultiset::new(first.roots));
    }
    let rotation = rng::stream(RESTART_SEED, 0).gen::<f64>() * TAU;
    let second = aberth(&coeffs, initial_guesses(z, rotation), tol::ROOT_MAX_ITER, tol::ROOT_RESIDUAL);
    if second.converged {
        return Ok(RootMultiset::new(second.roots));
    }
    let best = if second.max_residual() < first.max_residual() { second } else { first };
    Err(Error::RootSolver {
        iterations: best.iterations,
        max_residual: best.max_residual(),
        best: best.roots,
        residuals: best.residuals,
    })
}

/// Roots of `p_z` starting from caller-supplied guesses (continuation).
/// Falls back to [`roots_of_point`] if the warm start does not converge.
pub fn roots_from_guess(z: &ComplexPoint, guess: &[Complex64]) -> Result<RootMultiset> {
    if guess.len() != z.dim() || z.dim() == 1 {
        return roots_of_point(z);
    }
    let run = aberth(&z.monic_coefficients(), guess.to_vec(), tol::ROOT_MAX_ITER, tol::ROOT_RESIDUAL);
    if run.converged {
        Ok(RootMultiset::new(run.roots))
    } else {
        roots_of_point(z)
    }
}

/// Permutation minimizing the largest pairwise distance, by exhaustive
/// search in lexicographic order (first minimizer wins).
pub fn match_roots(a: &RootMultiset, b: &RootMultiset) -> Result<RootMatch> {
    let n = a.len();
    if b.len() != n {
        return Err(Error::precondition(format!("multiset sizes differ ({n} vs {})", b.len())));
    }
    if n > tol::MAX_MATCH {
        return Err(Error::unsupported(format!(
            "exhaustive matching limited to n ≤ {} (got {n})",
            tol::MAX_MATCH
        )));
    }
    let dist: Vec<Vec<f64>> = a
        .roots
        .iter()
        .map(|x| b.roots.iter().map(|y| (x - y).norm()).collect())
        .collect();

    let mut best = RootMatch {
        permutation: (0..n).collect(),
        max_error: f64::INFINITY,
    };
    'perms: for perm in (0..n).permutations(n) {
        let mut worst = 0.0_f64;
        for (i, &j) in perm.iter().enumerate() {
            worst = worst.max(dist[i][j]);
            if worst >= best.max_error {
                continue 'perms;
            }
        }
        best = RootMatch {
            permutation: perm,
            max_error: worst,
        };
    }
    if n == 0 {
        best.max_error = 0.0;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reals(xs: &[f64]) -> Vec<Complex64> {
        xs.iter().map(|&x| c(x, 0.0)).collect()
    }

    #[test]
    fn symmetrize_small_cases() {
        assert_eq!(symmetrize(&reals(&[0.0, 1.0])).unwrap().coords(), &reals(&[1.0, 0.0])[..]);
        assert_eq!(symmetrize(&reals(&[2.0, 3.0])).unwrap().coords(), &reals(&[5.0, 6.0])[..]);
        assert_eq!(
            symmetrize(&reals(&[1.0, 1.0, 1.0])).unwrap().coords(),
            &reals(&[3.0, 3.0, 1.0])[..]
        );
    }

    #[test]
    fn symmetrize_rejects_bad_input() {
        assert!(matches!(symmetrize(&[c(f64::NAN, 0.0)]), Err(Error::NonFinite(_))));
        assert!(matches!(symmetrize(&[]), Err(Error::Precondition(_))));
    }

    #[test]
    fn monic_eval_small_cases() {
        let z = ComplexPoint::from_reals(&[1.0, 0.0]).unwrap();
        assert_eq!(monic_eval(&z, c(0.0, 0.0)), c(0.0, 0.0));
        let z = ComplexPoint::from_reals(&[3.0, 1.0]).unwrap();
        assert_eq!(monic_eval(&z, c(1.0, 0.0)), c(-1.0, 0.0));
    }

    #[test]
    fn roots_of_quadratics() {
        let z = ComplexPoint::from_reals(&[1.0, 0.0]).unwrap();
        let r = roots_of_point(&z).unwrap();
        let m = match_roots(&RootMultiset::new(reals(&[0.0, 1.0])), &r).unwrap();
        assert!(m.max_error < 1e-14, "{m:?}");

        // λ² + p has roots ±√(−p)
        let p = c(0.3, -0.7);
        let z = ComplexPoint::new(vec![c(0.0, 0.0), p]).unwrap();
        let s = (-p).sqrt();
        let m = match_roots(&RootMultiset::new(vec![s, -s]), &roots_of_point(&z).unwrap()).unwrap();
        assert!(m.max_error < 1e-14, "{m:?}");
    }

    #[test]
    fn roots_of_repeated_root_polynomials() {
        let z = ComplexPoint::from_reals(&[3.0, 3.0, 1.0]).unwrap();
        let r = roots_of_point(&z).unwrap();
        for root in &r.roots {
            assert!((root - c(1.0, 0.0)).norm() < 1e-3, "{root}");
        }
        let z = ComplexPoint::from_reals(&[4.0, 4.0]).unwrap();
        let r = roots_of_point(&z).unwrap();
        for root in &r.roots {
            assert!((root - c(2.0, 0.0)).norm() < 1e-5, "{root}");
        }
    }

    #[test]
    fn degree_one_is_exact() {
        let z = ComplexPoint::new(vec![c(0.25, -3.0)]).unwrap();
        assert_eq!(roots_of_point(&z).unwrap().roots, vec![c(0.25, -3.0)]);
    }

    #[test]
    fn match_examples() {
        let a = RootMultiset::new(reals(&[0.0, 1.0]));
        let b = RootMultiset::new(reals(&[1.0, 0.0]));
        let m = match_roots(&a, &b).unwrap();
        assert_eq!(m.permutation, vec![1, 0]);
        assert_eq!(m.max_error, 0.0);

        let m = match_roots(&a, &a).unwrap();
        assert_eq!(m.permutation, vec![0, 1]);
        assert_eq!(m.max_error, 0.0);
    }

    #[test]
    fn match_tie_break_is_lexicographic() {
        // all four pairings of {0,0} against {1,1} cost 1
        let a = RootMultiset::new(reals(&[0.0, 0.0]));
        let b = RootMultiset::new(reals(&[1.0, 1.0]));
        assert_eq!(match_roots(&a, &b).unwrap().permutation, vec![0, 1]);
    }

    #[test]
    fn match_limits() {
        let a = RootMultiset::new(vec![c(0.0, 0.0); 9]);
        assert!(matches!(match_roots(&a, &a), Err(Error::Unsupported(_))));
        let b = RootMultiset::new(vec![c(0.0, 0.0); 2]);
        assert!(matches!(match_roots(&a, &b), Err(Error::Precondition(_))));
    }

    #[test]
    fn collision_gap_values() {
        assert_eq!(RootMultiset::new(reals(&[0.0, 0.0, 2.0])).collision_gap(), 0.0);
        assert_eq!(RootMultiset::new(reals(&[0.0, 0.5, 2.0])).collision_gap(), 0.5);
    }

    #[test]
    fn point_json_is_pairs() {
        let z = ComplexPoint::new(vec![c(3.0, 0.0), c(1.0, -2.0)]).unwrap();
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, "[[3.0,0.0],[1.0,-2.0]]");
        let back: ComplexPoint = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z);
        assert!(serde_json::from_str::<ComplexPoint>("[]").is_err());
    }
}
