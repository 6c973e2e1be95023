//! Upper bounds for the Lempert function from explicit polynomial discs.
//!
//! Discs are written directly in symmetric coordinates,
//!
//! ```text
//! f_j(ζ) = z_j + ζ (w_j − z_j)/σ + ζ (ζ − σ) q_j(ζ),   deg q_j ≤ d − 2,
//! ```
//!
//! so `f(0) = z` and `f(σ) = w` hold identically and only `σ` and the
//! `q_j` are searched. For a disc base, `ζ ↦ max_j |λ_j(f(ζ)) − c|` is
//! subharmonic, so containment is decided on the boundary circle. Each
//! puncture `μ` adds the condition that `ζ ↦ p_{f(ζ)}(μ)` has no zero in
//! the closed unit disc, which is checked through its roots.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::nelder_mead::{minimize, NelderMeadOptions};
use super::{lempert_upper_permutation, DistanceBound, UpperCertificate};
use crate::error::{Error, Result};
use crate::rng;
use crate::symgeo::SymProduct;
use crate::sympoly::{roots_from_guess, roots_of_point, ComplexPoint};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscSearchConfig {
    /// Degree bound of the coordinate polynomials `f_j`.
    pub degree: usize,
    /// Boundary samples used during the search.
    pub boundary_samples: usize,
    /// Boundary samples used to certify the final disc.
    pub verify_samples: usize,
    /// Required boundary margin during the search, relative to the radius.
    pub margin: f64,
    pub starts: usize,
    /// Total objective evaluations, shared evenly by the starts.
    pub budget: usize,
    pub seed: u64,
    /// Weight of the margin violation in the penalized objective.
    pub penalty: f64,
}

impl Default for DiscSearchConfig {
    fn default() -> Self {
        DiscSearchConfig {
            degree: 3,
            boundary_samples: 256,
            verify_samples: 4096,
            margin: 1e-5,
            starts: 16,
            budget: 4000,
            seed: 0,
            penalty: 100.0,
        }
    }
}

/// A disc `f: 𝔻 → S_n(D)` with `f(0) = z`, `f(σ) = w`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscCertificate {
    /// Coefficients of `f_j` in ascending powers of `ζ`, one list per
    /// coordinate.
    pub coefficients: Vec<Vec<Complex64>>,
    pub sigma: f64,
    /// Smallest relative distance to the boundary over the verification
    /// samples (`+∞` when no constraint is active).
    pub boundary_margin: f64,
    /// `max_j |f_j(σ) − w_j|`.
    pub interpolation_error: f64,
    pub verify_samples: usize,
    pub evals: usize,
}

impl DiscCertificate {
    pub fn eval(&self, zeta: Complex64) -> Result<ComplexPoint> {
        ComplexPoint::new(self.coefficients.iter().map(|c| horner(c, zeta)).collect())
    }
}

fn horner(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
}

/// Search problem for one pair of points.
struct Problem<'a> {
    s: &'a SymProduct,
    z: Vec<Complex64>,
    w: Vec<Complex64>,
    disc: Option<(Complex64, f64)>,
    free: usize,
}

impl<'a> Problem<'a> {
    fn new(s: &'a SymProduct, z: &ComplexPoint, w: &ComplexPoint, degree: usize) -> Self {
        Problem {
            s,
            z: z.coords().to_vec(),
            w: w.coords().to_vec(),
            disc: s.base.ambient_disc(),
            free: degree.saturating_sub(1),
        }
    }

    fn dim(&self) -> usize {
        1 + 2 * self.s.n * self.free
    }

    /// `σ = tanh u`, so the objective `atanh σ` is `u` itself.
    fn decode(&self, x: &[f64]) -> Option<(f64, Vec<Vec<Complex64>>)> {
        let u = x[0];
        if !(u > 1e-12 && u < 18.0) {
            return None;
        }
        let sigma = u.tanh();
        let coefficients = (0..self.s.n)
            .map(|j| {
                let q = (0..self.free).map(|i| {
                    let k = 1 + 2 * (j * self.free + i);
                    Complex64::new(x[k], x[k + 1])
                });
                self.coefficients(j, sigma, q)
            })
            .collect();
        Some((sigma, coefficients))
    }

    fn coefficients(&self, j: usize, sigma: f64, q: impl Iterator<Item = Complex64>) -> Vec<Complex64> {
        let mut c = vec![Complex64::new(0.0, 0.0); self.free + 2];
        c[0] = self.z[j];
        c[1] = (self.w[j] - self.z[j]) / sigma;
        for (i, qi) in q.enumerate() {
            c[i + 2] += qi;
            c[i + 1] -= qi * sigma;
        }
        c
    }

    /// Inverse of [`Self::decode`] for discs whose coordinates have the
    /// interpolating form; `None` when a coordinate has too high a degree.
    fn encode(&self, sigma: f64, coefficients: &[Vec<Complex64>]) -> Option<Vec<f64>> {
        let mut x = vec![sigma.atanh()];
        for (j, c) in coefficients.iter().enumerate() {
            // r(ζ) = f_j(ζ) − z_j − ζ (w_j − z_j)/σ = ζ (ζ − σ) q_j(ζ)
            let mut r = c.clone();
            r.resize(r.len().max(2), Complex64::new(0.0, 0.0));
            r[0] -= self.z[j];
            r[1] -= (self.w[j] - self.z[j]) / sigma;
            let r = &r[1..];
            // synthetic division by (ζ − σ), highest power first
            let mut q = vec![Complex64::new(0.0, 0.0); r.len() - 1];
            let mut carry = Complex64::new(0.0, 0.0);
            for k in (1..r.len()).rev() {
                carry = r[k] + carry * sigma;
                q[k - 1] = carry;
            }
            if q.len() > self.free && q[self.free..].iter().any(|v| v.norm() > 1e-12) {
                return None;
            }
            for i in 0..self.free {
                let v = q.get(i).copied().unwrap_or_default();
                x.push(v.re);
                x.push(v.im);
            }
        }
        Some(x)
    }

    /// Smallest relative boundary margin of the disc; negative when
    /// infeasible and `+∞` without active constraints.
    fn margin(&self, coefficients: &[Vec<Complex64>], samples: usize) -> f64 {
        let mut margin = f64::INFINITY;
        for &mu in self.s.base.punctures() {
            margin = margin.min(self.puncture_margin(coefficients, mu));
            if margin < 0.0 {
                return margin;
            }
        }
        if let Some((center, radius)) = self.disc {
            let mut guess: Vec<Complex64> = Vec::new();
            for k in 0..samples {
                let zeta = Complex64::from_polar(1.0, TAU * k as f64 / samples as f64);
                let Ok(point) = ComplexPoint::new(coefficients.iter().map(|c| horner(c, zeta)).collect()) else {
                    return f64::NEG_INFINITY;
                };
                let Ok(roots) = roots_from_guess(&point, &guess) else {
                    return f64::NEG_INFINITY;
                };
                let reach = roots.roots.iter().map(|r| (r - center).norm()).fold(0.0, f64::max);
                margin = margin.min(1.0 - reach / radius);
                guess = roots.roots;
            }
        }
        margin
    }

    /// `min |ζ| − 1` over the zeros of `ζ ↦ p_{f(ζ)}(μ)`.
    fn puncture_margin(&self, coefficients: &[Vec<Complex64>], mu: Complex64) -> f64 {
        let n = self.s.n;
        let len = coefficients[0].len();
        let mut h = vec![Complex64::new(0.0, 0.0); len];
        h[0] = mu.powu(n as u32);
        for (j, c) in coefficients.iter().enumerate() {
            let sign = if (j + 1) % 2 == 0 { 1.0 } else { -1.0 };
            let weight = mu.powu((n - j - 1) as u32) * sign;
            for (k, ck) in c.iter().enumerate() {
                h[k] += weight * ck;
            }
        }
        let scale = h.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if scale == 0.0 || h[0].norm() <= 1e-14 * scale {
            return f64::NEG_INFINITY;
        }
        while h.len() > 1 && h.last().is_some_and(|v| v.norm() <= 1e-14 * scale) {
            h.pop();
        }
        let m = h.len() - 1;
        if m == 0 {
            return f64::INFINITY;
        }
        let lead = h[m];
        let coords = (1..=m)
            .map(|j| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                h[m - j] / lead * sign
            })
            .collect();
        let Ok(point) = ComplexPoint::new(coords) else {
            return f64::NEG_INFINITY;
        };
        match roots_of_point(&point) {
            Ok(r) => r.roots.iter().map(|x| x.norm()).fold(f64::INFINITY, f64::min) - 1.0,
            Err(_) => f64::NEG_INFINITY,
        }
    }

    /// Smallest `σ ∈ [lo, hi]` (by bisection) keeping the disc with fixed
    /// `q` feasible, assuming feasibility at `hi`.
    fn polish_sigma(&self, x: &[f64], required: f64, samples: usize) -> Vec<f64> {
        let feasible = |u: f64| {
            let mut y = x.to_vec();
            y[0] = u;
            self.decode(&y)
                .is_some_and(|(_, c)| self.margin(&c, samples) >= required)
        };
        let (mut lo, mut hi) = (0.0, x[0]);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if feasible(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mut y = x.to_vec();
        y[0] = hi;
        y
    }
}

/// Linear root paths `λ_j(ζ) = a_j + ζ (b_j − a_j)/σ` symmetrized,
/// expanded into coefficient lists.
fn lifted_linear(a: &[Complex64], b: &[Complex64], sigma: f64) -> Vec<Vec<Complex64>> {
    let n = a.len();
    // e[j] = σ_j of the linear factors, as polynomials in ζ
    let mut e: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); n + 1]; n + 1];
    e[0][0] = Complex64::new(1.0, 0.0);
    for (ai, bi) in a.iter().zip(b) {
        let slope = (bi - ai) / sigma;
        for j in (1..=n).rev() {
            for k in (0..=n).rev() {
                let mut v = e[j - 1][k] * ai;
                if k > 0 {
                    v += e[j - 1][k - 1] * slope;
                }
                e[j][k] += v;
            }
        }
    }
    e.into_iter().skip(1).collect()
}

struct StartResult {
    index: usize,
    x: Option<Vec<f64>>,
    evals: usize,
}

/// Upper bound for `l_{S_n(D)}(z, w)` from a multistart search over
/// polynomial discs. For disc bases the permutation bound serves as the
/// incumbent, so the result never exceeds it.
pub fn lempert_upper_disc_search(
    s: &SymProduct,
    z: &ComplexPoint,
    w: &ComplexPoint,
    config: &DiscSearchConfig,
) -> Result<DistanceBound> {
    if config.degree < 1 || config.boundary_samples == 0 || config.starts == 0 {
        return Err(Error::precondition("disc search needs degree ≥ 1, samples ≥ 1 and starts ≥ 1"));
    }
    let fz = s.require_in(z, "source point")?;
    let fw = s.require_in(w, "target point")?;
    if z == w {
        return Ok(DistanceBound::upper_only(Some(0.0), Some(UpperCertificate::Constant)));
    }
    let incumbent = match lempert_upper_permutation(s, z, w) {
        Ok(b) => Some(b),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };

    let problem = Problem::new(s, z, w, config.degree);
    let dim = problem.dim();
    let required = config.margin;
    let samples = config.boundary_samples;
    let feasible_margin = |x: &[f64]| problem.decode(x).map(|(_, c)| problem.margin(&c, samples));

    // warm starts: affine disc and symmetrized linear root paths
    let mut warm: Vec<Vec<f64>> = Vec::new();
    let mut affine = vec![0.0; dim];
    affine[0] = 0.999_f64.atanh();
    warm.push(affine);
    let a = &fz.roots.roots;
    let b = match crate::sympoly::match_roots(&fz.roots, &fw.roots) {
        Ok(m) => m.permutation.iter().map(|&j| fw.roots.roots[j]).collect(),
        Err(_) => fw.roots.roots.clone(),
    };
    if let Some(x) = problem.encode(0.999, &lifted_linear(a, &b, 0.999)) {
        warm.push(x);
    }
    let warm: Vec<Vec<f64>> = warm
        .into_iter()
        .map(|x| match feasible_margin(&x) {
            Some(m) if m >= required => problem.polish_sigma(&x, required, samples),
            _ => x,
        })
        .collect();

    let per_start = (config.budget / config.starts).max(dim + 2);
    let opts = NelderMeadOptions {
        max_evals: per_start,
        ..NelderMeadOptions::default()
    };
    let results: Vec<StartResult> = (0..config.starts)
        .into_par_iter()
        .map(|index| {
            let mut rng = rng::stream(config.seed, index as u64);
            let mut x0 = warm[index % warm.len()].clone();
            if index >= warm.len() {
                for v in x0.iter_mut().skip(1) {
                    *v += rng.gen_range(-0.2..0.2);
                }
                x0[0] = (x0[0] * rng.gen_range(1.0..1.5)).min(6.0);
            }
            let mut best: Option<(f64, Vec<f64>)> = None;
            let result = minimize(
                |x| match feasible_margin(x) {
                    None => f64::INFINITY,
                    Some(m) => {
                        if m >= required && best.as_ref().is_none_or(|(u, _)| x[0] < *u) {
                            best = Some((x[0], x.to_vec()));
                        }
                        x[0] + config.penalty * (required - m).max(0.0)
                    }
                },
                &x0,
                &vec![0.1; dim],
                &opts,
            );
            StartResult {
                index,
                x: best.map(|(_, x)| problem.polish_sigma(&x, required, samples)),
                evals: result.evals,
            }
        })
        .collect();

    let evals: usize = results.iter().map(|r| r.evals).sum();
    let mut candidates: Vec<(usize, Vec<f64>)> = results
        .into_iter()
        .filter_map(|r| r.x.map(|x| (r.index, x)))
        .chain(warm.into_iter().enumerate().map(|(i, x)| (config.starts + i, x)))
        .collect();
    candidates.sort_by(|p, q| p.1[0].total_cmp(&q.1[0]).then(p.0.cmp(&q.0)));

    let mut found: Option<DiscCertificate> = None;
    for (_, x) in &candidates {
        let Some((sigma, coefficients)) = problem.decode(x) else {
            continue;
        };
        let boundary_margin = problem.margin(&coefficients, config.verify_samples);
        if boundary_margin > 0.0 {
            let at_sigma: Vec<Complex64> = coefficients.iter().map(|c| horner(c, Complex64::new(sigma, 0.0))).collect();
            let interpolation_error = at_sigma.iter().zip(&problem.w).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            found = Some(DiscCertificate {
                coefficients,
                sigma,
                boundary_margin,
                interpolation_error,
                verify_samples: config.verify_samples,
                evals,
            });
            break;
        }
    }

    let searched = match found {
        Some(cert) => DistanceBound::upper_only(Some(cert.sigma.atanh()), Some(UpperCertificate::Disc(cert))),
        None => DistanceBound::upper_only(
            None,
            Some(UpperCertificate::NotFound {
                evals,
                diagnostic: format!("no disc with boundary margin ≥ {required:e} found in {evals} evaluations"),
            }),
        ),
    };
    Ok(match incumbent {
        Some(perm) if perm.upper < searched.upper || searched.upper.is_none() => perm,
        _ => searched,
    })
}
