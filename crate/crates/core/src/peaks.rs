//! Peak functions on `S_2(D)` composed from a planar peak function and a
//! peak function of the symmetrized bidisc, with a sampling verifier.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domains::{disc_peak_function, Mobius, PlanarDomain, PlanarMap};
use crate::error::{Error, Result};
use crate::invmetrics::phi_omega;
use crate::rng;
use crate::symgeo::SymProduct;
use crate::sympoly::{roots_of_point, symmetrize, ComplexPoint};
use crate::tol;

/// Tolerance on the value at the target for a `PASS` verdict.
pub const TARGET_TOLERANCE: f64 = 1e-9;
/// Distance from 1 that approach moduli must eventually reach.
pub const APPROACH_TOLERANCE: f64 = 1e-3;

/// `F(s, p) = (1 − Φ_1(s, p))/2`, peaking on `𝔾_2` at `π_2(1, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct G2Peak {
    pub b: Complex64,
}

impl G2Peak {
    pub fn eval(&self, s: Complex64, p: Complex64) -> Result<Complex64> {
        Ok((Complex64::new(1.0, 0.0) - phi_omega(Complex64::new(1.0, 0.0), s, p)?) / 2.0)
    }

    pub fn target(&self) -> ComplexPoint {
        symmetrize(&[Complex64::new(1.0, 0.0), self.b]).expect("finite")
    }
}

/// Peak function of `𝔾_2` at `π_2(1, b)`.
pub fn g2_boundary_peak(b: Complex64) -> Result<G2Peak> {
    if !b.is_finite() || b.norm() > 1.0 + tol::UNIT_CIRCLE {
        return Err(Error::precondition(format!("|b| must be at most 1 (got {b})")));
    }
    if (b - 1.0).norm() <= tol::PHI_POLE {
        return Err(Error::precondition("b = 1 puts the target on the pole of Φ_1"));
    }
    Ok(G2Peak { b })
}

/// A function on `S_n(D)` evaluated through the roots of a point.
pub trait SymmetricFunction {
    fn eval_roots(&self, roots: &[Complex64]) -> Result<Complex64>;

    fn eval(&self, z: &ComplexPoint) -> Result<Complex64> {
        self.eval_roots(&roots_of_point(z)?.roots)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum PeakHandle {
    /// `⟨λ_1, λ_2⟩ ↦ F(π_2(f(λ_1), f(λ_2)))`.
    Composed { pre_map: Mobius, outer: G2Peak },
    Constant { value: Complex64 },
}

impl SymmetricFunction for PeakHandle {
    fn eval_roots(&self, roots: &[Complex64]) -> Result<Complex64> {
        match self {
            PeakHandle::Composed { pre_map, outer } => {
                if roots.len() != 2 {
                    return Err(Error::precondition("composed peak handle is defined for n = 2"));
                }
                let images = [pre_map.eval(roots[0])?, pre_map.eval(roots[1])?];
                let pushed = symmetrize(&images)?;
                outer.eval(pushed.coords()[0], pushed.coords()[1])
            }
            PeakHandle::Constant { value } => Ok(*value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakCandidate<H = PeakHandle> {
    pub target: ComplexPoint,
    /// Roots of the target, used to evaluate the handle there exactly.
    pub target_roots: Vec<Complex64>,
    pub handle: H,
}

/// Peak candidate on `S_2(D)` at `π_2(z1, z2)` for a base inside the
/// unit disc and `z1` a boundary point on the unit circle.
pub fn symmetric_peak(domain: &PlanarDomain, z1: Complex64, z2: Complex64) -> Result<PeakCandidate> {
    if !domain.within_unit_disc() {
        return Err(Error::unsupported("composed peak functions need a base inside the unit disc"));
    }
    if (z1.norm() - 1.0).abs() > tol::UNIT_CIRCLE {
        return Err(Error::precondition(format!("z1 = {z1} is not on the unit circle")));
    }
    if domain.punctures().contains(&z1) || domain.margin(z1).abs() > tol::DELTA_BOUNDARY {
        return Err(Error::precondition(format!("z1 = {z1} is not a peak point of D")));
    }
    if !(z2.is_finite() && domain.margin(z2) <= tol::DELTA_BOUNDARY) {
        return Err(Error::precondition(format!("z2 = {z2} is not in the closure of D")));
    }
    let pre_map = disc_peak_function(z1)?;
    let outer = g2_boundary_peak(pre_map.eval(z2)?)?;
    Ok(PeakCandidate {
        target: symmetrize(&[z1, z2])?,
        target_roots: vec![z1, z2],
        handle: PeakHandle::Composed { pre_map, outer },
    })
}

/// Points approaching the target of a candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Approach {
    /// The first target root scaled by `1 − 2^{−k}`, the others frozen,
    /// for `k = 1..=steps`.
    Radial { steps: usize },
    Points { points: Vec<ComplexPoint> },
}

impl Default for Approach {
    fn default() -> Self {
        Approach::Radial { steps: 12 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproachRow {
    pub k: usize,
    pub modulus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PeakVerdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakReport {
    pub target: ComplexPoint,
    pub max_interior_modulus: f64,
    pub target_value: Complex64,
    pub approach: Vec<ApproachRow>,
    pub verdict: PeakVerdict,
    pub samples: usize,
    pub seed: u64,
    /// Whether the last approach modulus is within the approach tolerance of 1.
    pub approach_converged: bool,
    pub diagnostics: Vec<String>,
}

fn sample_roots(s: &SymProduct, seed: u64, index: u64) -> Result<Vec<Complex64>> {
    let (center, radius) = s
        .base
        .ambient_disc()
        .ok_or_else(|| Error::unsupported("interior sampling needs a bounded base"))?;
    let mut rng = rng::stream(seed, index);
    Ok((0..s.n)
        .map(|_| loop {
            let r = rng::in_disc(&mut rng, center, radius);
            if !s.base.punctures().contains(&r) {
                break r;
            }
        })
        .collect())
}

/// Samples `|handle|` on interior points and along the approach, and
/// evaluates the handle at the target.
pub fn verify_peak<H>(
    candidate: &PeakCandidate<H>,
    s: &SymProduct,
    samples: usize,
    approach: &Approach,
    seed: u64,
) -> Result<PeakReport>
where
    H: SymmetricFunction + Sync,
{
    if s.member(&candidate.target)?.is_in() {
        return Err(Error::precondition("peak target lies inside S_n(D)"));
    }
    if candidate.target_roots.len() != s.n {
        return Err(Error::precondition("target roots do not match n"));
    }
    let mut diagnostics = Vec::new();

    let moduli: Vec<std::result::Result<f64, String>> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let roots = sample_roots(s, seed, i).map_err(|e| e.to_string())?;
            candidate
                .handle
                .eval_roots(&roots)
                .map(|v| v.norm())
                .map_err(|e| format!("sample {i}: {e}"))
        })
        .collect();
    let mut max_interior_modulus = 0.0_f64;
    for m in moduli {
        match m {
            Ok(v) if v.is_finite() => max_interior_modulus = max_interior_modulus.max(v),
            Ok(v) => diagnostics.push(format!("non-finite modulus {v}")),
            Err(e) => diagnostics.push(e),
        }
    }

    let target_value = match candidate.handle.eval_roots(&candidate.target_roots) {
        Ok(v) => v,
        Err(e) => {
            diagnostics.push(format!("target: {e}"));
            Complex64::new(f64::NAN, f64::NAN)
        }
    };

    let mut rows = Vec::new();
    match approach {
        Approach::Radial { steps } => {
            for k in 1..=*steps {
                let mut roots = candidate.target_roots.clone();
                roots[0] *= 1.0 - 0.5_f64.powi(k as i32);
                match candidate.handle.eval_roots(&roots) {
                    Ok(v) => rows.push(ApproachRow { k, modulus: v.norm() }),
                    Err(e) => diagnostics.push(format!("approach k = {k}: {e}")),
                }
            }
        }
        Approach::Points { points } => {
            for (i, p) in points.iter().enumerate() {
                match candidate.handle.eval(p) {
                    Ok(v) => rows.push(ApproachRow {
                        k: i + 1,
                        modulus: v.norm(),
                    }),
                    Err(e) => diagnostics.push(format!("approach k = {}: {e}", i + 1)),
                }
            }
        }
    }

    let pass = diagnostics.is_empty()
        && max_interior_modulus < 1.0
        && (target_value - 1.0).norm() <= TARGET_TOLERANCE;
    Ok(PeakReport {
        target: candidate.target.clone(),
        max_interior_modulus,
        target_value,
        approach_converged: rows.last().is_some_and(|r| (r.modulus - 1.0).abs() <= APPROACH_TOLERANCE),
        approach: rows,
        verdict: if pass { PeakVerdict::Pass } else { PeakVerdict::Fail },
        samples,
        seed,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn g2_peak_examples() {
        let f = g2_boundary_peak(c(0.5, 0.0)).unwrap();
        assert_eq!(f.eval(c(1.5, 0.0), c(0.5, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(f.eval(c(0.0, 0.0), c(0.0, 0.0)).unwrap(), c(0.5, 0.0));
        assert!(g2_boundary_peak(c(1.1, 0.0)).is_err());
        assert!(g2_boundary_peak(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn symmetric_peak_examples() {
        let cand = symmetric_peak(&PlanarDomain::UnitDisc, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(cand.target.coords(), &[c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(cand.handle.eval_roots(&cand.target_roots).unwrap(), c(1.0, 0.0));
        let at_origin = cand.handle.eval_roots(&[c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((at_origin - c(0.75, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn symmetric_peak_rejects_non_peak_points() {
        let d = PlanarDomain::disc_minus_finite(c(0.0, 0.0), 1.0, vec![c(0.5, 0.0)]).unwrap();
        assert!(symmetric_peak(&d, c(0.5, 0.0), c(0.0, 0.0)).is_err());
        assert!(symmetric_peak(&PlanarDomain::UnitDisc, c(0.9, 0.0), c(0.0, 0.0)).is_err());
        let small = PlanarDomain::disc(c(0.0, 0.0), 0.5).unwrap();
        assert!(symmetric_peak(&small, c(1.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn verify_composed_and_constant() {
        let s = SymProduct::symmetrized_polydisc(2).unwrap();
        let cand = symmetric_peak(&PlanarDomain::UnitDisc, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        let report = verify_peak(&cand, &s, 2000, &Approach::default(), 0).unwrap();
        assert_eq!(report.verdict, PeakVerdict::Pass);
        assert!(report.approach_converged);
        assert!(report.approach.windows(2).all(|w| w[0].modulus <= w[1].modulus));

        let constant = PeakCandidate {
            handle: PeakHandle::Constant { value: c(1.0, 0.0) },
            ..cand
        };
        let report = verify_peak(&constant, &s, 100, &Approach::default(), 0).unwrap();
        assert_eq!(report.verdict, PeakVerdict::Fail);
    }

    #[test]
    fn verify_rejects_interior_target() {
        let s = SymProduct::symmetrized_polydisc(2).unwrap();
        let cand = PeakCandidate {
            target: ComplexPoint::new(vec![c(0.0, 0.0), c(0.0, 0.0)]).unwrap(),
            target_roots: vec![c(0.0, 0.0), c(0.0, 0.0)],
            handle: PeakHandle::Constant { value: c(0.5, 0.0) },
        };
        assert!(verify_peak(&cand, &s, 10, &Approach::default(), 0).is_err());
    }
}
