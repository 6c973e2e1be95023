//! Geometry of `S_n(D)`: membership, induced maps, separating hyperplanes,
//! puncture arrangements and the Kobayashi hyperbolicity classifier.

use itertools::Itertools;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::domains::{ComplementCardinality, Membership, MembershipVerdict, PlanarDomain, PlanarMap};
use crate::error::{Error, Result};
use crate::linalg;
use crate::sympoly::{monic_eval, roots_of_point, symmetrize, ComplexPoint, RootMultiset};
use crate::tol;

/// `S_n(D) = π_n(Dⁿ)` with the boundary band used for verdicts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymProduct {
    pub base: PlanarDomain,
    pub n: usize,
    #[serde(default = "default_delta")]
    pub delta: f64,
}

fn default_delta() -> f64 {
    tol::DELTA_BOUNDARY
}

/// Membership of a point together with its fiber.
#[derive(Debug, Clone)]
pub struct Fiber {
    pub roots: RootMultiset,
    pub verdicts: Vec<MembershipVerdict>,
    pub verdict: MembershipVerdict,
}

impl SymProduct {
    pub fn new(base: PlanarDomain, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::precondition(format!("symmetric products need n ≥ 2 (got {n})")));
        }
        if n > tol::MAX_DEGREE {
            return Err(Error::unsupported(format!("n = {n} exceeds {}", tol::MAX_DEGREE)));
        }
        Ok(SymProduct {
            base,
            n,
            delta: tol::DELTA_BOUNDARY,
        })
    }

    /// The symmetrized polydisc `𝔾_n`.
    pub fn symmetrized_polydisc(n: usize) -> Result<Self> {
        Self::new(PlanarDomain::UnitDisc, n)
    }

    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::precondition(format!("boundary tolerance must be ≥ 0 (got {delta})")));
        }
        self.delta = delta;
        Ok(self)
    }

    pub(crate) fn check_dim(&self, z: &ComplexPoint) -> Result<()> {
        if z.dim() != self.n {
            return Err(Error::precondition(format!(
                "point has dimension {} but S_n(D) has n = {}",
                z.dim(),
                self.n
            )));
        }
        Ok(())
    }

    /// Aggregate verdict from per-root verdicts: any `OUT` root makes the
    /// point `OUT`; otherwise any `BOUNDARY` root makes it `BOUNDARY`.
    pub fn verdict_of_roots(&self, roots: &[Complex64]) -> (Vec<MembershipVerdict>, MembershipVerdict) {
        let verdicts: Vec<_> = roots.iter().map(|r| self.base.verdict(*r, self.delta)).collect();
        let margin = verdicts.iter().map(|v| v.margin).fold(f64::NEG_INFINITY, f64::max);
        let state = if verdicts.iter().any(|v| v.state == Membership::Out) {
            Membership::Out
        } else if verdicts.iter().any(|v| v.state == Membership::Boundary) {
            Membership::Boundary
        } else {
            Membership::In
        };
        (verdicts, MembershipVerdict { state, margin })
    }

    pub fn fiber(&self, z: &ComplexPoint) -> Result<Fiber> {
        self.check_dim(z)?;
        let roots = roots_of_point(z)?;
        let (verdicts, verdict) = self.verdict_of_roots(&roots.roots);
        Ok(Fiber { roots, verdicts, verdict })
    }

    pub fn member(&self, z: &ComplexPoint) -> Result<MembershipVerdict> {
        Ok(self.fiber(z)?.verdict)
    }

    pub(crate) fn require_in(&self, z: &ComplexPoint, what: &str) -> Result<Fiber> {
        let fiber = self.fiber(z)?;
        if !fiber.verdict.is_in() {
            return Err(Error::precondition(format!(
                "{what} is not in S_n(D) (state {:?}, margin {:e})",
                fiber.verdict.state, fiber.verdict.margin
            )));
        }
        Ok(fiber)
    }
}

/// `F_f(⟨λ_1, …, λ_n⟩) = ⟨f(λ_1), …, f(λ_n)⟩` on a root tuple.
pub fn push_forward_roots<F: PlanarMap + ?Sized>(f: &F, roots: &[Complex64]) -> Result<ComplexPoint> {
    let images = roots.iter().map(|r| f.eval(*r)).collect::<Result<Vec<_>>>()?;
    symmetrize(&images)
}

/// `F_f` in coordinates: resolve the fiber, map each root, resymmetrize.
pub fn push_forward<F: PlanarMap + ?Sized>(f: &F, z: &ComplexPoint) -> Result<ComplexPoint> {
    push_forward_roots(f, &roots_of_point(z)?.roots)
}

/// Evaluates a symmetric function of the roots, `F(⟨λ⟩) = F̃(λ_1, …, λ_n)`.
///
/// Symmetry is spot-checked against a cyclic shift and a transposition of
/// the root order (together these generate all permutations); a mismatch
/// beyond [`tol::SYMMETRY`] rejects `F̃`.
pub fn symmetric_eval<F>(f: F, z: &ComplexPoint) -> Result<Complex64>
where
    F: Fn(&[Complex64]) -> Complex64,
{
    let roots = roots_of_point(z)?.roots;
    let value = f(&roots);
    if !value.is_finite() {
        return Err(Error::Numerical("symmetric function returned a non-finite value".into()));
    }
    if roots.len() > 1 {
        let mut shifted = roots.clone();
        shifted.rotate_left(1);
        let mut swapped = roots.clone();
        swapped.swap(0, 1);
        for other in [shifted, swapped] {
            let v = f(&other);
            if (v - value).norm() > tol::SYMMETRY * value.norm().max(1.0) {
                return Err(Error::precondition(format!(
                    "function is not symmetric: {value} vs {v} after reordering roots"
                )));
            }
        }
    }
    Ok(value)
}

/// Affine hyperplane `{z : p_z(μ) = 0}`: the points whose fiber contains `μ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "HyperplaneJson", try_from = "HyperplaneJson")]
pub struct Hyperplane {
    pub witness: Complex64,
    pub n: usize,
}

#[derive(Serialize, Deserialize)]
struct HyperplaneJson {
    witness: Complex64,
    coeffs: Vec<Complex64>,
    offset: Complex64,
}

impl From<Hyperplane> for HyperplaneJson {
    fn from(h: Hyperplane) -> Self {
        HyperplaneJson {
            witness: h.witness,
            coeffs: h.coeffs(),
            offset: h.offset(),
        }
    }
}

impl TryFrom<HyperplaneJson> for Hyperplane {
    type Error = Error;

    fn try_from(j: HyperplaneJson) -> Result<Self> {
        let h = Hyperplane::new(j.witness, j.coeffs.len())?;
        Ok(h)
    }
}

impl Hyperplane {
    pub fn new(witness: Complex64, n: usize) -> Result<Self> {
        if !witness.is_finite() {
            return Err(Error::NonFinite(format!("witness {witness}")));
        }
        if n == 0 {
            return Err(Error::precondition("hyperplane dimension must be positive"));
        }
        Ok(Hyperplane { witness, n })
    }

    /// Linear part `((−1)ʲ μⁿ⁻ʲ)_{j=1..n}`.
    pub fn coeffs(&self) -> Vec<Complex64> {
        (1..=self.n)
            .map(|j| {
                let m = self.witness.powu((self.n - j) as u32);
                if j % 2 == 1 {
                    -m
                } else {
                    m
                }
            })
            .collect()
    }

    /// Constant part `μⁿ`.
    pub fn offset(&self) -> Complex64 {
        self.witness.powu(self.n as u32)
    }

    /// Value of the defining functional; equals `monic_eval(z, μ)`.
    pub fn eval(&self, z: &ComplexPoint) -> Complex64 {
        monic_eval(z, self.witness)
    }
}

/// Separating hyperplane through an exterior point `w`.
///
/// The witness is the exterior root of `p_w` with the largest margin
/// (ties: lexicographic `(re, im)`). When no root is strictly outside but
/// some root lies in the boundary band, that root is replaced by the
/// nearest point of `∂D`, which lies outside the open domain.
pub fn separating_hyperplane(s: &SymProduct, w: &ComplexPoint) -> Result<Hyperplane> {
    let fiber = s.fiber(w)?;
    let candidates: Vec<(Complex64, MembershipVerdict)> = fiber
        .roots
        .roots
        .iter()
        .copied()
        .zip(fiber.verdicts.iter().copied())
        .filter(|(_, v)| v.state != Membership::In)
        .collect();
    let pick = |state: Membership| {
        candidates
            .iter()
            .filter(|(_, v)| v.state == state)
            .max_by(|a, b| {
                a.1.margin
                    .total_cmp(&b.1.margin)
                    .then(b.0.re.total_cmp(&a.0.re))
                    .then(b.0.im.total_cmp(&a.0.im))
            })
            .copied()
    };
    let witness = if let Some((mu, _)) = pick(Membership::Out) {
        mu
    } else if let Some((mu, _)) = pick(Membership::Boundary) {
        s.base.nearest_boundary_point(mu)
    } else {
        return Err(Error::precondition(
            "every root of the point lies in D; no separating hyperplane exists",
        ));
    };
    Hyperplane::new(witness, s.n)
}

/// `H(μ_1, …, μ_k)`: points whose fiber contains every witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineSubspace {
    pub offset: ComplexPoint,
    pub basis: Vec<Vec<Complex64>>,
    pub witnesses: Vec<Complex64>,
}

impl AffineSubspace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// `offset + Σ t_i basis_i`.
    pub fn point(&self, t: &[Complex64]) -> Result<ComplexPoint> {
        if t.len() != self.basis.len() {
            return Err(Error::precondition("coefficient count must equal the dimension"));
        }
        let mut z = self.offset.coords().to_vec();
        for (ti, b) in t.iter().zip(&self.basis) {
            for (zj, bj) in z.iter_mut().zip(b) {
                *zj += ti * bj;
            }
        }
        ComplexPoint::new(z)
    }

    /// Random point with coefficients uniform in the polydisc of radius
    /// `radius`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, radius: f64) -> Result<ComplexPoint> {
        let t: Vec<_> = (0..self.dimension())
            .map(|_| crate::rng::in_disc(rng, Complex64::new(0.0, 0.0), radius))
            .collect();
        self.point(&t)
    }
}

fn normal_matrix(witnesses: &[Complex64], n: usize) -> Vec<Vec<Complex64>> {
    witnesses.iter().map(|mu| Hyperplane { witness: *mu, n }.coeffs()).collect()
}

pub fn intersection_space(witnesses: &[Complex64], n: usize) -> Result<AffineSubspace> {
    let k = witnesses.len();
    if k == 0 || k > n {
        return Err(Error::precondition(format!("need 1 ≤ k ≤ n witnesses (k = {k}, n = {n})")));
    }
    if let Some((a, _)) = witnesses.iter().tuple_combinations().find(|(a, b)| a == b) {
        return Err(Error::precondition(format!("witness {a} repeated")));
    }
    let mut tuple = witnesses.to_vec();
    tuple.resize(n, Complex64::new(0.0, 0.0));
    let offset = symmetrize(&tuple)?;

    let reduced = linalg::rref(&normal_matrix(witnesses, n), n, tol::RANK);
    if reduced.rank() != k {
        return Err(Error::Numerical(format!(
            "normals of {k} distinct witnesses have rank {} (expected {k})",
            reduced.rank()
        )));
    }
    Ok(AffineSubspace {
        offset,
        basis: reduced.null_space(n),
        witnesses: witnesses.to_vec(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetCheck {
    pub indices: Vec<usize>,
    pub rank: usize,
    pub dimension: usize,
    pub offset_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralPositionReport {
    pub n: usize,
    pub subsets_checked: usize,
    pub failures: Vec<SubsetCheck>,
    pub general_position: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Arrangement {
    pub hyperplanes: Vec<Hyperplane>,
    pub report: GeneralPositionReport,
}

impl Arrangement {
    /// Membership in `ℂⁿ ∖ ⋃ H_j`: every functional nonzero.
    pub fn complement_contains(&self, z: &ComplexPoint) -> bool {
        self.hyperplanes.iter().all(|h| h.eval(z) != Complex64::new(0.0, 0.0))
    }
}

/// Hyperplanes `H_j = {p_z(μ_j) = 0}` of a punctured plane, with an
/// exhaustive general-position check over all subsets of size `k ≤ n`.
pub fn arrangement(punctures: &[Complex64], n: usize) -> Result<Arrangement> {
    if punctures.is_empty() {
        return Err(Error::precondition("arrangement needs at least one puncture"));
    }
    if n == 0 {
        return Err(Error::precondition("dimension must be positive"));
    }
    PlanarDomain::complement_finite(punctures.to_vec())?;
    let hyperplanes = punctures
        .iter()
        .map(|mu| Hyperplane::new(*mu, n))
        .collect::<Result<Vec<_>>>()?;

    let mut checked = 0;
    let mut failures = Vec::new();
    for k in 1..=n.min(punctures.len()) {
        for indices in (0..punctures.len()).combinations(k) {
            let subset: Vec<_> = indices.iter().map(|&i| punctures[i]).collect();
            let reduced = linalg::rref(&normal_matrix(&subset, n), n, tol::RANK);
            let dimension = reduced.null_space(n).len();
            let mut tuple = subset.clone();
            tuple.resize(n, Complex64::new(0.0, 0.0));
            let offset = symmetrize(&tuple)?;
            let offset_residual = subset
                .iter()
                .map(|mu| monic_eval(&offset, *mu).norm())
                .fold(0.0, f64::max);
            checked += 1;
            let scale = offset.coords().iter().map(|c| c.norm()).fold(1.0, f64::max);
            if reduced.rank() != k || dimension != n - k || offset_residual > tol::RANK * scale {
                failures.push(SubsetCheck {
                    indices,
                    rank: reduced.rank(),
                    dimension,
                    offset_residual,
                });
            }
        }
    }
    Ok(Arrangement {
        hyperplanes,
        report: GeneralPositionReport {
            n,
            subsets_checked: checked,
            general_position: failures.is_empty(),
            failures,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    KobayashiComplete,
    NotHyperbolic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub complement: ComplementCardinality,
    pub threshold: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    pub reason: String,
}

/// Tag of the entire curve attached for `D = ℂ∖{0,1}`, `n = 2`.
pub const EXP_CURVE_TAG: &str = "exp_curve: lambda -> (e^lambda + 2, e^lambda)";

/// Kobayashi completeness iff `#(ℂ∖D) ≥ 2n`; otherwise `S_n(D)` carries
/// an entire curve.
pub fn classify(s: &SymProduct) -> Classification {
    let complement = s.base.complement_cardinality();
    let threshold = 2 * s.n;
    let shown = match complement {
        ComplementCardinality::Finite(k) => k.to_string(),
        ComplementCardinality::Infinite => "infinite".to_string(),
    };
    if complement.at_least(threshold) {
        return Classification {
            verdict: Verdict::KobayashiComplete,
            complement,
            threshold,
            witness: None,
            reason: format!("#(C\\D) = {shown} >= 2n = {threshold}"),
        };
    }
    let zero_one = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    let punctures = s.base.punctures();
    let has_exp_curve = s.n == 2 && punctures.len() == 2 && zero_one.iter().all(|p| punctures.contains(p));
    Classification {
        verdict: Verdict::NotHyperbolic,
        complement,
        threshold,
        witness: has_exp_curve.then(|| EXP_CURVE_TAG.to_string()),
        reason: if has_exp_curve {
            format!("#(C\\D) = {shown} < 2n = {threshold}; entire curve attached")
        } else {
            format!("#(C\\D) = {shown} < 2n = {threshold}; witness construction out of scope")
        },
    }
}

/// Entire curve `λ ↦ (e^λ + 2, e^λ)` in `S_2(ℂ∖{0,1})`.
///
/// `p_{z(λ)}(0) = e^λ` and `p_{z(λ)}(1) = −1`, so the image misses both
/// hyperplanes of the arrangement.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EntireCurve;

impl EntireCurve {
    pub fn eval(&self, lambda: Complex64) -> Result<ComplexPoint> {
        let e = lambda.exp();
        ComplexPoint::new(vec![e + 2.0, e])
    }
}

pub fn entire_curve_witness() -> EntireCurve {
    EntireCurve
}

fn check_dim2(z: &[Complex64]) -> Result<()> {
    if z.len() != 2 {
        return Err(Error::precondition(format!("expected a point of C^2 (got dimension {})", z.len())));
    }
    Ok(())
}

/// `(s, p) ↦ (p, s − p − 1)`, mapping `S_2(ℂ∖{0,1})` onto `ℂ_*²`.
pub fn affine_iso_cstar2(z: &ComplexPoint) -> Result<[Complex64; 2]> {
    check_dim2(z.coords())?;
    let (s, p) = (z.coords()[0], z.coords()[1]);
    Ok([p, s - p - 1.0])
}

/// Inverse of [`affine_iso_cstar2`]: `(u, v) ↦ (v + u + 1, u)`.
pub fn affine_iso_cstar2_inverse(uv: [Complex64; 2]) -> Result<ComplexPoint> {
    let [u, v] = uv;
    ComplexPoint::new(vec![v + u + 1.0, u])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::Mobius;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pt(xs: &[f64]) -> ComplexPoint {
        ComplexPoint::from_reals(xs).unwrap()
    }

    fn zero_one() -> PlanarDomain {
        PlanarDomain::complement_finite(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap()
    }

    #[test]
    fn member_examples() {
        let g2 = SymProduct::symmetrized_polydisc(2).unwrap();
        assert_eq!(g2.member(&pt(&[0.0, 0.0])).unwrap().state, Membership::In);
        assert_eq!(g2.member(&pt(&[1.5, 0.5])).unwrap().state, Membership::Boundary);
        assert_eq!(g2.member(&pt(&[4.0, 4.0])).unwrap().state, Membership::Out);
        let s = SymProduct::new(zero_one(), 2).unwrap();
        assert_eq!(s.member(&pt(&[3.0, 1.0])).unwrap().state, Membership::In);
        assert!(s.member(&pt(&[1.0])).is_err());
        assert!(SymProduct::new(PlanarDomain::UnitDisc, 1).is_err());
    }

    #[test]
    fn push_forward_examples() {
        let z = pt(&[1.0, 0.0]);
        let f = Mobius::affine(c(0.5, 0.0), c(0.5, 0.0));
        let w = push_forward(&f, &z).unwrap();
        assert!(w.max_distance(&pt(&[1.5, 0.5])) < 1e-14);

        let k = Mobius::constant(c(0.3, 0.1));
        let w = push_forward(&k, &z).unwrap();
        let cc = c(0.3, 0.1);
        assert!(w.max_distance(&ComplexPoint::new(vec![cc * 2.0, cc * cc]).unwrap()) < 1e-15);

        let z = ComplexPoint::new(vec![c(0.3, 0.2), c(-0.1, 0.05)]).unwrap();
        assert!(push_forward(&Mobius::identity(), &z).unwrap().max_distance(&z) < 1e-14);
    }

    #[test]
    fn push_forward_rejects_poles() {
        // 1/λ has a pole at the root 0
        let inv = Mobius {
            a: c(0.0, 0.0),
            b: c(1.0, 0.0),
            c: c(1.0, 0.0),
            d: c(0.0, 0.0),
        };
        assert!(push_forward(&inv, &pt(&[1.0, 0.0])).is_err());
    }

    #[test]
    fn symmetric_eval_examples() {
        let prod = |r: &[Complex64]| r.iter().product::<Complex64>();
        assert!(symmetric_eval(prod, &pt(&[1.0, 0.0])).unwrap().norm() < 1e-15);

        let z = ComplexPoint::new(vec![c(0.7, -0.3), c(0.2, 0.4)]).unwrap();
        let squares = |r: &[Complex64]| r.iter().map(|x| x * x).sum::<Complex64>();
        let (s, p) = (z.coords()[0], z.coords()[1]);
        assert!((symmetric_eval(squares, &z).unwrap() - (s * s - p * 2.0)).norm() < 1e-12);

        let first = |r: &[Complex64]| r[0];
        assert!(matches!(symmetric_eval(first, &z), Err(Error::Precondition(_))));
    }

    #[test]
    fn separating_hyperplane_examples() {
        let s = SymProduct::new(zero_one(), 2).unwrap();
        // exterior point on C×{0}: roots {0, 2}
        let h = separating_hyperplane(&s, &pt(&[2.0, 0.0])).unwrap();
        assert_eq!(h.witness, c(0.0, 0.0));
        assert_eq!(h.coeffs(), vec![c(-0.0, -0.0), c(1.0, 0.0)]);
        assert_eq!(h.offset(), c(0.0, 0.0));
        // exterior point (λ+1, λ) with λ = 3: roots {1, 3}
        let h = separating_hyperplane(&s, &pt(&[4.0, 3.0])).unwrap();
        assert_eq!(h.witness, c(1.0, 0.0));
        assert_eq!(h.coeffs(), vec![c(-1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(h.offset(), c(1.0, 0.0));

        let g2 = SymProduct::symmetrized_polydisc(2).unwrap();
        let w = pt(&[4.0, 4.0]);
        let h = separating_hyperplane(&g2, &w).unwrap();
        assert!((h.witness - c(2.0, 0.0)).norm() < 1e-6);
        assert!(h.eval(&w).norm() < 1e-9);
        assert!(separating_hyperplane(&g2, &pt(&[0.0, 0.0])).is_err());
    }

    #[test]
    fn hyperplane_json() {
        let h = Hyperplane::new(c(2.0, 0.0), 2).unwrap();
        let v: serde_json::Value = serde_json::to_value(h).unwrap();
        assert_eq!(v["witness"], serde_json::json!([2.0, 0.0]));
        assert_eq!(v["coeffs"], serde_json::json!([[-2.0, -0.0], [1.0, 0.0]]));
        assert_eq!(v["offset"], serde_json::json!([4.0, 0.0]));
    }

    #[test]
    fn intersection_space_examples() {
        let mus = [c(0.3, 0.1), c(-0.5, 0.2), c(0.9, -0.4)];
        let full = intersection_space(&mus, 3).unwrap();
        assert_eq!(full.dimension(), 0);
        assert_eq!(full.offset, symmetrize(&mus).unwrap());

        let line = intersection_space(&[c(0.0, 0.0)], 2).unwrap();
        assert_eq!(line.dimension(), 1);
        for t in [c(1.0, 0.0), c(-2.0, 3.0)] {
            let z = line.point(&[t]).unwrap();
            assert_eq!(z.coords()[1], c(0.0, 0.0));
        }

        let sub = intersection_space(&[c(0.0, 0.0), c(1.0, 0.0)], 3).unwrap();
        assert_eq!(sub.dimension(), 1);
        let mut rng = crate::rng::stream(3, 0);
        for _ in 0..50 {
            let z = sub.sample(&mut rng, 10.0).unwrap();
            assert!(monic_eval(&z, c(0.0, 0.0)).norm() < 1e-10);
            assert!(monic_eval(&z, c(1.0, 0.0)).norm() < 1e-10);
        }
        assert!(intersection_space(&[c(1.0, 0.0), c(1.0, 0.0)], 3).is_err());
        assert!(intersection_space(&[], 3).is_err());
    }

    #[test]
    fn arrangement_examples() {
        let a = arrangement(&[c(0.0, 0.0), c(1.0, 0.0)], 2).unwrap();
        assert_eq!(a.hyperplanes[0].coeffs(), vec![c(-0.0, -0.0), c(1.0, 0.0)]);
        assert_eq!(a.hyperplanes[1].coeffs(), vec![c(-1.0, 0.0), c(1.0, 0.0)]);
        assert!(a.report.general_position);
        assert_eq!(a.report.subsets_checked, 3);

        let four: Vec<_> = (0..4).map(|k| c(k as f64, 0.0)).collect();
        let a = arrangement(&four, 2).unwrap();
        assert_eq!(a.hyperplanes.len(), 4);
        assert_eq!(a.report.subsets_checked, 4 + 6);
        assert!(a.report.general_position);
    }

    #[test]
    fn classify_examples() {
        let s = SymProduct::new(zero_one(), 2).unwrap();
        let cl = classify(&s);
        assert_eq!(cl.verdict, Verdict::NotHyperbolic);
        assert_eq!(cl.threshold, 4);
        assert!(cl.witness.is_some());

        let four: Vec<_> = (0..4).map(|k| c(k as f64, 0.0)).collect();
        let s = SymProduct::new(PlanarDomain::complement_finite(four).unwrap(), 2).unwrap();
        assert_eq!(classify(&s).verdict, Verdict::KobayashiComplete);

        for n in 2..6 {
            let s = SymProduct::new(PlanarDomain::UnitDisc, n).unwrap();
            assert_eq!(classify(&s).verdict, Verdict::KobayashiComplete);
        }

        let three: Vec<_> = (0..3).map(|k| c(k as f64, 0.0)).collect();
        let s = SymProduct::new(PlanarDomain::complement_finite(three).unwrap(), 2).unwrap();
        let cl = classify(&s);
        assert_eq!(cl.verdict, Verdict::NotHyperbolic);
        assert!(cl.witness.is_none());
        assert!(cl.reason.contains("out of scope"));
    }

    #[test]
    fn classification_json() {
        let s = SymProduct::new(zero_one(), 2).unwrap();
        let v = serde_json::to_value(classify(&s)).unwrap();
        assert_eq!(v["verdict"], "NOT_HYPERBOLIC");
        assert_eq!(v["complement"], 2);
        assert_eq!(v["threshold"], 4);
        let v = serde_json::to_value(classify(&SymProduct::symmetrized_polydisc(3).unwrap())).unwrap();
        assert_eq!(v["complement"], "inf");
        assert!(v.get("witness").is_none());
    }

    #[test]
    fn entire_curve_examples() {
        let curve = entire_curve_witness();
        let z0 = curve.eval(c(0.0, 0.0)).unwrap();
        assert_eq!(z0, pt(&[3.0, 1.0]));
        let s = SymProduct::new(zero_one(), 2).unwrap();
        assert!(s.member(&z0).unwrap().is_in());
        for l in [c(0.0, 0.0), c(1.0, 1.0), c(-5.0, 0.0)] {
            let z = curve.eval(l).unwrap();
            assert!((monic_eval(&z, c(1.0, 0.0)) + 1.0).norm() < 1e-14);
            assert!(monic_eval(&z, c(0.0, 0.0)).norm() > 0.0);
        }
        assert_ne!(curve.eval(c(0.0, 0.0)).unwrap(), curve.eval(c(1.0, 0.0)).unwrap());
    }

    #[test]
    fn affine_iso_examples() {
        assert_eq!(affine_iso_cstar2(&pt(&[3.0, 1.0])).unwrap(), [c(1.0, 0.0), c(1.0, 0.0)]);
        let [u, v] = affine_iso_cstar2(&ComplexPoint::new(vec![c(2.5, 1.0), c(0.0, 0.0)]).unwrap()).unwrap();
        assert_eq!(u, c(0.0, 0.0));
        assert_eq!(v, c(1.5, 1.0));
        assert!(affine_iso_cstar2(&pt(&[1.0, 2.0, 3.0])).is_err());
    }
}
