//! Certified bounds for invariant pseudodistances on `S_n(D)`.
//!
//! Lower bounds for the Carathéodory pseudodistance come from explicit
//! holomorphic competitors `F: S_n(D) → 𝔻`; upper bounds for the Lempert
//! function come from explicit analytic discs. Since `c ≤ k ≤ l`, every
//! pair of certificates brackets all three.

mod disc_search;
pub mod nelder_mead;

use itertools::Itertools;
use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};

use crate::domains::{neg_exhaustion, Mobius, PlanarDomain, PlanarMap};
use crate::error::{Error, Result};
use crate::symgeo::{push_forward_roots, separating_hyperplane, SymProduct};
use crate::sympoly::{roots_of_point, symmetrize, ComplexPoint};
use crate::tol;

pub use disc_search::{lempert_upper_disc_search, DiscCertificate, DiscSearchConfig};

/// Default resolution of the `ω` grid for `Φ_ω` competitors.
pub const OMEGA_GRID: usize = 720;

/// Anchor roots closer than this (relative to the radius) to the circle
/// get no automorphism pre-map: both images then sit near `∂𝔻`, where
/// rounding in the Poincaré distance exceeds the certified tolerance.
pub const ANCHOR_DEPTH: f64 = 1e-3;

/// Poincaré distance `atanh |(a − b)/(1 − āb)|` on the unit disc.
pub fn poincare(a: Complex64, b: Complex64) -> Result<f64> {
    if !(a.norm() < 1.0 && b.norm() < 1.0) {
        return Err(Error::precondition(format!("Poincaré distance needs |a|, |b| < 1 (got {a}, {b})")));
    }
    let ratio = (a - b).norm() / (Complex64::new(1.0, 0.0) - a.conj() * b).norm();
    Ok(ratio.min(1.0).atanh())
}

/// Hyperbolic distance of the disc `|λ − center| < radius`.
pub fn disc_distance(center: Complex64, radius: f64, a: Complex64, b: Complex64) -> Result<f64> {
    poincare((a - center) / radius, (b - center) / radius)
}

/// `Φ_ω(s, p) = (2ωp − s)/(2 − ωs)`, mapping `𝔾_2` into `𝔻` for `|ω| = 1`.
pub fn phi_omega(omega: Complex64, s: Complex64, p: Complex64) -> Result<Complex64> {
    let den = Complex64::new(2.0, 0.0) - omega * s;
    if den.norm() <= tol::PHI_POLE {
        return Err(Error::precondition(format!("Φ_ω pole: |2 − ωs| = {:e}", den.norm())));
    }
    Ok((omega * p * 2.0 - s) / den)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// A holomorphic map `S_n(D) → 𝔻`, written as a planar pre-map `f: D → 𝔻`
/// followed by a function on `𝔾_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum Competitor {
    /// `σ_index(f(λ))/C(n, index)`.
    Coordinate { pre_map: Mobius, index: usize },
    /// `Φ_ω(π_2(f(λ_1), f(λ_2)))`.
    PhiOmega { pre_map: Mobius, omega: Complex64 },
}

impl Competitor {
    pub fn pre_map(&self) -> &Mobius {
        match self {
            Competitor::Coordinate { pre_map, .. } | Competitor::PhiOmega { pre_map, .. } => pre_map,
        }
    }

    /// Value on a point of `𝔾_n` already pushed forward by the pre-map.
    fn on_pushed(&self, pushed: &ComplexPoint) -> Result<Complex64> {
        match *self {
            Competitor::Coordinate { index, .. } => {
                let n = pushed.dim();
                Ok(pushed.coords()[index - 1] / binomial(n, index))
            }
            Competitor::PhiOmega { omega, .. } => {
                let c = pushed.coords();
                phi_omega(omega, c[0], c[1])
            }
        }
    }

    /// Value at a point given by its roots.
    pub fn eval_roots(&self, roots: &[Complex64]) -> Result<Complex64> {
        self.on_pushed(&push_forward_roots(self.pre_map(), roots)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum LowerCertificate {
    /// No bounded competitor available; `c ≥ 0` trivially.
    Trivial,
    Competitor {
        competitor: Competitor,
        at_source: Complex64,
        at_target: Complex64,
    },
    /// A competitor on `𝔾_2` applied after a planar map of the base domain.
    Composed { pre_map: Mobius, inner: Box<LowerCertificate> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum UpperCertificate {
    /// Product of disc-automorphism discs joining matched roots.
    Permutation { permutation: Vec<usize>, sigma: f64 },
    Disc(DiscCertificate),
    Constant,
    /// The search ended without a feasible disc; the upper bound is `+∞`.
    NotFound { evals: usize, diagnostic: String },
}

/// Certified interval `[lower, upper]` for an invariant pseudodistance;
/// `upper = None` means `+∞`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceBound {
    pub lower: f64,
    #[serde(serialize_with = "upper_json", deserialize_with = "upper_from_json")]
    pub upper: Option<f64>,
    pub lower_cert: Option<LowerCertificate>,
    pub upper_cert: Option<UpperCertificate>,
}

fn upper_json<S: Serializer>(upper: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match upper {
        Some(x) => s.serialize_f64(*x),
        None => s.serialize_str("inf"),
    }
}

fn upper_from_json<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Upper {
        Num(f64),
        Tag(String),
    }
    match Upper::deserialize(d)? {
        Upper::Num(x) => Ok(Some(x)),
        Upper::Tag(t) if t == "inf" => Ok(None),
        Upper::Tag(t) => Err(serde::de::Error::custom(format!("bad upper bound {t:?}"))),
    }
}

impl DistanceBound {
    pub fn lower_only(lower: f64, cert: LowerCertificate) -> Self {
        DistanceBound {
            lower,
            upper: None,
            lower_cert: Some(cert),
            upper_cert: None,
        }
    }

    pub fn upper_only(upper: Option<f64>, cert: Option<UpperCertificate>) -> Self {
        DistanceBound {
            lower: 0.0,
            upper,
            lower_cert: None,
            upper_cert: cert,
        }
    }

    /// Intersection of two brackets for the same pair.
    pub fn combine(self, other: DistanceBound) -> DistanceBound {
        let (lower, lower_cert) = if other.lower > self.lower {
            (other.lower, other.lower_cert)
        } else {
            (self.lower, self.lower_cert)
        };
        let (upper, upper_cert) = match (self.upper, other.upper) {
            (Some(a), Some(b)) if b < a => (other.upper, other.upper_cert),
            (None, Some(_)) => (other.upper, other.upper_cert),
            _ => (self.upper, self.upper_cert),
        };
        DistanceBound {
            lower,
            upper,
            lower_cert,
            upper_cert,
        }
    }
}

/// Finite competitor family for `carath_lower`.
///
/// The pre-maps are the normalization of the ambient disc onto `𝔻` and the
/// disc automorphisms vanishing at each anchor root at least
/// [`ANCHOR_DEPTH`] away from the circle. Using one family for
/// several pairs makes the resulting lower-bound functional a
/// pseudodistance on those points.
#[derive(Debug, Clone)]
pub struct CompetitorFamily {
    n: usize,
    pre_maps: Vec<Mobius>,
    omegas: Vec<Complex64>,
}

impl CompetitorFamily {
    /// Family anchored at the roots of `anchors`; `None` when the base
    /// admits no bounded non-constant functions.
    pub fn new(s: &SymProduct, anchors: &[&ComplexPoint], grid: usize) -> Result<Option<Self>> {
        let Some((center, radius)) = s.base.ambient_disc() else {
            return Ok(None);
        };
        let mut pre_maps = vec![Mobius::disc_to_unit(center, radius, center, 0.0)?];
        let mut roots: Vec<Complex64> = Vec::new();
        for z in anchors {
            roots.extend(roots_of_point(z)?.roots);
        }
        roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        roots.dedup();
        for a in roots {
            if (a - center).norm() <= radius * (1.0 - ANCHOR_DEPTH) {
                pre_maps.push(Mobius::disc_to_unit(center, radius, a, 0.0)?);
            }
        }
        let omegas = if s.n == 2 {
            (0..grid)
                .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / grid as f64))
                .collect()
        } else {
            Vec::new()
        };
        Ok(Some(CompetitorFamily { n: s.n, pre_maps, omegas }))
    }

    pub fn len(&self) -> usize {
        self.pre_maps.len() * (self.n + self.omegas.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `max_F p(F(z), F(w))` over the family, with the maximizing
    /// competitor. The first maximizer in family order wins ties.
    pub fn lower_bound(&self, z: &[Complex64], w: &[Complex64]) -> Result<(f64, LowerCertificate)> {
        let mut best = (0.0, LowerCertificate::Trivial);
        let mut consider = |competitor: Competitor, fz: Complex64, fw: Complex64| {
            if let Ok(d) = poincare(fz, fw) {
                if d > best.0 {
                    best = (
                        d,
                        LowerCertificate::Competitor {
                            competitor,
                            at_source: fz,
                            at_target: fw,
                        },
                    );
                }
            }
        };
        for pre_map in &self.pre_maps {
            let pz = push_forward_roots(pre_map, z)?;
            let pw = push_forward_roots(pre_map, w)?;
            for index in 1..=self.n {
                let c = Competitor::Coordinate {
                    pre_map: *pre_map,
                    index,
                };
                consider(c, c.on_pushed(&pz)?, c.on_pushed(&pw)?);
            }
            for omega in &self.omegas {
                let c = Competitor::PhiOmega {
                    pre_map: *pre_map,
                    omega: *omega,
                };
                if let (Ok(a), Ok(b)) = (c.on_pushed(&pz), c.on_pushed(&pw)) {
                    consider(c, a, b);
                }
            }
        }
        Ok(best)
    }
}

/// Lower bound for `c_{S_n(D)}(z, w)` from the competitor family anchored
/// at `z` and `w`.
pub fn carath_lower(s: &SymProduct, z: &ComplexPoint, w: &ComplexPoint, grid: usize) -> Result<DistanceBound> {
    let fz = s.require_in(z, "source point")?;
    let fw = s.require_in(w, "target point")?;
    let Some(family) = CompetitorFamily::new(s, &[z, w], grid)? else {
        return Ok(DistanceBound::lower_only(0.0, LowerCertificate::Trivial));
    };
    let (lower, cert) = family.lower_bound(&fz.roots.roots, &fw.roots.roots)?;
    Ok(DistanceBound::lower_only(lower, cert))
}

/// Upper bound for the Lempert function from discs joining matched roots:
/// `min_σ max_j p_D(λ_j(z), λ_σ(j)(w))`.
pub fn lempert_upper_permutation(s: &SymProduct, z: &ComplexPoint, w: &ComplexPoint) -> Result<DistanceBound> {
    let (center, radius) = match s.base {
        PlanarDomain::UnitDisc => (Complex64::new(0.0, 0.0), 1.0),
        PlanarDomain::Disc { center, radius } => (center, radius),
        _ => {
            return Err(Error::unsupported(
                "permutation bound needs a disc base with closed-form hyperbolic metric",
            ))
        }
    };
    if s.n > tol::MAX_MATCH {
        return Err(Error::unsupported(format!("permutation search limited to n ≤ {}", tol::MAX_MATCH)));
    }
    let a = s.require_in(z, "source point")?.roots.roots;
    let b = s.require_in(w, "target point")?.roots.roots;
    let dist = a
        .iter()
        .map(|x| b.iter().map(|y| disc_distance(center, radius, *x, *y)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;

    let mut best: Option<(f64, Vec<usize>)> = None;
    for perm in (0..s.n).permutations(s.n) {
        let worst = perm.iter().enumerate().map(|(i, &j)| dist[i][j]).fold(0.0, f64::max);
        if best.as_ref().is_none_or(|(v, _)| worst < *v) {
            best = Some((worst, perm));
        }
    }
    let (upper, permutation) = best.expect("n ≥ 2");
    Ok(DistanceBound::upper_only(
        Some(upper),
        Some(UpperCertificate::Permutation {
            permutation,
            sigma: upper.tanh(),
        }),
    ))
}

/// Projection lower bound for the Kobayashi pseudodistance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionBound {
    pub lower: f64,
    /// Exterior root defining the hyperplane `H` projected along.
    pub witness: Complex64,
    /// Radius of the disc enclosing the projected image.
    pub radius: f64,
    pub source_image: Complex64,
    pub target_image: Complex64,
}

/// `|σ_j| ≤ C(n, j) Mʲ` on `S_n(D)`, with `M = sup |λ|` over `D̄`.
pub fn coordinate_bounds(s: &SymProduct) -> Result<Vec<f64>> {
    let m = s
        .base
        .sup_modulus()
        .ok_or_else(|| Error::unsupported("coordinate bounds need a bounded base"))?;
    Ok((1..=s.n).map(|j| binomial(s.n, j) * m.powi(j as i32)).collect())
}

/// Lower bound for `k_{S_n(D)}(z, w)` from the affine projection along
/// the separating hyperplane at `boundary_point`.
///
/// With `μ` the hyperplane's witness, `z ↦ p_z(μ)` is the coordinate of
/// the projection onto the complex line orthogonal to `H` (up to the
/// factor `|coeffs|`). Its image of `S_n(D)` lies in the disc of radius
/// `|μ|ⁿ + Σ_j C(n, j) Mʲ |μ|ⁿ⁻ʲ`, and holomorphic maps contract the
/// Kobayashi pseudodistance.
pub fn kobayashi_lower_projection(
    s: &SymProduct,
    z: &ComplexPoint,
    w: &ComplexPoint,
    boundary_point: &ComplexPoint,
) -> Result<ProjectionBound> {
    let bounds = coordinate_bounds(s)?;
    s.require_in(z, "source point")?;
    s.require_in(w, "target point")?;
    let h = separating_hyperplane(s, boundary_point)?;
    let mu = h.witness.norm();
    let radius = mu.powi(s.n as i32)
        + bounds
            .iter()
            .enumerate()
            .map(|(j, b)| b * mu.powi((s.n - j - 1) as i32))
            .sum::<f64>();
    let source_image = h.eval(z);
    let target_image = h.eval(w);
    let lower = poincare(source_image / radius, target_image / radius)?;
    Ok(ProjectionBound {
        lower,
        witness: h.witness,
        radius,
        source_image,
        target_image,
    })
}

/// `v(z) = max_j u(λ_j)` with `u` the disc exhaustion of the base.
pub fn exhaustion_value(s: &SymProduct, z: &ComplexPoint) -> Result<f64> {
    let u = neg_exhaustion(&s.base)?;
    let fiber = s.require_in(z, "point")?;
    Ok(exhaustion_of_roots(&u, &fiber.roots.roots))
}

fn exhaustion_of_roots(u: &crate::domains::Exhaustion, roots: &[Complex64]) -> f64 {
    roots.iter().map(|r| u.eval(*r)).fold(f64::NEG_INFINITY, f64::max)
}

/// Sequences `w^k`, `k = 1, 2, …`, fed to [`divergence_probe`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sequence {
    /// `w^k = (1 − 2^{−k}) · target`.
    CoordinateRadial { target: ComplexPoint },
    /// `w^k = π_n((1 − 2^{−k}) · escaping, frozen…)`.
    RootRadial { escaping: Complex64, frozen: Vec<Complex64> },
    Constant { point: ComplexPoint },
}

impl Sequence {
    pub fn term(&self, k: usize) -> Result<ComplexPoint> {
        let t = 1.0 - 0.5_f64.powi(k as i32);
        match self {
            Sequence::CoordinateRadial { target } => {
                ComplexPoint::new(target.coords().iter().map(|c| c * t).collect())
            }
            Sequence::RootRadial { escaping, frozen } => {
                let mut roots = vec![escaping * t];
                roots.extend_from_slice(frozen);
                symmetrize(&roots)
            }
            Sequence::Constant { point } => Ok(point.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceRow {
    pub k: usize,
    pub c_k: f64,
    pub crossed: Vec<bool>,
    pub certificate: LowerCertificate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub thresholds: Vec<f64>,
    pub rows: Vec<DivergenceRow>,
    /// First `k` with `c_k` above each threshold.
    pub first_crossing: Vec<Option<usize>>,
}

pub const DIVERGENCE_THRESHOLDS: [f64; 3] = [1.0, 2.0, 5.0];

impl DivergenceReport {
    /// CSV with columns `k,c_k,crossed_1,crossed_2,crossed_5`; floats carry
    /// 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,c_k");
        for t in &self.thresholds {
            out.push_str(&format!(",crossed_{t}"));
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!("{},{:.16e}", row.k, row.c_k));
            for c in &row.crossed {
                out.push_str(if *c { ",1" } else { ",0" });
            }
            out.push('\n');
        }
        out
    }
}

/// Carathéodory lower bounds `c_k` between `base_point` and `w^k`, each
/// obtained by pushing both points to `𝔾_2` with a disc automorphism that
/// vanishes at a root of `base_point` and sends the escaping root of `w^k`
/// to the positive real axis.
pub fn divergence_probe(
    s: &SymProduct,
    base_point: &ComplexPoint,
    sequence: &Sequence,
    count: usize,
    grid: usize,
) -> Result<DivergenceReport> {
    if s.n != 2 {
        return Err(Error::unsupported("divergence probe is implemented for n = 2"));
    }
    let Some((center, radius)) = s.base.ambient_disc() else {
        return Err(Error::unsupported("divergence probe needs a disc-type base"));
    };
    let g2 = SymProduct::symmetrized_polydisc(2)?;
    let base_roots = s.require_in(base_point, "base point")?.roots.roots;
    let anchor = *base_roots
        .iter()
        .min_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)))
        .expect("n = 2");
    let unrotated = Mobius::disc_to_unit(center, radius, anchor, 0.0)?;

    let mut rows = Vec::with_capacity(count);
    for k in 1..=count {
        let wk = sequence.term(k)?;
        let fiber = s.fiber(&wk)?;
        if !fiber.verdict.is_in() {
            return Err(Error::precondition(format!("sequence term k = {k} leaves S_n(D)")));
        }
        let (escaping, _) = fiber
            .roots
            .roots
            .iter()
            .zip(&fiber.verdicts)
            .max_by(|a, b| a.1.margin.total_cmp(&b.1.margin))
            .expect("n = 2");
        let image = unrotated.eval(*escaping)?;
        let rotation = if image.norm() > 0.0 { -image.arg() } else { 0.0 };
        let f = Mobius::disc_to_unit(center, radius, anchor, rotation)?;

        let pz = push_forward_roots(&f, &base_roots)?;
        let pw = push_forward_roots(&f, &fiber.roots.roots)?;
        let bound = carath_lower(&g2, &pz, &pw, grid)?;
        rows.push(DivergenceRow {
            k,
            c_k: bound.lower,
            crossed: DIVERGENCE_THRESHOLDS.iter().map(|t| bound.lower > *t).collect(),
            certificate: LowerCertificate::Composed {
                pre_map: f,
                inner: Box::new(bound.lower_cert.unwrap_or(LowerCertificate::Trivial)),
            },
        });
    }
    let first_crossing = (0..DIVERGENCE_THRESHOLDS.len())
        .map(|i| rows.iter().find(|r| r.crossed[i]).map(|r| r.k))
        .collect();
    Ok(DivergenceReport {
        thresholds: DIVERGENCE_THRESHOLDS.to_vec(),
        rows,
        first_crossing,
    })
}
