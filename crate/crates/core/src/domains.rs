//! Planar domains `D ⊂ ℂ` and the holomorphic gadgets built on them.
//!
//! Four kinds are modelled: the unit disc, a disc, the plane minus finitely
//! many points, and a disc minus finitely many interior points. Membership
//! is exact; margins are signed Euclidean distances to `∂D`.

use itertools::Itertools;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDomain", into = "RawDomain")]
pub enum PlanarDomain {
    UnitDisc,
    Disc { center: Complex64, radius: f64 },
    ComplementFinite { punctures: Vec<Complex64> },
    DiscMinusFinite { center: Complex64, radius: f64, punctures: Vec<Complex64> },
}

/// JSON form: `{"kind", "center", "radius", "punctures"}` with fields
/// present as applicable.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawDomain {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    center: Option<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    punctures: Option<Vec<Complex64>>,
}

impl TryFrom<RawDomain> for PlanarDomain {
    type Error = Error;

    fn try_from(raw: RawDomain) -> Result<Self> {
        let missing = |field: &str| Error::precondition(format!("domain kind {:?} needs {field:?}", raw.kind));
        match raw.kind.to_ascii_lowercase().as_str() {
            "unit_disc" => Ok(PlanarDomain::UnitDisc),
            "disc" => PlanarDomain::disc(
                raw.center.ok_or_else(|| missing("center"))?,
                raw.radius.ok_or_else(|| missing("radius"))?,
            ),
            "complement_finite" => {
                PlanarDomain::complement_finite(raw.punctures.clone().ok_or_else(|| missing("punctures"))?)
            }
            "disc_minus_finite" => PlanarDomain::disc_minus_finite(
                raw.center.ok_or_else(|| missing("center"))?,
                raw.radius.ok_or_else(|| missing("radius"))?,
                raw.punctures.clone().ok_or_else(|| missing("punctures"))?,
            ),
            other => Err(Error::precondition(format!("unknown domain kind {other:?}"))),
        }
    }
}

impl From<PlanarDomain> for RawDomain {
    fn from(d: PlanarDomain) -> Self {
        match d {
            PlanarDomain::UnitDisc => RawDomain {
                kind: "unit_disc".into(),
                center: None,
                radius: None,
                punctures: None,
            },
            PlanarDomain::Disc { center, radius } => RawDomain {
                kind: "disc".into(),
                center: Some(center),
                radius: Some(radius),
                punctures: None,
            },
            PlanarDomain::ComplementFinite { punctures } => RawDomain {
                kind: "complement_finite".into(),
                center: None,
                radius: None,
                punctures: Some(punctures),
            },
            PlanarDomain::DiscMinusFinite { center, radius, punctures } => RawDomain {
                kind: "disc_minus_finite".into(),
                center: Some(center),
                radius: Some(radius),
                punctures: Some(punctures),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Membership {
    In,
    Out,
    Boundary,
}

/// Membership state with the signed distance to the boundary (negative
/// inside).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub state: Membership,
    pub margin: f64,
}

impl MembershipVerdict {
    pub fn is_in(&self) -> bool {
        self.state == Membership::In
    }
}

/// `#(ℂ∖D)`. Serializes as the integer count or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "CountJson", try_from = "CountJson")]
pub enum ComplementCardinality {
    Finite(usize),
    Infinite,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CountJson {
    Count(usize),
    Tag(String),
}

impl From<ComplementCardinality> for CountJson {
    fn from(c: ComplementCardinality) -> Self {
        match c {
            ComplementCardinality::Finite(k) => CountJson::Count(k),
            ComplementCardinality::Infinite => CountJson::Tag("inf".into()),
        }
    }
}

impl TryFrom<CountJson> for ComplementCardinality {
    type Error = Error;

    fn try_from(c: CountJson) -> Result<Self> {
        match c {
            CountJson::Count(k) => Ok(ComplementCardinality::Finite(k)),
            CountJson::Tag(t) if t == "inf" => Ok(ComplementCardinality::Infinite),
            CountJson::Tag(t) => Err(Error::precondition(format!("bad complement count {t:?}"))),
        }
    }
}

impl ComplementCardinality {
    /// `#(ℂ∖D) ≥ k`, with `INFINITE` above every integer.
    pub fn at_least(&self, k: usize) -> bool {
        match self {
            ComplementCardinality::Finite(m) => *m >= k,
            ComplementCardinality::Infinite => true,
        }
    }
}

fn check_punctures(punctures: &[Complex64]) -> Result<()> {
    if let Some(p) = punctures.iter().find(|p| !p.is_finite()) {
        return Err(Error::NonFinite(format!("puncture {p}")));
    }
    for (a, b) in punctures.iter().tuple_combinations() {
        if a == b {
            return Err(Error::precondition(format!("puncture {a} listed twice")));
        }
    }
    Ok(())
}

fn check_disc(center: Complex64, radius: f64) -> Result<()> {
    if !center.is_finite() || !radius.is_finite() {
        return Err(Error::NonFinite("disc center/radius".into()));
    }
    if radius <= 0.0 {
        return Err(Error::precondition(format!("disc radius must be positive (got {radius})")));
    }
    Ok(())
}

fn nearest_puncture(punctures: &[Complex64], lambda: Complex64) -> Option<(Complex64, f64)> {
    punctures
        .iter()
        .map(|p| (*p, (lambda - p).norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

impl PlanarDomain {
    pub fn unit_disc() -> Self {
        PlanarDomain::UnitDisc
    }

    pub fn disc(center: Complex64, radius: f64) -> Result<Self> {
        check_disc(center, radius)?;
        Ok(PlanarDomain::Disc { center, radius })
    }

    pub fn complement_finite(punctures: Vec<Complex64>) -> Result<Self> {
        check_punctures(&punctures)?;
        Ok(PlanarDomain::ComplementFinite { punctures })
    }

    pub fn disc_minus_finite(center: Complex64, radius: f64, punctures: Vec<Complex64>) -> Result<Self> {
        check_disc(center, radius)?;
        check_punctures(&punctures)?;
        if let Some(p) = punctures.iter().find(|p| (*p - center).norm() >= radius) {
            return Err(Error::precondition(format!("puncture {p} is not inside the disc")));
        }
        Ok(PlanarDomain::DiscMinusFinite { center, radius, punctures })
    }

    pub fn punctures(&self) -> &[Complex64] {
        match self {
            PlanarDomain::ComplementFinite { punctures } | PlanarDomain::DiscMinusFinite { punctures, .. } => {
                punctures
            }
            _ => &[],
        }
    }

    /// Center and radius of the disc containing `D`, for bounded kinds.
    pub fn ambient_disc(&self) -> Option<(Complex64, f64)> {
        match self {
            PlanarDomain::UnitDisc => Some((Complex64::new(0.0, 0.0), 1.0)),
            PlanarDomain::Disc { center, radius } | PlanarDomain::DiscMinusFinite { center, radius, .. } => {
                Some((*center, *radius))
            }
            PlanarDomain::ComplementFinite { .. } => None,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.ambient_disc().is_some()
    }

    /// `sup |λ|` over the closure of `D`, for bounded kinds.
    pub fn sup_modulus(&self) -> Option<f64> {
        self.ambient_disc().map(|(c, r)| c.norm() + r)
    }

    /// True when `D` lies in the closed unit disc.
    pub fn within_unit_disc(&self) -> bool {
        self.ambient_disc().is_some_and(|(c, r)| c.norm() + r <= 1.0 + tol::UNIT_CIRCLE)
    }

    /// Signed distance to `∂D`, negative inside.
    pub fn margin(&self, lambda: Complex64) -> f64 {
        let circle = self.ambient_disc().map(|(c, r)| (lambda - c).norm() - r);
        let hole = nearest_puncture(self.punctures(), lambda).map(|(_, d)| 0.0 - d);
        match (circle, hole) {
            (Some(c), Some(h)) if c < 0.0 => c.max(h),
            (Some(c), _) => c,
            (None, Some(h)) => h,
            (None, None) => f64::NEG_INFINITY,
        }
    }

    /// Exact membership test with boundary band `delta`.
    ///
    /// A point that coincides with a puncture is `OUT` (it lies in `ℂ∖D`)
    /// even though its margin is `0`.
    pub fn verdict(&self, lambda: Complex64, delta: f64) -> MembershipVerdict {
        let margin = self.margin(lambda);
        let state = if self.punctures().contains(&lambda) {
            Membership::Out
        } else if margin < -delta {
            Membership::In
        } else if margin > delta {
            Membership::Out
        } else {
            Membership::Boundary
        };
        MembershipVerdict { state, margin }
    }

    pub fn contains(&self, lambda: Complex64) -> MembershipVerdict {
        self.verdict(lambda, tol::DELTA_BOUNDARY)
    }

    pub fn complement_cardinality(&self) -> ComplementCardinality {
        match self {
            PlanarDomain::ComplementFinite { punctures } => ComplementCardinality::Finite(punctures.len()),
            _ => ComplementCardinality::Infinite,
        }
    }

    /// Closest point of `∂D` to `lambda`.
    pub fn nearest_boundary_point(&self, lambda: Complex64) -> Complex64 {
        let on_circle = self.ambient_disc().map(|(c, r)| {
            let d = lambda - c;
            let dir = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
            (c + dir * r, ((lambda - c).norm() - r).abs())
        });
        let hole = nearest_puncture(self.punctures(), lambda);
        match (on_circle, hole) {
            (Some(a), Some(b)) => {
                if b.1 < a.1 {
                    b.0
                } else {
                    a.0
                }
            }
            (Some(a), None) => a.0,
            (None, Some(b)) => b.0,
            (None, None) => lambda,
        }
    }
}

/// A holomorphic map between planar sets, evaluable where defined.
pub trait PlanarMap {
    fn eval(&self, lambda: Complex64) -> Result<Complex64>;
}

/// Linear fractional map `λ ↦ (aλ + b)/(cλ + d)`.
///
/// Degenerate coefficient sets (`ad − bc = 0`) are allowed and give
/// constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mobius {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mobius {
    pub fn identity() -> Self {
        Self::affine(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn affine(slope: Complex64, shift: Complex64) -> Self {
        Mobius {
            a: slope,
            b: shift,
            c: Complex64::new(0.0, 0.0),
            d: Complex64::new(1.0, 0.0),
        }
    }

    pub fn constant(value: Complex64) -> Self {
        Self::affine(Complex64::new(0.0, 0.0), value)
    }

    /// `λ ↦ e^{iθ}(λ − a)/(1 − āλ)` for `|a| < 1`.
    pub fn unit_disc_automorphism(zero_at: Complex64, rotation: f64) -> Result<Self> {
        if zero_at.norm() >= 1.0 {
            return Err(Error::precondition(format!("automorphism zero {zero_at} must lie in the unit disc")));
        }
        let e = Complex64::from_polar(1.0, rotation);
        Ok(Mobius {
            a: e,
            b: -e * zero_at,
            c: -zero_at.conj(),
            d: Complex64::new(1.0, 0.0),
        })
    }

    /// Automorphism of the disc `|λ − center| < radius` onto `𝔻`, sending
    /// `zero_at` to `0`.
    pub fn disc_to_unit(center: Complex64, radius: f64, zero_at: Complex64, rotation: f64) -> Result<Self> {
        let scale = Self::affine(Complex64::new(1.0 / radius, 0.0), -center / radius);
        let inner = scale.apply(zero_at);
        Ok(Self::unit_disc_automorphism(inner, rotation)?.compose(&scale))
    }

    fn apply(&self, lambda: Complex64) -> Complex64 {
        (self.a * lambda + self.b) / (self.c * lambda + self.d)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Mobius) -> Mobius {
        Mobius {
            a: self.a * inner.a + self.b * inner.c,
            b: self.a * inner.b + self.b * inner.d,
            c: self.c * inner.a + self.d * inner.c,
            d: self.c * inner.b + self.d * inner.d,
        }
    }
}

impl PlanarMap for Mobius {
    fn eval(&self, lambda: Complex64) -> Result<Complex64> {
        let den = self.c * lambda + self.d;
        if den.norm() == 0.0 {
            return Err(Error::precondition(format!("{lambda} is a pole of the map")));
        }
        let v = (self.a * lambda + self.b) / den;
        if !v.is_finite() {
            return Err(Error::Numerical(format!("map overflowed at {lambda}")));
        }
        Ok(v)
    }
}

/// `u(λ) = |λ − c|/r − 1`, a negative subharmonic exhaustion of a disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exhaustion {
    pub center: Complex64,
    pub radius: f64,
}

impl Exhaustion {
    pub fn eval(&self, lambda: Complex64) -> f64 {
        (lambda - self.center).norm() / self.radius - 1.0
    }
}

/// Tagged closed-form function, as attached to certificates and reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum FunctionHandle {
    Mobius(Mobius),
    Exhaustion(Exhaustion),
}

/// Peak function of the closed unit disc at `ζ`: `f(λ) = (1 + λζ̄)/2`.
pub fn disc_peak_function(zeta: Complex64) -> Result<Mobius> {
    if !zeta.is_finite() || (zeta.norm() - 1.0).abs() > tol::UNIT_CIRCLE {
        return Err(Error::precondition(format!("peak point {zeta} is not on the unit circle")));
    }
    Ok(Mobius::affine(zeta.conj() / 2.0, Complex64::new(0.5, 0.0)))
}

/// Bounded holomorphic `h` on `D` with `h(λ1) = 0` and `h ≠ 0` on `avoid`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparatingFunction {
    pub h: Mobius,
    /// Upper bound for `sup_D |h|`.
    pub sup_bound: f64,
}

/// Separating function for disc kinds: the ambient-disc automorphism
/// vanishing at `lambda1`. It vanishes nowhere else, so no division by
/// factors `(· − x_j)` is needed.
pub fn c_separating_function(
    domain: &PlanarDomain,
    lambda1: Complex64,
    avoid: &[Complex64],
) -> Result<SeparatingFunction> {
    let (center, radius) = match domain {
        PlanarDomain::ComplementFinite { .. } => {
            return Err(Error::unsupported("separating functions need a bounded domain kind"))
        }
        _ => domain.ambient_disc().expect("bounded kind"),
    };
    if !domain.contains(lambda1).is_in() {
        return Err(Error::precondition(format!("{lambda1} is not in D")));
    }
    if let Some(x) = avoid.iter().find(|x| !domain.contains(**x).is_in()) {
        return Err(Error::precondition(format!("avoided point {x} is not in D")));
    }
    if avoid.contains(&lambda1) {
        return Err(Error::precondition(format!("{lambda1} is both the zero and an avoided point")));
    }
    Ok(SeparatingFunction {
        h: Mobius::disc_to_unit(center, radius, lambda1, 0.0)?,
        sup_bound: 1.0,
    })
}

pub fn neg_exhaustion(domain: &PlanarDomain) -> Result<Exhaustion> {
    match domain {
        PlanarDomain::UnitDisc => Ok(Exhaustion {
            center: Complex64::new(0.0, 0.0),
            radius: 1.0,
        }),
        PlanarDomain::Disc { center, radius } => Ok(Exhaustion {
            center: *center,
            radius: *radius,
        }),
        _ => Err(Error::unsupported(
            "exhaustion functions are implemented for the unit disc and discs only",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn contains_examples() {
        let v = PlanarDomain::UnitDisc.contains(c(0.0, 0.0));
        assert_eq!(v.state, Membership::In);
        assert_eq!(v.margin, -1.0);

        let d = PlanarDomain::complement_finite(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(d.contains(c(1.0, 0.0)).state, Membership::Out);
        assert_eq!(d.contains(c(0.5, 0.0)).state, Membership::In);

        let d = PlanarDomain::disc_minus_finite(c(0.0, 0.0), 1.0, vec![c(0.5, 0.0)]).unwrap();
        assert_eq!(d.contains(c(0.5, 1e-12)).state, Membership::Boundary);
        assert_eq!(d.contains(c(0.5, 0.0)).state, Membership::Out);
        assert_eq!(d.contains(c(2.0, 0.0)).state, Membership::Out);
        assert_eq!(d.contains(c(0.0, 0.0)).state, Membership::In);
    }

    #[test]
    fn disc_margin() {
        let d = PlanarDomain::disc(c(1.0, 1.0), 2.0).unwrap();
        assert!((d.margin(c(1.0, 1.0)) + 2.0).abs() < 1e-15);
        assert!((d.margin(c(4.0, 1.0)) - 1.0).abs() < 1e-15);
        assert_eq!(d.contains(c(3.0, 1.0)).state, Membership::Boundary);
    }

    #[test]
    fn invalid_domains_rejected() {
        assert!(PlanarDomain::disc(c(0.0, 0.0), 0.0).is_err());
        assert!(PlanarDomain::complement_finite(vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
        assert!(PlanarDomain::disc_minus_finite(c(0.0, 0.0), 1.0, vec![c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn complement_cardinality_examples() {
        let d = PlanarDomain::complement_finite(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(d.complement_cardinality(), ComplementCardinality::Finite(2));
        assert_eq!(PlanarDomain::UnitDisc.complement_cardinality(), ComplementCardinality::Infinite);
        let pts: Vec<_> = (0..7).map(|k| c(k as f64, 0.0)).collect();
        let d = PlanarDomain::complement_finite(pts).unwrap();
        assert_eq!(d.complement_cardinality(), ComplementCardinality::Finite(7));
    }

    #[test]
    fn domain_json() {
        let d: PlanarDomain =
            serde_json::from_str(r#"{"kind":"complement_finite","punctures":[[0,0],[1,0]]}"#).unwrap();
        assert_eq!(d, PlanarDomain::complement_finite(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap());
        let s = serde_json::to_string(&PlanarDomain::disc(c(0.5, 0.0), 2.0).unwrap()).unwrap();
        assert_eq!(s, r#"{"kind":"disc","center":[0.5,0.0],"radius":2.0}"#);
        assert_eq!(serde_json::to_string(&PlanarDomain::UnitDisc).unwrap(), r#"{"kind":"unit_disc"}"#);
        assert!(serde_json::from_str::<PlanarDomain>(r#"{"kind":"disc","radius":1}"#).is_err());
        assert!(serde_json::from_str::<PlanarDomain>(r#"{"kind":"annulus"}"#).is_err());
    }

    #[test]
    fn peak_function_values() {
        let f = disc_peak_function(c(1.0, 0.0)).unwrap();
        assert_eq!(f.eval(c(1.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(f.eval(c(0.0, 0.0)).unwrap(), c(0.5, 0.0));
        assert!(disc_peak_function(c(0.5, 0.0)).is_err());
    }

    #[test]
    fn separating_function_examples() {
        let s = c_separating_function(&PlanarDomain::UnitDisc, c(0.0, 0.0), &[c(0.5, 0.0)]).unwrap();
        assert_eq!(s.h.eval(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!((s.h.eval(c(0.5, 0.0)).unwrap() - c(0.5, 0.0)).norm() < 1e-15);

        let s = c_separating_function(&PlanarDomain::UnitDisc, c(0.5, 0.0), &[c(0.0, 0.0)]).unwrap();
        assert!((s.h.eval(c(0.0, 0.0)).unwrap() - c(-0.5, 0.0)).norm() < 1e-15);

        assert!(c_separating_function(&PlanarDomain::UnitDisc, c(0.5, 0.0), &[c(0.5, 0.0)]).is_err());
        assert!(c_separating_function(&PlanarDomain::UnitDisc, c(1.5, 0.0), &[]).is_err());
    }

    #[test]
    fn exhaustion_values() {
        let u = neg_exhaustion(&PlanarDomain::UnitDisc).unwrap();
        assert_eq!(u.eval(c(0.0, 0.0)), -1.0);
        assert!((u.eval(c(1.0 - 1e-6, 0.0)) + 1e-6).abs() < 1e-15);
        let d = PlanarDomain::complement_finite(vec![c(0.0, 0.0)]).unwrap();
        assert!(matches!(neg_exhaustion(&d), Err(Error::Unsupported(_))));
    }

    #[test]
    fn mobius_composition_matches_sequential_evaluation() {
        let f = Mobius::unit_disc_automorphism(c(0.3, -0.2), 0.7).unwrap();
        let g = Mobius::unit_disc_automorphism(c(-0.1, 0.5), -1.1).unwrap();
        let fg = f.compose(&g);
        for x in [c(0.0, 0.0), c(0.4, 0.4), c(-0.9, 0.1)] {
            let a = fg.eval(x).unwrap();
            let b = f.eval(g.eval(x).unwrap()).unwrap();
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn nearest_boundary_point_examples() {
        assert_eq!(PlanarDomain::UnitDisc.nearest_boundary_point(c(0.0, 2.0)), c(0.0, 1.0));
        let d = PlanarDomain::complement_finite(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(d.nearest_boundary_point(c(0.9, 0.0)), c(1.0, 0.0));
    }
}
