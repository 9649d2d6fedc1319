//! Cusp-torus arithmetic for a hyperbolic knot.
//!
//! The maximal cusp torus has lattice generated by the longitude `λ`
//! (real, positive) and the meridian `μ` (Im μ > 0). The natural slope is
//! `Re(λ/μ)`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use thiserror::Error;

/// Lower bound on the volume of a hyperbolic knot complement.
pub const VOLUME_FLOOR: f64 = 2.0298;
/// Upper bound on the injectivity radius of a hyperbolic knot complement.
pub const INJ_CEILING: f64 = 1.82;
/// Meridian length range on the maximal cusp.
pub const MERIDIAN_LENGTH_RANGE: (f64, f64) = (1.0, 6.0);
/// Exceptional surgeries on hyperbolic knots have `|p| ≤ 8`.
pub const MAX_EXCEPTIONAL_DENOMINATOR: i64 = 8;
/// Comparison tolerance for measured geometry.
pub const TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CuspError {
    #[error("{field} must be finite (got {value})")]
    NotFinite { field: &'static str, value: f64 },
    #[error("{field} must be positive (got {value})")]
    NotPositive { field: &'static str, value: f64 },
    #[error("slope (p,q) = (0,0) is not a slope")]
    ZeroSlope,
    #[error("denominator p must be {requirement} (got {p})")]
    BadDenominator { p: i64, requirement: &'static str },
    #[error("p={p} and q={q} are not coprime")]
    NotCoprime { p: i64, q: i64 },
    #[error("signature is required but missing")]
    MissingSignature,
    #[error("knot signature must be even (got {0})")]
    OddSignature(i64),
    #[error("strict validation failed: {0}")]
    Strict(CuspWarning),
}

/// Soft validation failures: plausible for cusped manifolds that are not
/// knot complements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CuspWarning {
    MeridianLength(f64),
    Volume(f64),
    Injectivity(f64),
}

impl fmt::Display for CuspWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CuspWarning::MeridianLength(m) => write!(
                f,
                "|meridian| = {m} outside [{}, {}]",
                MERIDIAN_LENGTH_RANGE.0, MERIDIAN_LENGTH_RANGE.1
            ),
            CuspWarning::Volume(v) => write!(f, "volume {v} not above {VOLUME_FLOOR}"),
            CuspWarning::Injectivity(r) => {
                write!(f, "injectivity radius {r} exceeds {INJ_CEILING}")
            }
        }
    }
}

fn finite(field: &'static str, value: f64) -> Result<f64, CuspError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(CuspError::NotFinite { field, value })
    }
}

fn positive(field: &'static str, value: f64) -> Result<f64, CuspError> {
    if finite(field, value)? > 0.0 {
        Ok(value)
    } else {
        Err(CuspError::NotPositive { field, value })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CuspShape {
    longitude: f64,
    meridian: Complex64,
}

impl CuspShape {
    pub fn new(longitude: f64, meridian: Complex64) -> Result<Self, CuspError> {
        positive("longitude", longitude)?;
        finite("Re(meridian)", meridian.re)?;
        positive("Im(meridian)", meridian.im)?;
        Ok(CuspShape {
            longitude,
            meridian,
        })
    }

    pub fn longitude(&self) -> f64 {
        self.longitude
    }

    pub fn meridian(&self) -> Complex64 {
        self.meridian
    }

    pub fn warnings(&self) -> Vec<CuspWarning> {
        let m = self.meridian.norm();
        let (lo, hi) = MERIDIAN_LENGTH_RANGE;
        if m < lo - TOL || m > hi + TOL {
            vec![CuspWarning::MeridianLength(m)]
        } else {
            Vec::new()
        }
    }
}

/// Geometry of a hyperbolic knot complement, with its signature if known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnotGeom {
    pub cusp: CuspShape,
    volume: f64,
    inj: f64,
    sigma: Option<i64>,
}

impl KnotGeom {
    pub fn new(
        cusp: CuspShape,
        volume: f64,
        inj: f64,
        sigma: Option<i64>,
    ) -> Result<Self, CuspError> {
        positive("volume", volume)?;
        positive("injectivity radius", inj)?;
        if let Some(s) = sigma {
            if s % 2 != 0 {
                return Err(CuspError::OddSignature(s));
            }
        }
        Ok(KnotGeom {
            cusp,
            volume,
            inj,
            sigma,
        })
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn inj(&self) -> f64 {
        self.inj
    }

    pub fn sigma(&self) -> Option<i64> {
        self.sigma
    }

    fn require_sigma(&self) -> Result<i64, CuspError> {
        self.sigma.ok_or(CuspError::MissingSignature)
    }

    pub fn slope(&self) -> f64 {
        natural_slope(&self.cusp)
    }

    /// `vol · inj⁻³`.
    pub fn complexity(&self) -> f64 {
        self.volume / self.inj.powi(3)
    }

    pub fn warnings(&self) -> Vec<CuspWarning> {
        let mut w = self.cusp.warnings();
        if self.volume <= VOLUME_FLOOR {
            w.push(CuspWarning::Volume(self.volume));
        }
        if self.inj > INJ_CEILING + TOL {
            w.push(CuspWarning::Injectivity(self.inj));
        }
        w
    }

    /// Returns the warnings, or the first one as an error when `strict`.
    pub fn check(&self, strict: bool) -> Result<Vec<CuspWarning>, CuspError> {
        let w = self.warnings();
        match w.first() {
            Some(&first) if strict => Err(CuspError::Strict(first)),
            _ => Ok(w),
        }
    }
}

/// `Re(λ/μ) = λ·Re(μ)/|μ|²`.
pub fn natural_slope(c: &CuspShape) -> f64 {
    c.longitude * c.meridian.re / c.meridian.norm_sqr()
}

/// Length `|pλ + qμ|` of the slope `q/p` on the cusp torus.
pub fn slope_length(c: &CuspShape, p: i64, q: i64) -> Result<f64, CuspError> {
    if p == 0 && q == 0 {
        return Err(CuspError::ZeroSlope);
    }
    Ok((c.meridian * q as f64 + c.longitude * p as f64).norm())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Whether `num/den` lies in the interval, compared as `num` against
    /// `den·lo` and `den·hi` to avoid rounding the fraction.
    pub fn contains_ratio(&self, num: i64, den: i64) -> bool {
        assert!(den > 0, "denominator must be positive");
        let (n, d) = (num as f64, den as f64);
        d * self.lo <= n && n <= d * self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn center(&self) -> f64 {
        (self.lo + self.hi) / 2.0
    }
}

/// `[−slope − 6/p, −slope + 6/p]`: every exceptional slope `q/p` lies here.
pub fn exceptional_window(slope: f64, p: i64) -> Result<Interval, CuspError> {
    if p < 1 {
        return Err(CuspError::BadDenominator {
            p,
            requirement: "positive",
        });
    }
    let r = 6.0 / p as f64;
    Ok(Interval {
        lo: -slope - r,
        hi: -slope + r,
    })
}

/// Whether `K(q/p)` is certified hyperbolic: `|p| > 8`, or
/// `|q/p + 2σ| > 6/|p| + c₁·vol·inj⁻³`.
pub fn surgery_hyperbolic_certificate(
    g: &KnotGeom,
    p: i64,
    q: i64,
    c1: f64,
) -> Result<bool, CuspError> {
    let sigma = g.require_sigma()?;
    if p == 0 {
        return Err(CuspError::BadDenominator {
            p,
            requirement: "non-zero",
        });
    }
    if p.gcd(&q) != 1 {
        return Err(CuspError::NotCoprime { p, q });
    }
    if p.abs() > MAX_EXCEPTIONAL_DENOMINATOR {
        return Ok(true);
    }
    let lhs = (q as f64 / p as f64 + 2.0 * sigma as f64).abs();
    let rhs = 6.0 / p.abs() as f64 + c1 * g.complexity();
    Ok(lhs > rhs)
}

/// `|slope|/(4π) + 1/2 ≤ g(K)`.
pub fn genus_lower_bound(slope: f64) -> f64 {
    slope.abs() / (4.0 * PI) + 0.5
}

/// Smallest integer genus allowed by [`genus_lower_bound`].
pub fn genus_lower_bound_int(slope: f64) -> i64 {
    let b = genus_lower_bound(slope);
    // absorb rounding noise such as 4π/(4π) + 1/2 = 1.5000000000000002
    let r = b.round();
    if (b - r).abs() < TOL {
        r as i64
    } else {
        b.ceil() as i64
    }
}

/// `|slope|/4 − (c₁/4)·vol·inj⁻³`; may be negative.
pub fn g4_lower_bound(g: &KnotGeom, c1: f64) -> f64 {
    g.slope().abs() / 4.0 - c1 / 4.0 * g.complexity()
}

/// `|2σ − slope|`.
pub fn signature_residual(g: &KnotGeom) -> Result<f64, CuspError> {
    Ok((2.0 * g.require_sigma()? as f64 - g.slope()).abs())
}

/// `c₁(K) = |2σ − slope|·inj³/vol`.
pub fn c1_statistic(g: &KnotGeom) -> Result<f64, CuspError> {
    Ok(signature_residual(g)? / g.complexity())
}

/// `σ̂ = σ/√vol`.
pub fn normalized_signature(g: &KnotGeom) -> Result<f64, CuspError> {
    Ok(g.require_sigma()? as f64 / g.volume.sqrt())
}

/// Nearest even integer; at odd integers the one of smaller absolute value.
pub fn closest_even_integer(slope: f64) -> i64 {
    let half = slope / 2.0;
    let lo = half.floor();
    let frac = half - lo;
    let n = if (frac - 0.5).abs() < TOL / 2.0 {
        // tie: slope is (numerically) odd
        if lo.abs() < (lo + 1.0).abs() {
            lo
        } else {
            lo + 1.0
        }
    } else if frac < 0.5 {
        lo
    } else {
        lo + 1.0
    };
    2 * n as i64
}

/// `ν = λ − nμ` with `n` the closest even integer to the slope.
pub fn surface_slope(c: &CuspShape) -> (i64, Complex64) {
    let n = closest_even_integer(natural_slope(c));
    (n, Complex64::new(c.longitude, 0.0) - c.meridian * n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(l: f64, re: f64, im: f64) -> CuspShape {
        CuspShape::new(l, Complex64::new(re, im)).unwrap()
    }

    #[test]
    fn slopes() {
        assert!((natural_slope(&c(3.9279, 0.7237, 1.0160)) - 1.8267).abs() < 1e-3);
        assert!((natural_slope(&c(27.7228, -1.2838, 0.5145)) + 18.6064).abs() < 1e-3);
        assert_eq!(natural_slope(&c(5.0, 0.0, 2.0)), 0.0);
    }

    #[test]
    fn validation() {
        assert!(CuspShape::new(0.0, Complex64::new(0.0, 1.0)).is_err());
        assert!(CuspShape::new(1.0, Complex64::new(1.0, 0.0)).is_err());
        assert!(CuspShape::new(1.0, Complex64::new(f64::NAN, 1.0)).is_err());
        let s = c(2.0, 0.0, 7.0);
        assert_eq!(s.warnings(), vec![CuspWarning::MeridianLength(7.0)]);
        let g = KnotGeom::new(s, 1.0, 2.0, Some(0)).unwrap();
        assert_eq!(g.warnings().len(), 3);
        assert!(matches!(g.check(true), Err(CuspError::Strict(_))));
        assert_eq!(g.check(false).unwrap().len(), 3);
        assert!(KnotGeom::new(s, 3.0, 0.2, Some(3)).is_err());
    }

    #[test]
    fn lengths() {
        let s = c(3.9279, 0.7237, 1.0160);
        assert!((slope_length(&s, 0, 1).unwrap() - s.meridian().norm()).abs() < 1e-12);
        assert!((slope_length(&s, 1, 0).unwrap() - 3.9279).abs() < 1e-12);
        assert_eq!(slope_length(&s, 0, 0), Err(CuspError::ZeroSlope));
    }

    #[test]
    fn windows() {
        let w = exceptional_window(-18.215, 1).unwrap();
        assert!((w.lo - 12.215).abs() < 1e-12 && (w.hi - 24.215).abs() < 1e-12);
        for (n, d) in [(16, 1), (17, 1), (18, 1), (37, 2), (19, 1), (20, 1)] {
            assert!(w.contains_ratio(n, d));
        }
        let w = exceptional_window(0.0, 1).unwrap();
        assert_eq!((w.lo, w.hi), (-6.0, 6.0));
        let w = exceptional_window(-18.215, 2).unwrap();
        assert!((w.lo - 15.215).abs() < 1e-12 && (w.hi - 21.215).abs() < 1e-12);
        assert!(exceptional_window(1.0, 0).is_err());
    }

    #[test]
    fn certificate() {
        let g = KnotGeom::new(c(3.0, 0.0, 1.5), 3.0, 0.3, Some(0)).unwrap();
        assert!(surgery_hyperbolic_certificate(&g, 9, 1, 0.3).unwrap());
        assert!(!surgery_hyperbolic_certificate(&g, 1, 0, 0.3).unwrap());
        assert!(surgery_hyperbolic_certificate(&g, 0, 1, 0.3).is_err());
        assert!(surgery_hyperbolic_certificate(&g, 2, 4, 0.3).is_err());
        let nosig = KnotGeom::new(c(3.0, 0.0, 1.5), 3.0, 0.3, None).unwrap();
        assert_eq!(
            surgery_hyperbolic_certificate(&nosig, 1, 0, 0.3),
            Err(CuspError::MissingSignature)
        );
    }

    #[test]
    fn genus_bounds() {
        assert_eq!(genus_lower_bound(0.0), 0.5);
        assert_eq!(genus_lower_bound_int(0.0), 1);
        assert!((genus_lower_bound(-18.6064) - 1.98066).abs() < 1e-4);
        assert_eq!(genus_lower_bound_int(-18.6064), 2);
        assert!((genus_lower_bound(4.0 * PI) - 1.5).abs() < 1e-12);
        assert_eq!(genus_lower_bound_int(4.0 * PI), 2);
    }

    #[test]
    fn four_ball_bound() {
        let g = KnotGeom::new(c(27.7228, -1.2838, 0.5145), 14.0, 0.2, Some(-8)).unwrap();
        assert!((g4_lower_bound(&g, 0.0) - 4.6516).abs() < 1e-3);
        let t1 = g.slope().abs() / 4.0 - g4_lower_bound(&g, 0.3);
        let t2 = g.slope().abs() / 4.0 - g4_lower_bound(&g, 0.6);
        assert!((t2 - 2.0 * t1).abs() < 1e-9);
        let flat = KnotGeom::new(c(3.0, 0.0, 1.5), 3.0, 0.3, Some(0)).unwrap();
        assert!(g4_lower_bound(&flat, 0.3) <= 0.0);
    }

    #[test]
    fn statistics() {
        let flat = KnotGeom::new(c(3.0, 0.0, 1.5), 3.0, 0.3, Some(0)).unwrap();
        assert_eq!(c1_statistic(&flat).unwrap(), 0.0);
        assert_eq!(normalized_signature(&flat).unwrap(), 0.0);
        let g = KnotGeom::new(c(27.7228, -1.2838, 0.5145), 16.0, 0.2, Some(-8)).unwrap();
        assert!((signature_residual(&g).unwrap() - 2.6064).abs() < 1e-3);
        assert_eq!(normalized_signature(&g).unwrap(), -2.0);
    }

    #[test]
    fn even_rounding() {
        assert_eq!(closest_even_integer(1.8267), 2);
        assert_eq!(closest_even_integer(-18.6064), -18);
        assert_eq!(closest_even_integer(3.0), 2);
        assert_eq!(closest_even_integer(-3.0), -2);
        assert_eq!(closest_even_integer(1.0), 0);
        assert_eq!(closest_even_integer(-1.0), 0);
        assert_eq!(closest_even_integer(0.2), 0);
        assert_eq!(closest_even_integer(5.1), 6);
    }

    #[test]
    fn surface_slope_uses_even_integer() {
        let s = c(3.9279, 0.7237, 1.0160);
        let (n, nu) = surface_slope(&s);
        assert_eq!(n, 2);
        assert!((nu.re - (3.9279 - 2.0 * 0.7237)).abs() < 1e-12);
    }
}
