//! Short closed geodesics: twisting parameters, tube-torus lattices and the
//! κ-corrected slope estimate.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_integer::Integer;
use thiserror::Error;

use crate::torus::{kappa, HalfInt};

/// Default Margulis-type constant bounding the admissible ε.
pub const DEFAULT_MARGULIS: f64 = 0.775;

const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeodesicError {
    #[error("Re(complex length) must be positive (got {0})")]
    NonPositiveLength(f64),
    #[error("Im(complex length) must lie in (-pi, pi] (got {0})")]
    OutsideBand(f64),
    #[error("tube radius must be positive (got {0})")]
    NonPositiveRadius(f64),
    #[error("bad geodesic record {0:?}")]
    Syntax(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Odd,
    Even,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        })
    }
}

impl FromStr for Parity {
    type Err = GeodesicError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "odd" | "1" => Ok(Parity::Odd),
            "even" | "0" => Ok(Parity::Even),
            other => Err(GeodesicError::Syntax(other.to_string())),
        }
    }
}

fn check_length(cl: Complex64) -> Result<(), GeodesicError> {
    if !(cl.re > 0.0) || !cl.re.is_finite() {
        return Err(GeodesicError::NonPositiveLength(cl.re));
    }
    if !(cl.im > -PI && cl.im <= PI) {
        return Err(GeodesicError::OutsideBand(cl.im));
    }
    Ok(())
}

/// Complex length, parity of the linking number with the knot, and
/// optionally the radius of an embedded tube.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicRecord {
    complex_length: Complex64,
    parity: Parity,
    tube_radius: Option<f64>,
}

impl GeodesicRecord {
    pub fn new(
        complex_length: Complex64,
        parity: Parity,
        tube_radius: Option<f64>,
    ) -> Result<Self, GeodesicError> {
        check_length(complex_length)?;
        if let Some(r) = tube_radius {
            if !(r > 0.0) || !r.is_finite() {
                return Err(GeodesicError::NonPositiveRadius(r));
            }
        }
        Ok(GeodesicRecord {
            complex_length,
            parity,
            tube_radius,
        })
    }

    pub fn complex_length(&self) -> Complex64 {
        self.complex_length
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn tube_radius(&self) -> Option<f64> {
        self.tube_radius
    }
}

/// `re±imi:parity[:r]`, e.g. `0.1+2.3i:odd:0.05`.
impl FromStr for GeodesicRecord {
    type Err = GeodesicError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GeodesicError::Syntax(s.to_string());
        let mut parts = s.trim().split(':');
        let cl = Complex64::from_str(parts.next().ok_or_else(bad)?.trim()).map_err(|_| bad())?;
        let parity = parts.next().ok_or_else(bad)?.parse()?;
        let r = match parts.next() {
            Some(t) => Some(t.trim().parse::<f64>().map_err(|_| bad())?),
            None => None,
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        GeodesicRecord::new(cl, parity, r)
    }
}

impl fmt::Display for GeodesicRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cl = self.complex_length;
        let sign = if cl.im.is_sign_negative() { '-' } else { '+' };
        write!(f, "{}{}{}i:{}", cl.re, sign, cl.im.abs(), self.parity)?;
        if let Some(r) = self.tube_radius {
            write!(f, ":{r}")?;
        }
        Ok(())
    }
}

/// `(tw_p, tw_q)`: p even, q odd and non-negative, coprime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistParam {
    pub p: i64,
    pub q: i64,
}

impl TwistParam {
    pub fn is_admissible(&self) -> bool {
        self.p % 2 == 0 && self.q % 2 == 1 && self.q >= 0 && self.p.gcd(&self.q) == 1
    }

    /// `|cl·p + 2πiq|`.
    pub fn value(&self, cl: Complex64) -> f64 {
        (cl * self.p as f64 + Complex64::new(0.0, 2.0 * PI * self.q as f64)).norm()
    }

    pub fn kappa(&self) -> HalfInt {
        kappa(self.p, self.q)
    }
}

/// `true` when `a` beats `b` at complex length `cl`: strictly smaller value,
/// or equal up to rounding and lexicographically smaller.
pub fn twist_precedes(cl: Complex64, a: TwistParam, b: TwistParam) -> bool {
    let (va, vb) = (a.value(cl), b.value(cl));
    let tol = TIE_TOL * va.max(vb).max(1.0);
    if (va - vb).abs() <= tol {
        a < b
    } else {
        va < vb
    }
}

/// The admissible `(p, q)` minimising `|cl·p + 2πiq|`, ties broken
/// lexicographically.
///
/// `(0, 1)` has value 2π, and `|cl·p + 2πiq| ≥ |p|·Re(cl)`, so only
/// `|p| ≤ 2π/Re(cl)` matters. For each such p the imaginary part
/// `Im(cl)·p + 2πq` must be within the current best value of zero, which
/// leaves at most two odd q.
pub fn twisting_parameter(cl: Complex64) -> Result<TwistParam, GeodesicError> {
    check_length(cl)?;
    let mut best = TwistParam { p: 0, q: 1 };
    let mut best_val = best.value(cl);
    let p_max = (2.0 * PI / cl.re).ceil() as i64;
    let consider = |cand: TwistParam, best: &mut TwistParam, best_val: &mut f64| {
        if cand.is_admissible() && twist_precedes(cl, cand, *best) {
            *best = cand;
            *best_val = cand.value(cl);
        }
    };
    let mut a = 2;
    while a <= p_max {
        if a as f64 * cl.re > best_val * (1.0 + TIE_TOL) + TIE_TOL {
            break;
        }
        for p in [-a, a] {
            let reach = best_val * (1.0 + TIE_TOL) + TIE_TOL;
            let centre = -cl.im * p as f64 / (2.0 * PI);
            let half = reach / (2.0 * PI);
            let lo = ((centre - half).ceil() as i64).max(1);
            let hi = (centre + half).floor() as i64;
            let mut q = if lo % 2 == 0 { lo + 1 } else { lo };
            while q <= hi {
                consider(TwistParam { p, q }, &mut best, &mut best_val);
                q += 2;
            }
        }
        a += 2;
    }
    Ok(best)
}

/// Meridian and canonical longitude of the boundary of a tube of radius `r`
/// about a geodesic: `μ = 2π sinh(r)·i`, `λ = cosh(r)·Re(cl) + sinh(r)·Im(cl)·i`.
pub fn tube_torus(cl: Complex64, r: f64) -> Result<(Complex64, Complex64), GeodesicError> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(GeodesicError::NonPositiveRadius(r));
    }
    let mu = Complex64::new(0.0, 2.0 * PI * r.sinh());
    let lambda = Complex64::new(r.cosh() * cl.re, r.sinh() * cl.im);
    Ok((mu, lambda))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonWarning {
    pub epsilon: f64,
    pub margulis: f64,
}

impl fmt::Display for EpsilonWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "epsilon {} outside (0, {}); the correction estimate is not covered",
            self.epsilon, self.margulis
        )
    }
}

pub fn epsilon_warning(epsilon: f64, margulis: f64) -> Option<EpsilonWarning> {
    (!(epsilon > 0.0 && epsilon < margulis)).then_some(EpsilonWarning { epsilon, margulis })
}

/// Geodesics shorter than `ε/2` with odd linking number.
pub fn odd_geo_filter(geos: &[GeodesicRecord], epsilon: f64) -> Vec<GeodesicRecord> {
    geos.iter()
        .filter(|g| g.parity == Parity::Odd && g.complex_length.re < epsilon / 2.0)
        .copied()
        .collect()
}

/// `Σ κ(tw(γ))` over the odd short geodesics.
pub fn kappa_correction(geos: &[GeodesicRecord], epsilon: f64) -> Result<HalfInt, GeodesicError> {
    odd_geo_filter(geos, epsilon)
        .iter()
        .map(|g| twisting_parameter(g.complex_length).map(|t| t.kappa()))
        .sum()
}

/// `slope/2 − Σ κ(tw(γ))`, an estimate of σ.
pub fn corrected_slope_estimate(
    slope: f64,
    geos: &[GeodesicRecord],
    epsilon: f64,
) -> Result<f64, GeodesicError> {
    Ok(slope / 2.0 - kappa_correction(geos, epsilon)?.to_f64())
}
