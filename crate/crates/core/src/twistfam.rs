//! Highly twisted knot families `K(q₁,…,qₙ)` built from braids.
//!
//! A twist region is a bundle of `s` adjacent, coherently oriented braid
//! strands at some position of the base word; a disc `Cᵢ` around it meets
//! the knot `ℓᵢ = s` times. Adding `qᵢ` full twists inserts
//! `((σ_a…σ_{a+s−2})^s)^{qᵢ}` there.
//!
//! Spec file format (JSON):
//!
//! ```json
//! {
//!   "strands": 3,
//!   "braid": "1,-2,1,-2",
//!   "regions": [ { "position": 0, "start": 1, "strands": 3 } ]
//! }
//! ```
//!
//! `position` is an index into the base word (0 = before the first
//! letter), `start` the first strand (1-based).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{gl_signature, BraidError, BraidWord, DiagramCode};

#[derive(Debug, Error)]
pub enum TwistError {
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error("region {index}: {msg}")]
    Region { index: usize, msg: String },
    #[error("expected {expected} twist counts, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("linking number {ell} listed as {listed} but it is not")]
    Parity { ell: i64, listed: &'static str },
    #[error("integer overflow in prediction")]
    Overflow,
    #[error("bad twist spec: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistRegion {
    pub position: usize,
    pub start: usize,
    pub strands: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct RawSpec {
    strands: usize,
    braid: String,
    regions: Vec<TwistRegion>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistSpec {
    base: BraidWord,
    regions: Vec<TwistRegion>,
}

impl TwistSpec {
    pub fn new(base: BraidWord, regions: Vec<TwistRegion>) -> Result<Self, TwistError> {
        let k = base.strands();
        for (index, r) in regions.iter().enumerate() {
            let err = |msg: String| TwistError::Region { index, msg };
            if r.position > base.len() {
                return Err(err(format!(
                    "position {} beyond word length {}",
                    r.position,
                    base.len()
                )));
            }
            if r.strands == 0 || r.start == 0 || r.start + r.strands - 1 > k {
                return Err(err(format!(
                    "strands {}..{} not within 1..{k}",
                    r.start,
                    r.start + r.strands.max(1) - 1
                )));
            }
        }
        let components = base.closure_components();
        if components != 1 {
            return Err(BraidError::NotAKnot { components }.into());
        }
        Ok(TwistSpec { base, regions })
    }

    pub fn from_json(text: &str) -> Result<Self, TwistError> {
        let raw: RawSpec = serde_json::from_str(text)?;
        let base = BraidWord::parse(&raw.braid, Some(raw.strands))?;
        TwistSpec::new(base, raw.regions)
    }

    pub fn to_json(&self) -> String {
        let raw = RawSpec {
            strands: self.base.strands(),
            braid: self.base.to_string(),
            regions: self.regions.clone(),
        };
        serde_json::to_string_pretty(&raw).expect("plain data serializes")
    }

    pub fn base(&self) -> &BraidWord {
        &self.base
    }

    pub fn regions(&self) -> &[TwistRegion] {
        &self.regions
    }

    /// `ℓᵢ`, the number of strands through each region.
    pub fn linking_numbers(&self) -> Vec<i64> {
        self.regions.iter().map(|r| r.strands as i64).collect()
    }

    /// Base word with `q[i]` full twists inserted at region `i`.
    pub fn twisted_braid(&self, q: &[i64]) -> Result<BraidWord, TwistError> {
        if q.len() != self.regions.len() {
            return Err(TwistError::Arity {
                expected: self.regions.len(),
                got: q.len(),
            });
        }
        let mut order: Vec<usize> = (0..self.regions.len()).collect();
        // later positions first so earlier insertion points stay valid;
        // at equal positions region i ends up before region j > i
        order.sort_by_key(|&i| std::cmp::Reverse((self.regions[i].position, i)));
        let mut word = self.base.clone();
        for i in order {
            let r = self.regions[i];
            word.insert(r.position, &full_twists(r.start, r.strands, q[i]));
        }
        let components = word.closure_components();
        if components != 1 {
            return Err(BraidError::NotAKnot { components }.into());
        }
        Ok(word)
    }

    pub fn twist_insert(&self, q: &[i64]) -> Result<DiagramCode, TwistError> {
        Ok(self.twisted_braid(q)?.closure()?)
    }
}

/// `((σ_a…σ_{a+s−2})^s)^q` as letters; inverse letters for `q < 0`.
pub fn full_twists(start: usize, strands: usize, q: i64) -> Vec<i32> {
    if strands < 2 || q == 0 {
        return Vec::new();
    }
    let a = start as i32;
    let row: Vec<i32> = if q > 0 {
        (a..a + strands as i32 - 1).collect()
    } else {
        (a..a + strands as i32 - 1).rev().map(|g| -g).collect()
    };
    let reps = strands * q.unsigned_abs() as usize;
    let mut out = Vec::with_capacity(reps * row.len());
    for _ in 0..reps {
        out.extend_from_slice(&row);
    }
    out
}

fn checked_sum(ell: &[i64], q: &[i64], f: impl Fn(i128) -> i128) -> Result<i128, TwistError> {
    if ell.len() != q.len() {
        return Err(TwistError::Arity {
            expected: ell.len(),
            got: q.len(),
        });
    }
    ell.iter()
        .zip(q)
        .try_fold(0i128, |acc, (&l, &qi)| {
            f(l as i128)
                .checked_mul(qi as i128)
                .and_then(|t| acc.checked_add(t))
        })
        .ok_or(TwistError::Overflow)
}

fn narrow(v: i128) -> Result<i64, TwistError> {
    i64::try_from(v).map_err(|_| TwistError::Overflow)
}

/// `−Σ ℓᵢ² qᵢ`, the slope that `slope(K(q))` stays within bounded distance of.
pub fn predicted_slope(ell: &[i64], q: &[i64]) -> Result<i64, TwistError> {
    narrow(-checked_sum(ell, q, |l| l * l)?)
}

/// `−(½ Σ_{ℓ even} ℓᵢ² qᵢ + ½ Σ_{ℓ odd} (ℓᵢ² − 1) qᵢ)`. Both halves are
/// integers: `ℓ²` is divisible by 4 for even ℓ and `ℓ² − 1` by 8 for odd ℓ.
pub fn predicted_signature(
    ell_even: &[i64],
    q_even: &[i64],
    ell_odd: &[i64],
    q_odd: &[i64],
) -> Result<i64, TwistError> {
    if let Some(&ell) = ell_even.iter().find(|l| *l % 2 != 0) {
        return Err(TwistError::Parity { ell, listed: "even" });
    }
    if let Some(&ell) = ell_odd.iter().find(|l| *l % 2 == 0) {
        return Err(TwistError::Parity { ell, listed: "odd" });
    }
    let even = checked_sum(ell_even, q_even, |l| l * l)?;
    let odd = checked_sum(ell_odd, q_odd, |l| l * l - 1)?;
    narrow(-(even / 2 + odd / 2))
}

/// [`predicted_signature`] with the regions of `spec` split by parity.
pub fn predicted_signature_for(spec: &TwistSpec, q: &[i64]) -> Result<i64, TwistError> {
    if q.len() != spec.regions.len() {
        return Err(TwistError::Arity {
            expected: spec.regions.len(),
            got: q.len(),
        });
    }
    let (mut le, mut qe, mut lo, mut qo) = (vec![], vec![], vec![], vec![]);
    for (l, &qi) in spec.linking_numbers().into_iter().zip(q) {
        if l % 2 == 0 {
            le.push(l);
            qe.push(qi);
        } else {
            lo.push(l);
            qo.push(qi);
        }
    }
    predicted_signature(&le, &qe, &lo, &qo)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyRow {
    pub q: Vec<i64>,
    pub crossings: usize,
    pub signature: i64,
    pub predicted: i64,
    /// `signature − predicted`.
    pub residual: i64,
}

/// Signature of each `K(q)` next to its prediction, in input order.
pub fn family_report(spec: &TwistSpec, q_range: &[Vec<i64>]) -> Result<Vec<FamilyRow>, TwistError> {
    q_range
        .par_iter()
        .map(|q| {
            let d = spec.twist_insert(q)?;
            let signature = gl_signature(&d);
            let predicted = predicted_signature_for(spec, q)?;
            Ok(FamilyRow {
                q: q.clone(),
                crossings: d.len(),
                signature,
                predicted,
                residual: signature - predicted,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil_spec() -> TwistSpec {
        let base = BraidWord::parse("1,1,1", None).unwrap();
        TwistSpec::new(
            base,
            vec![TwistRegion {
                position: 0,
                start: 1,
                strands: 2,
            }],
        )
        .unwrap()
    }

    #[test]
    fn zero_twist_is_base() {
        let s = trefoil_spec();
        assert_eq!(s.twisted_braid(&[0]).unwrap(), *s.base());
        assert_eq!(s.twist_insert(&[0]).unwrap(), s.base().closure().unwrap());
    }

    #[test]
    fn one_twist_gives_cinquefoil() {
        let s = trefoil_spec();
        let d = s.twist_insert(&[1]).unwrap();
        assert_eq!(d.len(), 5);
        assert_eq!(gl_signature(&d), -4);
    }

    #[test]
    fn full_twist_lengths() {
        assert_eq!(full_twists(1, 3, 2).len(), 12);
        assert_eq!(full_twists(2, 3, -1), vec![-3, -2, -3, -2, -3, -2]);
        assert!(full_twists(1, 1, 5).is_empty());
    }

    #[test]
    fn spec_validation() {
        let base = BraidWord::parse("1,1,1", None).unwrap();
        let bad = TwistRegion {
            position: 0,
            start: 2,
            strands: 2,
        };
        assert!(matches!(
            TwistSpec::new(base.clone(), vec![bad]),
            Err(TwistError::Region { index: 0, .. })
        ));
        let link = BraidWord::parse("1,1", None).unwrap();
        assert!(TwistSpec::new(link, vec![]).is_err());
        assert!(matches!(
            trefoil_spec().twisted_braid(&[1, 2]),
            Err(TwistError::Arity { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let s = trefoil_spec();
        let t = TwistSpec::from_json(&s.to_json()).unwrap();
        assert_eq!(s, t);
        assert!(TwistSpec::from_json("{").is_err());
    }

    #[test]
    fn predictions() {
        assert_eq!(predicted_slope(&[3], &[5]).unwrap(), -45);
        assert_eq!(predicted_slope(&[2, 3], &[17, -8]).unwrap(), 4);
        assert_eq!(predicted_slope(&[2, 3], &[0, 0]).unwrap(), 0);
        assert_eq!(predicted_signature(&[], &[], &[3], &[5]).unwrap(), -20);
        assert_eq!(predicted_signature(&[2], &[17], &[3], &[-8]).unwrap(), -2);
        assert_eq!(predicted_signature(&[2], &[0], &[], &[]).unwrap(), 0);
        assert!(matches!(
            predicted_signature(&[3], &[1], &[], &[]),
            Err(TwistError::Parity { .. })
        ));
        assert!(predicted_slope(&[2], &[]).is_err());
    }

    #[test]
    fn report_in_order() {
        let s = trefoil_spec();
        let rows = family_report(&s, &[vec![2], vec![0], vec![1]]).unwrap();
        let sigs: Vec<i64> = rows.iter().map(|r| r.signature).collect();
        assert_eq!(sigs, vec![-6, -2, -4]);
        assert!(rows.iter().all(|r| r.residual == -2));
        assert!(family_report(&s, &[]).unwrap().is_empty());
    }
}
