//! Torus-knot signatures through the correction term κ(p, q).
//!
//! κ is defined for positive integers by
//!
//! 1. `p > 2q`, q odd:  `κ(p,q) = κ(p−2q, q) − 1`
//! 2. `p > 2q`, q even: `κ(p,q) = κ(p−2q, q)`
//! 3. `p = 2q`:         `κ(p,q) = −1`
//! 4. `q ≤ p < 2q`, q odd:  `κ(p,q) = −κ(q, 2q−p) − 1`
//! 5. `q ≤ p < 2q`, q even: `κ(p,q) = −κ(q, 2q−p) − 2`
//! 6. `p < q`:          `κ(p,q) = κ(q,p)`
//!
//! and extended by `κ(−p,q) = κ(p,−q) = −κ(p,q)`, `κ(p,0) = κ(0,q) = 0`.
//! At `p = q` rules 4 and 5 are equations rather than reductions; their
//! solutions are `κ(q,q) = −1/2` (q odd) and `κ(q,q) = −1` (q even).
//!
//! Then `σ(T(p,q)) = −pq/2 − κ(p,q)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_integer::Integer;
use rayon::prelude::*;
use thiserror::Error;

use crate::diagram::{gl_signature, seifert_signature, BraidWord, DiagramCode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorusError {
    #[error("torus parameters must satisfy p >= {min_p}, q >= 1 (got p={p}, q={q})")]
    Range { p: i64, q: i64, min_p: i64 },
    #[error("gcd({p},{q}) = {gcd}; only torus knots are supported")]
    NotCoprime { p: i64, q: i64, gcd: i64 },
    #[error("-pq/2 - kappa is not an integer for ({p},{q})")]
    NonIntegral { p: i64, q: i64 },
    #[error(transparent)]
    Diagram(#[from] crate::diagram::DiagramError),
}

/// An element of ½ℤ, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HalfInt {
    pub twice_value: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice_value: 0 };

    pub fn from_int(v: i64) -> Self {
        HalfInt { twice_value: 2 * v }
    }

    pub fn from_twice(t: i64) -> Self {
        HalfInt { twice_value: t }
    }

    pub fn is_integer(self) -> bool {
        self.twice_value % 2 == 0
    }

    pub fn to_integer(self) -> Option<i64> {
        self.is_integer().then_some(self.twice_value / 2)
    }

    pub fn to_f64(self) -> f64 {
        self.twice_value as f64 / 2.0
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt::from_twice(-self.twice_value)
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice_value + o.twice_value)
    }
}

impl std::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, o: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice_value - o.twice_value)
    }
}

impl std::iter::Sum for HalfInt {
    fn sum<I: Iterator<Item = HalfInt>>(it: I) -> HalfInt {
        it.fold(HalfInt::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice_value / 2)
        } else {
            write!(f, "{}/2", self.twice_value)
        }
    }
}

fn memo() -> &'static RwLock<HashMap<(u128, u128), i128>> {
    static MEMO: OnceLock<RwLock<HashMap<(u128, u128), i128>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `2κ(p,q)` for positive arguments.
fn twice_kappa_pos(p: u128, q: u128) -> i128 {
    let key = (p.max(q), p.min(q));
    if let Some(&v) = memo().read().unwrap().get(&key) {
        return v;
    }
    // invariant: answer = acc + sign · 2κ(p, q)
    let (mut p, mut q) = key;
    let mut acc: i128 = 0;
    let mut sign: i128 = 1;
    let v = loop {
        if p < q {
            std::mem::swap(&mut p, &mut q);
        }
        if p == q {
            break acc + sign * if q % 2 == 1 { -1 } else { -2 };
        }
        if p == 2 * q {
            break acc - 2 * sign;
        }
        if p > 2 * q {
            let k = (p - 1) / (2 * q);
            if q % 2 == 1 {
                acc -= 2 * sign * k as i128;
            }
            p -= 2 * q * k;
            continue;
        }
        // q < p < 2q: (q+d, q) → (q, q−d) keeps the difference d, so the
        // run of m such steps is summed in closed form
        let d = p - q;
        let m = (q - 1) / d;
        let term = |j: u128| -> i128 {
            let qj = q - j * d;
            let c = if qj % 2 == 1 { 2 } else { 4 };
            if j % 2 == 0 {
                -c
            } else {
                c
            }
        };
        let pairs = (m / 2) as i128;
        let mut sum = pairs * (term(0) + term(1));
        if m % 2 == 1 {
            sum += term(0);
        }
        acc += sign * sum;
        if m % 2 == 1 {
            sign = -sign;
        }
        q -= m * d;
        p = q + d;
    };
    memo().write().unwrap().insert(key, v);
    v
}

pub fn kappa(p: i64, q: i64) -> HalfInt {
    if p == 0 || q == 0 {
        return HalfInt::ZERO;
    }
    let t = twice_kappa_pos(p.unsigned_abs() as u128, q.unsigned_abs() as u128);
    let t = if (p < 0) != (q < 0) { -t } else { t };
    HalfInt::from_twice(t as i64)
}

/// `σ(T(p,q)) = −pq/2 − κ(p,q)` for `p, q ≥ 1`.
pub fn torus_signature(p: i64, q: i64) -> Result<i64, TorusError> {
    if p < 1 || q < 1 {
        return Err(TorusError::Range { p, q, min_p: 1 });
    }
    let twice = -(p as i128) * (q as i128) - kappa(p, q).twice_value as i128;
    if twice % 2 != 0 {
        return Err(TorusError::NonIntegral { p, q });
    }
    Ok((twice / 2) as i64)
}

/// Braid `(σ₁…σ_{p−1})^q` whose closure is `T(p,q)`.
pub fn torus_braid(p: i64, q: i64) -> Result<BraidWord, TorusError> {
    if p < 2 || q < 1 {
        return Err(TorusError::Range { p, q, min_p: 2 });
    }
    let g = p.gcd(&q);
    if g != 1 {
        return Err(TorusError::NotCoprime { p, q, gcd: g });
    }
    let row: Vec<i32> = (1..p as i32).collect();
    let letters = row.iter().copied().cycle().take(row.len() * q as usize).collect();
    Ok(BraidWord::new(p as usize, letters).expect("generators in range"))
}

/// PD code of `T(p,q)` as a closed braid, `q(p−1)` crossings.
pub fn torus_pd(p: i64, q: i64) -> Result<DiagramCode, TorusError> {
    torus_braid(p, q)?.closure().map_err(|e| match e {
        crate::diagram::BraidError::Diagram(d) => TorusError::Diagram(d),
        other => unreachable!("coprime torus braid closes to a knot: {other}"),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusMismatch {
    pub p: i64,
    pub q: i64,
    pub formula: i64,
    pub gl: i64,
    pub seifert: i64,
}

/// Compares the κ formula with both diagram pipelines for all coprime
/// `2 ≤ p < q` with `pq ≤ max_pq`. Returns the number of pairs checked and
/// the mismatches in `(p, q)` order.
pub fn oracle_check(max_pq: i64) -> Result<(usize, Vec<TorusMismatch>), TorusError> {
    let mut pairs = Vec::new();
    for p in 2..=max_pq {
        for q in p + 1..=max_pq {
            if p * q > max_pq {
                break;
            }
            if p.gcd(&q) == 1 {
                pairs.push((p, q));
            }
        }
    }
    let results: Result<Vec<Option<TorusMismatch>>, TorusError> = pairs
        .par_iter()
        .map(|&(p, q)| {
            let d = torus_pd(p, q)?;
            let formula = torus_signature(p, q)?;
            let gl = gl_signature(&d);
            let seifert = seifert_signature(&d)?;
            Ok((gl != formula || seifert != formula).then_some(TorusMismatch {
                p,
                q,
                formula,
                gl,
                seifert,
            }))
        })
        .collect();
    Ok((pairs.len(), results?.into_iter().flatten().collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(p: i64, q: i64) -> String {
        kappa(p, q).to_string()
    }

    #[test]
    fn kappa_values() {
        assert_eq!(k(0, 7), "0");
        assert_eq!(k(2, 3), "-1");
        assert_eq!(k(3, 4), "0");
        assert_eq!(k(1, 1), "-1/2");
        assert_eq!(k(-2, 3), "1");
        assert_eq!(k(3, 5), "1/2");
        assert_eq!(k(2, 1), "-1");
        assert_eq!(k(2, -1), "1");
    }

    /// The six rules applied one step at a time.
    fn naive_twice(p: i64, q: i64) -> i64 {
        if p < q {
            return naive_twice(q, p);
        }
        if p == q {
            return if q % 2 == 1 { -1 } else { -2 };
        }
        if p > 2 * q {
            let r = naive_twice(p - 2 * q, q);
            return if q % 2 == 1 { r - 2 } else { r };
        }
        if p == 2 * q {
            return -2;
        }
        let r = naive_twice(q, 2 * q - p);
        if q % 2 == 1 {
            -r - 2
        } else {
            -r - 4
        }
    }

    #[test]
    fn matches_rule_by_rule_recursion() {
        for p in 1..=120 {
            for q in 1..=120 {
                assert_eq!(kappa(p, q).twice_value, naive_twice(p, q), "({p},{q})");
            }
        }
    }

    #[test]
    fn signatures() {
        assert_eq!(torus_signature(2, 3).unwrap(), -2);
        assert_eq!(torus_signature(3, 5).unwrap(), -8);
        assert_eq!(torus_signature(3, 4).unwrap(), -6);
        for q in 1..30 {
            assert_eq!(torus_signature(1, q).unwrap(), 0);
        }
        assert!(torus_signature(0, 3).is_err());
    }

    #[test]
    fn large_arguments_do_not_overflow() {
        let v = kappa(1_000_000_007, 2);
        assert!(v.is_integer());
        assert!(torus_signature(1_000_003, 999_983).is_ok());
    }

    #[test]
    fn torus_codes() {
        assert_eq!(torus_pd(2, 3).unwrap().len(), 3);
        let d = torus_pd(3, 4).unwrap();
        assert_eq!(d.len(), 8);
        assert_eq!(gl_signature(&d), -6);
        assert!(matches!(torus_pd(4, 6), Err(TorusError::NotCoprime { gcd: 2, .. })));
        assert!(matches!(torus_pd(1, 3), Err(TorusError::Range { .. })));
    }

    #[test]
    fn small_oracle() {
        let (n, bad) = oracle_check(30).unwrap();
        assert!(n > 5);
        assert!(bad.is_empty(), "{bad:?}");
    }
}
