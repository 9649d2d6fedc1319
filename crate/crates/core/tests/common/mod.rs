#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use knotslope::diagram::BraidWord;
use knotslope::exactlin::{InertiaTriple, SymIntMatrix};

pub const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap()
}

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(FIXTURES).join(name)
}

/// Random braid whose closure is a knot, with at most `max_len` letters.
/// Random letters first; then generators joining different cycles of the
/// permutation are appended until it is a single cycle.
pub fn random_knot_braid<R: Rng>(rng: &mut R, max_strands: usize, max_len: usize) -> BraidWord {
    let strands = rng.gen_range(2..=max_strands);
    let budget = max_len - (strands - 1);
    let n = rng.gen_range(0..=budget);
    let mut letters: Vec<i32> = (0..n)
        .map(|_| {
            let g = rng.gen_range(1..strands as i32);
            if rng.gen_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect();
    loop {
        let b = BraidWord::new(strands, letters.clone()).unwrap();
        if b.closure_components() == 1 {
            return b;
        }
        let perm = b.permutation();
        let mut cycle = vec![usize::MAX; strands];
        let mut id = 0;
        for s in 0..strands {
            if cycle[s] == usize::MAX {
                let mut x = s;
                while cycle[x] == usize::MAX {
                    cycle[x] = id;
                    x = perm[x];
                }
                id += 1;
            }
        }
        // position i holds the strand that started at perm⁻¹(i)
        let mut at = vec![0; strands];
        for (s, &p) in perm.iter().enumerate() {
            at[p] = s;
        }
        let i = (0..strands - 1)
            .find(|&i| cycle[at[i]] != cycle[at[i + 1]])
            .unwrap();
        let g = i as i32 + 1;
        letters.push(if rng.gen_bool(0.5) { g } else { -g });
    }
}

type Poly = Vec<BigRational>; // coefficients, lowest degree first

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Characteristic polynomial det(xI − A) by Faddeev–LeVerrier.
pub fn char_poly(m: &SymIntMatrix) -> Poly {
    let n = m.dim();
    let a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| BigRational::from(m.get(i, j).clone())).collect())
        .collect();
    let mul = |x: &Vec<Vec<BigRational>>, y: &Vec<Vec<BigRational>>| {
        let mut z = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for k in 0..n {
                if x[i][k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    z[i][j] += &x[i][k] * &y[k][j];
                }
            }
        }
        z
    };
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut mk = vec![vec![BigRational::zero(); n]; n]; // M_0 = 0
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{n−k+1} I
        let mut next = mul(&a, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        mk = next;
        let am = mul(&a, &mk);
        let tr: BigRational = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs[n - k] = -tr / BigRational::from(BigInt::from(k));
    }
    coeffs
}

fn rem(a: &Poly, b: &Poly) -> Poly {
    let mut r = trim(a.clone());
    let b = trim(b.clone());
    let lead = b.last().unwrap().clone();
    while r.len() >= b.len() && !r.is_empty() {
        let f = r.last().unwrap() / &lead;
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        r = trim(r);
    }
    r
}

fn derivative(p: &Poly) -> Poly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from(BigInt::from(i)))
            .collect(),
    )
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (trim(a.clone()), trim(b.clone()));
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    x
}

fn sign_at_zero_right(p: &Poly) -> i32 {
    // sign of p(0⁺)
    for c in p {
        if !c.is_zero() {
            return if c.is_positive() { 1 } else { -1 };
        }
    }
    0
}

fn sign_at_infinity(p: &Poly) -> i32 {
    match p.last() {
        Some(c) if c.is_positive() => 1,
        Some(c) if c.is_negative() => -1,
        _ => 0,
    }
}

fn variations(signs: &[i32]) -> usize {
    let nz: Vec<i32> = signs.iter().copied().filter(|&s| s != 0).collect();
    nz.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct roots in (0, ∞) by Sturm's theorem.
fn distinct_positive_roots(p: &Poly) -> usize {
    let p = trim(p.clone());
    if p.len() <= 1 {
        return 0;
    }
    let mut seq = vec![p.clone(), derivative(&p)];
    loop {
        let r = rem(&seq[seq.len() - 2], &seq[seq.len() - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    let at0: Vec<i32> = seq.iter().map(sign_at_zero_right).collect();
    let atinf: Vec<i32> = seq.iter().map(sign_at_infinity).collect();
    variations(&at0) - variations(&atinf)
}

/// Positive roots counted with multiplicity: Σ_k distinct roots of g_k,
/// where g_0 = p and g_{k+1} = gcd(g_k, g_k′).
fn positive_roots(p: &Poly) -> usize {
    let mut g = trim(p.clone());
    let mut total = 0;
    while g.len() > 1 {
        total += distinct_positive_roots(&g);
        g = gcd(&g, &derivative(&g));
    }
    total
}

/// Inertia from the characteristic polynomial alone.
pub fn sturm_inertia(m: &SymIntMatrix) -> InertiaTriple {
    let p = char_poly(m);
    let n_zero = p.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let reduced: Poly = p[n_zero..].to_vec();
    let mirrored: Poly = reduced
        .iter()
        .enumerate()
        .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
        .collect();
    InertiaTriple {
        n_pos: positive_roots(&reduced),
        n_neg: positive_roots(&mirrored),
        n_zero,
    }
}
