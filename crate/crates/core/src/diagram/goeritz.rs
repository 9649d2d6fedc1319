//! Gordon–Litherland signature from a checkerboard surface.
//!
//! Colour the faces of the diagram in two colours; the shaded faces joined
//! by half-twisted bands at the crossings form a spanning surface `F`.
//! Each crossing gets an incidence number `η = ±1` and a type:
//!
//! ```text
//!                arm 2
//!                  │
//!        corner 2  │  corner 1
//!    arm 3 ━━━━━━━━━━━━━━━━ arm 1      arms 0, 2: under-strand
//!        corner 3  │  corner 0         arms 1, 3: over-strand
//!                  │
//!                arm 0
//! ```
//!
//! Corner `s` sits between arms `s` and `s+1`. `η = −1` when corners 0
//! and 2 are shaded and `η = +1` when corners 1 and 3 are.
//!
//! A crossing is of type I when each shaded corner lies between an incoming
//! and an outgoing arm, and of type II when the shaded corners lie between
//! the two incoming arms and between the two outgoing arms.
//!
//! The Goeritz matrix is the reduced Laplacian of the unshaded faces with
//! edge weights `−η`, and
//!
//! `σ(K) = σ(G_F) − Σ_{type II} η(c)`,
//!
//! the last term being `e(F)/2`.

use num_bigint::BigInt;

use super::planar::{Planar, Slot};
use super::{CrossingSign, DiagramCode};
use crate::exactlin::{self, SymIntMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingType {
    I,
    II,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoeritzData {
    pub matrix: SymIntMatrix,
    /// `e(F)/2`, i.e. minus the η-weighted count of type-II crossings.
    pub euler_correction: i64,
    /// Per crossing: incidence number and type.
    pub crossings: Vec<(i64, CrossingType)>,
}

impl GoeritzData {
    pub fn signature(&self) -> i64 {
        exactlin::signature(&self.matrix) + self.euler_correction
    }
}

/// Goeritz data of the checkerboard surface whose shaded colour contains
/// corner 0 of crossing 0.
pub fn checkerboard(d: &DiagramCode) -> GoeritzData {
    if d.is_empty() {
        return GoeritzData {
            matrix: SymIntMatrix::zeros(0),
            euler_correction: 0,
            crossings: Vec::new(),
        };
    }
    let p = Planar::from_code(d);
    let n = p.crossing_count();
    let faces = p.faces();
    let mut face_of = vec![[usize::MAX; 4]; n];
    for (f, steps) in faces.iter().enumerate() {
        for st in steps {
            face_of[st.corner.c][st.corner.s] = f;
        }
    }

    // two-colour by propagation across crossings
    let mut shaded = vec![None::<bool>; faces.len()];
    shaded[face_of[0][0]] = Some(true);
    let mut stack = vec![face_of[0][0]];
    while let Some(f) = stack.pop() {
        let col = shaded[f].unwrap();
        for st in &faces[f] {
            let Slot { c, s } = st.corner;
            for t in [(s + 1) % 4, (s + 3) % 4] {
                let g = face_of[c][t];
                match shaded[g] {
                    None => {
                        shaded[g] = Some(!col);
                        stack.push(g);
                    }
                    Some(x) => debug_assert_eq!(x, !col, "diagram is not two-colourable"),
                }
            }
        }
    }

    let white: Vec<usize> = (0..faces.len()).filter(|&f| shaded[f] == Some(false)).collect();
    let mut index = vec![usize::MAX; faces.len()];
    for (i, &f) in white.iter().enumerate() {
        index[f] = i;
    }

    let mut lap = SymIntMatrix::zeros(white.len());
    let mut correction = 0i64;
    let mut info = Vec::with_capacity(n);
    for c in 0..n {
        let corner0_shaded = shaded[face_of[c][0]] == Some(true);
        let eta: i64 = if corner0_shaded { -1 } else { 1 };
        let positive = p.sign(c) == CrossingSign::Positive;
        // corner 0 sits between the incoming under-arm and slot 1, which is
        // the outgoing over-arm exactly when the crossing is positive
        let ty = if corner0_shaded == positive {
            CrossingType::I
        } else {
            CrossingType::II
        };
        if ty == CrossingType::II {
            correction -= eta;
        }
        info.push((eta, ty));

        let (w1, w2) = if corner0_shaded {
            (face_of[c][1], face_of[c][3])
        } else {
            (face_of[c][0], face_of[c][2])
        };
        if w1 != w2 {
            let (i, j) = (index[w1], index[w2]);
            let e = BigInt::from(eta);
            lap.add_sym(i, j, &-e.clone());
            lap.add_sym(i, i, &e);
            lap.add_sym(j, j, &e);
        }
    }
    GoeritzData {
        matrix: lap.delete(0),
        euler_correction: correction,
        crossings: info,
    }
}

/// `σ(G_F) + e(F)/2` for the canonical checkerboard surface.
pub fn gl_signature(d: &DiagramCode) -> i64 {
    checkerboard(d).signature()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    const RIGHT_TREFOIL: &str = "X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)";

    #[test]
    fn unknot_is_empty() {
        let g = checkerboard(&DiagramCode::unknot());
        assert_eq!(g.matrix.dim(), 0);
        assert_eq!(g.euler_correction, 0);
        assert_eq!(gl_signature(&DiagramCode::unknot()), 0);
    }

    #[test]
    fn trefoils() {
        let d = parse_pd(RIGHT_TREFOIL).unwrap();
        assert_eq!(gl_signature(&d), -2);
        assert_eq!(gl_signature(&d.mirror()), 2);
    }

    #[test]
    fn euler_correction_is_consistent_with_types() {
        let d = parse_pd("X(1,7,2,6) X(3,10,4,11) X(5,3,6,2) X(7,1,8,12) X(9,4,10,5) X(11,9,12,8)")
            .unwrap();
        let g = checkerboard(&d);
        let expect: i64 = g
            .crossings
            .iter()
            .filter(|(_, t)| *t == CrossingType::II)
            .map(|(e, _)| -e)
            .sum();
        assert_eq!(g.euler_correction, expect);
        assert_eq!(g.signature(), 0);
    }
}
