//! Seifert matrix of a knot diagram.
//!
//! The diagram is first isotoped into closed-braid form with Vogel's
//! moves: while some face has two boundary edges from different Seifert
//! circles running the same way around it, push one edge over the other
//! (a Reidemeister-II move). Afterwards the Seifert circles are coherently
//! nested, the Seifert surface is a stack of discs joined by one band per
//! crossing, and `V[i][j] = lk(bᵢ, bⱼ⁺)` has a closed form (Collins) in
//! terms of the braid word. The homology basis consists of the loops
//! through two consecutive bands between the same pair of discs, i.e. the
//! cycles of the disc–band graph closed by consecutive bands.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::planar::Planar;
use super::{BraidWord, CrossingSign, DiagramCode, DiagramError};
use crate::exactlin::{self, SymIntMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertData {
    /// `V`, square, not symmetric in general.
    pub matrix: Vec<Vec<BigInt>>,
    /// Closed-braid form of the diagram that the surface was built on.
    pub braid: BraidWord,
    /// Reidemeister-II moves applied to reach braid form.
    pub vogel_moves: usize,
}

impl SeifertData {
    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    /// `V + Vᵀ`.
    pub fn symmetrized(&self) -> SymIntMatrix {
        SymIntMatrix::symmetrize(&self.matrix).expect("square by construction")
    }

    pub fn signature(&self) -> i64 {
        exactlin::signature(&self.symmetrized())
    }
}

pub fn seifert_matrix(d: &DiagramCode) -> Result<SeifertData, DiagramError> {
    if d.is_empty() {
        return Ok(SeifertData {
            matrix: Vec::new(),
            braid: BraidWord::new(1, Vec::new()).expect("one strand"),
            vogel_moves: 0,
        });
    }
    let mut p = Planar::from_code(d);
    let moves = vogel(&mut p)?;
    let braid = braid_word(&p)?;
    Ok(SeifertData {
        matrix: collins_matrix(&braid),
        braid,
        vogel_moves: moves,
    })
}

pub fn seifert_signature(d: &DiagramCode) -> Result<i64, DiagramError> {
    Ok(seifert_matrix(d)?.signature())
}

fn vogel(p: &mut Planar) -> Result<usize, DiagramError> {
    let n0 = p.crossing_count();
    let cap = 4 * n0 * n0 + 16;
    let mut moves = 0;
    loop {
        let (circle, _) = p.seifert_circles();
        let faces = p.faces();
        let mut found = None;
        'search: for face in &faces {
            for (i, a) in face.iter().enumerate() {
                for b in &face[i + 1..] {
                    if a.forward == b.forward && circle[a.edge] != circle[b.edge] {
                        found = Some((a.edge, b.edge, a.forward));
                        break 'search;
                    }
                }
            }
        }
        match found {
            None => return Ok(moves),
            Some((e1, e2, fwd)) => {
                p.push_over(e1, e2, fwd);
                moves += 1;
                if moves > cap {
                    return Err(DiagramError::Internal(format!(
                        "Vogel moves did not terminate after {cap} steps"
                    )));
                }
            }
        }
    }
}

/// Reads the braid word off a diagram whose Seifert circles are coherently
/// nested.
fn braid_word(p: &Planar) -> Result<BraidWord, DiagramError> {
    let internal = |m: &str| DiagramError::Internal(m.to_string());
    let (circle, count) = p.seifert_circles();
    let faces = p.faces();

    // for each face: (circle walked forward, circle walked backward)
    let mut sides = Vec::with_capacity(faces.len());
    let mut next = vec![None::<usize>; count];
    let mut prev = vec![None::<usize>; count];
    for face in &faces {
        let fwd = face.iter().find(|s| s.forward).map(|s| circle[s.edge]);
        let bwd = face.iter().find(|s| !s.forward).map(|s| circle[s.edge]);
        if let (Some(a), Some(b)) = (fwd, bwd) {
            if a == b {
                return Err(internal("face bounded by a single circle in both directions"));
            }
            if next[a].is_some_and(|x| x != b) || prev[b].is_some_and(|x| x != a) {
                return Err(internal("Seifert circles are not nested in a chain"));
            }
            next[a] = Some(b);
            prev[b] = Some(a);
        }
        sides.push((fwd, bwd));
    }
    let start = (0..count)
        .find(|&c| prev[c].is_none())
        .ok_or_else(|| internal("no innermost Seifert circle"))?;
    let mut chain = vec![start];
    while let Some(nx) = next[*chain.last().unwrap()] {
        chain.push(nx);
        if chain.len() > count {
            return Err(internal("cyclic Seifert circle chain"));
        }
    }
    if chain.len() != count {
        return Err(internal("Seifert circles do not form a single chain"));
    }
    let mut pos = vec![0usize; count];
    for (i, &c) in chain.iter().enumerate() {
        pos[c] = i;
    }

    // generator of each crossing
    let n = p.crossing_count();
    let mut gen = vec![0i32; n];
    for (c, g) in gen.iter_mut().enumerate() {
        let e = p.slot_edges(c);
        // the two incoming arms lie on different circles
        let over_in = if p.sign(c) == CrossingSign::Positive { 3 } else { 1 };
        let a = pos[circle[e[0]]];
        let b = pos[circle[e[over_in]]];
        if a.abs_diff(b) != 1 {
            return Err(internal("crossing between non-adjacent Seifert circles"));
        }
        let idx = a.min(b) as i32 + 1;
        *g = match p.sign(c) {
            CrossingSign::Positive => idx,
            CrossingSign::Negative => -idx,
        };
    }

    // cut edges: a path of faces from inside the first circle outward
    let mut cut = vec![usize::MAX; count];
    let mut face_idx = sides
        .iter()
        .position(|&(f, b)| f == Some(chain[0]) && b.is_some())
        .ok_or_else(|| internal("no face between the first two circles"))?;
    cut[chain[0]] = faces[face_idx]
        .iter()
        .find(|s| s.forward)
        .map(|s| s.edge)
        .unwrap();
    for k in 1..count {
        let e = faces[face_idx]
            .iter()
            .find(|s| !s.forward && circle[s.edge] == chain[k])
            .map(|s| s.edge)
            .ok_or_else(|| internal("broken cut path"))?;
        cut[chain[k]] = e;
        if k + 1 < count {
            face_idx = faces
                .iter()
                .position(|f| f.iter().any(|s| s.forward && s.edge == e))
                .ok_or_else(|| internal("edge without a right-hand face"))?;
        }
    }

    // order constraints along every circle, starting after its cut edge
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for &start_edge in &cut {
        let mut e = start_edge;
        let mut last: Option<usize> = None;
        loop {
            let c = p.edge(e).head.c;
            if let Some(l) = last {
                succ[l].push(c);
                indeg[c] += 1;
            }
            last = Some(c);
            e = p.smoothing_successor(e);
            if e == start_edge {
                break;
            }
        }
    }
    let mut heap: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&c| indeg[c] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(c)) = heap.pop() {
        order.push(c);
        for &s in &succ[c] {
            indeg[s] -= 1;
            if indeg[s] == 0 {
                heap.push(Reverse(s));
            }
        }
    }
    if order.len() != n {
        return Err(internal("crossing order along Seifert circles is cyclic"));
    }
    BraidWord::new(count, order.iter().map(|&c| gen[c]).collect())
        .map_err(|e| internal(&e.to_string()))
}

/// Collins' Seifert matrix of a braid closure.
///
/// Between consecutive occurrences of `σ_i^{±1}` at word positions `a < b`
/// there is a generator `g = (i, a, b)`. Then
/// * `V[g][g] = −1` if both bounding crossings are positive, `+1` if both
///   are negative, else 0;
/// * for consecutive generators `g, h` on the same strand sharing crossing
///   `b`: `V[h][g] = 1` if that crossing is positive, else `V[g][h] = −1`;
/// * for `g = (i, a, b)` and `h = (i+1, c, d)`: `V[h][g] = 1` when
///   `c < a < d < b` and `V[h][g] = −1` when `a < c < b < d`.
pub(crate) fn collins_matrix(braid: &BraidWord) -> Vec<Vec<BigInt>> {
    let strands = braid.strands();
    // per generator index: (position, positive?)
    let mut occ: Vec<Vec<(usize, bool)>> = vec![Vec::new(); strands];
    for (p, &l) in braid.letters().iter().enumerate() {
        occ[l.unsigned_abs() as usize].push((p, l > 0));
    }
    // generators: (strand, a, b, pos_a, pos_b)
    let mut gens: Vec<Vec<usize>> = vec![Vec::new(); strands];
    let mut data: Vec<(usize, usize, usize, bool, bool)> = Vec::new();
    for (i, o) in occ.iter().enumerate() {
        for w in o.windows(2) {
            gens[i].push(data.len());
            data.push((i, w[0].0, w[1].0, w[0].1, w[1].1));
        }
    }
    let m = data.len();
    let mut v = vec![vec![BigInt::zero(); m]; m];
    for (g, &(_, _, _, pa, pb)) in data.iter().enumerate() {
        if pa == pb {
            v[g][g] = BigInt::from(if pa { -1 } else { 1 });
        }
    }
    for list in &gens {
        for w in list.windows(2) {
            let (g, h) = (w[0], w[1]);
            if data[g].4 {
                v[h][g] = BigInt::from(1);
            } else {
                v[g][h] = BigInt::from(-1);
            }
        }
    }
    for i in 1..strands.saturating_sub(1) {
        for &g in &gens[i] {
            let (_, a, b, _, _) = data[g];
            for &h in &gens[i + 1] {
                let (_, c, d, _, _) = data[h];
                if c < a && a < d && d < b {
                    v[h][g] = BigInt::from(1);
                } else if a < c && c < b && b < d {
                    v[h][g] = BigInt::from(-1);
                }
            }
        }
    }
    v
}
