//! Knot diagrams in planar-diagram (PD) notation and the two signature
//! pipelines built on them.
//!
//! A crossing `X(a,b,c,d)` lists its four arc labels counterclockwise,
//! starting from the incoming under-strand, so the under-strand runs
//! `a → c`. The over-strand runs `d → b` for a positive crossing and
//! `b → d` for a negative one:
//!
//! ```text
//!            c                        c
//!            ↑                        ↑
//!      d ━━━━━━━━━▶ b           d ◀━━━━━━━━━ b
//!            ↑                        ↑
//!            a                        a
//!      positive (+1)            negative (−1)
//! ```
//!
//! (The vertical under-strand is broken where the horizontal over-strand
//! passes.)
//!
//! Signs follow the right-hand rule: the right-handed trefoil has three
//! positive crossings and signature −2.

mod braid;
mod goeritz;
mod planar;
mod seifert;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub use braid::{BraidError, BraidWord};
pub use goeritz::{checkerboard, gl_signature, CrossingType, GoeritzData};
pub use seifert::{seifert_matrix, seifert_signature, SeifertData};

pub(crate) use planar::Planar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("empty diagram code")]
    Empty,
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("arc label {label} appears {count} times (expected exactly 2)")]
    LabelMultiplicity { label: u64, count: usize },
    #[error("diagram has {components} components; a knot is required")]
    MultiComponent { components: usize },
    #[error("under-strand at crossing {crossing} runs against the strand orientation")]
    Orientation { crossing: usize },
    #[error("diagram is not planar: {faces} faces, expected {expected}")]
    NonPlanar { faces: usize, expected: usize },
    #[error("unknown arc label {0}")]
    UnknownArc(u64),
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CrossingSign {
    Positive,
    Negative,
}

impl CrossingSign {
    pub fn as_i64(self) -> i64 {
        match self {
            CrossingSign::Positive => 1,
            CrossingSign::Negative => -1,
        }
    }
}

/// Validated PD code of a single-component, planar knot diagram.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiagramCode {
    crossings: Vec<[u64; 4]>,
    signs: Vec<CrossingSign>,
}

impl DiagramCode {
    /// The crossingless unknot.
    pub fn unknot() -> Self {
        DiagramCode {
            crossings: Vec::new(),
            signs: Vec::new(),
        }
    }

    pub fn from_crossings(crossings: Vec<[u64; 4]>) -> Result<Self, DiagramError> {
        let signs = validate(&crossings)?;
        Ok(DiagramCode { crossings, signs })
    }

    pub fn crossings(&self) -> &[[u64; 4]] {
        &self.crossings
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn signs(&self) -> &[CrossingSign] {
        &self.signs
    }

    pub fn writhe(&self) -> i64 {
        self.signs.iter().map(|s| s.as_i64()).sum()
    }

    /// Same projection with every crossing switched.
    pub fn mirror(&self) -> DiagramCode {
        let crossings = self
            .crossings
            .iter()
            .zip(&self.signs)
            .map(|(&[i, j, k, l], s)| match s {
                CrossingSign::Positive => [l, i, j, k],
                CrossingSign::Negative => [j, k, l, i],
            })
            .collect();
        DiagramCode {
            crossings,
            signs: self
                .signs
                .iter()
                .map(|s| match s {
                    CrossingSign::Positive => CrossingSign::Negative,
                    CrossingSign::Negative => CrossingSign::Positive,
                })
                .collect(),
        }
    }

    /// Inserts a Reidemeister-I kink on arc `label`.
    pub fn add_kink(&self, label: u64, sign: CrossingSign) -> Result<DiagramCode, DiagramError> {
        let fresh = self.crossings.iter().flatten().copied().max().unwrap_or(0);
        let (a1, lp, a2) = (fresh + 1, fresh + 2, fresh + 3);
        let mut crossings = self.crossings.clone();
        if crossings.is_empty() {
            // the kink closes up on itself
            let x = match sign {
                CrossingSign::Positive => [a1, a1, lp, lp],
                CrossingSign::Negative => [lp, a1, a1, lp],
            };
            return DiagramCode::from_crossings(vec![x]);
        }
        let planar = Planar::from_code(self);
        let (tail, head) = planar
            .slot_pair_of_label(self, label)
            .ok_or(DiagramError::UnknownArc(label))?;
        crossings[tail.c][tail.s] = a1;
        crossings[head.c][head.s] = a2;
        crossings.push(match sign {
            CrossingSign::Positive => [a1, a2, lp, lp],
            CrossingSign::Negative => [lp, a1, a2, lp],
        });
        DiagramCode::from_crossings(crossings)
    }

    /// Relabels arcs `1, 2, …` along the strand orientation, starting from
    /// the arc entering crossing 0 as under-strand.
    pub fn relabel_consecutive(&self) -> DiagramCode {
        if self.crossings.is_empty() {
            return self.clone();
        }
        let planar = Planar::from_code(self);
        let order = planar.edge_walk();
        let mut new_label = vec![0u64; planar.edge_count()];
        for (i, &e) in order.iter().enumerate() {
            new_label[e] = i as u64 + 1;
        }
        let crossings = (0..self.crossings.len())
            .map(|c| {
                let sl = planar.slot_edges(c);
                [
                    new_label[sl[0]],
                    new_label[sl[1]],
                    new_label[sl[2]],
                    new_label[sl[3]],
                ]
            })
            .collect();
        DiagramCode {
            crossings,
            signs: self.signs.clone(),
        }
    }
}

impl fmt::Display for DiagramCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.crossings.is_empty() {
            return write!(f, "[]");
        }
        for (i, [a, b, c, d]) in self.crossings.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "X({a},{b},{c},{d})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for DiagramCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiagramCode({self})")
    }
}

impl std::str::FromStr for DiagramCode {
    type Err = DiagramError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pd(s)
    }
}

/// Parses whitespace-separated `X(a,b,c,d)` terms. The literal `[]`
/// denotes the crossingless unknot.
pub fn parse_pd(text: &str) -> Result<DiagramCode, DiagramError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(DiagramError::Empty);
    }
    if trimmed == "[]" {
        return Ok(DiagramCode::unknot());
    }
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut crossings = Vec::new();
    let syntax = |pos: usize, msg: &str| DiagramError::Syntax {
        pos,
        msg: msg.to_string(),
    };
    loop {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos == bytes.len() {
            break;
        }
        if bytes[pos] != b'X' {
            return Err(syntax(pos, "expected 'X'"));
        }
        pos += 1;
        if pos >= bytes.len() || bytes[pos] != b'(' {
            return Err(syntax(pos, "expected '('"));
        }
        pos += 1;
        let mut labels = [0u64; 4];
        for (idx, slot) in labels.iter_mut().enumerate() {
            while pos < bytes.len() && bytes[pos] == b' ' {
                pos += 1;
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if start == pos {
                return Err(syntax(pos, "expected arc label"));
            }
            *slot = text[start..pos]
                .parse()
                .map_err(|_| syntax(start, "arc label out of range"))?;
            while pos < bytes.len() && bytes[pos] == b' ' {
                pos += 1;
            }
            let want = if idx == 3 { b')' } else { b',' };
            if pos >= bytes.len() || bytes[pos] != want {
                return Err(syntax(
                    pos,
                    if idx == 3 { "expected ')'" } else { "expected ','" },
                ));
            }
            pos += 1;
        }
        crossings.push(labels);
    }
    DiagramCode::from_crossings(crossings)
}

/// Reads the `name<TAB>pdcode` fixture format. Blank lines and lines
/// starting with `#` are skipped.
pub fn parse_fixture(text: &str) -> Result<Vec<(String, DiagramCode)>, (usize, DiagramError)> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, pd) = line.split_once('\t').ok_or((
            i + 1,
            DiagramError::Syntax {
                pos: 0,
                msg: "expected name<TAB>pdcode".into(),
            },
        ))?;
        let code = parse_pd(pd).map_err(|e| (i + 1, e))?;
        out.push((name.to_string(), code));
    }
    Ok(out)
}

/// Checks label multiplicity, strand orientation, component count and
/// planarity; returns the crossing signs.
fn validate(crossings: &[[u64; 4]]) -> Result<Vec<CrossingSign>, DiagramError> {
    let n = crossings.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut where_: HashMap<u64, Vec<(usize, usize)>> = HashMap::new();
    for (c, x) in crossings.iter().enumerate() {
        for (s, &l) in x.iter().enumerate() {
            where_.entry(l).or_default().push((c, s));
        }
    }
    let mut bad: Vec<(u64, usize)> = where_
        .iter()
        .filter(|(_, v)| v.len() != 2)
        .map(|(&l, v)| (l, v.len()))
        .collect();
    bad.sort_unstable();
    if let Some(&(label, count)) = bad.first() {
        return Err(DiagramError::LabelMultiplicity { label, count });
    }
    let partner = |c: usize, s: usize| -> (usize, usize) {
        let v = &where_[&crossings[c][s]];
        if v[0] == (c, s) {
            v[1]
        } else {
            v[0]
        }
    };

    // entered[c][s]: the strand enters crossing c through slot s
    let mut entered = vec![[None::<bool>; 4]; n];
    let mut components = 0;
    for start_c in 0..n {
        for start_s in [0usize, 1] {
            if entered[start_c][start_s].is_some() {
                continue;
            }
            components += 1;
            let (mut c, mut s) = (start_c, start_s);
            loop {
                if entered[c][s].is_some() {
                    break;
                }
                entered[c][s] = Some(true);
                let out = (s + 2) % 4;
                entered[c][out] = Some(false);
                let (nc, ns) = partner(c, out);
                c = nc;
                s = ns;
            }
        }
    }
    // the walk may have entered some crossings through slot 2 or 3 when
    // slot 0/1 were reached from the other side; check orientation after
    if components > 1 {
        return Err(DiagramError::MultiComponent { components });
    }
    for (c, e) in entered.iter().enumerate() {
        if e[0] != Some(true) {
            return Err(DiagramError::Orientation { crossing: c });
        }
    }
    let signs = entered
        .iter()
        .map(|e| {
            if e[3] == Some(true) {
                CrossingSign::Positive
            } else {
                CrossingSign::Negative
            }
        })
        .collect();
    let code = DiagramCode {
        crossings: crossings.to_vec(),
        signs,
    };
    let faces = Planar::from_code(&code).faces().len();
    if faces != n + 2 {
        return Err(DiagramError::NonPlanar {
            faces,
            expected: n + 2,
        });
    }
    Ok(code.signs)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";

    #[test]
    fn parses_trefoil() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(d.len(), 3);
        // KnotTheory's 3_1 is the left-handed trefoil
        assert!(d.signs().iter().all(|&s| s == CrossingSign::Negative));
        assert_eq!(d.to_string(), TREFOIL);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_pd(""), Err(DiagramError::Empty));
        assert_eq!(parse_pd("  \n"), Err(DiagramError::Empty));
        assert!(matches!(parse_pd("X(1,2,3)"), Err(DiagramError::Syntax { .. })));
        assert!(matches!(parse_pd("Y(1,2,3,4)"), Err(DiagramError::Syntax { .. })));
        assert!(matches!(parse_pd("X(1,2,3,4"), Err(DiagramError::Syntax { .. })));
        assert!(matches!(
            parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,7)"),
            Err(DiagramError::LabelMultiplicity { label: 3, count: 1 })
        ));
    }

    #[test]
    fn hopf_link_rejected() {
        assert_eq!(
            parse_pd("X(1,3,2,4) X(3,1,4,2)"),
            Err(DiagramError::MultiComponent { components: 2 })
        );
    }

    #[test]
    fn unknot_literal() {
        let d = parse_pd("[]").unwrap();
        assert!(d.is_empty());
        assert_eq!(d.to_string(), "[]");
    }

    #[test]
    fn mirror_flips_signs_and_is_involutive() {
        let d = parse_pd(TREFOIL).unwrap();
        let m = d.mirror();
        assert!(m.signs().iter().all(|&s| s == CrossingSign::Positive));
        assert_eq!(m.mirror(), d);
    }

    #[test]
    fn kinks_and_relabel() {
        let d = parse_pd(TREFOIL).unwrap();
        let k = d.add_kink(4, CrossingSign::Positive).unwrap();
        assert_eq!(k.len(), 4);
        assert_eq!(k.writhe(), d.writhe() + 1);
        let k = k.add_kink(1, CrossingSign::Negative).unwrap();
        assert_eq!(k.writhe(), d.writhe());
        let r = k.relabel_consecutive();
        let mut labels: Vec<u64> = r.crossings().iter().flatten().copied().collect();
        labels.sort_unstable();
        labels.dedup();
        assert_eq!(labels, (1..=10).collect::<Vec<_>>());
        assert_eq!(r.signs(), k.signs());
        assert!(matches!(d.add_kink(99, CrossingSign::Positive), Err(DiagramError::UnknownArc(99))));
        let one = DiagramCode::unknot().add_kink(0, CrossingSign::Negative).unwrap();
        assert_eq!(one.len(), 1);
    }

    #[test]
    fn fixture_format() {
        let txt = "# comment\n3_1\tX(1,5,2,4) X(3,1,4,6) X(5,3,6,2)\n\n0_1\t[]\n";
        let v = parse_fixture(txt).unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].0, "3_1");
        assert!(parse_fixture("no tab here\n").is_err());
    }
}
