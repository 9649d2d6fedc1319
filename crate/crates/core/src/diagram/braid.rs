use std::fmt;

use thiserror::Error;

use super::{DiagramCode, DiagramError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("braid needs at least one strand")]
    NoStrands,
    #[error("generator {letter} out of range for {strands} strands")]
    GeneratorOutOfRange { letter: i32, strands: usize },
    #[error("bad braid word token {0:?}")]
    Token(String),
    #[error("closure has {components} components; a knot is required")]
    NotAKnot { components: usize },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Braid word on `strands` strands; letter `i` is `σ_i`, `-i` is `σ_i⁻¹`.
///
/// `σ_i` is a positive crossing between positions `i` and `i+1` when all
/// strands run upward.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, BraidError> {
        if strands == 0 {
            return Err(BraidError::NoStrands);
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(BraidError::GeneratorOutOfRange { letter: l, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    /// Parses `"1,1,-2"`. The strand count defaults to one more than the
    /// largest generator index.
    pub fn parse(text: &str, strands: Option<usize>) -> Result<Self, BraidError> {
        let t = text.trim();
        let letters: Vec<i32> = if t.is_empty() {
            Vec::new()
        } else {
            t.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<i32>()
                        .map_err(|_| BraidError::Token(tok.to_string()))
                })
                .collect::<Result<_, _>>()?
        };
        let k = strands.unwrap_or_else(|| {
            letters.iter().map(|l| l.unsigned_abs() as usize + 1).max().unwrap_or(1)
        });
        BraidWord::new(k, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Inserts `word` before position `pos`.
    pub fn insert(&mut self, pos: usize, word: &[i32]) {
        self.letters.splice(pos..pos, word.iter().copied());
    }

    /// Image of each starting position after the whole word.
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect(); // at[pos] = strand
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            at.swap(i, i + 1);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &strand) in at.iter().enumerate() {
            perm[strand] = pos;
        }
        perm
    }

    pub fn closure_components(&self) -> usize {
        let perm = self.permutation();
        let mut seen = vec![false; self.strands];
        let mut count = 0;
        for s in 0..self.strands {
            if !seen[s] {
                count += 1;
                let mut x = s;
                while !seen[x] {
                    seen[x] = true;
                    x = perm[x];
                }
            }
        }
        count
    }

    /// PD code of the braid closure, labels consecutive along the knot.
    pub fn closure(&self) -> Result<DiagramCode, BraidError> {
        let components = self.closure_components();
        if components != 1 {
            return Err(BraidError::NotAKnot { components });
        }
        if self.strands == 1 {
            return Ok(DiagramCode::unknot());
        }
        let mut next = 1u64;
        let mut fresh = || {
            let l = next;
            next += 1;
            l
        };
        let bottom: Vec<u64> = (0..self.strands).map(|_| fresh()).collect();
        let mut cur = bottom.clone();
        let mut crossings = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            let (a_in, b_in) = (cur[i], cur[i + 1]);
            let (a_out, b_out) = (fresh(), fresh());
            // a runs bottom-left → top-right, b bottom-right → top-left
            crossings.push(if l > 0 {
                [b_in, a_out, b_out, a_in]
            } else {
                [a_in, b_in, a_out, b_out]
            });
            cur[i] = b_out;
            cur[i + 1] = a_out;
        }
        // close up: top label at each position is glued to the bottom one
        let rename: std::collections::HashMap<u64, u64> =
            cur.iter().copied().zip(bottom.iter().copied()).collect();
        for x in crossings.iter_mut() {
            for l in x.iter_mut() {
                if let Some(&b) = rename.get(l) {
                    *l = b;
                }
            }
        }
        Ok(DiagramCode::from_crossings(crossings)?.relabel_consecutive())
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::CrossingSign;

    #[test]
    fn parse_and_display() {
        let b = BraidWord::parse("1, 1,-2", None).unwrap();
        assert_eq!(b.strands(), 3);
        assert_eq!(b.to_string(), "1,1,-2");
        assert!(matches!(BraidWord::parse("1,x", None), Err(BraidError::Token(_))));
        assert!(matches!(
            BraidWord::parse("3", Some(3)),
            Err(BraidError::GeneratorOutOfRange { .. })
        ));
        assert!(BraidWord::parse("", None).unwrap().is_empty());
    }

    #[test]
    fn trefoil_closure() {
        let d = BraidWord::parse("1,1,1", None).unwrap().closure().unwrap();
        assert_eq!(d.len(), 3);
        assert!(d.signs().iter().all(|&s| s == CrossingSign::Positive));
        let d = BraidWord::parse("-1,-1,-1", None).unwrap().closure().unwrap();
        assert!(d.signs().iter().all(|&s| s == CrossingSign::Negative));
    }

    #[test]
    fn component_count() {
        assert_eq!(BraidWord::parse("1,1", None).unwrap().closure_components(), 2);
        assert!(matches!(
            BraidWord::parse("1,1", None).unwrap().closure(),
            Err(BraidError::NotAKnot { components: 2 })
        ));
        assert_eq!(BraidWord::parse("1,-2,1,-2", None).unwrap().closure_components(), 1);
        assert!(BraidWord::new(1, vec![]).unwrap().closure().unwrap().is_empty());
    }

    #[test]
    fn insertion() {
        let mut b = BraidWord::parse("1,2", None).unwrap();
        b.insert(1, &[-1, -1]);
        assert_eq!(b.letters(), &[1, -1, -1, 2]);
    }
}
