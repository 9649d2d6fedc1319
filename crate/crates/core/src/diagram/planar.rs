//! Index-based oriented view of a diagram: crossings with four
//! counterclockwise slots, edges with a tail slot and a head slot.
//!
//! Slot 0 is always the incoming under-strand and slot 2 the outgoing one.

use std::collections::HashMap;

use super::{CrossingSign, DiagramCode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Slot {
    pub c: usize,
    pub s: usize,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Edge {
    pub tail: Slot,
    pub head: Slot,
}

/// One step of a face boundary walk: the edge and whether the walk runs
/// along the edge orientation. The face lies to the right of the walk.
#[derive(Debug, Clone, Copy)]
pub(crate) struct FaceStep {
    pub corner: Slot,
    pub edge: usize,
    pub forward: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct Planar {
    slots: Vec<[usize; 4]>,
    edges: Vec<Edge>,
}

impl Planar {
    /// Builds the oriented structure. `code` must already be validated.
    pub fn from_code(code: &DiagramCode) -> Planar {
        let xs = code.crossings();
        let n = xs.len();
        let mut by_label: HashMap<u64, Vec<Slot>> = HashMap::new();
        for (c, x) in xs.iter().enumerate() {
            for (s, &l) in x.iter().enumerate() {
                by_label.entry(l).or_default().push(Slot { c, s });
            }
        }
        let mut edge_of_label: HashMap<u64, usize> = HashMap::new();
        let mut slots = vec![[usize::MAX; 4]; n];
        let mut edges = Vec::with_capacity(2 * n);
        if n == 0 {
            return Planar { slots, edges };
        }
        // orientation walk from the under-strand entering crossing 0
        let mut cur = Slot { c: 0, s: 0 };
        loop {
            let out = Slot {
                c: cur.c,
                s: (cur.s + 2) % 4,
            };
            let label = xs[out.c][out.s];
            if edge_of_label.contains_key(&label) {
                break;
            }
            let pair = &by_label[&label];
            let next = if pair[0] == out { pair[1] } else { pair[0] };
            let e = edges.len();
            edges.push(Edge {
                tail: out,
                head: next,
            });
            edge_of_label.insert(label, e);
            slots[out.c][out.s] = e;
            slots[next.c][next.s] = e;
            cur = next;
        }
        debug_assert!(slots.iter().flatten().all(|&e| e != usize::MAX));
        Planar { slots, edges }
    }

    pub fn crossing_count(&self) -> usize {
        self.slots.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn slot_edges(&self, c: usize) -> [usize; 4] {
        self.slots[c]
    }

    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    pub fn edge_at(&self, sl: Slot) -> usize {
        self.slots[sl.c][sl.s]
    }

    pub fn is_incoming(&self, sl: Slot) -> bool {
        self.edges[self.edge_at(sl)].head == sl
    }

    pub fn other_end(&self, sl: Slot) -> Slot {
        let e = self.edges[self.edge_at(sl)];
        if e.tail == sl {
            e.head
        } else {
            e.tail
        }
    }

    pub fn sign(&self, c: usize) -> CrossingSign {
        if self.is_incoming(Slot { c, s: 3 }) {
            CrossingSign::Positive
        } else {
            CrossingSign::Negative
        }
    }

    /// Tail and head slots of the arc carrying `label` in `code`.
    pub fn slot_pair_of_label(&self, code: &DiagramCode, label: u64) -> Option<(Slot, Slot)> {
        for (c, x) in code.crossings().iter().enumerate() {
            for (s, &l) in x.iter().enumerate() {
                if l == label {
                    let e = self.edges[self.slots[c][s]];
                    return Some((e.tail, e.head));
                }
            }
        }
        None
    }

    /// Edges in strand order, starting with the edge entering crossing 0
    /// through slot 0.
    pub fn edge_walk(&self) -> Vec<usize> {
        if self.edges.is_empty() {
            return Vec::new();
        }
        let first = self.edge_at(Slot { c: 0, s: 0 });
        let mut out = vec![first];
        let mut e = first;
        loop {
            let h = self.edges[e].head;
            let next = self.edge_at(Slot {
                c: h.c,
                s: (h.s + 2) % 4,
            });
            if next == first {
                break;
            }
            out.push(next);
            e = next;
        }
        out
    }

    /// Faces as boundary walks. Corner `(c, s)` is the region between arms
    /// `s` and `s+1` (counterclockwise); walking out along arm `s+1` keeps
    /// that region on the right.
    pub fn faces(&self) -> Vec<Vec<FaceStep>> {
        let n = self.slots.len();
        let mut seen = vec![[false; 4]; n];
        let mut faces = Vec::new();
        for c in 0..n {
            for s in 0..4 {
                if seen[c][s] {
                    continue;
                }
                let mut face = Vec::new();
                let mut cur = Slot { c, s };
                while !seen[cur.c][cur.s] {
                    seen[cur.c][cur.s] = true;
                    let arm = Slot {
                        c: cur.c,
                        s: (cur.s + 1) % 4,
                    };
                    let e = self.edge_at(arm);
                    face.push(FaceStep {
                        corner: cur,
                        edge: e,
                        forward: self.edges[e].tail == arm,
                    });
                    cur = self.other_end(arm);
                }
                faces.push(face);
            }
        }
        faces
    }

    /// Seifert circle index of every edge, and the number of circles.
    ///
    /// At each crossing the oriented smoothing joins an incoming arm to the
    /// adjacent outgoing arm.
    pub fn seifert_circles(&self) -> (Vec<usize>, usize) {
        let mut circle = vec![usize::MAX; self.edges.len()];
        let mut count = 0;
        for start in 0..self.edges.len() {
            if circle[start] != usize::MAX {
                continue;
            }
            let mut e = start;
            while circle[e] == usize::MAX {
                circle[e] = count;
                e = self.smoothing_successor(e);
            }
            count += 1;
        }
        (circle, count)
    }

    pub fn smoothing_successor(&self, e: usize) -> usize {
        let h = self.edges[e].head;
        let right = Slot {
            c: h.c,
            s: (h.s + 1) % 4,
        };
        let out = if !self.is_incoming(right) {
            right
        } else {
            Slot {
                c: h.c,
                s: (h.s + 3) % 4,
            }
        };
        self.edge_at(out)
    }

    /// Reidemeister-II move pushing a finger of edge `e1` across a face and
    /// over edge `e2`. `e1_forward`/`e2_forward` say how the face walk runs
    /// along each edge; they must agree. Adds two crossings of opposite sign.
    pub fn push_over(&mut self, e1: usize, e2: usize, forward: bool) {
        let x = self.slots.len();
        let y = x + 1;
        let e1b = self.edges.len();
        let e1c = e1b + 1;
        let e2b = e1b + 2;
        let e2c = e1b + 3;
        let (e1_head, e2_head) = (self.edges[e1].head, self.edges[e2].head);

        // e1: tail → x → y → head, e2: tail → y → x → head
        // Face on the left of both edges (walk runs backwards) is the
        // counterclockwise picture; the other case is its reflection.
        let (sx, sy) = if !forward {
            ([e2b, e1b, e2c, e1], [e2, e1b, e2b, e1c])
        } else {
            ([e2b, e1, e2c, e1b], [e2, e1c, e2b, e1b])
        };
        self.slots.push(sx);
        self.slots.push(sy);

        let slot_of = |arr: &[usize; 4], c: usize, e: usize, skip: Option<usize>| -> Slot {
            let s = (0..4)
                .find(|&s| arr[s] == e && Some(s) != skip)
                .expect("edge in new crossing");
            Slot { c, s }
        };

        // e1 now ends at x
        self.edges[e1].head = slot_of(&sx, x, e1, None);
        // e2 now ends at y
        self.edges[e2].head = slot_of(&sy, y, e2, None);
        // e1b: x → y
        let e1b_tail = slot_of(&sx, x, e1b, None);
        let e1b_head = slot_of(&sy, y, e1b, None);
        self.edges.push(Edge {
            tail: e1b_tail,
            head: e1b_head,
        });
        // e1c: y → old head of e1
        let e1c_tail = slot_of(&sy, y, e1c, None);
        self.edges.push(Edge {
            tail: e1c_tail,
            head: e1_head,
        });
        // e2b: y → x
        let e2b_tail = slot_of(&sy, y, e2b, None);
        let e2b_head = slot_of(&sx, x, e2b, None);
        self.edges.push(Edge {
            tail: e2b_tail,
            head: e2b_head,
        });
        // e2c: x → old head of e2
        let e2c_tail = slot_of(&sx, x, e2c, None);
        self.edges.push(Edge {
            tail: e2c_tail,
            head: e2_head,
        });
        self.slots[e1_head.c][e1_head.s] = e1c;
        self.slots[e2_head.c][e2_head.s] = e2c;
    }

    /// Converts back to a PD code with labels `edge index + 1`.
    #[cfg(test)]
    pub fn to_code(&self) -> Vec<[u64; 4]> {
        self.slots
            .iter()
            .map(|sl| {
                [
                    sl[0] as u64 + 1,
                    sl[1] as u64 + 1,
                    sl[2] as u64 + 1,
                    sl[3] as u64 + 1,
                ]
            })
            .collect()
    }
}
