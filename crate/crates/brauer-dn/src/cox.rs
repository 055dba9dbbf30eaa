//! Elements of the residual Coxeter groups attached to orbit labels.
//!
//! Each label carries a Coxeter group `W(M_Y)`: the full type D group for
//! `Y(0)`, a direct product of a central involution with a smaller type D
//! group for `Y(t)` with `n-2t >= 2`, a single involution for the labels
//! whose diagram is just `A_1`, and a symmetric group for `Y*(t)`.  The
//! concrete models are signed permutations (even number of sign flips) and
//! plain permutations; generator `0`, where present, is the central loop
//! generator.  Node `j >= 2` of a type D group is the transposition
//! `(j-1, j)`; node `1` is the sign-flipping swap of the first two
//! coordinates.
//!
//! Words multiply like functions: in `s_a s_b`, the letter `s_b` acts first.


use std::sync::Arc;

use smallvec::SmallVec;

use crate::admissible::YLabel;
use crate::{Error, Result};

type SPermV = SmallVec<[i8; 8]>;
type PermV = SmallVec<[u8; 8]>;

/// An element of a residual group.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum CoxElem {
    /// Signed permutation with an even number of negative entries; generator
    /// nodes `1..=k`.
    SPerm(SPermV),
    /// Central involution times a signed permutation; generator nodes
    /// `{0} + 1..=k`.
    BitSPerm { bit: bool, sp: SPermV },
    /// Single involution on the named generator node.
    Bit { node: u8, on: bool },
    /// Plain permutation of `1..=m`; generator node `i` is `(i, i+1)`.
    Perm(PermV),
}

fn sperm_id(k: u8) -> SPermV {
    (1..=k as i8).collect()
}

fn perm_id(m: u8) -> PermV {
    (1..=m).collect()
}

/// The identity element for a label.
pub fn identity(label: YLabel, n: u8) -> CoxElem {
    match label {
        YLabel::Y { t: 0 } => CoxElem::SPerm(sperm_id(n)),
        YLabel::Y { t } => {
            let k = n - 2 * t;
            if k >= 2 {
                CoxElem::BitSPerm {
                    bit: false,
                    sp: sperm_id(k),
                }
            } else if k == 1 {
                CoxElem::Bit { node: 0, on: false }
            } else {
                CoxElem::Bit { node: 1, on: false }
            }
        }
        YLabel::YPrime { .. } => CoxElem::Bit { node: 1, on: false },
        YLabel::YStar { t } => CoxElem::Perm(perm_id(n - 2 * t)),
    }
}

/// Generator nodes of the label's diagram, ascending.
pub fn gen_nodes(label: YLabel, n: u8) -> Vec<u8> {
    match label {
        YLabel::Y { t: 0 } => (1..=n).collect(),
        YLabel::Y { t } => {
            let k = n - 2 * t;
            if k >= 2 {
                (0..=k).collect()
            } else if k == 1 {
                vec![0]
            } else {
                vec![1]
            }
        }
        YLabel::YPrime { .. } => vec![1],
        YLabel::YStar { t } => (1..n - 2 * t).collect(),
    }
}

/// Adjacency in the diagram `M_Y`; node 0 is always isolated.
pub fn nodes_adjacent(label: YLabel, a: u8, b: u8) -> bool {
    if a == 0 || b == 0 {
        return false;
    }
    match label {
        YLabel::Y { .. } => crate::word::adjacent(a, b),
        YLabel::YStar { .. } => a.abs_diff(b) == 1,
        YLabel::YPrime { .. } => false,
    }
}

fn sperm_gen(k: u8, node: u8) -> SPermV {
    let mut v = sperm_id(k);
    if node == 1 {
        v[0] = -2;
        v[1] = -1;
    } else {
        let j = node as usize;
        v[j - 2] = node as i8;
        v[j - 1] = node as i8 - 1;
    }
    v
}

/// The generator at a node of the label's diagram.
pub fn generator(label: YLabel, n: u8, node: u8) -> CoxElem {
    debug_assert!(gen_nodes(label, n).contains(&node), "{label} has no s{node}");
    match identity(label, n) {
        CoxElem::SPerm(_) => CoxElem::SPerm(sperm_gen(n, node)),
        CoxElem::BitSPerm { sp, .. } => {
            let k = sp.len() as u8;
            if node == 0 {
                CoxElem::BitSPerm { bit: true, sp }
            } else {
                CoxElem::BitSPerm {
                    bit: false,
                    sp: sperm_gen(k, node),
                }
            }
        }
        CoxElem::Bit { node: nd, .. } => CoxElem::Bit { node: nd, on: true },
        CoxElem::Perm(p) => {
            let mut v = p;
            v.swap(node as usize - 1, node as usize);
            CoxElem::Perm(v)
        }
    }
}

fn sperm_mul(a: &SPermV, b: &SPermV) -> SPermV {
    // (a b)(p) = a(b(p)), signs multiply
    b.iter()
        .map(|&v| {
            let target = a[v.unsigned_abs() as usize - 1];
            if v < 0 {
                -target
            } else {
                target
            }
        })
        .collect()
}

fn sperm_inv(a: &SPermV) -> SPermV {
    let mut out = sperm_id(a.len() as u8);
    for (p, &v) in a.iter().enumerate() {
        let q = v.unsigned_abs() as usize - 1;
        out[q] = if v < 0 { -(p as i8 + 1) } else { p as i8 + 1 };
    }
    out
}

impl CoxElem {
    pub fn is_identity(&self) -> bool {
        match self {
            CoxElem::SPerm(sp) => sp.iter().enumerate().all(|(p, &v)| v == p as i8 + 1),
            CoxElem::BitSPerm { bit, sp } => {
                !bit && sp.iter().enumerate().all(|(p, &v)| v == p as i8 + 1)
            }
            CoxElem::Bit { on, .. } => !on,
            CoxElem::Perm(p) => p.iter().enumerate().all(|(q, &v)| v == q as u8 + 1),
        }
    }

    /// Product; `other` acts first.
    pub fn mul(&self, other: &CoxElem) -> CoxElem {
        match (self, other) {
            (CoxElem::SPerm(a), CoxElem::SPerm(b)) => CoxElem::SPerm(sperm_mul(a, b)),
            (
                CoxElem::BitSPerm { bit: ba, sp: a },
                CoxElem::BitSPerm { bit: bb, sp: b },
            ) => CoxElem::BitSPerm {
                bit: ba ^ bb,
                sp: sperm_mul(a, b),
            },
            (CoxElem::Bit { node: na, on: a }, CoxElem::Bit { node: nb, on: b }) => {
                assert_eq!(na, nb, "mixed single-generator groups");
                CoxElem::Bit {
                    node: *na,
                    on: a ^ b,
                }
            }
            (CoxElem::Perm(a), CoxElem::Perm(b)) => {
                CoxElem::Perm(b.iter().map(|&v| a[v as usize - 1]).collect())
            }
            _ => panic!("elements of different residual groups"),
        }
    }

    pub fn inv(&self) -> CoxElem {
        match self {
            CoxElem::SPerm(a) => CoxElem::SPerm(sperm_inv(a)),
            CoxElem::BitSPerm { bit, sp } => CoxElem::BitSPerm {
                bit: *bit,
                sp: sperm_inv(sp),
            },
            CoxElem::Bit { .. } => self.clone(),
            CoxElem::Perm(a) => {
                let mut out = perm_id(a.len() as u8);
                for (p, &v) in a.iter().enumerate() {
                    out[v as usize - 1] = p as u8 + 1;
                }
                CoxElem::Perm(out)
            }
        }
    }

    /// Whether left multiplication by the generator at `node` shortens the
    /// element.
    pub fn left_descent(&self, node: u8) -> bool {
        match self {
            CoxElem::SPerm(sp) => sperm_left_descent(sp, node),
            CoxElem::BitSPerm { bit, sp } => {
                if node == 0 {
                    *bit
                } else {
                    sperm_left_descent(sp, node)
                }
            }
            CoxElem::Bit { node: nd, on } => {
                debug_assert_eq!(node, *nd);
                *on
            }
            CoxElem::Perm(p) => {
                // s_node swaps the values node, node+1
                let pos = |v: u8| p.iter().position(|&x| x == v).unwrap();
                pos(node) > pos(node + 1)
            }
        }
    }

    /// The lexicographically least reduced word, as generator nodes: at each
    /// step the smallest left descent is split off.
    pub fn canonical_word(&self, label: YLabel, n: u8) -> Vec<u8> {
        let nodes = gen_nodes(label, n);
        let mut cur = self.clone();
        let mut out = Vec::new();
        while !cur.is_identity() {
            let g = *nodes
                .iter()
                .find(|&&g| cur.left_descent(g))
                .expect("non-identity element has a descent");
            out.push(g);
            cur = generator(label, n, g).mul(&cur);
        }
        out
    }

    pub fn length(&self, label: YLabel, n: u8) -> usize {
        self.canonical_word(label, n).len()
    }
}

/// Sign of the higher coordinate of `w^-1(alpha_node)` decides the descent.
fn sperm_left_descent(sp: &SPermV, node: u8) -> bool {
    let inv = sperm_inv(sp);
    let img = |c: u8| inv[c as usize - 1]; // signed coordinate of w^-1(eps_c)
    let (a, b) = match node {
        // alpha_1 = eps_1 + eps_2
        1 => (img(1), img(2)),
        // alpha_2 = eps_2 - eps_1; alpha_j = eps_j - eps_{j-1}
        j => (img(j), -img(j - 1)),
    };
    // v = a + b with distinct coordinate supports
    debug_assert_ne!(a.abs(), b.abs());
    if a.abs() > b.abs() {
        a < 0
    } else {
        b < 0
    }
}

/// Folds an `s`-word (generator nodes, leftmost acts last) into an element.
pub fn eval_nodes(label: YLabel, n: u8, word: &[u8]) -> CoxElem {
    word.iter().rev().fold(identity(label, n), |acc, &g| {
        generator(label, n, g).mul(&acc)
    })
}

/// Renders an element as its canonical word, `1` for the identity.
pub fn display_word(elem: &CoxElem, label: YLabel, n: u8) -> String {
    let w = elem.canonical_word(label, n);
    if w.is_empty() {
        "1".to_string()
    } else {
        w.iter()
            .map(|g| format!("s{g}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Parses `s<i>` words (or `1`) back into an element.
pub fn parse_word(label: YLabel, n: u8, s: &str) -> Result<CoxElem> {
    let s = s.trim();
    if s.is_empty() || s == "1" {
        return Ok(identity(label, n));
    }
    let nodes = gen_nodes(label, n);
    let mut word = Vec::new();
    for tok in s.split_whitespace() {
        let g: u8 = tok
            .strip_prefix('s')
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad residual word token '{tok}'")))?;
        if !nodes.contains(&g) {
            return Err(Error::Parse(format!("{label} has no generator s{g}")));
        }
        word.push(g);
    }
    Ok(eval_nodes(label, n, &word))
}

/// Every element of the label's group, by breadth-first closure.
pub fn elements(label: YLabel, n: u8) -> Vec<CoxElem> {
    elements_with_length(label, n)
        .iter()
        .map(|(e, _)| e.clone())
        .collect()
}

/// Every element paired with its length, cached per group.  The closure
/// walks the Cayley graph outward shell by shell, and for a Coxeter
/// system the shell depth is exactly the length, so no reduced words
/// need building.
pub fn elements_with_length(label: YLabel, n: u8) -> Arc<Vec<(CoxElem, usize)>> {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<(YLabel, u8), Arc<Vec<(CoxElem, usize)>>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&(label, n)) {
        return v.clone();
    }
    use std::collections::HashSet;
    let id = identity(label, n);
    let gens: Vec<CoxElem> = gen_nodes(label, n)
        .into_iter()
        .map(|g| generator(label, n, g))
        .collect();
    let mut seen: HashSet<CoxElem> = [id.clone()].into();
    let mut queue = vec![(id, 0usize)];
    let mut k = 0;
    while k < queue.len() {
        let (cur, d) = queue[k].clone();
        k += 1;
        for g in &gens {
            let next = g.mul(&cur);
            if seen.insert(next.clone()) {
                queue.push((next, d + 1));
            }
        }
    }
    debug_assert!(queue
        .iter()
        .take(200)
        .all(|(e, d)| e.length(label, n) == *d));
    let out = Arc::new(queue);
    cache.lock().unwrap().insert((label, n), out.clone());
    out
}
