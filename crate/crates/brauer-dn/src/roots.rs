//! The type D root system.
//!
//! Positive roots of D_n live on pairs of coordinates: `e<j> - e<i>` and
//! `e<i> + e<j>` for `1 <= i < j <= n`.  The simple roots are
//! `a1 = e1+e2`, `a2 = e2-e1`, and `ak = ek-e(k-1)` for `k >= 3`; node 3 of
//! the diagram is adjacent to 1, 2 and 4.  Every positive root is determined
//! by its coordinate pair and a flag telling whether it is the sum or the
//! difference; the mate of a root is the other root on the same pair.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::word::{self, Word};
use crate::Error;

/// A positive root on coordinates `lo < hi`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Root {
    pub lo: u8,
    pub hi: u8,
    pub sum: bool,
}

impl Root {
    pub fn diff(lo: u8, hi: u8) -> Root {
        assert!(lo < hi);
        Root {
            lo,
            hi,
            sum: false,
        }
    }

    pub fn sum(lo: u8, hi: u8) -> Root {
        assert!(lo < hi);
        Root { lo, hi, sum: true }
    }

    /// The unique other positive root on the same coordinate pair.
    pub fn mate(self) -> Root {
        Root {
            sum: !self.sum,
            ..self
        }
    }

    /// Signed coordinate entry at position `c` (1-based).
    fn entry(self, c: u8) -> i32 {
        if c == self.lo {
            if self.sum {
                1
            } else {
                -1
            }
        } else if c == self.hi {
            1
        } else {
            0
        }
    }

    /// Euclidean inner product, valued in -2..=2.
    pub fn inner(self, other: Root) -> i32 {
        [self.lo, self.hi]
            .iter()
            .map(|&c| self.entry(c) * other.entry(c))
            .sum()
    }

    pub fn is_orthogonal(self, other: Root) -> bool {
        self.inner(other) == 0
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sum {
            write!(f, "e{}+e{}", self.lo, self.hi)
        } else {
            write!(f, "e{}-e{}", self.hi, self.lo)
        }
    }
}

impl FromStr for Root {
    type Err = Error;

    /// Accepts `e<j>-e<i>`, `e<i>+e<j>`, and the simple-root shorthand `a<k>`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("bad root '{s}'"));
        if let Some(k) = t.strip_prefix('a') {
            let k: u8 = k.parse().map_err(|_| bad())?;
            return simple_checked(k).ok_or_else(bad);
        }
        let (sign, parts): (bool, Vec<&str>) = if t.contains('+') {
            (true, t.split('+').collect())
        } else {
            (false, t.splitn(2, '-').collect())
        };
        if parts.len() != 2 {
            return Err(bad());
        }
        let num = |p: &str| -> Result<u8, Error> {
            p.strip_prefix('e').ok_or_else(bad)?.parse().map_err(|_| bad())
        };
        let (a, b) = (num(parts[0])?, num(parts[1])?);
        if a == b || a == 0 || b == 0 {
            return Err(bad());
        }
        Ok(if sign {
            Root::sum(a.min(b), a.max(b))
        } else {
            // written e<hi> - e<lo>
            if a < b {
                return Err(Error::Parse(format!("'{s}' is a negative root")));
            }
            Root::diff(b, a)
        })
    }
}

fn simple_checked(k: u8) -> Option<Root> {
    match k {
        1 => Some(Root::sum(1, 2)),
        2 => Some(Root::diff(1, 2)),
        3..=8 => Some(Root::diff(k - 1, k)),
        _ => None,
    }
}

/// The simple root at node `k`.
pub fn simple(k: u8) -> Root {
    simple_checked(k).expect("node index in 1..=8")
}

/// The positive roots of D_n with their index tables and word helpers.
pub struct RootSystem {
    pub n: u8,
    pub roots: Vec<Root>,
    index: HashMap<Root, u8>,
}

impl RootSystem {
    pub fn new(n: u8) -> RootSystem {
        assert!((2..=8).contains(&n));
        let mut roots = Vec::new();
        for hi in 2..=n {
            for lo in 1..hi {
                roots.push(Root::diff(lo, hi));
                roots.push(Root::sum(lo, hi));
            }
        }
        let index = roots.iter().enumerate().map(|(k, &r)| (r, k as u8)).collect();
        RootSystem { n, roots, index }
    }

    pub fn count(&self) -> usize {
        self.roots.len()
    }

    pub fn id(&self, root: Root) -> u8 {
        self.index[&root]
    }

    pub fn contains(&self, root: Root) -> bool {
        self.index.contains_key(&root)
    }

    /// Reflection `r_gamma(beta) = beta - (beta,gamma) gamma`, returned as the
    /// positive representative.
    pub fn reflect(&self, beta: Root, gamma: Root) -> Root {
        let c = beta.inner(gamma);
        if c == 0 {
            return beta;
        }
        // work in coordinates over the union of the two pairs
        let mut coords = [0i32; 9];
        for p in [beta.lo, beta.hi, gamma.lo, gamma.hi] {
            coords[p as usize] = beta.entry(p) - c * gamma.entry(p);
        }
        let nz: Vec<u8> = (1..=self.n).filter(|&p| coords[p as usize] != 0).collect();
        assert_eq!(nz.len(), 2, "reflection of a root must be a root");
        let (lo, hi) = (nz[0], nz[1]);
        let (clo, chi) = (coords[lo as usize], coords[hi as usize]);
        assert!(clo.abs() == 1 && chi.abs() == 1);
        if chi > 0 {
            if clo > 0 {
                Root::sum(lo, hi)
            } else {
                Root::diff(lo, hi)
            }
        } else {
            // negative representative: negate
            if clo > 0 {
                Root::diff(lo, hi)
            } else {
                Root::sum(lo, hi)
            }
        }
    }

    /// Coefficients of `beta` on the simple roots (index 1..=n).
    pub fn simple_coeffs(&self, beta: Root) -> [i32; 9] {
        // doubled expansion of e_k on the simple roots
        let mut twice = [0i32; 9];
        for (p, sgn) in [(beta.lo, beta.entry(beta.lo)), (beta.hi, 1)] {
            // 2*e_1 = a1 - a2; 2*e_2 = a1 + a2; 2*e_k = a1 + a2 + 2*(a3+..+ak)
            if p == 1 {
                twice[1] += sgn;
                twice[2] -= sgn;
            } else {
                twice[1] += sgn;
                twice[2] += sgn;
                for q in 3..=p {
                    twice[q as usize] += 2 * sgn;
                }
            }
        }
        let mut out = [0i32; 9];
        for k in 1..=self.n as usize {
            assert!(twice[k] % 2 == 0, "non-integral simple coefficient");
            out[k] = twice[k] / 2;
        }
        out
    }

    /// Height of a positive root: the sum of its simple coefficients.
    pub fn height(&self, beta: Root) -> i32 {
        self.simple_coeffs(beta)[1..=self.n as usize].iter().sum()
    }

    /// Nodes with nonzero simple coefficient, ascending.
    pub fn support(&self, beta: Root) -> Vec<u8> {
        let c = self.simple_coeffs(beta);
        (1..=self.n).filter(|&k| c[k as usize] != 0).collect()
    }

    /// Geodesic path between two nodes in the diagram tree, inclusive.
    pub fn diagram_path(&self, from: u8, to: u8) -> Vec<u8> {
        assert!(from >= 1 && to >= 1 && from <= self.n && to <= self.n);
        if from == to {
            return vec![from];
        }
        let chain = |u: u8| -> Vec<u8> {
            // path from u up to node n along the spine, with 1/2 hanging off 3
            let mut p = Vec::new();
            if u <= 2 {
                p.push(u);
                p.extend(3..=self.n);
            } else {
                p.extend(u..=self.n);
            }
            p
        };
        let a = chain(from);
        let b = chain(to);
        // remove the shared tail and join at the meeting node
        let mut ai = a.len();
        let mut bi = b.len();
        while ai > 0 && bi > 0 && a[ai - 1] == b[bi - 1] {
            ai -= 1;
            bi -= 1;
        }
        let mut path: Vec<u8> = a[..ai].to_vec();
        path.push(a[ai]); // meeting node (a and b agree from here on)
        let mut tail: Vec<u8> = b[..bi].to_vec();
        tail.reverse();
        path.extend(tail);
        path
    }

    /// Tree distance between nodes.
    pub fn diagram_dist(&self, a: u8, b: u8) -> usize {
        self.diagram_path(a, b).len() - 1
    }

    /// The support node nearest to `k`.
    pub fn proj(&self, k: u8, beta: Root) -> u8 {
        let supp = self.support(beta);
        *supp
            .iter()
            .min_by_key(|&&s| self.diagram_dist(k, s))
            .expect("nonempty support")
    }

    /// The chain word `e_i e_.. e_k` along the geodesic from `i` to `k`.
    pub fn e_chain(&self, i: u8, k: u8) -> Word {
        let syms: Vec<u8> = self.diagram_path(i, k).into_iter().map(word::e).collect();
        Word::from_syms(syms)
    }

    /// Canonical minimal word whose action takes `{alpha_k}` to `{beta}`
    /// (extended through the chain construction when `k` is outside the
    /// support of `beta`).
    pub fn a_word(&self, beta: Root, k: u8) -> Word {
        let supp = self.support(beta);
        if supp.contains(&k) {
            let mut syms = Vec::new();
            let mut cur = beta;
            let target = simple(k);
            // descend by height, smallest reflecting node first; each step
            // appends on the right of the already-built prefix, so the word
            // reads top down
            while cur != target {
                let mut chosen = None;
                for j in 1..=self.n {
                    let aj = simple(j);
                    if cur.inner(aj) == 1 && cur != aj {
                        let down = self.reflect(cur, aj);
                        if self.descends_to(down, k) {
                            chosen = Some((j, down));
                            break;
                        }
                    }
                }
                let (j, down) = chosen.expect("root descent must progress");
                syms.push(word::r(j));
                cur = down;
            }
            Word::from_syms(syms)
        } else {
            let j = self.proj(k, beta);
            let path = self.diagram_path(k, j);
            let kprime = path[1];
            self.a_word(beta, j).concat(&self.e_chain(j, kprime))
        }
    }

    /// Whether `gamma` can be lowered to `alpha_k` by simple reflections that
    /// drop the height by one each time.
    fn descends_to(&self, gamma: Root, k: u8) -> bool {
        if gamma == simple(k) {
            return true;
        }
        for j in 1..=self.n {
            let aj = simple(j);
            if gamma.inner(aj) == 1 && gamma != aj && self.descends_to(self.reflect(gamma, aj), k) {
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts_and_heights() {
        for n in [4u8, 5, 6] {
            let rs = RootSystem::new(n);
            assert_eq!(rs.count(), (n as usize) * (n as usize - 1));
            // highest root e_{n-1} + e_n has height 2n - 3
            let top = Root::sum(n - 1, n);
            assert_eq!(rs.height(top), 2 * n as i32 - 3);
            for k in 1..=n {
                assert_eq!(rs.height(simple(k)), 1);
            }
        }
    }

    #[test]
    fn inner_products() {
        let a1 = simple(1);
        let a2 = simple(2);
        let a3 = simple(3);
        assert_eq!(a1.inner(a1), 2);
        assert_eq!(a1.inner(a2), 0);
        assert_eq!(a1.inner(a3), -1);
        assert_eq!(a2.inner(a3), -1);
        assert_eq!(a3.inner(simple(4)), -1);
        assert_eq!(a1.inner(simple(4)), 0);
        assert_eq!(Root::diff(1, 3).inner(Root::sum(1, 3)), 0);
        assert_eq!(Root::diff(2, 4).inner(Root::diff(1, 3)), 0);
    }

    #[test]
    fn mates_are_orthogonal_involutions() {
        let rs = RootSystem::new(5);
        for &b in &rs.roots {
            assert_eq!(b.mate().mate(), b);
            assert!(b.is_orthogonal(b.mate()));
            assert_ne!(b.mate(), b);
        }
        assert_eq!(simple(1).mate(), simple(2));
    }

    #[test]
    fn reflections() {
        let rs = RootSystem::new(4);
        // r_{a3}(a4) = a3 + a4 = e4 - e2
        assert_eq!(rs.reflect(simple(4), simple(3)), Root::diff(2, 4));
        // reflecting in itself fixes the positive representative (beta -> -beta)
        assert_eq!(rs.reflect(simple(3), simple(3)), simple(3));
        // orthogonal roots are fixed
        assert_eq!(rs.reflect(simple(1), simple(2)), simple(1));
        // r_{a1}(e3-e2) = e1+e3
        assert_eq!(rs.reflect(Root::diff(2, 3), simple(1)), Root::sum(1, 3));
    }

    #[test]
    fn support_and_proj() {
        let rs = RootSystem::new(4);
        // e2+e3 = a1 + a2 + a3
        let b = Root::sum(2, 3);
        assert_eq!(rs.support(b), vec![1, 2, 3]);
        assert_eq!(rs.proj(4, b), 3);
        // e4-e3 = a4
        assert_eq!(rs.support(simple(4)), vec![4]);
        assert_eq!(rs.proj(1, simple(4)), 4);
        // e3+e4 has full support
        assert_eq!(rs.support(Root::sum(3, 4)), vec![1, 2, 3, 4]);
    }

    #[test]
    fn coefficient_identities() {
        let rs = RootSystem::new(6);
        for &b in &rs.roots {
            let c = rs.simple_coeffs(b);
            // rebuild the coordinate vector from the coefficients
            let mut coords = [0i32; 9];
            for k in 1..=6u8 {
                let a = simple(k);
                for p in 1..=6u8 {
                    coords[p as usize] += c[k as usize] * a.entry(p);
                }
            }
            for p in 1..=6u8 {
                assert_eq!(coords[p as usize], b.entry(p), "coords mismatch for {b}");
            }
        }
    }

    #[test]
    fn diagram_paths() {
        let rs = RootSystem::new(5);
        assert_eq!(rs.diagram_path(1, 2), vec![1, 3, 2]);
        assert_eq!(rs.diagram_path(2, 5), vec![2, 3, 4, 5]);
        assert_eq!(rs.diagram_path(5, 1), vec![5, 4, 3, 1]);
        assert_eq!(rs.diagram_path(4, 4), vec![4]);
        assert_eq!(rs.diagram_dist(1, 2), 2);
        assert_eq!(rs.diagram_dist(3, 3), 0);
    }

    #[test]
    fn chain_words() {
        let rs = RootSystem::new(4);
        assert_eq!(rs.e_chain(1, 2).to_string(), "e1 e3 e2");
        assert_eq!(rs.e_chain(4, 2).to_string(), "e4 e3 e2");
        assert_eq!(rs.e_chain(3, 4).to_string(), "e3 e4");
    }

    #[test]
    fn access_words() {
        let rs = RootSystem::new(4);
        // a_{alpha_j, n} = e_{j, n-1} for j < n (as words, the canonical pick)
        assert_eq!(rs.a_word(simple(1), 4).to_string(), "e1 e3");
        assert_eq!(rs.a_word(simple(3), 4).to_string(), "e3");
        assert_eq!(rs.a_word(simple(4), 4).to_string(), "1");
        // in-support descent: e4-e2 = a3+a4 reached from a4 by r3
        assert_eq!(rs.a_word(Root::diff(2, 4), 4).to_string(), "r3");
        // highest root e3+e4: a1+a2+2a3+a4, height 5, so four letters
        let w = rs.a_word(Root::sum(3, 4), 4);
        assert_eq!(w.height(), 4);
        let rs5 = RootSystem::new(5);
        assert_eq!(rs5.a_word(Root::diff(2, 5), 5).to_string(), "r3 r4");
    }

    #[test]
    fn root_parse_display() {
        for s in ["e4-e3", "e1+e2", "e2-e1", "e3+e5"] {
            let r: Root = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!("a1".parse::<Root>().unwrap(), Root::sum(1, 2));
        assert_eq!("a4".parse::<Root>().unwrap(), Root::diff(3, 4));
        assert!("e3-e4".parse::<Root>().is_err());
        assert!("e3".parse::<Root>().is_err());
    }
}
