//! Generator words and elementary rewrite steps.
//!
//! A word is a sequence of generator symbols `r1..rn`, `e1..en` together with
//! an integer power of the central parameter `d`.  Symbols are packed into a
//! `u8`: `r_i` is `i-1`, `e_i` is `8 + i-1`, which keeps every symbol in four
//! bits for ranks up to 8.
//!
//! The seventeen elementary rewrite rules come in two families.  `H` rules
//! preserve the number of `r` symbols (the height) and may be applied in both
//! directions; `R` rules strictly decrease the height and are only applied
//! left to right.  The single square rule that touches `d` is `HSee`
//! (`e_i e_i = d e_i`), accounted for by the word's `delta` field.  Rules are
//! named by a scheme `<family><shape><symbols>`: `S` square, `C` commuting,
//! `N` adjacent (near), `T` triple.

use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::Error;

pub type Syms = SmallVec<[u8; 22]>;

/// Symbol code for `r_i` (`i` is 1-based).
pub fn r(i: u8) -> u8 {
    debug_assert!((1..=8).contains(&i));
    i - 1
}

/// Symbol code for `e_i`.
pub fn e(i: u8) -> u8 {
    debug_assert!((1..=8).contains(&i));
    8 + i - 1
}

pub fn is_e(sym: u8) -> bool {
    sym >= 8
}

pub fn is_r(sym: u8) -> bool {
    sym < 8
}

/// Node index (1-based) of a symbol.
pub fn idx(sym: u8) -> u8 {
    (sym & 7) + 1
}

/// Adjacency in the type D diagram: 1~3, 2~3, and i~i+1 for i >= 3.
pub fn adjacent(a: u8, b: u8) -> bool {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    if lo == 0 || lo == hi {
        return false;
    }
    if lo <= 2 {
        hi == 3
    } else {
        hi == lo + 1
    }
}

fn sym_string(sym: u8) -> String {
    if is_e(sym) {
        format!("e{}", idx(sym))
    } else {
        format!("r{}", idx(sym))
    }
}

/// A word in the generators with a power of the central parameter.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word {
    pub syms: Syms,
    pub delta: i32,
}

impl Word {
    pub fn new(syms: impl Into<Syms>, delta: i32) -> Self {
        Word {
            syms: syms.into(),
            delta,
        }
    }

    pub fn from_syms(syms: impl Into<Syms>) -> Self {
        Self::new(syms, 0)
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn len(&self) -> usize {
        self.syms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syms.is_empty()
    }

    /// Number of `r` symbols; invariant under `H` rules, strictly decreased
    /// by `R` rules.
    pub fn height(&self) -> usize {
        self.syms.iter().filter(|&&s| is_r(s)).count()
    }

    /// The image under the order-reversing anti-automorphism: symbols
    /// reversed, parameter unchanged.
    pub fn op(&self) -> Word {
        let mut syms = self.syms.clone();
        syms.reverse();
        Word {
            syms,
            delta: self.delta,
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut syms = self.syms.clone();
        syms.extend_from_slice(&other.syms);
        Word {
            syms,
            delta: self.delta + other.delta,
        }
    }

    /// Largest node index used, or 0 for a bare-delta word.
    pub fn max_index(&self) -> u8 {
        self.syms.iter().map(|&s| idx(s)).max().unwrap_or(0)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syms.is_empty() && self.delta == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for &s in &self.syms {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{}", sym_string(s))?;
            first = false;
        }
        if self.delta != 0 {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "d^{}", self.delta)?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Grammar: whitespace-separated tokens `r<i>`, `e<i>`, `g<i>` (alias of
    /// `r<i>` for BMW input), `d`, `d^<k>`, and `1` for the empty word.
    fn from_str(s: &str) -> Result<Self, Error> {
        let mut syms = Syms::new();
        let mut delta = 0i32;
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let bad = || Error::Parse(format!("bad word token '{tok}'"));
            if let Some(rest) = tok.strip_prefix('d') {
                let k = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^').ok_or_else(bad)?.parse::<i32>().map_err(|_| bad())?
                };
                delta += k;
                continue;
            }
            let (head, tail) = tok.split_at(1);
            let i: u8 = tail.parse().map_err(|_| bad())?;
            if !(1..=8).contains(&i) {
                return Err(Error::Parse(format!("index out of range in '{tok}'")));
            }
            match head {
                "r" | "g" => syms.push(r(i)),
                "e" => syms.push(e(i)),
                _ => return Err(bad()),
            }
        }
        Ok(Word { syms, delta })
    }
}

// ---------------------------------------------------------------------------
// Elementary rewrite steps
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Rule {
    RSrr,
    RSer,
    RSre,
    HSee,
    HCrr,
    HCer,
    HCee,
    HNrrr,
    HNrer,
    RNrre,
    RNerr,
    HNree,
    RNere,
    HNeer,
    HNeee,
    HTeere,
    RTerre,
}

impl Rule {
    /// `R` rules strictly decrease height and are applied left to right only.
    pub fn is_strict(self) -> bool {
        matches!(
            self,
            Rule::RSrr | Rule::RSer | Rule::RSre | Rule::RNrre | Rule::RNerr | Rule::RNere | Rule::RTerre
        )
    }
}

/// One rule application at a fixed position.  `i`, `j`, `k` are the node
/// bindings in the roles the rule's name suggests; `k` is used only by the
/// two four-symbol rules.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ElementaryStep {
    pub rule: Rule,
    pub pos: u16,
    pub fwd: bool,
    pub i: u8,
    pub j: u8,
    pub k: u8,
}

/// Left side, right side and delta change of a rule instance read in the
/// given direction.
pub fn step_patterns(rule: Rule, fwd: bool, i: u8, j: u8, k: u8) -> (Syms, Syms, i32) {
    let (lhs, rhs, d): (Vec<u8>, Vec<u8>, i32) = match rule {
        Rule::RSrr => (vec![r(i), r(i)], vec![], 0),
        Rule::RSer => (vec![e(i), r(i)], vec![e(i)], 0),
        Rule::RSre => (vec![r(i), e(i)], vec![e(i)], 0),
        Rule::HSee => (vec![e(i), e(i)], vec![e(i)], 1),
        Rule::HCrr => (vec![r(i), r(j)], vec![r(j), r(i)], 0),
        Rule::HCer => (vec![e(i), r(j)], vec![r(j), e(i)], 0),
        Rule::HCee => (vec![e(i), e(j)], vec![e(j), e(i)], 0),
        Rule::HNrrr => (vec![r(i), r(j), r(i)], vec![r(j), r(i), r(j)], 0),
        Rule::HNrer => (vec![r(j), e(i), r(j)], vec![r(i), e(j), r(i)], 0),
        Rule::RNrre => (vec![r(j), r(i), e(j)], vec![e(i), e(j)], 0),
        Rule::RNerr => (vec![e(i), r(j), r(i)], vec![e(i), e(j)], 0),
        Rule::HNree => (vec![r(j), e(i), e(j)], vec![r(i), e(j)], 0),
        Rule::RNere => (vec![e(i), r(j), e(i)], vec![e(i)], 0),
        Rule::HNeer => (vec![e(j), e(i), r(j)], vec![e(j), r(i)], 0),
        Rule::HNeee => (vec![e(i), e(j), e(i)], vec![e(i)], 0),
        Rule::HTeere => (
            vec![e(j), e(i), r(k), e(j)],
            vec![e(j), r(i), e(k), e(j)],
            0,
        ),
        Rule::RTerre => (
            vec![e(j), r(i), r(k), e(j)],
            vec![e(j), e(i), e(k), e(j)],
            0,
        ),
    };
    if fwd {
        (lhs.into_iter().collect(), rhs.into_iter().collect(), d)
    } else {
        (rhs.into_iter().collect(), lhs.into_iter().collect(), -d)
    }
}

/// Apply a step, validating that the expected pattern is present.
pub fn apply_step(w: &Word, s: &ElementaryStep) -> Result<Word, Error> {
    if !s.fwd && s.rule.is_strict() {
        return Err(Error::Parse(format!("{:?} cannot be applied backwards", s.rule)));
    }
    let (lhs, rhs, d) = step_patterns(s.rule, s.fwd, s.i, s.j, s.k);
    let p = s.pos as usize;
    if p + lhs.len() > w.syms.len() || w.syms[p..p + lhs.len()] != lhs[..] {
        return Err(Error::Parse(format!(
            "step {:?} does not match word '{}' at {}",
            s, w, s.pos
        )));
    }
    let mut syms = Syms::with_capacity(w.syms.len() - lhs.len() + rhs.len());
    syms.extend_from_slice(&w.syms[..p]);
    syms.extend_from_slice(&rhs);
    syms.extend_from_slice(&w.syms[p + lhs.len()..]);
    Ok(Word {
        syms,
        delta: w.delta + d,
    })
}

/// Length of the pattern a step consumes.
pub fn lhs_len(s: &ElementaryStep) -> usize {
    step_patterns(s.rule, s.fwd, s.i, s.j, s.k).0.len()
}

/// The step performing the mirrored rewrite on the reversed word.
///
/// If `s` applies to a word `w` of length `len_before`, the returned step
/// applies to `w.op()` and its result is the reverse of the result of `s`.
pub fn mirror_step(s: &ElementaryStep, len_before: usize) -> ElementaryStep {
    let l = lhs_len(s);
    let pos = (len_before - s.pos as usize - l) as u16;
    let (rule, fwd, i, j, k) = match (s.rule, s.fwd) {
        (Rule::RSrr, _) => (Rule::RSrr, true, s.i, 0, 0),
        (Rule::RSer, _) => (Rule::RSre, true, s.i, 0, 0),
        (Rule::RSre, _) => (Rule::RSer, true, s.i, 0, 0),
        (Rule::HSee, f) => (Rule::HSee, f, s.i, 0, 0),
        (Rule::HCrr, f) => (Rule::HCrr, f, s.j, s.i, 0),
        (Rule::HCer, f) => (Rule::HCer, !f, s.i, s.j, 0),
        (Rule::HCee, f) => (Rule::HCee, f, s.j, s.i, 0),
        (Rule::HNrrr, f) => (Rule::HNrrr, f, s.i, s.j, 0),
        (Rule::HNrer, f) => (Rule::HNrer, f, s.i, s.j, 0),
        (Rule::RNrre, _) => (Rule::RNerr, true, s.j, s.i, 0),
        (Rule::RNerr, _) => (Rule::RNrre, true, s.j, s.i, 0),
        (Rule::HNree, f) => (Rule::HNeer, f, s.i, s.j, 0),
        (Rule::HNeer, f) => (Rule::HNree, f, s.i, s.j, 0),
        (Rule::RNere, _) => (Rule::RNere, true, s.i, s.j, 0),
        (Rule::HNeee, f) => (Rule::HNeee, f, s.i, s.j, 0),
        (Rule::HTeere, f) => (Rule::HTeere, !f, s.k, s.j, s.i),
        (Rule::RTerre, _) => (Rule::RTerre, true, s.k, s.j, s.i),
    };
    ElementaryStep {
        rule,
        pos,
        fwd,
        i,
        j,
        k,
    }
}

/// Visit every applicable step of `w` at rank `n`.
///
/// `H` rules are visited in both directions (including the expanding
/// direction of `HSee`, `HNree`, `HNeer`, `HNeee`, `HTeere`), `R` rules
/// forward only.
pub fn for_each_step(w: &Word, n: u8, mut f: impl FnMut(ElementaryStep, Word)) {
    let syms = &w.syms;
    let len = syms.len();
    let emit = |rule: Rule, pos: usize, fwd: bool, i: u8, j: u8, k: u8, f: &mut dyn FnMut(ElementaryStep, Word)| {
        let s = ElementaryStep {
            rule,
            pos: pos as u16,
            fwd,
            i,
            j,
            k,
        };
        let w2 = apply_step(w, &s).expect("enumerated step must apply");
        f(s, w2);
    };
    for p in 0..len {
        let s0 = syms[p];
        let a = idx(s0);
        // expanding one-symbol steps
        if is_e(s0) {
            emit(Rule::HSee, p, false, a, 0, 0, &mut f);
            for j in 1..=n {
                if adjacent(a, j) {
                    emit(Rule::HNeee, p, false, a, j, 0, &mut f);
                }
            }
        }
        if p + 1 >= len {
            continue;
        }
        let s1 = syms[p + 1];
        let b = idx(s1);
        match (is_e(s0), is_e(s1)) {
            (false, false) => {
                if a == b {
                    emit(Rule::RSrr, p, true, a, 0, 0, &mut f);
                } else if !adjacent(a, b) {
                    emit(Rule::HCrr, p, true, a, b, 0, &mut f);
                }
            }
            (true, false) => {
                if a == b {
                    emit(Rule::RSer, p, true, a, 0, 0, &mut f);
                } else if !adjacent(a, b) {
                    emit(Rule::HCer, p, true, a, b, 0, &mut f);
                } else {
                    // e_a r_b with a~b is the right side of HNeer (j=a, i=b)
                    emit(Rule::HNeer, p, false, b, a, 0, &mut f);
                }
            }
            (false, true) => {
                if a == b {
                    emit(Rule::RSre, p, true, a, 0, 0, &mut f);
                } else if !adjacent(a, b) {
                    emit(Rule::HCer, p, false, b, a, 0, &mut f);
                } else {
                    // r_a e_b with a~b is the right side of HNree (i=a, j=b)
                    emit(Rule::HNree, p, false, a, b, 0, &mut f);
                }
            }
            (true, true) => {
                if a == b {
                    emit(Rule::HSee, p, true, a, 0, 0, &mut f);
                } else if !adjacent(a, b) {
                    emit(Rule::HCee, p, true, a, b, 0, &mut f);
                }
            }
        }
        if p + 2 >= len {
            continue;
        }
        let s2 = syms[p + 2];
        let c = idx(s2);
        if s2 == s0 {
            // x_a y_b x_a shapes
            if adjacent(a, b) {
                match (is_e(s0), is_e(s1)) {
                    (false, false) => emit(Rule::HNrrr, p, true, a, b, 0, &mut f),
                    (false, true) => emit(Rule::HNrer, p, true, b, a, 0, &mut f),
                    (true, false) => emit(Rule::RNere, p, true, a, b, 0, &mut f),
                    (true, true) => emit(Rule::HNeee, p, true, a, b, 0, &mut f),
                }
            }
        }
        if is_r(s1) && adjacent(a, b) {
            if is_r(s0) && is_e(s2) && c == a {
                emit(Rule::RNrre, p, true, b, a, 0, &mut f);
            }
            if is_e(s0) && is_r(s2) && c == a && a != b {
                emit(Rule::RNerr, p, true, a, b, 0, &mut f);
            }
        }
        if adjacent(a, b) && c == a {
            if is_e(s0) && is_e(s1) && is_r(s2) {
                emit(Rule::HNeer, p, true, b, a, 0, &mut f);
            }
            if is_r(s0) && is_e(s1) && is_e(s2) {
                emit(Rule::HNree, p, true, b, a, 0, &mut f);
            }
        }
        if p + 3 >= len {
            continue;
        }
        let s3 = syms[p + 3];
        if s3 != s0 || !is_e(s0) {
            continue;
        }
        // windows e_a ? ? e_a
        if adjacent(a, b) && adjacent(a, c) && b != c {
            match (is_e(s1), is_r(s2)) {
                (true, true) => emit(Rule::HTeere, p, true, b, a, c, &mut f),
                (false, false) => {}
                (false, true) => emit(Rule::RTerre, p, true, b, a, c, &mut f),
                (true, false) => {}
            }
        }
        if is_r(s1) && is_e(s2) && adjacent(a, b) && adjacent(a, c) && b != c {
            // right side of HTeere (i=b, j=a, k=c)
            emit(Rule::HTeere, p, false, b, a, c, &mut f);
        }
    }
}

/// All applicable steps with their results.
pub fn enumerate_steps(w: &Word, n: u8) -> Vec<(ElementaryStep, Word)> {
    let mut out = Vec::new();
    for_each_step(w, n, |s, w2| out.push((s, w2)));
    out
}

/// First strict (height-decreasing) step scanning left to right, if any.
pub fn find_strict_step(w: &Word, n: u8) -> Option<(ElementaryStep, Word)> {
    let mut found = None;
    for_each_step(w, n, |s, w2| {
        if found.is_none() && s.rule.is_strict() {
            found = Some((s, w2));
        }
    });
    found
}

// ---------------------------------------------------------------------------
// Packed words for memo keys
// ---------------------------------------------------------------------------

/// A word's symbol sequence packed four bits per symbol for hashing.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Packed {
    Small(u128, u8),
    Big(Box<[u8]>),
}

pub fn pack(syms: &[u8]) -> Packed {
    if syms.len() <= 32 {
        let mut v: u128 = 0;
        for (k, &s) in syms.iter().enumerate() {
            v |= (s as u128) << (4 * k);
        }
        Packed::Small(v, syms.len() as u8)
    } else {
        Packed::Big(syms.into())
    }
}
