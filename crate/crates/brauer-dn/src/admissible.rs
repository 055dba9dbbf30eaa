//! Admissible sets of orthogonal positive roots and the monoid action.
//!
//! An admissible set is a set of mutually orthogonal positive roots closed
//! under the four-reflection rule: whenever three members each have inner
//! product `+-1` with some root `alpha`, the (positive form of the) root
//! `2 alpha - sum sigma_i beta_i` belongs to the set too.  The reflections
//! act on these sets, and the action extends to the whole monoid through the
//! three-case rule for `e_i`.  [`Tables`] enumerates every admissible set for
//! a fixed `n`, partitions them into reflection-group orbits labelled per
//! [`YLabel`], and computes for each set its height (the minimal number of
//! `r`-letters in a word producing it from the empty set) together with a
//! canonical minimal word.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use sha2::Digest;
use smallvec::SmallVec;

use crate::roots::{simple, Root, RootSystem};
use crate::word::{self, Word};
use crate::{Error, Result};

/// Sorted set of mutually orthogonal positive roots, closed under the
/// admissibility rule.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AdmissibleSet {
    roots: SmallVec<[Root; 8]>,
}

impl AdmissibleSet {
    pub fn empty() -> AdmissibleSet {
        AdmissibleSet {
            roots: SmallVec::new(),
        }
    }

    /// Wraps a collection of roots without running the closure; callers that
    /// have not already established admissibility should use [`closure`].
    pub fn from_roots(iter: impl IntoIterator<Item = Root>) -> AdmissibleSet {
        let mut roots: SmallVec<[Root; 8]> = iter.into_iter().collect();
        roots.sort();
        roots.dedup();
        AdmissibleSet { roots }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn contains(&self, r: Root) -> bool {
        self.roots.binary_search(&r).is_ok()
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn is_subset_of(&self, other: &AdmissibleSet) -> bool {
        self.roots.iter().all(|&r| other.contains(r))
    }

    fn insert(&mut self, r: Root) {
        if let Err(pos) = self.roots.binary_search(&r) {
            self.roots.insert(pos, r);
        }
    }
}

impl fmt::Display for AdmissibleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, r) in self.roots.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}")
    }
}

impl FromStr for AdmissibleSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut roots = Vec::new();
        for tok in inner.split(',') {
            let tok = tok.trim();
            if !tok.is_empty() {
                roots.push(tok.parse()?);
            }
        }
        Ok(AdmissibleSet::from_roots(roots))
    }
}

/// The smallest admissible set containing the given mutually orthogonal
/// positive roots.
pub fn closure(rs: &RootSystem, input: &[Root]) -> Result<AdmissibleSet> {
    for (a, &x) in input.iter().enumerate() {
        for &y in &input[a + 1..] {
            if x != y && !x.is_orthogonal(y) {
                return Err(Error::NotOrthogonal(format!("{x} and {y}")));
            }
        }
    }
    let mut set = AdmissibleSet::from_roots(input.iter().copied());
    loop {
        let mut grew = false;
        let members: Vec<Root> = set.roots.to_vec();
        for a in 0..members.len() {
            for b in a + 1..members.len() {
                for c in b + 1..members.len() {
                    let triple = [members[a], members[b], members[c]];
                    for &alpha in &rs.roots {
                        let sig: Vec<i32> = triple.iter().map(|&t| alpha.inner(t)).collect();
                        if sig.iter().any(|s| s.abs() != 1) {
                            continue;
                        }
                        let forced = four_reflection(rs, alpha, &triple, &sig);
                        if !set.contains(forced) {
                            debug_assert!(
                                set.roots.iter().all(|&r| r.is_orthogonal(forced)),
                                "closure left the orthogonal world"
                            );
                            set.insert(forced);
                            grew = true;
                        }
                    }
                }
            }
        }
        if !grew {
            return Ok(set);
        }
    }
}

/// Positive form of `2 alpha - sum sig_i beta_i`.
fn four_reflection(rs: &RootSystem, alpha: Root, triple: &[Root; 3], sig: &[i32]) -> Root {
    let mut coords = [0i32; 9];
    for p in 1..=rs.n {
        let mut v = 2 * entry(alpha, p);
        for (t, &s) in triple.iter().zip(sig) {
            v -= s * entry(*t, p);
        }
        coords[p as usize] = v;
    }
    coords_to_root(&coords, rs.n)
}

fn entry(r: Root, c: u8) -> i32 {
    if c == r.lo {
        if r.sum {
            1
        } else {
            -1
        }
    } else if c == r.hi {
        1
    } else {
        0
    }
}

fn coords_to_root(coords: &[i32; 9], n: u8) -> Root {
    let nz: Vec<u8> = (1..=n).filter(|&p| coords[p as usize] != 0).collect();
    assert_eq!(nz.len(), 2, "coordinate vector is not a root");
    let (lo, hi) = (nz[0], nz[1]);
    let (clo, chi) = (coords[lo as usize], coords[hi as usize]);
    assert!(clo.abs() == 1 && chi.abs() == 1, "non-unit root entries");
    if (chi > 0) == (clo > 0) {
        Root::sum(lo, hi)
    } else {
        Root::diff(lo, hi)
    }
}

/// Image of a set under the reflection in `gamma`.
pub fn reflect_set(rs: &RootSystem, gamma: Root, b: &AdmissibleSet) -> AdmissibleSet {
    AdmissibleSet::from_roots(b.roots.iter().map(|&r| rs.reflect(r, gamma)))
}

/// Action of the generator `r_i`.
pub fn act_r_set(rs: &RootSystem, i: u8, b: &AdmissibleSet) -> AdmissibleSet {
    reflect_set(rs, simple(i), b)
}

/// Action of the generator `e_i`: identity when `alpha_i` is already present,
/// closure of the extended set when `alpha_i` is orthogonal to everything,
/// and `r_beta r_i B` for a non-orthogonal member `beta` otherwise.
pub fn act_e_set(rs: &RootSystem, i: u8, b: &AdmissibleSet) -> AdmissibleSet {
    let ai = simple(i);
    if b.contains(ai) {
        return b.clone();
    }
    match b.roots.iter().find(|&&r| !r.is_orthogonal(ai)) {
        None => {
            let mut roots = b.roots.to_vec();
            roots.push(ai);
            closure(rs, &roots).expect("orthogonal by case analysis")
        }
        Some(&beta) => reflect_set(rs, beta, &act_r_set(rs, i, b)),
    }
}

/// Orbit labels: `Y(t)`, `Y'(n/2)` and `Y*(t)` in the usual node-set notation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum YLabel {
    Y { t: u8 },
    YPrime { t: u8 },
    YStar { t: u8 },
}

impl fmt::Display for YLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            YLabel::Y { t } => write!(f, "Y({t})"),
            YLabel::YPrime { t } => write!(f, "Y'({t})"),
            YLabel::YStar { t } => write!(f, "Y*({t})"),
        }
    }
}

impl FromStr for YLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad orbit label '{s}'"));
        let s = s.trim();
        let (kind, rest) = if let Some(r) = s.strip_prefix("Y*") {
            (2, r)
        } else if let Some(r) = s.strip_prefix("Y'") {
            (1, r)
        } else if let Some(r) = s.strip_prefix('Y') {
            (0, r)
        } else {
            return Err(bad());
        };
        let t: u8 = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?
            .parse()
            .map_err(|_| bad())?;
        Ok(match kind {
            0 => YLabel::Y { t },
            1 => YLabel::YPrime { t },
            _ => YLabel::YStar { t },
        })
    }
}

fn factorial(k: u64) -> u64 {
    (1..=k).product()
}

impl YLabel {
    /// Every label present for rank `n`, in a fixed order.
    pub fn all(n: u8) -> Vec<YLabel> {
        let half = n / 2;
        let mut out: Vec<YLabel> = (0..=half).map(|t| YLabel::Y { t }).collect();
        if n % 2 == 0 {
            out.push(YLabel::YPrime { t: half });
        }
        out.extend((1..=half).map(|t| YLabel::YStar { t }));
        out
    }

    pub fn t(self) -> u8 {
        match self {
            YLabel::Y { t } | YLabel::YPrime { t } | YLabel::YStar { t } => t,
        }
    }

    /// Node set of the label, ascending.
    pub fn nodes(self, n: u8) -> Vec<u8> {
        let mut v = match self {
            YLabel::Y { t } => (0..t).map(|s| n - 2 * s).collect::<Vec<u8>>(),
            YLabel::YPrime { .. } => {
                let mut v: Vec<u8> = (2..=n / 2).map(|s| 2 * s).collect();
                v.push(1);
                v
            }
            YLabel::YStar { t } => {
                let mut v: Vec<u8> = (0..t - 1).map(|s| n - 2 * s).collect();
                v.push(1);
                v.push(2);
                v
            }
        };
        v.sort();
        v
    }

    /// Size of the admissible set `B_Y`.
    pub fn set_size(self, n: u8) -> usize {
        match self {
            YLabel::YStar { t } => 2 * t as usize,
            _ => self.nodes(n).len(),
        }
    }

    /// Coxeter type tags of the residual group, empty for the trivial group.
    pub fn components(self, n: u8) -> Vec<String> {
        match self {
            YLabel::Y { t: 0 } => vec![format!("D{n}")],
            YLabel::Y { t } => {
                let k = n - 2 * t;
                if k >= 2 {
                    vec!["A1".into(), format!("D{k}")]
                } else {
                    vec!["A1".into()]
                }
            }
            YLabel::YPrime { .. } => vec!["A1".into()],
            YLabel::YStar { t } => {
                let k = n as i32 - 2 * t as i32 - 1;
                if k >= 1 {
                    vec![format!("A{k}")]
                } else {
                    vec![]
                }
            }
        }
    }

    /// Order of the residual group `W(M_Y)`.
    pub fn group_order(self, n: u8) -> u64 {
        match self {
            YLabel::Y { t: 0 } => (1u64 << (n - 1)) * factorial(n as u64),
            YLabel::Y { t } => {
                let k = (n - 2 * t) as u64;
                if k >= 2 {
                    (1u64 << k) * factorial(k)
                } else {
                    2
                }
            }
            YLabel::YPrime { .. } => 2,
            YLabel::YStar { t } => factorial((n - 2 * t) as u64),
        }
    }

    /// Generator descriptors of the residual group, as listed per label:
    /// `z*` stands for the loop word, `r<i>` for a plain reflection.
    pub fn generators(self, n: u8) -> Vec<String> {
        match self {
            YLabel::Y { t: 0 } => (1..=n).map(|i| format!("r{i}")).collect(),
            YLabel::Y { t } => {
                let k = n - 2 * t;
                if k >= 2 {
                    let mut v = vec!["z*".to_string()];
                    v.extend((1..=k).map(|i| format!("r{i}")));
                    v
                } else if k == 1 {
                    vec!["z*".into()]
                } else {
                    vec!["r1".into()]
                }
            }
            YLabel::YPrime { .. } => vec!["r2".into()],
            YLabel::YStar { t } => (4..=n - 2 * t + 2).map(|i| format!("r{i}")).collect(),
        }
    }
}

/// Closed-form rank of the algebra: `(2^n + 1)(2n-1)!! - (2^(n-1) + 1) n!`.
pub fn closed_rank(n: u8) -> u64 {
    let odd_dfact: u64 = (1..=(2 * n as u64 - 1)).step_by(2).product();
    ((1u64 << n) + 1) * odd_dfact - ((1u64 << (n - 1)) + 1) * factorial(n as u64)
}

const SNAPSHOT_VERSION: u32 = 1;

/// Env var naming a directory for persisted orbit tables.
pub const CACHE_DIR_ENV: &str = "BRAUER_DN_CACHE_DIR";

#[derive(serde::Serialize, serde::Deserialize)]
struct Snapshot {
    version: u32,
    n: u8,
    sets: Vec<String>,
    labels: Vec<String>,
    heights: Vec<u32>,
    aprime: Vec<String>,
    orders: Vec<(String, u64)>,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct SnapshotFile {
    sha256: String,
    payload: Snapshot,
}

/// Complete orbit tables for one rank: every admissible set with its label,
/// height, canonical access word, and the generator action tables.
pub struct Tables {
    pub n: u8,
    pub rs: RootSystem,
    sets: Vec<AdmissibleSet>,
    index: HashMap<AdmissibleSet, u32>,
    labels: Vec<YLabel>,
    heights: Vec<u32>,
    aprime: Vec<Word>,
    act_r_tab: Vec<[u32; 8]>,
    act_e_tab: Vec<[u32; 8]>,
    orbits: Vec<(YLabel, Vec<u32>)>,
    reps: HashMap<YLabel, u32>,
    empty_id: u32,
}

impl Tables {
    pub fn new(n: u8) -> Result<Tables> {
        if !(4..=8).contains(&n) {
            return Err(Error::BadRank(n));
        }
        let rs = RootSystem::new(n);
        let sets = enumerate_admissible(&rs);
        Tables::finish(n, rs, sets, None)
    }

    /// Assembles the derived tables; `precomputed` carries heights and words
    /// from a snapshot (validated against the freshly built orbit structure).
    fn finish(
        n: u8,
        rs: RootSystem,
        sets: Vec<AdmissibleSet>,
        precomputed: Option<(Vec<u32>, Vec<Word>)>,
    ) -> Result<Tables> {
        let index: HashMap<AdmissibleSet, u32> = sets
            .iter()
            .enumerate()
            .map(|(k, s)| (s.clone(), k as u32))
            .collect();
        let empty_id = *index
            .get(&AdmissibleSet::empty())
            .ok_or_else(|| Error::Cache("empty set missing".into()))?;

        let mut act_r_tab = vec![[u32::MAX; 8]; sets.len()];
        let mut act_e_tab = vec![[u32::MAX; 8]; sets.len()];
        for (id, b) in sets.iter().enumerate() {
            for i in 1..=n {
                let rb = act_r_set(&rs, i, b);
                let eb = act_e_set(&rs, i, b);
                act_r_tab[id][i as usize - 1] = *index
                    .get(&rb)
                    .ok_or_else(|| Error::Cache(format!("r{i}{b} not admissible")))?;
                act_e_tab[id][i as usize - 1] = *index
                    .get(&eb)
                    .ok_or_else(|| Error::Cache(format!("e{i}{b} not admissible")))?;
            }
        }

        // orbit decomposition under the reflections, one BFS per label
        let mut labels: Vec<Option<YLabel>> = vec![None; sets.len()];
        let mut orbits = Vec::new();
        let mut reps = HashMap::new();
        for label in YLabel::all(n) {
            let simples: Vec<Root> = label.nodes(n).iter().map(|&j| simple(j)).collect();
            let rep = closure(&rs, &simples)?;
            if rep.len() != label.set_size(n) {
                return Err(Error::Cache(format!("{label}: |B_Y| = {}", rep.len())));
            }
            let rep_id = *index
                .get(&rep)
                .ok_or_else(|| Error::Cache(format!("B_{label} not enumerated")))?;
            let mut queue = vec![rep_id];
            labels[rep_id as usize] = Some(label);
            let mut members = vec![rep_id];
            while let Some(id) = queue.pop() {
                for i in 0..n as usize {
                    let to = act_r_tab[id as usize][i];
                    if labels[to as usize].is_none() {
                        labels[to as usize] = Some(label);
                        members.push(to);
                        queue.push(to);
                    } else if labels[to as usize] != Some(label) {
                        return Err(Error::Cache("orbits overlap".into()));
                    }
                }
            }
            members.sort();
            reps.insert(label, rep_id);
            orbits.push((label, members));
        }
        if labels.iter().any(|l| l.is_none()) {
            return Err(Error::Cache("admissible set outside every orbit".into()));
        }
        let labels: Vec<YLabel> = labels.into_iter().map(|l| l.unwrap()).collect();

        let (heights, aprime) = match precomputed {
            Some(pair) => pair,
            None => orbit_words(n, &labels, &act_r_tab, &act_e_tab, &orbits, &reps),
        };

        let t = Tables {
            n,
            rs,
            sets,
            index,
            labels,
            heights,
            aprime,
            act_r_tab,
            act_e_tab,
            orbits,
            reps,
            empty_id,
        };
        for (&label, &rep_id) in &t.reps {
            if t.eval_action(&t.e_word(label), t.empty_id) != rep_id {
                return Err(Error::Cache(format!("e-word of {label} misses B_Y")));
            }
            if !t.aprime[rep_id as usize].syms.is_empty() || t.heights[rep_id as usize] != 0 {
                return Err(Error::Cache(format!("B_{label} not at height zero")));
            }
        }
        Ok(t)
    }

    pub fn num_sets(&self) -> usize {
        self.sets.len()
    }

    pub fn set(&self, id: u32) -> &AdmissibleSet {
        &self.sets[id as usize]
    }

    pub fn id_of(&self, b: &AdmissibleSet) -> Option<u32> {
        self.index.get(b).copied()
    }

    pub fn empty_id(&self) -> u32 {
        self.empty_id
    }

    pub fn label(&self, id: u32) -> YLabel {
        self.labels[id as usize]
    }

    pub fn set_height(&self, id: u32) -> u32 {
        self.heights[id as usize]
    }

    pub fn aprime(&self, id: u32) -> &Word {
        &self.aprime[id as usize]
    }

    pub fn act_r(&self, i: u8, id: u32) -> u32 {
        self.act_r_tab[id as usize][i as usize - 1]
    }

    pub fn act_e(&self, i: u8, id: u32) -> u32 {
        self.act_e_tab[id as usize][i as usize - 1]
    }

    pub fn act_sym(&self, sym: u8, id: u32) -> u32 {
        if word::is_r(sym) {
            self.act_r(word::idx(sym), id)
        } else {
            self.act_e(word::idx(sym), id)
        }
    }

    /// Left action of a word: the rightmost letter acts first.  Powers of
    /// delta in the word are ignored, as the action forgets them.
    pub fn eval_action(&self, w: &Word, id: u32) -> u32 {
        w.syms.iter().rev().fold(id, |b, &s| self.act_sym(s, b))
    }

    /// Right action: `B . w = op(w)(B)`.
    pub fn eval_action_op(&self, w: &Word, id: u32) -> u32 {
        w.syms.iter().fold(id, |b, &s| self.act_sym(s, b))
    }

    pub fn orbits(&self) -> &[(YLabel, Vec<u32>)] {
        &self.orbits
    }

    pub fn orbit_of(&self, b: &AdmissibleSet) -> Result<(YLabel, &[u32])> {
        let id = self
            .id_of(b)
            .ok_or_else(|| Error::Parse(format!("{b} is not admissible")))?;
        let label = self.labels[id as usize];
        let members = &self
            .orbits
            .iter()
            .find(|(l, _)| *l == label)
            .expect("every label has an orbit")
            .1;
        Ok((label, members))
    }

    pub fn rep(&self, label: YLabel) -> u32 {
        self.reps[&label]
    }

    /// The ascending product `e_{y_1} .. e_{y_k}` over the nodes of the label.
    pub fn e_word(&self, label: YLabel) -> Word {
        let syms: Vec<u8> = label.nodes(self.n).into_iter().map(word::e).collect();
        Word::from_syms(syms)
    }

    /// Canonical minimal word from the empty set to `B`: the in-orbit word
    /// prefixed to the `e`-product reaching the orbit representative.
    pub fn a_b_word(&self, id: u32) -> Word {
        self.aprime[id as usize].concat(&self.e_word(self.labels[id as usize]))
    }

    /// Total rank: the label sum of (orbit size)^2 times the residual group
    /// order.
    pub fn rank(&self) -> u64 {
        self.orbits
            .iter()
            .map(|(label, members)| {
                (members.len() as u64).pow(2) * label.group_order(self.n)
            })
            .sum()
    }

    /// Rank of the ideal spanned by the `Y*` labels.
    pub fn theta_rank(&self) -> u64 {
        self.orbits
            .iter()
            .filter(|(label, _)| matches!(label, YLabel::YStar { .. }))
            .map(|(label, members)| {
                (members.len() as u64).pow(2) * label.group_order(self.n)
            })
            .sum()
    }

    fn snapshot(&self) -> Snapshot {
        Snapshot {
            version: SNAPSHOT_VERSION,
            n: self.n,
            sets: self.sets.iter().map(|s| s.to_string()).collect(),
            labels: self.labels.iter().map(|l| l.to_string()).collect(),
            heights: self.heights.clone(),
            aprime: self.aprime.iter().map(|w| w.to_string()).collect(),
            orders: self
                .orbits
                .iter()
                .map(|(l, _)| (l.to_string(), l.group_order(self.n)))
                .collect(),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let payload = self.snapshot();
        let body = serde_json::to_string(&payload)
            .map_err(|e| Error::Cache(format!("serialize: {e}")))?;
        let sha256 = hex_sha(&body);
        let file = SnapshotFile { sha256, payload };
        let text = serde_json::to_string_pretty(&file)
            .map_err(|e| Error::Cache(format!("serialize: {e}")))?;
        std::fs::write(path, text).map_err(|e| Error::Cache(format!("write {path:?}: {e}")))
    }

    pub fn load(path: &Path) -> Result<Tables> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Cache(format!("read {path:?}: {e}")))?;
        let file: SnapshotFile =
            serde_json::from_str(&text).map_err(|e| Error::Cache(format!("parse {path:?}: {e}")))?;
        let body = serde_json::to_string(&file.payload)
            .map_err(|e| Error::Cache(format!("serialize: {e}")))?;
        if hex_sha(&body) != file.sha256 {
            return Err(Error::Cache(format!("checksum mismatch in {path:?}")));
        }
        let snap = file.payload;
        if snap.version != SNAPSHOT_VERSION {
            return Err(Error::Cache(format!(
                "snapshot version {} (expected {SNAPSHOT_VERSION})",
                snap.version
            )));
        }
        let n = snap.n;
        if !(4..=8).contains(&n) {
            return Err(Error::BadRank(n));
        }
        let rs = RootSystem::new(n);
        let mut sets = Vec::with_capacity(snap.sets.len());
        for s in &snap.sets {
            sets.push(s.parse::<AdmissibleSet>()?);
        }
        if sets.len() != snap.heights.len() || sets.len() != snap.aprime.len() {
            return Err(Error::Cache("snapshot table lengths disagree".into()));
        }
        let mut aprime = Vec::with_capacity(snap.aprime.len());
        for w in &snap.aprime {
            aprime.push(w.parse::<Word>()?);
        }
        let tables = Tables::finish(n, rs, sets, Some((snap.heights, aprime)))?;
        // stored labels and words must agree with the recomputed structure
        for (id, stored) in snap.labels.iter().enumerate() {
            if stored.parse::<YLabel>()? != tables.labels[id] {
                return Err(Error::Cache(format!("label mismatch at set {id}")));
            }
            let id = id as u32;
            let w = tables.a_b_word(id);
            if tables.eval_action(&w, tables.empty_id) != id
                || w.height() as u32 != tables.heights[id as usize]
            {
                return Err(Error::Cache(format!("stored word invalid for set {id}")));
            }
        }
        Ok(tables)
    }

    /// Loads the per-`n` table file from `dir` when present and valid,
    /// building and saving it otherwise.  With no directory, builds in
    /// memory.
    pub fn load_or_build(n: u8, dir: Option<&Path>) -> Result<Tables> {
        let Some(dir) = dir else {
            return Tables::new(n);
        };
        let path = dir.join(format!("orbits-d{n}.json"));
        if path.exists() {
            if let Ok(t) = Tables::load(&path) {
                if t.n == n {
                    return Ok(t);
                }
            }
        }
        let t = Tables::new(n)?;
        std::fs::create_dir_all(dir).map_err(|e| Error::Cache(format!("mkdir {dir:?}: {e}")))?;
        t.save(&path)?;
        Ok(t)
    }

    /// [`Tables::load_or_build`] against the directory named by
    /// [`CACHE_DIR_ENV`], when set.
    pub fn load_or_build_default(n: u8) -> Result<Tables> {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(dir) => Tables::load_or_build(n, Some(Path::new(&dir))),
            None => Tables::new(n),
        }
    }
}

fn hex_sha(body: &str) -> String {
    let digest = sha2::Sha256::digest(body.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Every admissible set: backtracking over mutually orthogonal subsets,
/// filtered by the closure fixpoint test.
fn enumerate_admissible(rs: &RootSystem) -> Vec<AdmissibleSet> {
    let mut out = Vec::new();
    let mut stack: Vec<Root> = Vec::new();
    fn recurse(rs: &RootSystem, start: usize, stack: &mut Vec<Root>, out: &mut Vec<AdmissibleSet>) {
        let set = AdmissibleSet::from_roots(stack.iter().copied());
        if closure(rs, stack).expect("stack is orthogonal") == set {
            out.push(set);
        }
        for k in start..rs.roots.len() {
            let r = rs.roots[k];
            if stack.iter().all(|&b| b.is_orthogonal(r)) {
                stack.push(r);
                recurse(rs, k + 1, stack, out);
                stack.pop();
            }
        }
    }
    recurse(rs, 0, &mut stack, &mut out);
    out.sort_by(|a, b| (a.len(), &a.roots).cmp(&(b.len(), &b.roots)));
    out
}

/// Heights and canonical in-orbit words, one shortest-path run per orbit.
///
/// Cost of a word is the pair (number of `r`-letters, length); each orbit is
/// searched from its representative.  The canonical word is the
/// lexicographically least one of minimal cost, reconstructed over the tight
/// edges from the target side (the leftmost letter acts last, so candidates
/// for it are incoming edges).
fn orbit_words(
    n: u8,
    labels: &[YLabel],
    act_r_tab: &[[u32; 8]],
    act_e_tab: &[[u32; 8]],
    orbits: &[(YLabel, Vec<u32>)],
    reps: &HashMap<YLabel, u32>,
) -> (Vec<u32>, Vec<Word>) {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    let mut heights = vec![0u32; labels.len()];
    let mut words: Vec<Option<SmallVec<[u8; 22]>>> = vec![None; labels.len()];

    for (label, members) in orbits {
        let rep = reps[label];
        let mut dist: HashMap<u32, (u32, u32)> = HashMap::new();
        dist.insert(rep, (0, 0));
        let mut heap = BinaryHeap::new();
        heap.push(Reverse(((0u32, 0u32), rep)));
        let edges = |id: u32| {
            let mut out: SmallVec<[(u8, u32, u32); 16]> = SmallVec::new();
            for i in 1..=n {
                out.push((word::r(i), act_r_tab[id as usize][i as usize - 1], 1));
                let to = act_e_tab[id as usize][i as usize - 1];
                if labels[to as usize] == *label && to != id {
                    out.push((word::e(i), to, 0));
                }
            }
            out
        };
        while let Some(Reverse((d, id))) = heap.pop() {
            if dist.get(&id) != Some(&d) {
                continue;
            }
            for (_, to, w) in edges(id) {
                if labels[to as usize] != *label {
                    continue;
                }
                let nd = (d.0 + w, d.1 + 1);
                if dist.get(&to).map_or(true, |&old| nd < old) {
                    dist.insert(to, nd);
                    heap.push(Reverse((nd, to)));
                }
            }
        }

        // incoming tight edges per member
        let mut incoming: HashMap<u32, Vec<(u8, u32)>> = HashMap::new();
        for &id in members {
            let d = dist[&id];
            for (sym, to, w) in edges(id) {
                if labels[to as usize] == *label && (d.0 + w, d.1 + 1) == dist[&to] {
                    incoming.entry(to).or_default().push((sym, id));
                }
            }
        }
        for v in incoming.values_mut() {
            v.sort();
        }

        fn canon(
            id: u32,
            rep: u32,
            incoming: &HashMap<u32, Vec<(u8, u32)>>,
            words: &mut Vec<Option<SmallVec<[u8; 22]>>>,
        ) -> SmallVec<[u8; 22]> {
            if let Some(w) = &words[id as usize] {
                return w.clone();
            }
            let best = if id == rep {
                SmallVec::new()
            } else {
                let inc = &incoming[&id];
                let first = inc[0].0;
                inc.iter()
                    .take_while(|(sym, _)| *sym == first)
                    .map(|&(sym, from)| {
                        let mut w: SmallVec<[u8; 22]> = SmallVec::new();
                        w.push(sym);
                        w.extend_from_slice(&canon(from, rep, incoming, words));
                        w
                    })
                    .min()
                    .expect("rep is reachable")
            };
            words[id as usize] = Some(best.clone());
            best
        }

        for &id in members {
            heights[id as usize] = dist[&id].0;
            canon(id, rep, &incoming, &mut words);
        }
    }

    let words = words
        .into_iter()
        .map(|w| Word::from_syms(w.expect("all sets visited")))
        .collect();
    (heights, words)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::enumerate_steps;

    fn alpha(k: u8) -> Root {
        simple(k)
    }

    #[test]
    fn closure_examples() {
        let rs = RootSystem::new(4);
        let b = closure(&rs, &[alpha(1), alpha(2)]).unwrap();
        assert_eq!(b, AdmissibleSet::from_roots([alpha(1), alpha(2)]));
        let b = closure(&rs, &[alpha(1), alpha(2), alpha(4)]).unwrap();
        assert_eq!(
            b,
            AdmissibleSet::from_roots([alpha(1), alpha(2), alpha(4), Root::sum(3, 4)])
        );
        assert_eq!(closure(&rs, &[]).unwrap(), AdmissibleSet::empty());
        assert!(matches!(
            closure(&rs, &[alpha(3), alpha(4)]),
            Err(Error::NotOrthogonal(_))
        ));
    }

    #[test]
    fn closure_is_idempotent_and_extensive() {
        let rs = RootSystem::new(5);
        for pair in [
            vec![alpha(1)],
            vec![alpha(2), alpha(4)],
            vec![alpha(1), alpha(2), alpha(5)],
            vec![Root::sum(2, 3), Root::diff(2, 3)],
        ] {
            let c = closure(&rs, &pair).unwrap();
            for &r in &pair {
                assert!(c.contains(r));
            }
            let again = closure(&rs, c.roots()).unwrap();
            assert_eq!(c, again);
        }
    }

    #[test]
    fn e_action_cases() {
        let rs = RootSystem::new(4);
        let b = AdmissibleSet::from_roots([alpha(2)]);
        assert_eq!(act_e_set(&rs, 3, &b), AdmissibleSet::from_roots([alpha(3)]));
        let b = AdmissibleSet::from_roots([alpha(4)]);
        assert_eq!(
            act_e_set(&rs, 2, &b),
            AdmissibleSet::from_roots([alpha(2), alpha(4)])
        );
        let b = AdmissibleSet::from_roots([alpha(2), alpha(4)]);
        assert_eq!(act_e_set(&rs, 2, &b), b);
    }

    #[test]
    fn attack_case_is_choice_independent() {
        let t = Tables::new(5).unwrap();
        for id in 0..t.num_sets() as u32 {
            let b = t.set(id).clone();
            for i in 1..=5u8 {
                let ai = simple(i);
                if b.contains(ai) {
                    continue;
                }
                let choices: Vec<Root> = b
                    .roots()
                    .iter()
                    .copied()
                    .filter(|r| !r.is_orthogonal(ai))
                    .collect();
                if choices.len() < 2 {
                    continue;
                }
                let results: Vec<AdmissibleSet> = choices
                    .iter()
                    .map(|&beta| reflect_set(&t.rs, beta, &act_r_set(&t.rs, i, &b)))
                    .collect();
                assert!(results.windows(2).all(|w| w[0] == w[1]), "e{i}{b}");
            }
        }
    }

    #[test]
    fn reflection_relations_hold_on_sets() {
        let t = Tables::new(4).unwrap();
        for id in 0..t.num_sets() as u32 {
            for i in 1..=4u8 {
                assert_eq!(t.act_r(i, t.act_r(i, id)), id);
                for j in i + 1..=4 {
                    let ij = t.act_r(i, t.act_r(j, id));
                    let ji = t.act_r(j, t.act_r(i, id));
                    if word::adjacent(i, j) {
                        assert_eq!(t.act_r(i, ji), t.act_r(j, ij));
                    } else {
                        assert_eq!(ij, ji);
                    }
                }
            }
        }
    }

    #[test]
    fn every_rewrite_step_preserves_the_action() {
        let t = Tables::new(4).unwrap();
        let words = [
            "e2 r3 e2",
            "r1 r3 e1 e4 r2",
            "e3 r1 r4 e3",
            "e1 e3 e2 e3 r4 r3",
            "r2 e3 e1 r3 e4",
        ];
        for src in words {
            let w: Word = src.parse().unwrap();
            for id in 0..t.num_sets() as u32 {
                let base = t.eval_action(&w, id);
                for (step, img) in enumerate_steps(&w, 4) {
                    assert_eq!(
                        t.eval_action(&img, id),
                        base,
                        "step {step:?} changed the action of {src}"
                    );
                }
            }
        }
    }

    #[test]
    fn monoid_action_monotone() {
        let t = Tables::new(4).unwrap();
        for a in 0..t.num_sets() as u32 {
            for b in 0..t.num_sets() as u32 {
                if !t.set(a).is_subset_of(t.set(b)) {
                    continue;
                }
                for i in 1..=4u8 {
                    assert!(t.set(t.act_r(i, a)).is_subset_of(t.set(t.act_r(i, b))));
                    assert!(t.set(t.act_e(i, a)).is_subset_of(t.set(t.act_e(i, b))));
                }
            }
        }
    }

    #[test]
    fn census_matches_pairing_count() {
        // sets on t disjoint coordinate pairs: one root of either kind per
        // pair, or both mates on every pair
        for (n, expect) in [(4u64, 34usize), (5, 106), (6, 406)] {
            let t = Tables::new(n as u8).unwrap();
            let pairings = |t_: u64| -> u64 {
                factorial(n) / ((1u64 << t_) * factorial(t_) * factorial(n - 2 * t_))
            };
            let mut total = 0u64;
            for k in 0..=n / 2 {
                total += pairings(k) * (1 << k);
                if k > 0 {
                    total += pairings(k);
                }
            }
            assert_eq!(t.num_sets(), expect);
            assert_eq!(total as usize, expect);
        }
    }

    #[test]
    fn orbit_sizes_n4() {
        let t = Tables::new(4).unwrap();
        let sizes: Vec<(String, usize)> = t
            .orbits()
            .iter()
            .map(|(l, m)| (l.to_string(), m.len()))
            .collect();
        assert_eq!(
            sizes,
            vec![
                ("Y(0)".to_string(), 1),
                ("Y(1)".to_string(), 12),
                ("Y(2)".to_string(), 6),
                ("Y'(2)".to_string(), 6),
                ("Y*(1)".to_string(), 6),
                ("Y*(2)".to_string(), 3),
            ]
        );
    }

    #[test]
    fn orbit_sizes_n5_n6() {
        let t = Tables::new(5).unwrap();
        let sizes: Vec<usize> = t.orbits().iter().map(|(_, m)| m.len()).collect();
        assert_eq!(sizes, vec![1, 20, 60, 10, 15]);
        let t = Tables::new(6).unwrap();
        let sizes: Vec<(String, usize)> = t
            .orbits()
            .iter()
            .map(|(l, m)| (l.to_string(), m.len()))
            .collect();
        assert_eq!(
            sizes,
            vec![
                ("Y(0)".to_string(), 1),
                ("Y(1)".to_string(), 30),
                ("Y(2)".to_string(), 180),
                ("Y(3)".to_string(), 60),
                ("Y'(3)".to_string(), 60),
                ("Y*(1)".to_string(), 15),
                ("Y*(2)".to_string(), 45),
                ("Y*(3)".to_string(), 15),
            ]
        );
    }

    #[test]
    fn rank_identity() {
        for (n, expect) in [(4u8, 1569u64), (5, 29145), (6, 651915)] {
            let t = Tables::new(n).unwrap();
            assert_eq!(t.rank(), expect);
            assert_eq!(closed_rank(n), expect);
        }
    }

    #[test]
    fn theta_rank_n4() {
        let t = Tables::new(4).unwrap();
        assert_eq!(t.theta_rank(), 81);
    }

    #[test]
    fn heights_and_examples() {
        let t = Tables::new(4).unwrap();
        for (label, _) in t.orbits() {
            assert_eq!(t.set_height(t.rep(*label)), 0);
        }
        let a3 = t.id_of(&AdmissibleSet::from_roots([alpha(3)])).unwrap();
        assert_eq!(t.set_height(a3), 0);
        // a singleton {beta} sits at height ht(beta) - 1: every zero-cost
        // move between singletons lands on a simple root
        let b = t
            .id_of(&AdmissibleSet::from_roots([Root::diff(1, 3)]))
            .unwrap();
        assert_eq!(t.set_height(b), 1);
        let b = t
            .id_of(&AdmissibleSet::from_roots([Root::diff(1, 4)]))
            .unwrap();
        assert_eq!(t.set_height(b), 2);
        for &beta in &t.rs.roots.clone() {
            let id = t.id_of(&AdmissibleSet::from_roots([beta])).unwrap();
            assert_eq!(t.set_height(id) as i32, t.rs.height(beta) - 1);
        }
    }

    #[test]
    fn heights_agree_with_global_search() {
        // the operational definition: 0/1-shortest-path from the empty set
        // over the whole action graph, r-edges weight 1, e-edges weight 0
        use std::collections::VecDeque;
        for n in [4u8, 5, 6] {
            let t = Tables::new(n).unwrap();
            let mut dist = vec![u32::MAX; t.num_sets()];
            let mut dq = VecDeque::new();
            dist[t.empty_id() as usize] = 0;
            dq.push_back(t.empty_id());
            while let Some(id) = dq.pop_front() {
                let d = dist[id as usize];
                for i in 1..=n {
                    let (re, ee) = (t.act_r(i, id), t.act_e(i, id));
                    if d + 1 < dist[re as usize] {
                        dist[re as usize] = d + 1;
                        dq.push_back(re);
                    }
                    if d < dist[ee as usize] {
                        dist[ee as usize] = d;
                        dq.push_front(ee);
                    }
                }
            }
            for id in 0..t.num_sets() as u32 {
                assert_eq!(
                    dist[id as usize],
                    t.set_height(id),
                    "n={n} set {}",
                    t.set(id)
                );
            }
        }
    }

    #[test]
    fn height_steps_under_generators() {
        let t = Tables::new(5).unwrap();
        for id in 0..t.num_sets() as u32 {
            let h = t.set_height(id) as i64;
            for i in 1..=5u8 {
                let dr = t.set_height(t.act_r(i, id)) as i64 - h;
                assert!((-1..=1).contains(&dr));
                let te = t.act_e(i, id);
                if t.set(te).len() == t.set(id).len() {
                    assert!(t.set_height(te) as i64 <= h);
                }
            }
        }
    }

    #[test]
    fn canonical_words_reach_their_sets() {
        for n in [4u8, 5] {
            let t = Tables::new(n).unwrap();
            for id in 0..t.num_sets() as u32 {
                let w = t.a_b_word(id);
                assert_eq!(t.eval_action(&w, t.empty_id()), id, "{}", t.set(id));
                assert_eq!(w.height() as u32, t.set_height(id));
                let ap = t.aprime(id);
                assert_eq!(t.eval_action(ap, t.rep(t.label(id))), id);
            }
        }
    }

    #[test]
    fn rep_words_are_ascending_e_products() {
        for n in [4u8, 5, 6] {
            let t = Tables::new(n).unwrap();
            for (label, _) in t.orbits() {
                assert_eq!(t.a_b_word(t.rep(*label)), t.e_word(*label));
            }
        }
    }

    #[test]
    fn loop_word_action() {
        let t = Tables::new(4).unwrap();
        let z: Word = "e4 e3 e2 r1 e3 e4".parse().unwrap();
        let img = t.eval_action(&z, t.empty_id());
        assert_eq!(t.set(img), &AdmissibleSet::from_roots([alpha(4)]));
    }

    #[test]
    fn label_tables() {
        assert_eq!(
            YLabel::all(4)
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>(),
            vec!["Y(0)", "Y(1)", "Y(2)", "Y'(2)", "Y*(1)", "Y*(2)"]
        );
        let l = YLabel::YStar { t: 2 };
        assert_eq!(l.nodes(6), vec![1, 2, 6]);
        assert_eq!(l.generators(6), vec!["r4"]);
        assert_eq!(l.group_order(6), 2);
        let l = YLabel::Y { t: 1 };
        assert_eq!(l.components(6), vec!["A1", "D4"]);
        assert_eq!(l.group_order(6), 16 * 24);
        assert_eq!(l.generators(5), vec!["z*", "r1", "r2", "r3"]);
        assert_eq!(YLabel::YPrime { t: 3 }.nodes(6), vec![1, 4, 6]);
        for s in ["Y(0)", "Y'(2)", "Y*(1)"] {
            assert_eq!(s.parse::<YLabel>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn snapshot_roundtrip() {
        let dir = std::env::temp_dir().join("brauer-dn-test-cache");
        let _ = std::fs::remove_dir_all(&dir);
        let t = Tables::load_or_build(4, Some(&dir)).unwrap();
        let path = dir.join("orbits-d4.json");
        assert!(path.exists());
        let t2 = Tables::load(&path).unwrap();
        assert_eq!(t.num_sets(), t2.num_sets());
        for id in 0..t.num_sets() as u32 {
            assert_eq!(t.set(id), t2.set(id));
            assert_eq!(t.set_height(id), t2.set_height(id));
            assert_eq!(t.aprime(id), t2.aprime(id));
            assert_eq!(t.label(id), t2.label(id));
        }
        // corrupt one stored value and expect a checksum failure
        let text = std::fs::read_to_string(&path).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let h = v["payload"]["heights"][3].as_u64().unwrap();
        v["payload"]["heights"][3] = serde_json::json!(h + 1);
        std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
        assert!(Tables::load(&path).is_err());
        let _ = std::fs::remove_dir_all(&dir);
    }
}
