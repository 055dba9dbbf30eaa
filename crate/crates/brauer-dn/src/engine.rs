//! Table-driven reduction.
//!
//! Elements fold through [`Engine::left_mul`] one generator at a time.
//! In-orbit moves use a cached structure map per (generator, top set): the
//! new top, a residual correction `h`, and a `delta` shift, after which
//! `h` merges into the residual part through a second cache keyed on the
//! group elements.  Moves that leave the orbit fall back to the searcher
//! on the concatenated word, memoized per (generator, key).  Residual
//! parts over the empty set never touch the searcher: left `r`-moves are
//! plain group multiplication and left `e`-moves flip to the opposite
//! side, where only in-orbit `r`-moves remain.

use dashmap::DashMap;

use crate::admissible::{Tables, YLabel};
use crate::cox::{self, CoxElem};
use crate::nf::{self, NfKey, NormalForm};
use crate::search;
use crate::word::{self, Word};
use crate::{Error, Result};

/// One entry of the structure map: what left multiplication by a fixed
/// generator does to an access element of a fixed set.
#[derive(Clone, Debug)]
pub enum StructureMove {
    /// `x · a_B = delta^d · a_to · h` with everything in one orbit.
    Within { to: u32, h: CoxElem, d: i32 },
    /// `e_i` with `alpha_i` orthogonal to the set: the label deepens and
    /// the right-hand factor gets entangled, so no map is cached.
    Grows,
}

pub struct Engine {
    tab: Tables,
    budget: usize,
    moves: DashMap<(u8, u32), StructureMove>,
    connect: DashMap<(YLabel, CoxElem, CoxElem), (CoxElem, i32)>,
    slow: DashMap<(u8, NfKey), NormalForm>,
}

impl Engine {
    pub fn new(tab: Tables) -> Engine {
        Engine {
            tab,
            budget: search::DEFAULT_BUDGET,
            moves: DashMap::new(),
            connect: DashMap::new(),
            slow: DashMap::new(),
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Engine {
        self.budget = budget;
        self
    }

    pub fn tab(&self) -> &Tables {
        &self.tab
    }

    /// The normal form of a single `e_i`.
    pub fn e_base(&self, i: u8) -> NormalForm {
        let set = crate::admissible::AdmissibleSet::from_roots([crate::roots::simple(i)]);
        let id = self.tab.id_of(&set).expect("simple roots are admissible");
        let label = YLabel::Y { t: 1 };
        NormalForm {
            key: NfKey {
                label,
                top: id,
                bottom: id,
                z: cox::identity(label, self.tab.n),
            },
            delta: 0,
        }
    }

    /// Structure map for one generator against one admissible set.
    pub fn structure_move(&self, x: u8, b: u32) -> Result<StructureMove> {
        if let Some(m) = self.moves.get(&(x, b)) {
            return Ok(m.value().clone());
        }
        let computed = self.compute_move(x, b)?;
        self.moves.insert((x, b), computed.clone());
        Ok(computed)
    }

    fn compute_move(&self, x: u8, b: u32) -> Result<StructureMove> {
        let tab = &self.tab;
        let label = tab.label(b);
        if word::is_e(x) && tab.label(tab.act_sym(x, b)) != label {
            return Ok(StructureMove::Grows);
        }
        let mut u0 = Word::from_syms(vec![x]);
        u0 = u0.concat(&tab.a_b_word(b));
        let red = search::reduce_word(tab, &u0, self.budget)?;
        if red.key.label != label || red.key.bottom != tab.rep(label) {
            return Err(Error::Cache(format!(
                "structure map for ({}, set {}) left its orbit",
                word::idx(x),
                b
            )));
        }
        Ok(StructureMove::Within {
            to: red.key.top,
            h: red.key.z,
            d: red.delta,
        })
    }

    /// Merge a residual correction into the residual part: the reduced
    /// form and `delta` shift of `h·z`.  When the concatenation is
    /// already reduced there is nothing to do; otherwise the contraction
    /// happens against `e_Y` and is found by the searcher once.
    fn connect(&self, label: YLabel, h: &CoxElem, z: &CoxElem) -> Result<(CoxElem, i32)> {
        let n = self.tab.n;
        if h.is_identity() {
            return Ok((z.clone(), 0));
        }
        let hz = h.mul(z);
        if hz.length(label, n) == h.length(label, n) + z.length(label, n) {
            return Ok((hz, 0));
        }
        let key = (label, h.clone(), z.clone());
        if let Some(c) = self.connect.get(&key) {
            return Ok(c.value().clone());
        }
        let mut syms = self.tab.e_word(label).syms;
        syms.extend(nf::bare_z(&self.tab, label, h));
        syms.extend(nf::bare_z(&self.tab, label, z));
        let red = search::reduce_word(&self.tab, &Word::from_syms(syms), self.budget)?;
        if red.key.z != hz
            || red.key.top != self.tab.rep(label)
            || red.key.bottom != self.tab.rep(label)
        {
            return Err(Error::Cache(format!(
                "residual merge over {label} disagrees with the group product"
            )));
        }
        let out = (hz, red.delta);
        self.connect.insert(key, out.clone());
        Ok(out)
    }

    /// Left multiplication by a single generator symbol.
    pub fn left_mul(&self, x: u8, m: &NormalForm) -> Result<NormalForm> {
        let key = &m.key;
        if key.label == (YLabel::Y { t: 0 }) {
            if word::is_r(x) {
                let z2 = cox::generator(key.label, self.tab.n, word::idx(x)).mul(&key.z);
                return Ok(NormalForm {
                    key: NfKey { z: z2, ..key.clone() },
                    delta: m.delta,
                });
            }
            let mut out = self.empty_orbit_e(x, key)?;
            out.delta += m.delta;
            return Ok(out);
        }
        match self.structure_move(x, key.top)? {
            StructureMove::Within { to, h, d } => {
                let (z2, dc) = self.connect(key.label, &h, &key.z)?;
                Ok(NormalForm {
                    key: NfKey {
                        label: key.label,
                        top: to,
                        bottom: key.bottom,
                        z: z2,
                    },
                    delta: m.delta + d + dc,
                })
            }
            StructureMove::Grows => {
                let mut out = self.slow_path(x, key)?;
                out.delta += m.delta;
                Ok(out)
            }
        }
    }

    // e_i against a residual-only element: flip to the opposite side,
    // where the residual word turns into plain r-moves on the orbit of
    // `{alpha_i}`, then flip back.
    fn empty_orbit_e(&self, x: u8, key: &NfKey) -> Result<NormalForm> {
        if let Some(hit) = self.slow.get(&(x, key.clone())) {
            return Ok(hit.value().clone());
        }
        let n = self.tab.n;
        let zi = key.z.inv();
        let mut m = self.e_base(word::idx(x));
        for &g in zi.canonical_word(key.label, n).iter().rev() {
            m = self.left_mul(word::r(g), &m)?;
        }
        let out = m.op();
        self.slow.insert((x, key.clone()), out.clone());
        Ok(out)
    }

    // Orbit-deepening move: reduce the concatenated word once, memoized
    // per (generator, key); the bottom set takes part in the outcome.
    fn slow_path(&self, x: u8, key: &NfKey) -> Result<NormalForm> {
        if let Some(hit) = self.slow.get(&(x, key.clone())) {
            return Ok(hit.value().clone());
        }
        let mut w = Word::from_syms(vec![x]);
        w = w.concat(&nf::nf_word(&self.tab, key));
        let out = search::reduce_word(&self.tab, &w, self.budget)?;
        self.slow.insert((x, key.clone()), out.clone());
        Ok(out)
    }

    /// Normal form of a word, folded right to left.
    pub fn reduce(&self, w: &Word) -> Result<NormalForm> {
        let mut m = NormalForm::identity(&self.tab);
        m.delta = w.delta;
        for &x in w.syms.iter().rev() {
            m = self.left_mul(x, &m)?;
        }
        Ok(m)
    }

    /// Product of two normal forms: the left factor's canonical word is
    /// folded onto the right factor.
    pub fn mul(&self, a: &NormalForm, b: &NormalForm) -> Result<NormalForm> {
        let wa = nf::nf_word(&self.tab, &a.key);
        let mut m = b.clone();
        for &x in wa.syms.iter().rev() {
            m = self.left_mul(x, &m)?;
        }
        m.delta += a.delta;
        Ok(m)
    }

    /// All basis keys with `delta = 0`, grouped the way the rank formula
    /// counts them: for every orbit pair (top, bottom) every residual
    /// element.
    pub fn all_keys(&self) -> Vec<NfKey> {
        let tab = &self.tab;
        let mut out = Vec::new();
        for (label, members) in tab.orbits() {
            let elems = cox::elements(*label, tab.n);
            for &top in members {
                for &bottom in members {
                    for z in &elems {
                        out.push(NfKey {
                            label: *label,
                            top,
                            bottom,
                            z: z.clone(),
                        });
                    }
                }
            }
        }
        out
    }
}
