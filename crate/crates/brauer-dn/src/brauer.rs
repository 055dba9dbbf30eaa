//! The Brauer algebra: linear combinations of normal-form keys.
//!
//! A key stores no power of `d`; all of that bookkeeping lives in the
//! coefficient, so a product of two basis monomials is a single key times
//! `d^k`.  Key-level products are memoized in a shared table and the
//! bilinear extension fans out over the pair grid in parallel when the
//! operands are large.  The container is generic over the coefficient
//! ring so the BMW side can reuse it with its own multiplication.

use dashmap::DashMap;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde_json::{json, Value};

use crate::admissible::{self, Tables, YLabel};
use crate::coeff::{Coeff, LaurentDelta};
use crate::cox;
use crate::engine::Engine;
use crate::nf::{self, NfKey, NormalForm};
use crate::{Error, Result};

/// A finite sum of basis keys with coefficients in `C`.
#[derive(Clone, Debug)]
pub struct Element<C: Coeff> {
    terms: FxHashMap<NfKey, C>,
}

/// Brauer algebra element over `Z[d, d^-1]`.
pub type BrauerElement = Element<LaurentDelta>;

impl<C: Coeff> Default for Element<C> {
    fn default() -> Self {
        Element {
            terms: FxHashMap::default(),
        }
    }
}

impl<C: Coeff> PartialEq for Element<C> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<C: Coeff> Element<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one(tab: &Tables) -> Self {
        Self::monomial(NfKey::identity(tab), C::one())
    }

    pub fn monomial(key: NfKey, c: C) -> Self {
        let mut e = Self::zero();
        e.add_term(key, c);
        e
    }

    /// A reduced word as an element: the key with `d^delta` folded into
    /// the coefficient.
    pub fn from_nf(nf: &NormalForm) -> Self {
        Self::monomial(nf.key.clone(), C::delta_pow(nf.delta))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, key: &NfKey) -> C {
        self.terms.get(key).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NfKey, &C)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, key: NfKey, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::hash_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Element {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (k, a) in &self.terms {
            out.add_term(k.clone(), a.mul(c));
        }
        out
    }

    /// Reversal anti-automorphism, key by key; `d` is central so the
    /// coefficients stay put.
    pub fn op(&self) -> Self {
        Element {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.op(), c.clone()))
                .collect(),
        }
    }

    /// Terms in a stable display order.
    pub fn sorted_terms(&self, tab: &Tables) -> Vec<(&NfKey, &C)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_cached_key(|(k, _)| {
            (
                label_ord(k.label),
                k.top,
                k.bottom,
                k.z.canonical_word(k.label, tab.n),
            )
        });
        v
    }

    pub fn render(&self, tab: &Tables) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.sorted_terms(tab)
            .into_iter()
            .map(|(k, c)| format!("({}) {}", c, nf::nf_word(tab, k)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn label_ord(l: YLabel) -> (u8, u8) {
    match l {
        YLabel::Y { t } => (0, t),
        YLabel::YPrime { t } => (1, t),
        YLabel::YStar { t } => (2, t),
    }
}

/// Multiplication context: the reduction engine plus the memo of key-level
/// products (the structure constants of the monomial basis, filled lazily).
pub struct BrauerCtx {
    eng: Engine,
    pairs: DashMap<(NfKey, NfKey), NormalForm>,
}

impl BrauerCtx {
    pub fn new(eng: Engine) -> Self {
        BrauerCtx {
            eng,
            pairs: DashMap::new(),
        }
    }

    pub fn for_rank(n: u8) -> Result<Self> {
        Ok(Self::new(Engine::new(Tables::new(n)?)))
    }

    pub fn tab(&self) -> &Tables {
        self.eng.tab()
    }

    pub fn engine(&self) -> &Engine {
        &self.eng
    }

    /// Product of two basis keys: always a single key times `d^k`.
    pub fn key_mul(&self, a: &NfKey, b: &NfKey) -> Result<NormalForm> {
        if let Some(hit) = self.pairs.get(&(a.clone(), b.clone())) {
            return Ok(hit.value().clone());
        }
        let r = self.eng.mul(
            &NormalForm {
                key: a.clone(),
                delta: 0,
            },
            &NormalForm {
                key: b.clone(),
                delta: 0,
            },
        )?;
        self.pairs.insert((a.clone(), b.clone()), r.clone());
        Ok(r)
    }

    /// Bilinear extension of [`Self::key_mul`], coefficient ring generic.
    pub fn mul<C: Coeff>(&self, x: &Element<C>, y: &Element<C>) -> Result<Element<C>> {
        let grid: Vec<(&NfKey, &C, &NfKey, &C)> = x
            .terms
            .iter()
            .flat_map(|(ka, ca)| y.terms.iter().map(move |(kb, cb)| (ka, ca, kb, cb)))
            .collect();
        let parts: Result<Vec<(NfKey, C)>> = if grid.len() >= 64 {
            grid.par_iter()
                .map(|(ka, ca, kb, cb)| {
                    let nf = self.key_mul(ka, kb)?;
                    Ok((nf.key, ca.mul(cb).mul(&C::delta_pow(nf.delta))))
                })
                .collect()
        } else {
            grid.iter()
                .map(|(ka, ca, kb, cb)| {
                    let nf = self.key_mul(ka, kb)?;
                    Ok((nf.key, ca.mul(cb).mul(&C::delta_pow(nf.delta))))
                })
                .collect()
        };
        let mut out = Element::zero();
        for (k, c) in parts? {
            out.add_term(k, c);
        }
        Ok(out)
    }

    pub fn memo_len(&self) -> usize {
        self.pairs.len()
    }
}

/// Concrete Brauer product.
pub fn br_mul(ctx: &BrauerCtx, a: &BrauerElement, b: &BrauerElement) -> Result<BrauerElement> {
    ctx.mul(a, b)
}

/// One line of the rank census.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankRow {
    pub label: YLabel,
    pub orbit_size: u64,
    pub group_order: u64,
}

impl RankRow {
    pub fn contribution(&self) -> u64 {
        self.orbit_size * self.orbit_size * self.group_order
    }
}

/// Per-label basis census: `sum |orbit|^2 * |W(M_Y)|` over the labels.
/// Checks the total against the closed-form rank and errors on any gap.
pub fn rank_count(tab: &Tables) -> Result<(Vec<RankRow>, u64)> {
    let n = tab.n;
    let rows: Vec<RankRow> = tab
        .orbits()
        .iter()
        .map(|(label, members)| RankRow {
            label: *label,
            orbit_size: members.len() as u64,
            group_order: label.group_order(n),
        })
        .collect();
    let total: u64 = rows.iter().map(|r| r.contribution()).sum();
    let expect = admissible::closed_rank(n);
    if total != expect {
        return Err(Error::Mismatch(format!(
            "orbit census gives rank {total} but the closed form gives {expect} at n = {n}"
        )));
    }
    Ok((rows, total))
}

/// Rank of the Theta ideal: the closed sum over hook counts must agree
/// with the census over the starred labels.
pub fn theta_rank(tab: &Tables) -> Result<u64> {
    let n = tab.n as u64;
    let fact = |k: u64| (1..=k).product::<u64>();
    let mut formula = 0u64;
    for t in 1..=(n / 2) {
        let pairings = fact(n) / ((1u64 << t) * fact(t) * fact(n - 2 * t));
        formula += pairings * pairings * fact(n - 2 * t);
    }
    let census: u64 = tab
        .orbits()
        .iter()
        .filter(|(label, _)| matches!(label, YLabel::YStar { .. }))
        .map(|(label, members)| {
            let m = members.len() as u64;
            m * m * label.group_order(tab.n)
        })
        .sum();
    if formula != census {
        return Err(Error::Mismatch(format!(
            "Theta rank formula gives {formula} but the starred-label census gives {census}"
        )));
    }
    Ok(formula)
}

/// All keys of height zero: both ends at height-zero sets and a trivial
/// residual part.  These are exactly the e-only monomials.
pub fn tl_basis(tab: &Tables) -> Vec<NfKey> {
    let mut keys = Vec::new();
    for (label, members) in tab.orbits() {
        let flat: Vec<u32> = members
            .iter()
            .copied()
            .filter(|&id| tab.set_height(id) == 0)
            .collect();
        for &top in &flat {
            for &bottom in &flat {
                keys.push(NfKey {
                    label: *label,
                    top,
                    bottom,
                    z: cox::identity(*label, tab.n),
                });
            }
        }
    }
    keys
}

/// Closes the height-zero key set under multiplication and reports
/// whether every product stays inside it (up to powers of `d`).
pub fn tl_closure_check(ctx: &BrauerCtx) -> Result<(usize, bool)> {
    let basis = tl_basis(ctx.tab());
    let index: std::collections::HashSet<&NfKey> = basis.iter().collect();
    let products: Result<Vec<NormalForm>> = basis
        .par_iter()
        .flat_map(|a| basis.par_iter().map(move |b| ctx.key_mul(a, b)))
        .collect();
    let closed = products?.iter().all(|nf| index.contains(&nf.key));
    Ok((basis.len(), closed))
}

/// Rank table as CSV, one line per label plus a total line.
pub fn rank_csv(rows: &[RankRow], total: u64) -> String {
    let mut s = String::from("label,orbit_size,group_order,contribution\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{}\n",
            r.label,
            r.orbit_size,
            r.group_order,
            r.contribution()
        ));
    }
    s.push_str(&format!("total,,,{total}\n"));
    s
}

/// Orbit statistics: per label the size, representative set, and the
/// spread of set heights.
pub fn orbit_stats_json(tab: &Tables) -> Value {
    let orbits: Vec<Value> = tab
        .orbits()
        .iter()
        .map(|(label, members)| {
            let heights: Vec<u32> = members.iter().map(|&id| tab.set_height(id)).collect();
            json!({
                "label": label.to_string(),
                "size": members.len(),
                "rep": tab.set(tab.rep(*label)).to_string(),
                "group_order": label.group_order(tab.n),
                "min_height": heights.iter().min().copied().unwrap_or(0),
                "max_height": heights.iter().max().copied().unwrap_or(0),
            })
        })
        .collect();
    json!({
        "n": tab.n,
        "num_sets": tab.num_sets(),
        "orbits": orbits,
    })
}
