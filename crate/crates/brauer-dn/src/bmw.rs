//! The deformed algebra over the two-parameter ring.
//!
//! Reduction traces from [`crate::search`] drive everything.  Over the
//! monoid each table rule is an equality of words; over the ring five of
//! them deform.  The two absorptions `e r -> e` and `r e -> e` pick up
//! `l^-1`, the sandwich `e r e -> e` picks up `l`, and the square
//! `r r -> 1` and the mixed three- and four-symbol moves leave
//! lower-height correction words behind.  Replaying a trace therefore
//! yields a linear combination of keys: the main line carries a scalar
//! through the exact and weighted steps, and every correction splices a
//! template into the current word and reduces it recursively.  Heights
//! drop strictly on side words, so the recursion bottoms out.
//!
//! Two-way rules replay leftwards with negated correction scalars, which
//! is the defining identity read in the other direction.

use std::sync::OnceLock;

use dashmap::DashMap;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::admissible::YLabel;
use crate::brauer::{BrauerElement, Element};
use crate::coeff::{self, RElem};
use crate::cox;
use crate::engine::Engine;
use crate::nf::{self, NfKey};
use crate::search::{self, Reduction, DEFAULT_BUDGET};
use crate::word::{self, ElementaryStep, Rule, Syms, Word};
use crate::{Error, Result};

/// Linear combination of normal-form keys over the two-parameter ring.
pub type BMWElement = Element<RElem>;

macro_rules! cached {
    ($name:ident, $build:expr) => {
        fn $name() -> &'static RElem {
            static CELL: OnceLock<RElem> = OnceLock::new();
            CELL.get_or_init(|| $build)
        }
    };
}

cached!(m_pos, coeff::m_value());
cached!(m_neg, m_pos().neg());
cached!(m_sq, m_pos().mul(m_pos()));
cached!(m_sq_neg, m_sq().neg());
cached!(ml_inv, m_pos().mul(&RElem::l_pow(-1)));
cached!(ml_neg, m_pos().mul(&RElem::l_pow(1)).neg());
cached!(l_pos, RElem::l_pow(1));
cached!(l_inv, RElem::l_pow(-1));

/// Scalar weight and correction templates a replayed step contributes.
///
/// Templates replace the step's pattern window in the current word; the
/// surrounding letters and the word's `delta` stay.  For the two-way
/// mixed rules a leftward replay negates every correction scalar.
fn step_effect(s: &ElementaryStep) -> (Option<&'static RElem>, Vec<(Syms, &'static RElem)>) {
    use word::{e, r};
    let sy = |v: &[u8]| -> Syms { v.iter().copied().collect() };
    let pm = |plus: &'static RElem, minus: &'static RElem| if s.fwd { plus } else { minus };
    let (i, j, k) = (s.i, s.j, s.k);
    match s.rule {
        // r_i r_i -> 1 - m r_i + m l^-1 e_i
        Rule::RSrr => (
            None,
            vec![(sy(&[r(i)]), m_neg()), (sy(&[e(i)]), ml_inv())],
        ),
        Rule::RSer | Rule::RSre => (Some(l_inv()), Vec::new()),
        Rule::RNere => (Some(l_pos()), Vec::new()),
        // r_j e_i r_j -> r_i e_j r_i plus m-corrections on the four mixed
        // two-letter words and m^2 on the bare hooks
        Rule::HNrer => (
            None,
            vec![
                (sy(&[e(j), r(i)]), pm(m_pos(), m_neg())),
                (sy(&[e(i), r(j)]), pm(m_neg(), m_pos())),
                (sy(&[r(i), e(j)]), pm(m_pos(), m_neg())),
                (sy(&[r(j), e(i)]), pm(m_neg(), m_pos())),
                (sy(&[e(j)]), pm(m_sq(), m_sq_neg())),
                (sy(&[e(i)]), pm(m_sq_neg(), m_sq())),
            ],
        ),
        // r_j e_i e_j -> r_i e_j + m(e_j - e_i e_j)
        Rule::HNree => (
            None,
            vec![
                (sy(&[e(j)]), pm(m_pos(), m_neg())),
                (sy(&[e(i), e(j)]), pm(m_neg(), m_pos())),
            ],
        ),
        // e_j e_i r_j -> e_j r_i + m(e_j - e_j e_i)
        Rule::HNeer => (
            None,
            vec![
                (sy(&[e(j)]), pm(m_pos(), m_neg())),
                (sy(&[e(j), e(i)]), pm(m_neg(), m_pos())),
            ],
        ),
        // e_j r_i r_k e_j -> e_j e_i e_k e_j + m(e_j e_i r_k e_j - l e_j)
        Rule::RTerre => (
            None,
            vec![
                (sy(&[e(j), e(i), r(k), e(j)]), m_pos()),
                (sy(&[e(j)]), ml_neg()),
            ],
        ),
        _ => (None, Vec::new()),
    }
}

/// The current word with the step's pattern window replaced by a template.
fn splice(cur: &Word, pos: usize, cut: usize, tpl: &Syms) -> Word {
    let mut syms = Syms::with_capacity(cur.syms.len() - cut + tpl.len());
    syms.extend_from_slice(&cur.syms[..pos]);
    syms.extend_from_slice(tpl);
    syms.extend_from_slice(&cur.syms[pos + cut..]);
    Word::new(syms, cur.delta)
}

/// Reduction context: shares one engine's tables and memoizes both word
/// reductions and basis-pair products.
pub struct BmwCtx {
    eng: Engine,
    budget: usize,
    words: DashMap<Syms, BMWElement>,
    pairs: DashMap<(NfKey, NfKey), BMWElement>,
}

impl BmwCtx {
    pub fn new(eng: Engine) -> Self {
        BmwCtx {
            eng,
            budget: DEFAULT_BUDGET,
            words: DashMap::new(),
            pairs: DashMap::new(),
        }
    }

    pub fn for_rank(n: u8) -> Result<Self> {
        Ok(Self::new(Engine::new(crate::admissible::Tables::new(n)?)))
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn tab(&self) -> &crate::admissible::Tables {
        self.eng.tab()
    }

    pub fn engine(&self) -> &Engine {
        &self.eng
    }

    /// Expand a word into the basis.  The result is memoized per symbol
    /// sequence; the word's own power of `delta` scales the hit.
    pub fn reduce(&self, w: &Word) -> Result<BMWElement> {
        if let Some(hit) = self.words.get(&w.syms) {
            let el = hit.value().clone();
            drop(hit);
            return Ok(shift(el, w.delta));
        }
        let base = Word::new(w.syms.clone(), 0);
        let red = search::reduce_word_trace(self.tab(), &base, self.budget)?;
        let el = self.replay(&base, &red)?;
        self.words.insert(w.syms.clone(), el.clone());
        Ok(shift(el, w.delta))
    }

    /// Walk a trace, accumulating the main-line scalar and reducing each
    /// correction word as it is spliced off.
    fn replay(&self, start: &Word, red: &Reduction) -> Result<BMWElement> {
        let mut cur = start.clone();
        let mut coef = RElem::one();
        let mut out = BMWElement::zero();
        for s in &red.steps {
            let (scale, sides) = step_effect(s);
            if !sides.is_empty() {
                let pos = s.pos as usize;
                let cut = word::lhs_len(s);
                for (tpl, c) in sides {
                    let side = self.reduce(&splice(&cur, pos, cut, &tpl))?;
                    out = out.add(&side.scale(&coef.mul(c)));
                }
            }
            if let Some(sc) = scale {
                coef = coef.mul(sc);
            }
            cur = word::apply_step(&cur, s)?;
        }
        if cur.syms != red.terminal.syms || cur.delta != red.nf.delta {
            return Err(Error::Mismatch(format!(
                "trace replay for '{}' drifted from its terminal",
                start
            )));
        }
        out.add_term(red.nf.key.clone(), coef.mul(&RElem::delta_pow(cur.delta)));
        Ok(out)
    }

    /// Product of two basis keys, memoized.
    pub fn key_mul(&self, a: &NfKey, b: &NfKey) -> Result<BMWElement> {
        if let Some(hit) = self.pairs.get(&(a.clone(), b.clone())) {
            return Ok(hit.value().clone());
        }
        let mut syms = nf::nf_word(self.tab(), a).syms;
        syms.extend(nf::nf_word(self.tab(), b).syms.iter().copied());
        let el = self.reduce(&Word::new(syms, 0))?;
        self.pairs.insert((a.clone(), b.clone()), el.clone());
        Ok(el)
    }

    /// Bilinear extension of [`Self::key_mul`].
    pub fn mul(&self, x: &BMWElement, y: &BMWElement) -> Result<BMWElement> {
        let grid: Vec<(&NfKey, &RElem, &NfKey, &RElem)> = x
            .terms()
            .flat_map(|(ka, ca)| y.terms().map(move |(kb, cb)| (ka, ca, kb, cb)))
            .collect();
        let term = |(ka, ca, kb, cb): &(&NfKey, &RElem, &NfKey, &RElem)| -> Result<BMWElement> {
            Ok(self.key_mul(ka, kb)?.scale(&ca.mul(cb)))
        };
        let parts: Result<Vec<BMWElement>> = if grid.len() >= 64 {
            grid.par_iter().map(term).collect()
        } else {
            grid.iter().map(term).collect()
        };
        let mut out = BMWElement::zero();
        for p in parts? {
            out = out.add(&p);
        }
        Ok(out)
    }

    /// One-sided product of a basis key with a single generator.
    ///
    /// A reflection against a pure group key multiplies through the
    /// group: an ascent is exactly the longer key, and a descent
    /// rewrites through the square relation, leaving one hook word for
    /// the searcher.  Every other combination reduces the joined word.
    pub fn gen_mul(&self, x: u8, key: &NfKey, left: bool) -> Result<BMWElement> {
        let tab = self.tab();
        let join = |syms: &Syms, x: u8, left: bool| -> Word {
            let mut out = Syms::with_capacity(syms.len() + 1);
            if left {
                out.push(x);
                out.extend_from_slice(syms);
            } else {
                out.extend_from_slice(syms);
                out.push(x);
            }
            Word::new(out, 0)
        };
        if word::is_r(x) && matches!(key.label, YLabel::Y { t: 0 }) {
            let node = word::idx(x);
            let g = cox::generator(key.label, tab.n, node);
            let z2 = if left { g.mul(&key.z) } else { key.z.mul(&g) };
            let shorter = z2.length(key.label, tab.n) < key.z.length(key.label, tab.n);
            let k2 = NfKey {
                label: key.label,
                top: key.top,
                bottom: key.bottom,
                z: z2,
            };
            if !shorter {
                return Ok(Element::monomial(k2, RElem::one()));
            }
            let hook = self.reduce(&join(&nf::nf_word(tab, &k2).syms, word::e(node), left))?;
            return Ok(Element::monomial(k2, RElem::one())
                .add(&Element::monomial(key.clone(), RElem::one()).scale(m_neg()))
                .add(&hook.scale(ml_inv())));
        }
        self.reduce(&join(&nf::nf_word(tab, key).syms, x, left))
    }

    pub fn one(&self) -> BMWElement {
        Element::one(self.tab())
    }

    /// The invertible generator at a node, as an element.
    pub fn g(&self, i: u8) -> Result<BMWElement> {
        self.reduce(&Word::new([word::r(i)].into_iter().collect::<Syms>(), 0))
    }

    /// The hook generator at a node, as an element.
    pub fn e(&self, i: u8) -> Result<BMWElement> {
        self.reduce(&Word::new([word::e(i)].into_iter().collect::<Syms>(), 0))
    }

    /// `g_i^-1 = g_i + m - m e_i`, the inverse the square relation forces.
    pub fn g_inverse(&self, i: u8) -> Result<BMWElement> {
        Ok(self
            .g(i)?
            .add(&self.one().scale(m_pos()))
            .add(&self.e(i)?.scale(m_neg())))
    }

    /// The central hook word of the sub-diagram on the first `m` nodes.
    pub fn z_star(&self, m: u8) -> Result<BMWElement> {
        self.reduce(&Word::new(nf::z_star_word(&self.tab().rs, m), 0))
    }

    pub fn memo_len(&self) -> (usize, usize) {
        (self.words.len(), self.pairs.len())
    }
}

fn shift(el: BMWElement, d: i32) -> BMWElement {
    if d == 0 {
        el
    } else {
        el.scale(&RElem::delta_pow(d))
    }
}

/// Concrete deformed product.
pub fn bmw_mul(ctx: &BmwCtx, a: &BMWElement, b: &BMWElement) -> Result<BMWElement> {
    ctx.mul(a, b)
}

/// Specialize every coefficient through `l -> 1, m -> 0`, landing in the
/// monoid algebra.  Any coefficient outside the ring's image is an error.
pub fn mu_map(x: &BMWElement) -> Result<BrauerElement> {
    let mut out = BrauerElement::zero();
    for (k, c) in x.terms() {
        out.add_term(k.clone(), coeff::mu_specialize(c)?);
    }
    Ok(out)
}

/// Whether a key may appear in the ideal one stratum below `from`: the
/// twisted block always, a plain block only strictly deeper, and the
/// even-rank twin block only while the stratum above it is plain.
fn in_next_ideal(n: u8, from: YLabel, to: YLabel) -> bool {
    let t = u32::from(from.t());
    let star_from = matches!(from, YLabel::YStar { .. });
    match to {
        YLabel::YStar { .. } if star_from => u32::from(to.t()) > t,
        YLabel::YStar { .. } => true,
        _ if star_from => false,
        YLabel::Y { .. } => u32::from(to.t()) > t,
        YLabel::YPrime { .. } => n % 2 == 0 && u32::from(n) > 2 * t,
    }
}

/// Whether a product of a `from`-labelled key may have support on a
/// `to`-labelled key: weakly deeper in the stratification order, with
/// the twin block below every plain block above it and incomparable to
/// its own depth.
fn layer_allowed(n: u8, from: YLabel, to: YLabel) -> bool {
    match (from, to) {
        (YLabel::YStar { t: a }, YLabel::YStar { t: b }) => b >= a,
        (YLabel::YStar { .. }, _) => false,
        (_, YLabel::YStar { .. }) => true,
        (YLabel::Y { t: a }, YLabel::Y { t: b }) => b >= a,
        (YLabel::Y { t: a }, YLabel::YPrime { .. }) => 2 * u32::from(a) < u32::from(n),
        (YLabel::YPrime { .. }, YLabel::YPrime { .. }) => true,
        (YLabel::YPrime { .. }, YLabel::Y { .. }) => false,
    }
}

/// Outcome of the deformed-relation checks for one block label.
#[derive(Debug)]
pub struct HeckeReport {
    pub label: YLabel,
    pub nodes: Vec<u8>,
    pub unit_ok: bool,
    pub braid_ok: bool,
    pub quad_ok: bool,
    pub rho_ok: bool,
    pub rho_pairs: usize,
    pub defect_labels: Vec<String>,
    pub failures: Vec<String>,
}

impl HeckeReport {
    pub fn ok(&self) -> bool {
        self.unit_ok && self.braid_ok && self.quad_ok && self.rho_ok
    }

    pub fn to_json(&self) -> Value {
        json!({
            "label": self.label.to_string(),
            "nodes": self.nodes,
            "unit_ok": self.unit_ok,
            "braid_ok": self.braid_ok,
            "quad_ok": self.quad_ok,
            "rho_ok": self.rho_ok,
            "rho_pairs": self.rho_pairs,
            "defect_labels": self.defect_labels,
            "failures": self.failures,
        })
    }
}

/// A reduced word for `z` chosen by peeling random left descents.
fn random_reduced_word(z: &cox::CoxElem, label: YLabel, n: u8, rng: &mut StdRng) -> Vec<u8> {
    let gens = cox::gen_nodes(label, n);
    let mut cur = z.clone();
    let mut out = Vec::new();
    while !cur.is_identity() {
        let ds: Vec<u8> = gens.iter().copied().filter(|&g| cur.left_descent(g)).collect();
        let g = ds[rng.gen_range(0..ds.len())];
        out.push(g);
        cur = cox::generator(label, n, g).mul(&cur);
    }
    out
}

/// Check the deformed group-like relations over one block: the weighted
/// idempotent acts as a unit on its generators, the generators satisfy
/// the block diagram's braid relations on the nose, each quadratic
/// defect is supported one stratum down, and the element attached to a
/// residual group element does not depend on the reduced word chosen.
pub fn hecke_check(ctx: &BmwCtx, label: YLabel, rho_samples: usize, seed: u64) -> Result<HeckeReport> {
    let tab = ctx.tab();
    let n = tab.n;
    let nodes = cox::gen_nodes(label, n);
    let mut failures = Vec::new();

    let e_syms = tab.e_word(label).syms.clone();
    let pad = label.nodes(n).len() as i32;
    let e_hat = ctx.reduce(&Word::new(e_syms.clone(), -pad))?;
    let mut shat = Vec::with_capacity(nodes.len());
    for &gnode in &nodes {
        let mut syms = nf::gen_bare(&tab.rs, label, n, gnode);
        syms.extend(e_syms.iter().copied());
        shat.push(ctx.reduce(&Word::new(syms, nf::gen_delta_exp(label, n, gnode)))?);
    }

    let mut unit_ok = ctx.mul(&e_hat, &e_hat)? == e_hat;
    if !unit_ok {
        failures.push(format!("{label}: weighted idempotent fails to square to itself"));
    }
    for (ix, s) in shat.iter().enumerate() {
        let absorbed = ctx.mul(&e_hat, s)? == *s && ctx.mul(s, &e_hat)? == *s;
        let symmetric = s.op() == *s;
        if !(absorbed && symmetric) {
            unit_ok = false;
            failures.push(format!("{label}: generator at node {} misbehaves", nodes[ix]));
        }
    }

    let mut braid_ok = true;
    for a in 0..nodes.len() {
        for b in a + 1..nodes.len() {
            let x = cox::generator(label, n, nodes[a]).mul(&cox::generator(label, n, nodes[b]));
            let mut p = x.clone();
            let mut ord = 1usize;
            while !p.is_identity() {
                p = p.mul(&x);
                ord += 1;
            }
            let holds = match ord {
                2 => ctx.mul(&shat[a], &shat[b])? == ctx.mul(&shat[b], &shat[a])?,
                3 => {
                    let lhs = ctx.mul(&ctx.mul(&shat[a], &shat[b])?, &shat[a])?;
                    let rhs = ctx.mul(&ctx.mul(&shat[b], &shat[a])?, &shat[b])?;
                    lhs == rhs
                }
                _ => false,
            };
            if !holds {
                braid_ok = false;
                failures.push(format!(
                    "{label}: braid relation of order {ord} fails at nodes {} {}",
                    nodes[a], nodes[b]
                ));
            }
        }
    }

    let mut quad_ok = true;
    let mut defect_labels: Vec<String> = Vec::new();
    for (ix, s) in shat.iter().enumerate() {
        let defect = ctx.mul(s, s)?.add(&s.scale(m_pos())).sub(&e_hat);
        for (k, _) in defect.terms() {
            let ls = k.label.to_string();
            if !defect_labels.contains(&ls) {
                defect_labels.push(ls);
            }
            if !in_next_ideal(n, label, k.label) {
                quad_ok = false;
                failures.push(format!(
                    "{label}: quadratic defect at node {} touches {}",
                    nodes[ix], k.label
                ));
            }
        }
    }
    defect_labels.sort();

    let mut rho_ok = true;
    let mut rho_pairs = 0usize;
    if !nodes.is_empty() && rho_samples > 0 {
        let mut rng = StdRng::seed_from_u64(seed);
        let idx_of = |g: u8| nodes.iter().position(|&x| x == g).unwrap();
        let fold = |wd: &[u8]| -> Result<BMWElement> {
            let mut acc = e_hat.clone();
            for &g in wd {
                acc = ctx.mul(&acc, &shat[idx_of(g)])?;
            }
            Ok(acc)
        };
        let els = cox::elements_with_length(label, n);
        let pool: Vec<&cox::CoxElem> = els
            .iter()
            .filter(|(_, l)| (2..=6).contains(l))
            .map(|(z, _)| z)
            .collect();
        for _ in 0..rho_samples {
            if pool.is_empty() {
                break;
            }
            let z = pool[rng.gen_range(0..pool.len())];
            let w1 = z.canonical_word(label, n);
            let mut w2 = random_reduced_word(z, label, n, &mut rng);
            for _ in 0..4 {
                if w2 != w1 {
                    break;
                }
                w2 = random_reduced_word(z, label, n, &mut rng);
            }
            rho_pairs += 1;
            if fold(&w1)? != fold(&w2)? {
                rho_ok = false;
                failures.push(format!(
                    "{label}: reduced words {:?} and {:?} give different elements",
                    w1, w2
                ));
            }
        }
    }

    Ok(HeckeReport {
        label,
        nodes,
        unit_ok,
        braid_ok,
        quad_ok,
        rho_ok,
        rho_pairs,
        defect_labels,
        failures,
    })
}

/// Outcome of the stratification sweep over a whole rank.
#[derive(Debug)]
pub struct FiltrationReport {
    pub keys: usize,
    pub products: usize,
    pub layer_ok: bool,
    pub op_ok: bool,
    pub failures: Vec<String>,
}

impl FiltrationReport {
    pub fn ok(&self) -> bool {
        self.layer_ok && self.op_ok
    }

    pub fn to_json(&self) -> Value {
        json!({
            "keys": self.keys,
            "products": self.products,
            "layer_ok": self.layer_ok,
            "op_ok": self.op_ok,
            "failures": self.failures,
        })
    }
}

/// Multiply every basis key by every generator on both sides and verify
/// the support never climbs the stratification, and that transposing a
/// one-sided product equals the mirrored product of the transposed key.
pub fn filtration_check(ctx: &BmwCtx) -> Result<FiltrationReport> {
    let tab = ctx.tab();
    let keys = ctx.engine().all_keys();
    let gens: Vec<u8> = (1..=tab.n).flat_map(|i| [word::r(i), word::e(i)]).collect();

    // Each worker handles the left products of its key and the right
    // products of the transposed key; over the whole sweep that covers
    // both sides of every key once.
    let per_key = |key: &NfKey| -> Result<(usize, Vec<String>)> {
        let mut fails = Vec::new();
        let mut products = 0usize;
        let kop = key.op();
        if kop.op() != *key || kop.label != key.label {
            fails.push(format!("transpose of a {} key is malformed", key.label));
        }
        for &x in &gens {
            let left = ctx.gen_mul(x, key, true)?;
            let right_of_op = ctx.gen_mul(x, &kop, false)?;
            products += 2;
            if left.op() != right_of_op {
                fails.push(format!(
                    "reversal mismatch on a {} key under generator {}",
                    key.label,
                    word::idx(x)
                ));
            }
            for p in [&left, &right_of_op] {
                for (k, _) in p.terms() {
                    if !layer_allowed(tab.n, key.label, k.label) {
                        fails.push(format!(
                            "support of a generator product climbs from {} to {}",
                            key.label, k.label
                        ));
                    }
                }
            }
        }
        Ok((products, fails))
    };

    let rows: Result<Vec<(usize, Vec<String>)>> = keys.par_iter().map(per_key).collect();
    let mut products = 0usize;
    let mut layer_fails = 0usize;
    let mut op_fails = 0usize;
    let mut failures = Vec::new();
    for (p, fails) in rows? {
        products += p;
        for f in fails {
            if f.starts_with("reversal") || f.starts_with("transpose") {
                op_fails += 1;
            } else {
                layer_fails += 1;
            }
            if failures.len() < 20 {
                failures.push(f);
            }
        }
    }
    Ok(FiltrationReport {
        keys: keys.len(),
        products,
        layer_ok: layer_fails == 0,
        op_ok: op_fails == 0,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{e, r};

    fn ctx() -> &'static BmwCtx {
        static CTX: OnceLock<BmwCtx> = OnceLock::new();
        CTX.get_or_init(|| BmwCtx::for_rank(4).unwrap())
    }

    fn w(syms: &[u8]) -> Word {
        Word::new(syms.iter().copied().collect::<Syms>(), 0)
    }

    fn key_of(el: &BMWElement) -> NfKey {
        assert_eq!(el.num_terms(), 1, "expected a monomial, got {} terms", el.num_terms());
        el.terms().next().unwrap().0.clone()
    }

    #[test]
    fn reflection_square_expands() {
        let c = ctx();
        let x = c.reduce(&w(&[r(1), r(1)])).unwrap();
        let expected = c
            .one()
            .add(&c.g(1).unwrap().scale(m_neg()))
            .add(&c.e(1).unwrap().scale(ml_inv()));
        assert_eq!(x, expected);
    }

    #[test]
    fn hooks_absorb_reflections_with_weights() {
        let c = ctx();
        let e1 = c.e(1).unwrap();
        assert_eq!(c.reduce(&w(&[e(1), r(1)])).unwrap(), e1.scale(l_inv()));
        assert_eq!(c.reduce(&w(&[r(1), e(1)])).unwrap(), e1.scale(l_inv()));
        assert_eq!(c.reduce(&w(&[e(1), r(3), e(1)])).unwrap(), e1.scale(l_pos()));
    }

    #[test]
    fn g_inverse_is_two_sided() {
        let c = ctx();
        for i in 1..=4 {
            let g = c.g(i).unwrap();
            let inv = c.g_inverse(i).unwrap();
            assert_eq!(c.mul(&g, &inv).unwrap(), c.one(), "left inverse at node {i}");
            assert_eq!(c.mul(&inv, &g).unwrap(), c.one(), "right inverse at node {i}");
        }
    }

    fn random_word(rng: &mut StdRng, max_len: usize) -> Word {
        let len = rng.gen_range(0..=max_len);
        let syms: Syms = (0..len)
            .map(|_| {
                let i = rng.gen_range(1..=4u8);
                if rng.gen_bool(0.5) {
                    r(i)
                } else {
                    e(i)
                }
            })
            .collect();
        Word::new(syms, 0)
    }

    #[test]
    fn specializing_recovers_the_monoid_reduction() {
        let c = ctx();
        let mut rng = StdRng::seed_from_u64(40);
        for _ in 0..40 {
            let word = random_word(&mut rng, 8);
            let spec = mu_map(&c.reduce(&word).unwrap()).unwrap();
            let direct = BrauerElement::from_nf(&c.engine().reduce(&word).unwrap());
            assert_eq!(spec, direct, "specialization disagrees on '{}'", word);
        }
    }

    #[test]
    fn exact_premoves_do_not_change_the_element() {
        let c = ctx();
        let mut rng = StdRng::seed_from_u64(41);
        let mut checked = 0usize;
        while checked < 25 {
            let word = random_word(&mut rng, 8);
            let base = c.reduce(&word).unwrap();
            let mut moved = Vec::new();
            word::for_each_step(&word, 4, |s, after| {
                let exact = matches!(
                    s.rule,
                    Rule::HSee
                        | Rule::HCrr
                        | Rule::HCer
                        | Rule::HCee
                        | Rule::HNrrr
                        | Rule::HNeee
                        | Rule::HTeere
                        | Rule::RNrre
                        | Rule::RNerr
                );
                if exact && moved.len() < 3 {
                    moved.push(after);
                }
            });
            for after in moved {
                assert_eq!(c.reduce(&after).unwrap(), base, "premove changed '{}'", word);
                checked += 1;
            }
        }
    }

    #[test]
    fn central_element_squares_to_the_closed_form() {
        let c = ctx();
        let zw = nf::z_star_word(&c.tab().rs, 4);
        let zel = c.reduce(&Word::new(zw.clone(), 0)).unwrap();
        let zkey = key_of(&zel);
        assert_eq!(zel.coeff(&zkey), RElem::delta_pow(-1));

        let mut sq = zw.clone();
        sq.extend(zw.iter().copied());
        let x = c.reduce(&Word::new(sq, 0)).unwrap();
        let ekey = key_of(&c.e(4).unwrap());
        assert_eq!(x.coeff(&ekey), RElem::delta_pow(1));
        assert_eq!(x.coeff(&zkey), m_neg().clone());
        for (k, _) in x.terms() {
            if k != &ekey && k != &zkey {
                assert!(
                    matches!(k.label, YLabel::YStar { .. }),
                    "unexpected support on {}",
                    k.label
                );
            }
        }
    }

    #[test]
    fn central_element_commutes_and_absorbs() {
        let c = ctx();
        let zw = nf::z_star_word(&c.tab().rs, 4);
        let cat = |a: &[u8], b: &[u8]| -> Word {
            let mut s: Syms = a.iter().copied().collect();
            s.extend(b.iter().copied());
            Word::new(s, 0)
        };
        for i in [1u8, 2] {
            let left = c.reduce(&cat(&[r(i)], &zw)).unwrap();
            let right = c.reduce(&cat(&zw, &[r(i)])).unwrap();
            assert_eq!(left, right, "reflection {i} does not commute");
        }
        let z2 = nf::z_star_word(&c.tab().rs, 2);
        let z1 = nf::z_star_word(&c.tab().rs, 1);
        assert_eq!(
            c.reduce(&cat(&[e(2)], &zw)).unwrap(),
            c.reduce(&cat(&z2, &[e(4)])).unwrap()
        );
        assert_eq!(
            c.reduce(&cat(&[e(1)], &zw)).unwrap(),
            c.reduce(&cat(&z1, &[e(4)])).unwrap()
        );
        assert_eq!(
            c.reduce(&cat(&zw, &[e(2)])).unwrap(),
            c.reduce(&cat(&[e(4)], &z2)).unwrap()
        );
        let zel = c.reduce(&Word::new(zw.clone(), 0)).unwrap();
        assert_eq!(
            c.reduce(&cat(&[e(4)], &zw)).unwrap(),
            zel.scale(&RElem::delta_pow(1))
        );
    }

    #[test]
    fn opposition_reverses_products() {
        let c = ctx();
        let keys = c.engine().all_keys();
        for step in [37usize, 211, 467] {
            let a = Element::monomial(keys[step % keys.len()].clone(), RElem::one());
            let b = Element::monomial(keys[(step * 3) % keys.len()].clone(), RElem::one());
            let lhs = c.mul(&a, &b).unwrap().op();
            let rhs = c.mul(&b.op(), &a.op()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn group_fast_path_matches_the_searcher() {
        let c = ctx();
        let picks: Vec<NfKey> = c
            .engine()
            .all_keys()
            .into_iter()
            .filter(|k| {
                matches!(k.label, YLabel::Y { t: 0 }) && k.z.length(k.label, 4) <= 4
            })
            .step_by(7)
            .take(6)
            .collect();
        assert!(!picks.is_empty());
        for key in &picks {
            let base = nf::nf_word(c.tab(), key);
            for i in 1..=4u8 {
                for left in [true, false] {
                    let fast = c.gen_mul(r(i), key, left).unwrap();
                    let mut syms = Syms::new();
                    if left {
                        syms.push(r(i));
                        syms.extend_from_slice(&base.syms);
                    } else {
                        syms.extend_from_slice(&base.syms);
                        syms.push(r(i));
                    }
                    let slow = c.reduce(&Word::new(syms, 0)).unwrap();
                    assert_eq!(fast, slow, "disagree at node {i} left={left}");
                }
            }
        }
    }

    #[test]
    fn hecke_relations_hold_on_a_small_block() {
        let rep = hecke_check(ctx(), YLabel::Y { t: 1 }, 2, 11).unwrap();
        assert!(rep.ok(), "failures: {:?}", rep.failures);
    }
}
