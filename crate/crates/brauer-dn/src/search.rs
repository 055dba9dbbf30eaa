//! Word reduction by guided search.
//!
//! Strict steps are applied eagerly; between descents the homogeneous
//! class is explored from both ends.  The two monoid actions pin the top
//! and bottom sets of the eventual normal form outright, and the word's
//! height then leaves only a handful of residual candidates, so the
//! search seeds those candidate terminal words too and stops as soon as
//! the two frontiers share a word.  Without the backward frontier the
//! forward side would have to enumerate every arrangement between a
//! short input and a much longer canonical word, which explodes.  Both
//! frontiers are funnelled through the hook contractions before any word
//! is stored, which keeps them in the same short band; a couple of
//! unfunnelled rungs remain as a completeness backstop.  This is the
//! reference reducer: it knows nothing beyond the rewrite rules, the
//! actions, and the terminal shape, so the table-driven engine can be
//! checked against it.

use std::cmp::Reverse;
use std::collections::hash_map::Entry;
use std::collections::BinaryHeap;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use crate::admissible::{Tables, YLabel};
use crate::cox::{self, CoxElem};
use crate::nf::{self, NfKey, NormalForm};
use crate::word::{self, ElementaryStep, Rule, Syms, Word};
use crate::{Error, Result};

/// Enough for every word the test sweeps throw at the searcher; callers
/// with adversarial inputs can raise it.
pub const DEFAULT_BUDGET: usize = 4_000_000;

/// A reduction with its witness: the word that parsed and the elementary
/// steps leading to it from the input.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub nf: NormalForm,
    pub terminal: Word,
    pub steps: Vec<ElementaryStep>,
}

pub fn reduce_word(tab: &Tables, w: &Word, budget: usize) -> Result<NormalForm> {
    run(tab, w, budget, false).map(|r| r.nf)
}

/// Like [`reduce_word`] but records the step path for replaying the same
/// reduction over a richer coefficient ring.
pub fn reduce_word_trace(tab: &Tables, w: &Word, budget: usize) -> Result<Reduction> {
    run(tab, w, budget, true)
}

const FWD: u8 = 0;
const BWD: u8 = 1;

/// Contract `e_i e_i` and `e_i e_j e_i` (adjacent `i`, `j`) to fixpoint.
/// Both contractions are height-preserving table moves, so the result is
/// a faithful shorter word in the same class, and the recorded steps
/// keep traces exact.  Canonical seeds need this most: a hook set next
/// to the central token produces squares like `e_4 e_4` straight away,
/// stranding the seed far above the band where the input words live.
fn funnel(mut w: Word, track: bool) -> (Word, Vec<ElementaryStep>) {
    let mut steps = Vec::new();
    'scan: loop {
        let syms = &w.syms;
        for p in 0..syms.len() {
            let s0 = syms[p];
            if !word::is_e(s0) {
                continue;
            }
            let a = word::idx(s0);
            let hit = if p + 1 < syms.len() && syms[p + 1] == s0 {
                Some(ElementaryStep {
                    rule: Rule::HSee,
                    pos: p as u16,
                    fwd: true,
                    i: a,
                    j: 0,
                    k: 0,
                })
            } else if p + 2 < syms.len()
                && syms[p + 2] == s0
                && word::is_e(syms[p + 1])
                && word::adjacent(a, word::idx(syms[p + 1]))
            {
                Some(ElementaryStep {
                    rule: Rule::HNeee,
                    pos: p as u16,
                    fwd: true,
                    i: a,
                    j: word::idx(syms[p + 1]),
                    k: 0,
                })
            } else {
                None
            };
            if let Some(s) = hit {
                w = word::apply_step(&w, &s).expect("funnel contraction applies");
                if track {
                    steps.push(s);
                }
                continue 'scan;
            }
        }
        break;
    }
    (w, steps)
}

fn run(tab: &Tables, start: &Word, budget: usize, track: bool) -> Result<Reduction> {
    let n = tab.n;
    // Rewrites fix the underlying element, so both end sets and the label
    // are invariants of the entire run, not just of one descent phase.
    let top = tab.eval_action(start, tab.empty_id());
    let bottom = tab.eval_action_op(start, tab.empty_id());
    let label = tab.label(top);
    if tab.label(bottom) != label {
        return Err(Error::Cache(format!(
            "the two end actions of {start} disagree on the label"
        )));
    }
    let residuals: Arc<Vec<(CoxElem, usize)>> = if label == (YLabel::Y { t: 0 }) {
        // A word with label Y(0) is a pure reflection word and evaluates
        // directly; enumerating the whole Weyl group would be wasteful.
        let nodes: Vec<u8> = start.syms.iter().map(|&s| word::idx(s)).collect();
        if start.syms.iter().any(|&s| word::is_e(s)) {
            return Err(Error::Cache(format!("{start} has hooks but acts trivially")));
        }
        let z = cox::eval_nodes(label, n, &nodes);
        let l = z.length(label, n);
        Arc::new(vec![(z, l)])
    } else {
        cox::elements_with_length(label, n)
    };
    let span = (tab.set_height(top) + tab.set_height(bottom)) as usize;

    let mut prefix: Vec<ElementaryStep> = Vec::new();
    let mut cur = start.clone();
    let mut pops = budget;
    'restart: loop {
        loop {
            let mut moved = false;
            while let Some((s, next)) = word::find_strict_step(&cur, n) {
                if track {
                    prefix.push(s);
                }
                cur = next;
                moved = true;
            }
            // Contractions can expose new strict steps (a collapsed
            // square may bring `e_i r_i` together), so alternate the two
            // to a joint fixpoint.
            let (fw, fs) = funnel(cur.clone(), track);
            if fw.syms != cur.syms {
                if track {
                    prefix.extend(fs);
                }
                cur = fw;
                moved = true;
            }
            if !moved {
                break;
            }
        }
        // Candidate terminals share the word's height; the residual part
        // accounts for whatever the two access words do not.
        let mut cands: Vec<(NfKey, Word)> = Vec::new();
        if cur.height() >= span {
            let zlen = cur.height() - span;
            for (z, zl) in residuals.iter() {
                if *zl == zlen {
                    let key = NfKey {
                        label,
                        top,
                        bottom,
                        z: z.clone(),
                    };
                    let w = nf::nf_word(tab, &key);
                    cands.push((key, w));
                }
            }
        }
        // The meeting word sits in the input's length band: inflation is
        // only ever needed to reach a canonical arrangement, and that is
        // the backward side's job, working downward from the seeds.  So
        // the forward side starts out barred from growing at all, and
        // exploration is capped a little above both endpoints.  The
        // restrictions lift rung by rung if the slice runs dry, ending
        // with unfunnelled rungs in case a meet exists only through a
        // pattern the funnel keeps collapsing.
        for (slack, fwd_grow, fun) in [
            (2usize, false, true),
            (2, true, true),
            (6, true, false),
            (10, true, false),
        ] {
            let seeds: Vec<(Word, Vec<ElementaryStep>)> = cands
                .iter()
                .map(|(_, w)| {
                    if fun {
                        funnel(w.clone(), track)
                    } else {
                        (w.clone(), Vec::new())
                    }
                })
                .collect();
            let base = cur
                .len()
                .max(seeds.iter().map(|(w, _)| w.len()).max().unwrap_or(0));
            let cap = base + slack;
            let mut seen_f: FxHashMap<Syms, i32> = FxHashMap::default();
            let mut seen_b: FxHashMap<Syms, (i32, u32)> = FxHashMap::default();
            let mut parent_f: FxHashMap<Syms, (Syms, Vec<ElementaryStep>)> = FxHashMap::default();
            let mut parent_b: FxHashMap<Syms, (Syms, Vec<ElementaryStep>)> = FxHashMap::default();
            let mut heap: BinaryHeap<Reverse<(usize, u8, Syms)>> = BinaryHeap::new();
            seen_f.insert(cur.syms.clone(), cur.delta);
            heap.push(Reverse((cur.len(), FWD, cur.syms.clone())));
            for (ix, (w, _)) in seeds.iter().enumerate() {
                seen_b.insert(w.syms.clone(), (w.delta, ix as u32));
                heap.push(Reverse((w.len(), BWD, w.syms.clone())));
            }
            let mut descend: Option<(ElementaryStep, Word, Syms)> = None;
            while let Some(Reverse((_, side, syms))) = heap.pop() {
                if pops == 0 {
                    return Err(Error::ReduceFailed(budget));
                }
                pops -= 1;
                if side == FWD {
                    let df = seen_f[&syms];
                    if let Some(&(db, ix)) = seen_b.get(&syms) {
                        if std::env::var_os("SEARCH_DEBUG").is_some() {
                            eprintln!(
                                "meet after {} pops: fwd={} bwd={} cands={}",
                                budget - pops,
                                seen_f.len(),
                                seen_b.len(),
                                cands.len()
                            );
                        }
                        return Ok(meet(
                            track, &mut prefix, &parent_f, &parent_b, &cur, &cands, &seeds, &syms,
                            df, db, ix,
                        ));
                    }
                    let w = Word::new(syms.clone(), df);
                    if let Some(nf) = nf::parse_terminal(tab, &w) {
                        let steps = if track {
                            let mut all = std::mem::take(&mut prefix);
                            all.extend(unwind(&parent_f, &cur.syms, &syms));
                            all
                        } else {
                            Vec::new()
                        };
                        return Ok(Reduction {
                            nf,
                            terminal: w,
                            steps,
                        });
                    }
                    word::for_each_step(&w, n, |s, w2| {
                        if descend.is_some() || w2.len() > cap {
                            return;
                        }
                        if s.rule.is_strict() {
                            descend = Some((s, w2, syms.clone()));
                            return;
                        }
                        if !fwd_grow && w2.len() > w.len() {
                            return;
                        }
                        let (fw2, fsteps) = if fun {
                            funnel(w2, track)
                        } else {
                            (w2, Vec::new())
                        };
                        match seen_f.entry(fw2.syms.clone()) {
                            Entry::Occupied(o) => {
                                debug_assert_eq!(
                                    *o.get(),
                                    fw2.delta,
                                    "delta mismatch inside one class"
                                )
                            }
                            Entry::Vacant(v) => {
                                v.insert(fw2.delta);
                                if track {
                                    let mut edge = vec![s];
                                    edge.extend(fsteps);
                                    parent_f.insert(fw2.syms.clone(), (syms.clone(), edge));
                                }
                                heap.push(Reverse((fw2.len(), FWD, fw2.syms)));
                            }
                        }
                    });
                    if let Some((s, next, at)) = descend {
                        if track {
                            prefix.extend(unwind(&parent_f, &cur.syms, &at));
                            prefix.push(s);
                        }
                        cur = next;
                        continue 'restart;
                    }
                } else {
                    let (db, ix) = seen_b[&syms];
                    if let Some(&df) = seen_f.get(&syms) {
                        if std::env::var_os("SEARCH_DEBUG").is_some() {
                            eprintln!(
                                "meet after {} pops: fwd={} bwd={} cands={}",
                                budget - pops,
                                seen_f.len(),
                                seen_b.len(),
                                cands.len()
                            );
                        }
                        return Ok(meet(
                            track, &mut prefix, &parent_f, &parent_b, &cur, &cands, &seeds, &syms,
                            df, db, ix,
                        ));
                    }
                    let w = Word::new(syms.clone(), db);
                    word::for_each_step(&w, n, |s, w2| {
                        // Candidate classes are height-minimal, so no
                        // strict step can apply on this side.
                        debug_assert!(!s.rule.is_strict(), "reducible candidate terminal {w}");
                        if s.rule.is_strict() || w2.len() > cap {
                            return;
                        }
                        let (fw2, fsteps) = if fun {
                            funnel(w2, track)
                        } else {
                            (w2, Vec::new())
                        };
                        match seen_b.entry(fw2.syms.clone()) {
                            Entry::Occupied(o) => {
                                debug_assert_eq!(
                                    o.get().0,
                                    fw2.delta,
                                    "delta mismatch inside one class"
                                )
                            }
                            Entry::Vacant(v) => {
                                v.insert((fw2.delta, ix));
                                if track {
                                    let mut edge = vec![s];
                                    edge.extend(fsteps);
                                    parent_b.insert(fw2.syms.clone(), (syms.clone(), edge));
                                }
                                heap.push(Reverse((fw2.len(), BWD, fw2.syms)));
                            }
                        }
                    });
                }
            }
            // Capped slice exhausted: widen and try again.
            if std::env::var_os("SEARCH_DEBUG").is_some() {
                eprintln!(
                    "slice dry: cur={cur} cap={cap} grow={fwd_grow} fun={fun} cands={} fwd={} bwd={} pops_left={pops}",
                    cands.len(),
                    seen_f.len(),
                    seen_b.len(),
                );
            }
        }
        // Even the widest slice ran dry without a meet or a descent,
        // which the normal form theory rules out; flag it loudly
        // instead of spinning.
        return Err(Error::ReduceFailed(budget));
    }
}

#[allow(clippy::too_many_arguments)]
fn meet(
    track: bool,
    prefix: &mut Vec<ElementaryStep>,
    parent_f: &FxHashMap<Syms, (Syms, Vec<ElementaryStep>)>,
    parent_b: &FxHashMap<Syms, (Syms, Vec<ElementaryStep>)>,
    cur: &Word,
    cands: &[(NfKey, Word)],
    seeds: &[(Word, Vec<ElementaryStep>)],
    at: &Syms,
    df: i32,
    db: i32,
    ix: u32,
) -> Reduction {
    let (key, wk) = &cands[ix as usize];
    let (seed, intro) = &seeds[ix as usize];
    let delta = df - db;
    let nf = NormalForm {
        key: key.clone(),
        delta,
    };
    let steps = if track {
        let mut all = std::mem::take(prefix);
        all.extend(unwind(parent_f, &cur.syms, at));
        // Walk the backward side from the meeting word up to its seed,
        // undoing each recorded edge, then undo the seed's own funnel
        // steps to land on the canonical word.
        let flip = |s: &ElementaryStep| ElementaryStep { fwd: !s.fwd, ..*s };
        let mut w = at.clone();
        while w != seed.syms {
            let (prev, edge) = &parent_b[&w];
            all.extend(edge.iter().rev().map(flip));
            w = prev.clone();
        }
        all.extend(intro.iter().rev().map(flip));
        all
    } else {
        Vec::new()
    };
    Reduction {
        nf,
        terminal: Word::new(wk.syms.clone(), delta),
        steps,
    }
}

fn unwind(
    parent: &FxHashMap<Syms, (Syms, Vec<ElementaryStep>)>,
    root: &Syms,
    end: &Syms,
) -> Vec<ElementaryStep> {
    let mut edges = Vec::new();
    let mut cur = end.clone();
    while cur != *root {
        let (prev, e) = &parent[&cur];
        edges.push(e.clone());
        cur = prev.clone();
    }
    edges.reverse();
    edges.into_iter().flatten().collect()
}
