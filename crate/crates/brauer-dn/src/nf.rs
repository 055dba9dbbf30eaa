//! Normal forms.
//!
//! Every monoid element is a power of `delta` times the class of a
//! structured word: an access word down to the top set, the label's
//! `e`-product, a reduced word in the residual group generators, and the
//! reversed access word for the bottom set.  `NfKey` names the class,
//! `NormalForm` adds the power of `delta`.

use serde_json::{json, Value};

use crate::admissible::{Tables, YLabel};
use crate::cox::{self, CoxElem};
use crate::roots::RootSystem;
use crate::word::{self, Syms, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NfKey {
    pub label: YLabel,
    pub top: u32,
    pub bottom: u32,
    pub z: CoxElem,
}

impl NfKey {
    pub fn identity(tab: &Tables) -> NfKey {
        let label = YLabel::Y { t: 0 };
        NfKey {
            label,
            top: tab.empty_id(),
            bottom: tab.empty_id(),
            z: cox::identity(label, tab.n),
        }
    }

    /// Reversal: the ends swap and the residual part inverts.
    pub fn op(&self) -> NfKey {
        NfKey {
            label: self.label,
            top: self.bottom,
            bottom: self.top,
            z: self.z.inv(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalForm {
    pub key: NfKey,
    pub delta: i32,
}

impl NormalForm {
    pub fn identity(tab: &Tables) -> NormalForm {
        NormalForm {
            key: NfKey::identity(tab),
            delta: 0,
        }
    }

    pub fn op(&self) -> NormalForm {
        NormalForm {
            key: self.key.op(),
            delta: self.delta,
        }
    }

    /// The canonical word together with this form's power of `delta`.
    pub fn word(&self, tab: &Tables) -> Word {
        let mut w = nf_word(tab, &self.key);
        w.delta = self.delta;
        w
    }
}

/// The height-one word `e_{m,2} r_1 e_{3,m}`, with the two low-rank cases
/// spelled out.  Squares to `delta e_m`.
pub fn z_star_word(rs: &RootSystem, m: u8) -> Syms {
    match m {
        1 => [word::r(2), word::e(1)].into_iter().collect(),
        2 => [word::r(1), word::e(2)].into_iter().collect(),
        _ => {
            let mut s = rs.e_chain(m, 2).syms;
            s.push(word::r(1));
            s.extend(rs.e_chain(3, m).syms);
            s
        }
    }
}

/// Bare generator word for a node of `M_Y`: the letters specific to the
/// node, without the `e_Y` product that pads the full generator.
pub fn gen_bare(rs: &RootSystem, label: YLabel, n: u8, node: u8) -> Syms {
    debug_assert!(cox::gen_nodes(label, n).contains(&node));
    match label {
        YLabel::Y { .. } if node == 0 => z_star_word(rs, n),
        YLabel::Y { .. } => [word::r(node)].into_iter().collect(),
        YLabel::YPrime { .. } => [word::r(2)].into_iter().collect(),
        YLabel::YStar { .. } => [word::r(node + 3)].into_iter().collect(),
    }
}

/// Power of `delta` carried by the full generator at a node: the full
/// word is `gen_bare ++ e_Y` times `delta` to this exponent.
pub fn gen_delta_exp(label: YLabel, n: u8, node: u8) -> i32 {
    let pad = label.nodes(n).len() as i32;
    -pad - i32::from(node == 0)
}

/// A residual element as a bare word: its canonical node word with each
/// node replaced by the bare generator letters.
pub fn bare_z(tab: &Tables, label: YLabel, z: &CoxElem) -> Syms {
    let mut out = Syms::new();
    for g in z.canonical_word(label, tab.n) {
        out.extend(gen_bare(&tab.rs, label, tab.n, g));
    }
    out
}

/// The canonical word of a key, carrying no power of `delta`.
pub fn nf_word(tab: &Tables, key: &NfKey) -> Word {
    let mut syms = tab.aprime(key.top).syms.clone();
    syms.extend(tab.e_word(key.label).syms);
    syms.extend(bare_z(tab, key.label, &key.z));
    syms.extend(tab.aprime(key.bottom).syms.iter().rev().copied());
    Word::from_syms(syms)
}

/// Height of the canonical word: both access heights plus one per
/// residual generator (the node `0` word has a single `r` in it).
pub fn key_height(tab: &Tables, key: &NfKey) -> usize {
    tab.set_height(key.top) as usize
        + key.z.length(key.label, tab.n)
        + tab.set_height(key.bottom) as usize
}

/// Recognizes a structured word.  The action pins down both end sets, the
/// access words and the `e`-product must match literally, and the middle
/// must tokenize into a reduced residual word.  Any reduced arrangement
/// of the residual letters is accepted, not just the canonical one.
pub fn parse_terminal(tab: &Tables, w: &Word) -> Option<NormalForm> {
    let top = tab.eval_action(w, tab.empty_id());
    let bottom = tab.eval_action_op(w, tab.empty_id());
    let label = tab.label(top);
    if tab.label(bottom) != label {
        return None;
    }
    let pre = &tab.aprime(top).syms;
    let ey = tab.e_word(label).syms;
    let suf = &tab.aprime(bottom).syms;
    let fixed = pre.len() + ey.len() + suf.len();
    if w.len() < fixed
        || w.syms[..pre.len()] != pre[..]
        || w.syms[pre.len()..pre.len() + ey.len()] != ey[..]
        || !w.syms[w.len() - suf.len()..].iter().rev().eq(suf.iter())
    {
        return None;
    }
    let middle = &w.syms[pre.len() + ey.len()..w.len() - suf.len()];
    let nodes = tokenize(tab, label, middle)?;
    let z = cox::eval_nodes(label, tab.n, &nodes);
    if z.length(label, tab.n) != nodes.len() {
        return None;
    }
    Some(NormalForm {
        key: NfKey {
            label,
            top,
            bottom,
            z,
        },
        delta: w.delta,
    })
}

// An `e` in the middle can only open the node-0 word; every `r` is a
// one-letter token.
fn tokenize(tab: &Tables, label: YLabel, mut s: &[u8]) -> Option<Vec<u8>> {
    let n = tab.n;
    let mut nodes = Vec::new();
    while let Some(&sym) = s.first() {
        if word::is_e(sym) {
            if !cox::gen_nodes(label, n).contains(&0) {
                return None;
            }
            let zw = z_star_word(&tab.rs, n);
            if s.len() < zw.len() || s[..zw.len()] != zw[..] {
                return None;
            }
            nodes.push(0);
            s = &s[zw.len()..];
        } else {
            nodes.push(node_of_r(label, n, word::idx(sym))?);
            s = &s[1..];
        }
    }
    Some(nodes)
}

fn node_of_r(label: YLabel, n: u8, i: u8) -> Option<u8> {
    let node = match label {
        YLabel::Y { .. } => i,
        YLabel::YPrime { .. } => {
            if i != 2 {
                return None;
            }
            1
        }
        YLabel::YStar { .. } => {
            if i < 4 {
                return None;
            }
            i - 3
        }
    };
    cox::gen_nodes(label, n).contains(&node).then_some(node)
}

/// JSON rendering used by the command line tool.
pub fn nf_json(tab: &Tables, nf: &NormalForm) -> Value {
    let roots = |id: u32| -> Vec<String> {
        tab.set(id).roots().iter().map(|r| r.to_string()).collect()
    };
    json!({
        "n": tab.n,
        "label": nf.key.label.to_string(),
        "top": roots(nf.key.top),
        "bottom": roots(nf.key.bottom),
        "z": cox::display_word(&nf.key.z, nf.key.label, tab.n),
        "delta": nf.delta,
    })
}
