//! Cross-check between the two reducers.  The structural engine folds
//! precomputed moves and never sees a rewrite rule; the searcher finds
//! an explicit rule path.  Agreement over a dense word sample is the
//! working evidence that both land on one canonical terminal per class,
//! so each run here acts as an oracle for the other.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use crate::engine::Engine;
use crate::nf::NormalForm;
use crate::search;
use crate::word::{self, Word};
use crate::Result;

/// How many offending words a report keeps verbatim.  Counting goes on
/// past the cap so the total is still honest.
const KEEP: usize = 8;

#[derive(Debug)]
pub struct SweepReport {
    pub checked: u64,
    pub mismatch_count: u64,
    pub mismatches: Vec<String>,
    pub max_len: usize,
    pub exhaustive: bool,
}

impl SweepReport {
    pub fn ok(&self) -> bool {
        self.mismatch_count == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "checked": self.checked,
            "mismatches": self.mismatch_count,
            "examples": self.mismatches,
            "max_len": self.max_len,
            "exhaustive": self.exhaustive,
            "ok": self.ok(),
        })
    }
}

fn alphabet(n: u8) -> Vec<u8> {
    (1..=n).flat_map(|i| [word::e(i), word::r(i)]).collect()
}

fn check_one(
    eng: &Engine,
    w: &Word,
    structural: &NormalForm,
    budget: usize,
    rep: &mut SweepReport,
) -> Result<()> {
    let searched = search::reduce_word(eng.tab(), w, budget)?;
    rep.checked += 1;
    if searched != *structural {
        rep.mismatch_count += 1;
        if rep.mismatches.len() < KEEP {
            rep.mismatches.push(format!(
                "{w}: structural {:?} d^{}, search {:?} d^{}",
                structural.key, structural.delta, searched.key, searched.delta
            ));
        }
    }
    Ok(())
}

/// Every word over the full alphabet up to `max_len`, grown letter by
/// letter on the left so the structural fold is shared along the tree
/// while each search still starts from the raw word.
pub fn compare_exhaustive(
    eng: &Engine,
    max_len: usize,
    budget: usize,
    progress: bool,
) -> Result<SweepReport> {
    let mut rep = SweepReport {
        checked: 0,
        mismatch_count: 0,
        mismatches: Vec::new(),
        max_len,
        exhaustive: true,
    };
    let alpha = alphabet(eng.tab().n);
    // stack holds letters in the order added; the word is its reverse
    let mut stack: Vec<u8> = Vec::new();
    let root = NormalForm::identity(eng.tab());
    walk(eng, &alpha, max_len, &mut stack, &root, budget, progress, &mut rep)?;
    Ok(rep)
}

fn walk(
    eng: &Engine,
    alpha: &[u8],
    remaining: usize,
    stack: &mut Vec<u8>,
    structural: &NormalForm,
    budget: usize,
    progress: bool,
    rep: &mut SweepReport,
) -> Result<()> {
    let w = Word::from_syms(stack.iter().rev().copied().collect::<Vec<u8>>());
    check_one(eng, &w, structural, budget, rep)?;
    if progress && rep.checked % 1_000_000 == 0 {
        eprintln!("  compared {} words", rep.checked);
    }
    if remaining == 0 {
        return Ok(());
    }
    for &x in alpha {
        let next = eng.left_mul(x, structural)?;
        stack.push(x);
        walk(eng, alpha, remaining - 1, stack, &next, budget, progress, rep)?;
        stack.pop();
    }
    Ok(())
}

/// Uniform random words up to `max_len`, both reducers run from
/// scratch.  Same stream for the same seed.
pub fn compare_samples(
    eng: &Engine,
    max_len: usize,
    count: usize,
    seed: u64,
    budget: usize,
    progress: bool,
) -> Result<SweepReport> {
    let mut rep = SweepReport {
        checked: 0,
        mismatch_count: 0,
        mismatches: Vec::new(),
        max_len,
        exhaustive: false,
    };
    let alpha = alphabet(eng.tab().n);
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..count {
        let len = rng.gen_range(0..=max_len);
        let syms: Vec<u8> = (0..len)
            .map(|_| alpha[rng.gen_range(0..alpha.len())])
            .collect();
        let w = Word::from_syms(syms);
        let structural = eng.reduce(&w)?;
        check_one(eng, &w, &structural, budget, &mut rep)?;
        if progress && rep.checked % 1_000 == 0 {
            eprintln!("  compared {} words", rep.checked);
        }
    }
    Ok(rep)
}
