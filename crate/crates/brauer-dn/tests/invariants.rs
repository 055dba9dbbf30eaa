//! Randomized structural invariants of the reduction machinery.  Words
//! are drawn over the full alphabet, so the properties exercise every
//! rule family rather than curated cases.

use std::sync::OnceLock;

use proptest::prelude::*;

use brauer_dn::admissible::Tables;
use brauer_dn::engine::Engine;
use brauer_dn::nf::NormalForm;
use brauer_dn::search;
use brauer_dn::word::{self, Word};

fn eng() -> &'static Engine {
    static ENG: OnceLock<Engine> = OnceLock::new();
    ENG.get_or_init(|| Engine::new(Tables::new(4).unwrap()))
}

fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
    let sym = (1u8..=4, prop::bool::ANY).prop_map(|(i, hook)| if hook { word::e(i) } else { word::r(i) });
    (prop::collection::vec(sym, 0..=max_len), -2i32..=2).prop_map(|(syms, d)| Word::new(syms, d))
}

fn canonical(nf: &NormalForm) -> Word {
    nf.word(eng().tab())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reversal_commutes_with_reduction(w in word_strategy(10)) {
        let nf = eng().reduce(&w).unwrap();
        let rev = eng().reduce(&w.op()).unwrap();
        prop_assert_eq!(nf.op(), rev);
    }

    #[test]
    fn folding_a_split_matches_the_whole(w in word_strategy(7), v in word_strategy(7)) {
        let whole = eng().reduce(&w.concat(&v)).unwrap();
        let parts = eng()
            .mul(&eng().reduce(&w).unwrap(), &eng().reduce(&v).unwrap())
            .unwrap();
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn rewriting_never_raises_height(w in word_strategy(10)) {
        let nf = eng().reduce(&w).unwrap();
        prop_assert!(canonical(&nf).height() <= w.height());
    }

    #[test]
    fn searcher_matches_the_fold(w in word_strategy(9)) {
        let searched = search::reduce_word(eng().tab(), &w, search::DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(searched, eng().reduce(&w).unwrap());
    }

    #[test]
    fn delta_prefactor_shifts_through(w in word_strategy(8), k in -3i32..=3) {
        let base = eng().reduce(&w).unwrap();
        let shifted = eng().reduce(&Word::new(w.syms.clone(), w.delta + k)).unwrap();
        prop_assert_eq!(shifted.key, base.key);
        prop_assert_eq!(shifted.delta, base.delta + k);
    }

    #[test]
    fn canonical_words_are_fixed_points(w in word_strategy(9)) {
        let nf = eng().reduce(&w).unwrap();
        prop_assert_eq!(eng().reduce(&canonical(&nf)).unwrap(), nf);
    }

    #[test]
    fn one_applied_rule_preserves_the_class(w in word_strategy(8)) {
        let nf = eng().reduce(&w).unwrap();
        for (_, after) in word::enumerate_steps(&w, 4) {
            prop_assert_eq!(eng().reduce(&after).unwrap(), nf.clone());
        }
    }
}
