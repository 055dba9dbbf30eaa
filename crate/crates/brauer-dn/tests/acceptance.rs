//! The verification gate.  One test per claim the build must uphold, so
//! the summary reads as a checklist: census totals, canonical-form
//! uniqueness, the central element identities, the deformed lift, the
//! layer filtration, the height-zero subalgebra and the structure maps.
//! Everything here is exact; nothing samples a tolerance.

use std::sync::OnceLock;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use brauer_dn::admissible::{Tables, YLabel};
use brauer_dn::coeff::{m_value, Coeff, RElem};
use brauer_dn::engine::Engine;
use brauer_dn::nf::{self, NfKey, NormalForm};
use brauer_dn::search;
use brauer_dn::word::{self, Word};
use brauer_dn::{bmw, brauer, oracle, BMWElement, BmwCtx, BrauerCtx, Element};

const SEED: u64 = 0x0D4;

fn engine(n: u8) -> Engine {
    Engine::new(Tables::new(n).unwrap())
}

fn ctx4() -> &'static BmwCtx {
    static CTX: OnceLock<BmwCtx> = OnceLock::new();
    CTX.get_or_init(|| BmwCtx::for_rank(4).unwrap())
}

fn ctx5() -> &'static BmwCtx {
    static CTX: OnceLock<BmwCtx> = OnceLock::new();
    CTX.get_or_init(|| BmwCtx::for_rank(5).unwrap())
}

fn double_factorial(k: u64) -> u64 {
    if k <= 1 {
        1
    } else {
        k * double_factorial(k - 2)
    }
}

fn factorial(k: u64) -> u64 {
    (1..=k).product()
}

#[test]
fn basis_rank_counts_match_the_closed_form() {
    for (n, frozen) in [(4u8, 1569u64), (5, 29145), (6, 651915)] {
        let closed = (2u64.pow(n as u32) + 1) * double_factorial(2 * n as u64 - 1)
            - (2u64.pow(n as u32 - 1) + 1) * factorial(n as u64);
        assert_eq!(closed, frozen, "closed form at n={n}");
        let (_, total) = brauer::rank_count(engine(n).tab()).unwrap();
        assert_eq!(total, frozen, "census total at n={n}");
    }
}

#[test]
fn starred_census_gives_the_theta_rank() {
    let eng = engine(4);
    let theta = brauer::theta_rank(eng.tab()).unwrap();
    assert_eq!(theta, 81);
    let (rows, _) = brauer::rank_count(eng.tab()).unwrap();
    let starred: u64 = rows
        .iter()
        .filter(|r| matches!(r.label, YLabel::YStar { .. }))
        .map(|r| r.contribution())
        .sum();
    assert_eq!(theta, starred);
}

#[test]
fn reducers_agree_on_short_words_exhaustively_and_on_longer_samples() {
    let eng = engine(4);
    let rep = oracle::compare_exhaustive(&eng, 8, search::DEFAULT_BUDGET, false).unwrap();
    assert_eq!(rep.checked, 19_173_961, "full tree over eight letters");
    assert!(rep.ok(), "mismatches: {:?}", rep.mismatches);

    let eng5 = engine(5);
    let rep5 = oracle::compare_samples(&eng5, 14, 10_000, SEED, search::DEFAULT_BUDGET, false).unwrap();
    assert_eq!(rep5.checked, 10_000);
    assert!(rep5.ok(), "mismatches: {:?}", rep5.mismatches);
}

/// `w_{2,n}` climbs the chain in overlapping reflection pairs; together
/// with its reversal it conjugates `r_1` into the longest hook chain.
fn r_star_word(n: u8) -> Word {
    let mut up = Vec::new();
    for k in 2..n {
        up.push(word::r(k + 1));
        up.push(word::r(k));
    }
    let climb = Word::from_syms(up);
    climb.op().concat(&Word::from_syms(vec![word::r(1)])).concat(&climb)
}

#[test]
fn central_identities_and_coxeter_laws_replay_in_the_monoid() {
    for n in [4u8, 5] {
        let eng = engine(n);
        let tab = eng.tab();
        let zb = Word::from_syms(nf::z_star_word(&tab.rs, n));
        let z_nf = eng.reduce(&zb).unwrap();

        // the central square collapses to one weighted hook
        let square = eng.reduce(&zb.concat(&zb)).unwrap();
        let hook = eng
            .reduce(&Word::new(vec![word::e(n)], 1))
            .unwrap();
        assert_eq!(square, hook, "central square at n={n}");

        // conjugated long reflection absorbs into the central class
        let rstar = r_star_word(n);
        let en = Word::from_syms(vec![word::e(n)]);
        assert_eq!(eng.reduce(&rstar.concat(&en)).unwrap(), z_nf, "right hook at n={n}");
        assert_eq!(eng.reduce(&en.concat(&rstar)).unwrap(), z_nf, "left hook at n={n}");

        // every block's weighted generators obey their diagram
        for label in YLabel::all(n) {
            let e_syms = tab.e_word(label).syms.clone();
            let pad = label.nodes(n).len() as i32;
            let e_hat = eng.reduce(&Word::new(e_syms.clone(), -pad)).unwrap();
            let nodes = brauer_dn::cox::gen_nodes(label, n);
            let shat: Vec<NormalForm> = nodes
                .iter()
                .map(|&g| {
                    let mut syms = nf::gen_bare(&tab.rs, label, n, g);
                    syms.extend(e_syms.iter().copied());
                    eng.reduce(&Word::new(syms, nf::gen_delta_exp(label, n, g))).unwrap()
                })
                .collect();
            assert_eq!(eng.mul(&e_hat, &e_hat).unwrap(), e_hat, "{label} unit at n={n}");
            for (ix, s) in shat.iter().enumerate() {
                assert_eq!(&eng.mul(s, s).unwrap(), &e_hat, "{label} square at node {}", nodes[ix]);
                assert_eq!(&eng.mul(&e_hat, s).unwrap(), s, "{label} left unit");
                assert_eq!(&eng.mul(s, &e_hat).unwrap(), s, "{label} right unit");
            }
            for a in 0..nodes.len() {
                for b in a + 1..nodes.len() {
                    let x = brauer_dn::cox::generator(label, n, nodes[a])
                        .mul(&brauer_dn::cox::generator(label, n, nodes[b]));
                    let mut p = x.clone();
                    let mut ord = 1usize;
                    while !p.is_identity() {
                        p = p.mul(&x);
                        ord += 1;
                    }
                    match ord {
                        2 => assert_eq!(
                            eng.mul(&shat[a], &shat[b]).unwrap(),
                            eng.mul(&shat[b], &shat[a]).unwrap(),
                            "{label} commute {} {}",
                            nodes[a],
                            nodes[b]
                        ),
                        3 => {
                            let lhs = eng
                                .mul(&eng.mul(&shat[a], &shat[b]).unwrap(), &shat[a])
                                .unwrap();
                            let rhs = eng
                                .mul(&eng.mul(&shat[b], &shat[a]).unwrap(), &shat[b])
                                .unwrap();
                            assert_eq!(lhs, rhs, "{label} braid {} {}", nodes[a], nodes[b]);
                        }
                        o => panic!("{label} unexpected order {o}"),
                    }
                }
            }
        }
    }
}

fn single_key(el: &BMWElement) -> NfKey {
    let mut it = el.terms();
    let k = it.next().expect("nonzero element").0.clone();
    assert!(it.next().is_none(), "expected one term");
    k
}

#[test]
fn deformed_products_specialize_associate_and_invert() {
    let ctx = ctx4();
    let tab = ctx.engine().tab();
    let br = BrauerCtx::for_rank(4).unwrap();
    let keys = ctx.engine().all_keys();
    let mut rng = StdRng::seed_from_u64(SEED);

    // specialization is a homomorphism onto the monoid algebra
    for trial in 0..1000 {
        let a = &keys[rng.gen_range(0..keys.len())];
        let b = &keys[rng.gen_range(0..keys.len())];
        let lifted = ctx.key_mul(a, b).unwrap();
        let specialized = bmw::mu_map(&lifted).unwrap();
        let monoid = br.key_mul(a, b).unwrap();
        assert_eq!(
            specialized,
            Element::from_nf(&monoid),
            "pair {trial}: {a:?} * {b:?}"
        );
    }

    // associativity over a pool the grid multiplier can fan out on
    let pool: Vec<&NfKey> = keys
        .iter()
        .filter(|k| nf::nf_word(tab, k).syms.len() <= 9)
        .collect();
    for trial in 0..100 {
        let pick = |rng: &mut StdRng| {
            Element::<RElem>::monomial(pool[rng.gen_range(0..pool.len())].clone(), RElem::one())
        };
        let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let left = ctx.mul(&ctx.mul(&a, &b).unwrap(), &c).unwrap();
        let right = ctx.mul(&a, &ctx.mul(&b, &c).unwrap()).unwrap();
        assert_eq!(left, right, "triple {trial}");
    }

    // two-sided inverses for every invertible generator
    let one = ctx.one();
    for i in 1..=4u8 {
        let g = ctx.g(i).unwrap();
        let gi = ctx.g_inverse(i).unwrap();
        assert_eq!(ctx.mul(&g, &gi).unwrap(), one, "inverse at node {i}");
        assert_eq!(ctx.mul(&gi, &g).unwrap(), one, "inverse at node {i}");
    }

    // the central square expands with pinned coefficients and the rest
    // of its support in the starred strata
    for (n, c) in [(4u8, ctx4()), (5, ctx5())] {
        let zw = nf::z_star_word(&c.engine().tab().rs, n);
        let zkey = single_key(&c.z_star(n).unwrap());
        let mut sq = zw.clone();
        sq.extend(zw.iter().copied());
        let x = c.reduce(&Word::new(sq, 0)).unwrap();
        let ekey = single_key(&c.e(n).unwrap());
        assert_eq!(x.coeff(&ekey), RElem::delta_pow(1), "hook weight at n={n}");
        assert_eq!(x.coeff(&zkey), m_value().neg(), "central weight at n={n}");
        for (k, _) in x.terms() {
            assert!(
                k == &ekey || k == &zkey || matches!(k.label, YLabel::YStar { .. }),
                "stray support on {} at n={n}",
                k.label
            );
        }
    }
}

#[test]
fn every_block_satisfies_hecke_relations_with_defects_one_layer_down() {
    for (n, ctx) in [(4u8, ctx4()), (5, ctx5())] {
        for label in YLabel::all(n) {
            let rep = bmw::hecke_check(ctx, label, 6, SEED).unwrap();
            assert!(rep.ok(), "{label} at n={n}: {:?}", rep.failures);
        }
    }
}

#[test]
fn generator_products_respect_layers_and_reversal() {
    let rep = bmw::filtration_check(ctx4()).unwrap();
    assert_eq!(rep.keys, 1569, "full basis sweep");
    assert!(rep.ok(), "failures: {:?}", rep.failures);
}

#[test]
fn height_zero_span_closes_under_products() {
    for (n, basis) in [(4u8, 48usize), (5, 167)] {
        let ctx = BrauerCtx::for_rank(n).unwrap();
        let (size, closed) = brauer::tl_closure_check(&ctx).unwrap();
        assert_eq!(size, basis, "height-zero basis at n={n}");
        assert!(closed, "closure at n={n}");
    }
}

#[test]
fn structure_maps_match_full_re_reduction() {
    let eng = engine(4);
    let tab = eng.tab();
    let gens: Vec<u8> = (1..=4).flat_map(|i| [word::e(i), word::r(i)]).collect();
    for b in 0..tab.num_sets() as u32 {
        let label = tab.label(b);
        let key = NfKey {
            label,
            top: b,
            bottom: tab.rep(label),
            z: brauer_dn::cox::identity(label, tab.n),
        };
        let nf_b = NormalForm { key, delta: 0 };
        let wb = nf_b.word(tab);
        for &x in &gens {
            let folded = eng.left_mul(x, &nf_b).unwrap();
            let mut syms = vec![x];
            syms.extend(wb.syms.iter().copied());
            let searched =
                search::reduce_word(tab, &Word::new(syms, wb.delta), search::DEFAULT_BUDGET)
                    .unwrap();
            assert_eq!(folded, searched, "set {b}, symbol {x}");
            if word::is_r(x) && tab.set_height(tab.act_sym(x, b)) > tab.set_height(b) {
                match eng.structure_move(x, b).unwrap() {
                    brauer_dn::engine::StructureMove::Within { h, .. } => {
                        assert!(h.is_identity(), "ascent must not twist set {b}");
                    }
                    brauer_dn::engine::StructureMove::Grows => {
                        panic!("reflections never change the stratum (set {b})")
                    }
                }
            }
        }
    }
}
