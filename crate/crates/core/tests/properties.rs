mod common;

use bicayley::aut::{index2_subgroups, stabilizing_automorphisms};
use bicayley::bounds::count_inverse_closed;
use bicayley::cayley::{build_cayley, cayley_index, ConnectionSet, Mode};
use bicayley::cli::parse_elements;
use bicayley::config::Caps;
use bicayley::digraph::Digraph;
use bicayley::group::parse_group_spec;
use bicayley::group::AbelianGroup;
use bicayley::search::{canonical_form, vertex_stabilizer, SearchLimits};
use bicayley::survey::{monte_carlo_proportion, wilson_interval, Admissible};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GROUPS: &[&[u64]] = &[
    &[2],
    &[4],
    &[2, 2],
    &[6],
    &[8],
    &[4, 2],
    &[2, 2, 2],
    &[10],
    &[3, 4],
    &[2, 6],
    &[2, 8],
    &[4, 4],
    &[2, 2, 4],
    &[2, 2, 2, 2],
    &[3, 6],
    &[2, 10],
];

fn group() -> impl Strategy<Value = AbelianGroup> {
    prop::sample::select(GROUPS).prop_map(|o| AbelianGroup::new(o).unwrap())
}

fn digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            Digraph::from_arcs(n, (0..n * n).filter(|&i| bits[i] && i / n != i % n).map(|i| (i / n, i % n)))
        })
    })
}

fn relabelled(max_n: usize) -> impl Strategy<Value = (Digraph, Vec<u32>)> {
    digraph(max_n).prop_flat_map(|g| {
        let n = g.n() as u32;
        (Just(g), Just((0..n).collect::<Vec<u32>>()).prop_shuffle())
    })
}

/// A group, one of its index-2 subgroups (by position) and a subset code.
fn pair() -> impl Strategy<Value = (AbelianGroup, usize, u64)> {
    group().prop_flat_map(|g| {
        let k = index2_subgroups(&g).len();
        (Just(g), 0..k, any::<u64>())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn spec_parses_back(g in group()) {
        let again = AbelianGroup::new(&parse_group_spec(&g.spec()).unwrap()).unwrap();
        prop_assert_eq!(again.iso_type(), g.iso_type());
    }

    #[test]
    fn element_codec_round_trips(g in group(), a in any::<prop::sample::Index>()) {
        let a = a.index(g.size());
        prop_assert_eq!(g.encode(&g.decode(a)), a);
        prop_assert_eq!(g.index_of(&g.element(a)).unwrap(), a);
    }

    #[test]
    fn element_lists_parse_back(g in group(), picks in prop::collection::vec(any::<prop::sample::Index>(), 0..6)) {
        let elems: Vec<usize> = picks.iter().map(|i| i.index(g.size())).collect();
        let text: Vec<String> = elems.iter().map(|&a| g.element(a).to_string()).collect();
        if elems.is_empty() {
            return Ok(());
        }
        prop_assert_eq!(parse_elements(&g, &text.join(",")).unwrap(), elems);
    }

    #[test]
    fn canonical_form_ignores_labels((g, perm) in relabelled(9)) {
        prop_assert_eq!(canonical_form(&g).bytes, canonical_form(&g.relabel(&perm)).bytes);
    }

    #[test]
    fn canonical_form_ignores_labels_on_cayley_digraphs(
        (g, k, code) in pair(),
        seed in any::<u64>(),
        undirected in any::<bool>(),
    ) {
        use rand::seq::SliceRandom;
        let b = index2_subgroups(&g).remove(k);
        let mode = if undirected { Mode::Undirected } else { Mode::Directed };
        let adm = Admissible::new(&g, &b, mode).unwrap();
        let s = adm.set(&g, code & ((1u64 << adm.blocks().len()) - 1));
        let d = build_cayley(&g, &s).digraph().clone();
        let mut perm: Vec<u32> = (0..g.size() as u32).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(canonical_form(&d).bytes, canonical_form(&d.relabel(&perm)).bytes);
    }

    #[test]
    fn stabilizer_matches_permutation_filter(g in digraph(7), v in any::<prop::sample::Index>()) {
        let v = v.index(g.n());
        let st = vertex_stabilizer(&g, v, &SearchLimits::default()).unwrap();
        prop_assert_eq!(st.order, BigUint::from(common::brute_stabilizer_order(&g, v)));
        for gen in &st.generators {
            prop_assert!(g.is_automorphism(gen));
            prop_assert_eq!(gen[v] as usize, v);
        }
    }

    #[test]
    fn index_is_invariant_under_stabilizing_automorphisms(
        (g, k, code) in pair(),
        pick in any::<prop::sample::Index>(),
        undirected in any::<bool>(),
    ) {
        let b = index2_subgroups(&g).remove(k);
        let mode = if undirected { Mode::Undirected } else { Mode::Directed };
        let adm = Admissible::new(&g, &b, mode).unwrap();
        let s = adm.set(&g, code & ((1u64 << adm.blocks().len()) - 1));
        let alphas = stabilizing_automorphisms(&g, &b).unwrap();
        let alpha = &alphas[pick.index(alphas.len())];
        let t = s.image(alpha);
        prop_assert!(t.avoids(&b));
        prop_assert_eq!(cayley_index(&g, &s).unwrap(), cayley_index(&g, &t).unwrap());
    }

    #[test]
    fn wilson_interval_brackets_the_estimate(n in 1u64..100_000, hits in any::<prop::sample::Index>()) {
        let hits = hits.index(n as usize + 1) as u64;
        let (lo, hi) = wilson_interval(hits, n);
        let p = hits as f64 / n as f64;
        prop_assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
        prop_assert!(lo <= p + 1e-12 && p <= hi + 1e-12);
    }

    #[test]
    fn undirected_admissible_count_is_the_formula((g, k, _) in pair()) {
        let b = index2_subgroups(&g).remove(k);
        let adm = Admissible::new(&g, &b, Mode::Undirected).unwrap();
        let outside: Vec<usize> = b.members().complement().iter().collect();
        prop_assert_eq!(BigUint::from(adm.count()), count_inverse_closed(&g, &b).unwrap().value);
        prop_assert_eq!(adm.count(), common::admissible_sets(&g, &outside, Mode::Undirected).len() as u128);
    }

    #[test]
    fn samples_are_admissible((g, k, seed) in pair()) {
        let b = index2_subgroups(&g).remove(k);
        let adm = Admissible::new(&g, &b, Mode::Undirected).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..16 {
            let s: ConnectionSet = adm.sample(&g, &mut rng);
            prop_assert!(s.is_inverse_closed());
            prop_assert!(s.avoids(&b));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn monte_carlo_is_reproducible((g, k, seed) in pair(), undirected in any::<bool>()) {
        let b = index2_subgroups(&g).remove(k);
        let mode = if undirected { Mode::Undirected } else { Mode::Directed };
        let caps = Caps::default();
        let first = monte_carlo_proportion(&g, &b, mode, 50, seed, &caps).unwrap();
        let second = monte_carlo_proportion(&g, &b, mode, 50, seed, &caps).unwrap();
        prop_assert_eq!(first, second);
    }
}
