//! Every connection set landing in the final class has the least possible
//! Cayley index, for every abelian group of even order up to 24.

use bicayley::aut::{index2_subgroups, is_exceptional_pair};
use bicayley::cayley::{build_cayley, ConnectionSet, Mode};
use bicayley::classify::{Classifier, Verdict};
use bicayley::config::Caps;
use bicayley::group::AbelianGroup;

const GROUPS: &[&[u64]] = &[
    &[2],
    &[4],
    &[2, 2],
    &[6],
    &[8],
    &[4, 2],
    &[2, 2, 2],
    &[10],
    &[12],
    &[6, 2],
    &[14],
    &[16],
    &[8, 2],
    &[4, 4],
    &[4, 2, 2],
    &[2, 2, 2, 2],
    &[18],
    &[3, 6],
    &[20],
    &[10, 2],
    &[22],
    &[24],
    &[12, 2],
    &[6, 2, 2],
];

/// Inverse-closed subsets of `A∖B`, built from the `{a, -a}` pairs.
fn sets(group: &AbelianGroup, outside: &[usize], mode: Mode) -> Vec<ConnectionSet> {
    let blocks: Vec<Vec<usize>> = match mode {
        Mode::Directed => outside.iter().map(|&a| vec![a]).collect(),
        Mode::Undirected => {
            let mut seen = vec![false; group.size()];
            let mut out = Vec::new();
            for &a in outside {
                if !seen[a] {
                    let b = group.neg(a);
                    seen[a] = true;
                    seen[b] = true;
                    out.push(if a == b { vec![a] } else { vec![a, b] });
                }
            }
            out
        }
    };
    (0u64..1 << blocks.len())
        .map(|mask| {
            let elems = (0..blocks.len()).filter(|i| mask >> i & 1 == 1).flat_map(|i| blocks[i].clone());
            ConnectionSet::from_elements(group, elems).unwrap()
        })
        .collect()
}

fn check(mode: Mode) {
    let caps = Caps::default();
    let mut good = 0;
    for orders in GROUPS {
        let a = AbelianGroup::new(orders).unwrap();
        let target = mode.target_index(&a);
        for b in index2_subgroups(&a) {
            if mode == Mode::Undirected && a.exponent() > 2 && is_exceptional_pair(&a, &b).is_some() {
                continue;
            }
            let cl = Classifier::new(&a, &b, mode, &caps).unwrap();
            let outside: Vec<usize> = b.members().complement().iter().collect();
            for s in sets(&a, &outside, mode) {
                let c = cl.classify(&s).unwrap();
                assert!(c.verify(&a, &b, &s));
                if c.verdict == Verdict::Good {
                    good += 1;
                    let idx = build_cayley(&a, &s).index_within(target, &caps).unwrap();
                    assert_eq!(idx, Some(target), "{orders:?} B={b:?} S={:?}", a.format_set(s.bits()));
                }
            }
        }
    }
    assert!(good > 0);
}

#[test]
fn directed_final_class_is_drr() {
    check(Mode::Directed);
}

#[test]
fn undirected_final_class_has_least_index() {
    check(Mode::Undirected);
}
