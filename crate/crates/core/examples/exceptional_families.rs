//! The automorphisms behind the two exceptional families, and the least
//! graph index on their smallest members.

use bicayley::aut::{example1_automorphism, example2_automorphism, GroupAutomorphism};
use bicayley::cayley::Mode;
use bicayley::config::Caps;
use bicayley::group::{AbelianGroup, Subgroup};
use bicayley::survey::{bipartite_index, Method};

fn describe(name: &str, group: &AbelianGroup, b: &Subgroup, alpha: &GroupAutomorphism) {
    let fixes_b = alpha.map_set(b.members()) == *b.members();
    let outside = b.members().complement();
    let pairs_kept = outside.iter().all(|a| {
        let x = alpha.apply(a);
        x == a || x == group.neg(a)
    });
    println!(
        "{name}: A = {}, B = <{}>, alpha automorphism {}, order {}, fixes B {fixes_b}, maps each a outside B into {{a,-a}} {pairs_kept}",
        group.spec(),
        b.spec(group),
        alpha.verify(group),
        alpha.order()
    );
}

fn main() -> bicayley::Result<()> {
    for ell in 1..=3 {
        let (g, b, alpha) = example1_automorphism(ell)?;
        describe(&format!("family 1, l = {ell}"), &g, &b, &alpha);
    }
    for ell in 0..=2 {
        let (g, b, alpha) = example2_automorphism(ell)?;
        describe(&format!("family 2, l = {ell}"), &g, &b, &alpha);
    }
    let caps = Caps::default();
    for (g, b) in [example1_automorphism(1)?, example2_automorphism(0)?].map(|(g, b, _)| (g, b)) {
        let r = bipartite_index(&g, &b, Mode::Undirected, &Method::Exhaustive, &caps)?;
        println!("least graph index on ({}, <{}>): {}", g.spec(), b.spec(&g), r.min_index);
    }
    Ok(())
}
