//! Cayley indices of a few small bipartite Cayley digraphs, with the
//! automorphism generators found by the stabilizer search.

use bicayley::cayley::{build_cayley, ConnectionSet};
use bicayley::config::Caps;
use bicayley::group::AbelianGroup;
use bicayley::search::cycle_notation;

fn main() -> bicayley::Result<()> {
    let caps = Caps::default();
    let c6 = AbelianGroup::new(&[6])?;
    let b = c6.generated_subgroup(&[2]);
    let cases = [
        ("Cay(C6, {1})", ConnectionSet::from_elements(&c6, [1])?),
        ("Cay(C6, {1, 5})", ConnectionSet::from_elements(&c6, [1, 5])?),
        ("Cay(C6, A∖B) = K3,3", ConnectionSet::complement_of(&c6, &b)),
    ];
    for (name, s) in cases {
        let cay = build_cayley(&c6, &s);
        let rep = cay.aut_report(&caps)?;
        println!("{name}: |Aut| = {}, Cayley index {}", rep.full_order, rep.cayley_index);
        for g in &rep.generators {
            println!("    {}", cycle_notation(g));
        }
    }

    let a = AbelianGroup::new(&[4, 2])?;
    let s = ConnectionSet::from_elements(&a, [a.encode(&[1, 0]), a.encode(&[1, 1]), a.encode(&[3, 0])])?;
    let cay = build_cayley(&a, &s);
    println!(
        "Cay(C4xC2, {{(1,0),(1,1),(3,0)}}): index {}, connected {}, canonical form {}",
        cay.aut_report(&caps)?.cayley_index,
        cay.is_connected(),
        cay.canonical_form(&caps)?.to_hex()
    );
    Ok(())
}
