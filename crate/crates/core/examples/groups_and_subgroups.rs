//! Build a few abelian groups, list their index-2 subgroups and flag the
//! exceptional pairs.

use bicayley::aut::{aut_order, index2_subgroups, is_exceptional_pair};
use bicayley::group::{parse_group_spec, AbelianGroup};

fn main() -> bicayley::Result<()> {
    for spec in ["C6", "C4xC2", "C2^3", "C4^2", "C3xC6"] {
        let group = AbelianGroup::new(&parse_group_spec(spec)?)?;
        println!(
            "{spec}: |A| = {}, invariant factors {:?}, exponent {}, |Aut(A)| = {}",
            group.size(),
            group.iso_type().0,
            group.exponent(),
            aut_order(&group)
        );
        for (k, b) in index2_subgroups(&group).iter().enumerate() {
            let tag = match is_exceptional_pair(&group, b) {
                Some(f) => format!("  exceptional: {f:?}"),
                None => String::new(),
            };
            println!("  index:{k}  B = <{}> ≅ {}{tag}", b.spec(&group), b.iso_type(&group));
        }
    }
    Ok(())
}
