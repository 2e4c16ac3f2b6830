//! Place connection sets in the classification and compare each verdict
//! with the stabilizer search.

use bicayley::cayley::{ConnectionSet, Mode};
use bicayley::classify::Classifier;
use bicayley::config::Caps;
use bicayley::group::AbelianGroup;

fn main() -> bicayley::Result<()> {
    let caps = Caps::default();
    let c6 = AbelianGroup::new(&[6])?;
    let b = c6.generated_subgroup(&[2]);
    for (mode, elems) in [
        (Mode::Directed, vec![1]),
        (Mode::Directed, vec![3]),
        (Mode::Directed, vec![1, 3, 5]),
        (Mode::Undirected, vec![1, 5]),
        (Mode::Undirected, vec![1, 3, 5]),
    ] {
        let s = ConnectionSet::from_elements(&c6, elems.iter().copied())?;
        let classifier = Classifier::new(&c6, &b, mode, &caps)?;
        let c = classifier.classify(&s)?;
        let cc = c.cross_check(&c6, &s, &caps)?;
        println!("{mode:<10} S = {elems:?}: {}  (index {}, consistent {})", c.verdict, cc.cayley_index, cc.consistent);
        println!("    witness {}", c.to_json(&c6, None)["witness"]);
    }
    Ok(())
}
