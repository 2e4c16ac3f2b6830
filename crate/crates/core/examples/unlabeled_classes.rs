//! Isomorphism classes of admissible Cayley digraphs, grouped by canonical
//! form.

use bicayley::cayley::Mode;
use bicayley::config::Caps;
use bicayley::group::AbelianGroup;
use bicayley::survey::unlabeled_count;

fn main() -> bicayley::Result<()> {
    let caps = Caps::default();
    for orders in [&[2u64, 2][..], &[6], &[4, 2], &[8]] {
        let group = AbelianGroup::new(orders)?;
        let b = bicayley::aut::index2_subgroups(&group).remove(0);
        for mode in [Mode::Directed, Mode::Undirected] {
            let u = unlabeled_count(&group, &b, mode, &caps)?;
            println!(
                "{} {mode}: {} sets in {} classes, {} classes of least index, |Aut(A)| = {}, consistent {}",
                group.spec(),
                u.total_sets,
                u.total_classes,
                u.min_index_classes,
                u.aut_order,
                u.consistent()
            );
        }
    }
    Ok(())
}
