//! Lemma bounds with their exact counts, the theorem's lower bound and the
//! group-size threshold.

use bicayley::bounds::{all_lemma_bounds, count_inverse_closed, theorem_lower_bound, threshold_scan, write_csv};
use bicayley::cayley::Mode;
use bicayley::config::Caps;
use bicayley::group::AbelianGroup;

fn main() -> bicayley::Result<()> {
    let caps = Caps::default();
    for orders in [&[6u64][..], &[4, 2], &[2, 2, 2, 2]] {
        let group = AbelianGroup::new(orders)?;
        let b = bicayley::aut::index2_subgroups(&group).remove(0);
        let reports = all_lemma_bounds(&group, &b, &caps)?;
        write_csv(&reports, std::io::stdout())?;
        let ic = count_inverse_closed(&group, &b)?;
        println!("# inverse-closed subsets of A∖B: 2^{} = {}", ic.exponent, ic.value);
        for mode in [Mode::Directed, Mode::Undirected] {
            let lb = theorem_lower_bound(mode, &group, &b)?;
            println!("# {mode} lower bound: {}", lb.value);
        }
    }
    for mode in [Mode::Directed, Mode::Undirected] {
        let t = threshold_scan(mode);
        println!("{mode}: threshold {} (stated {}), margin {:.4}", t.computed, t.paper, t.margin);
    }
    Ok(())
}
