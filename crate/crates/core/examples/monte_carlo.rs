//! Proportion of random connection sets giving a DRR on C2xC30, with a 95%
//! Wilson interval.

use bicayley::cayley::Mode;
use bicayley::config::Caps;
use bicayley::group::AbelianGroup;
use bicayley::survey::monte_carlo_proportion;

fn main() -> bicayley::Result<()> {
    let samples = std::env::args().nth(1).map_or(Ok(500), |s| s.parse()).expect("sample count");
    let group = AbelianGroup::new(&[2, 30])?;
    let caps = Caps::default();
    for (k, b) in bicayley::aut::index2_subgroups(&group).iter().enumerate() {
        let est = monte_carlo_proportion(&group, b, Mode::Directed, samples, 2024, &caps)?;
        println!(
            "B = index:{k}: {}/{} DRRs, estimate {:.4}, Wilson [{:.4}, {:.4}]",
            est.hits, est.samples, est.estimate, est.wilson_low, est.wilson_high
        );
    }
    Ok(())
}
