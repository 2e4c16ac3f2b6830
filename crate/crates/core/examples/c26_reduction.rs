//! The reduction for C2^6: orbit structure, candidate count and a prefix of
//! the candidate search. Pass a larger limit (or `all`) to search further.

use bicayley::config::{parse_count, Caps};
use bicayley::group::AbelianGroup;
use bicayley::survey::c26::{c26_candidate_count, c26_orbit_check, c26_reduced_search, disconnected_lower_bound, C26Options};

fn main() -> bicayley::Result<()> {
    let group = AbelianGroup::elementary2(6)?;
    let orbits = c26_orbit_check(&group);
    println!("residual vectors {}, orbit sizes {:?}, weights {:?}", orbits.residual, orbits.orbit_sizes, orbits.orbit_weights);
    println!("candidates {}", c26_candidate_count());
    println!("non-generating sets have index at least {}", disconnected_lower_bound());

    let limit = match std::env::args().nth(1).as_deref() {
        Some("all") => u64::MAX,
        Some(s) => parse_count(s)?,
        None => 2000,
    };
    let r = c26_reduced_search(&group, &C26Options { limit, ..C26Options::full(Caps::default()) })?;
    println!(
        "examined {} of {}, best index so far {:?}, complete {}",
        r.examined,
        r.total,
        r.best_index,
        r.complete
    );
    if let Some(s) = &r.best_set {
        let elems: Vec<String> = s.elements(&group).iter().map(ToString::to_string).collect();
        println!("best set {}", elems.join(" "));
    }
    Ok(())
}
