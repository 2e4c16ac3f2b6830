//! Recompute the rows of both tables that fit a budget, given as the first
//! argument (default 4096 connection sets per row).

use bicayley::config::{parse_count, Caps};
use bicayley::survey::{table, verify_row};

fn main() -> bicayley::Result<()> {
    let budget = std::env::args().nth(1).map(|s| parse_count(&s)).transpose()?.unwrap_or(4096);
    let caps = Caps { budget, ..Caps::default() };
    for which in [1u8, 2] {
        println!("table {which}");
        for row in table(which)? {
            let r = verify_row(which, row, &caps, false)?;
            let computed = r.computed.map_or("-".to_string(), |c| c.to_string());
            let paper = r.paper.map_or("-".to_string(), |c| c.to_string());
            println!("  {:<10} {:<10} paper {:>7} computed {:>7}  {} {}", r.a, r.b, paper, computed, r.status, r.reason);
        }
    }
    Ok(())
}
