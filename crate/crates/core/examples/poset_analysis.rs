//! Restriction-set posets: structure, Gale order, isomorphism and DOT export.
//!
//! cargo run --example poset_analysis

use brokenline::fixtures;
use brokenline::poset::{build_poset, check_structure, gale_order, linear_extension_shelling_check, poset_isomorphic};
use brokenline::shelling::{GroundOrder, RestrictionSets};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = fixtures::graphic_matroid();
    let line = build_poset(&RestrictionSets::from_table(&m, &fixtures::graphic_line_table())?)?;
    let pivot = build_poset(&fixtures::graphic_pivot_sweep().restriction_sets(&m))?;
    let second = build_poset(&fixtures::graphic_second_sweep().restriction_sets(&m))?;

    println!("line shelling: {:?}", check_structure(&line));
    println!("pivot sweep:   {:?}", check_structure(&pivot));
    println!("line ~ pivot: {}", poset_isomorphic(&line, &pivot)?);
    println!("line ~ second: {}", poset_isomorphic(&line, &second)?);

    let sweep = fixtures::graphic_pivot_sweep().sweep(&m)?;
    let gale = gale_order(&m, sweep.order())?;
    println!(
        "Gale order: sources {:?}, sinks {:?}, sweep order extends it: {}",
        gale.sources(),
        gale.sinks(),
        gale.is_linear_extension(sweep.order())
    );

    let report = linear_extension_shelling_check(&m, &GroundOrder::natural(m.ground_size()), 50, 1);
    println!("50 linear extensions of the passive poset all shell: {}", report.all_shell());

    print!("{}", line.to_dot());
    Ok(())
}
