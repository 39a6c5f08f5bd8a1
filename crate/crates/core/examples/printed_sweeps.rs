//! Validate sweeps given by printed decimal witnesses, and show how an
//! unpinned broken line fails.
//!
//! cargo run --example printed_sweeps

use brokenline::fixtures;
use brokenline::matroid::Matroid;
use brokenline::sweep::{sweep_restriction_sets, validate_broken_line, validate_sweep};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graphic = fixtures::graphic_matroid();
    let catalan = Matroid::catalan(3)?;
    let cases = [
        ("graphic, pivots 1 and 2", &graphic, fixtures::graphic_pivot_sweep()),
        ("graphic, second sweep", &graphic, fixtures::graphic_second_sweep()),
        ("catalan, pivots 1 to 4", &catalan, fixtures::catalan_pivot_sweep()),
    ];
    for (name, m, fixture) in cases {
        let sweep = fixture.sweep(m)?;
        let verdict = validate_sweep(m, &sweep).map_or("valid".to_string(), |v| v.to_string());
        let rs = sweep_restriction_sets(m, &sweep)?;
        let matches = rs == fixture.restriction_sets(m);
        println!("{name}: {verdict}, pivots {:?}, IP sets match table: {matches}", fixture.pivots());
    }

    let u = Matroid::uniform(4, 2)?;
    let unpinned = fixtures::unpinned_broken_line(&u);
    println!(
        "unpinned broken line: as a broken line {}, as a sweep {}",
        validate_broken_line(&u, &unpinned).map_or("valid".to_string(), |v| v.to_string()),
        validate_sweep(&u, &unpinned).map_or("valid".to_string(), |v| v.to_string())
    );
    Ok(())
}
