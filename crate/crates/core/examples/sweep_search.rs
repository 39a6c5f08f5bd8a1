//! Search for pinned broken-line sweeps with pivots and print their tables.
//!
//! cargo run --example sweep_search -- [seed]

use brokenline::fixtures;
use brokenline::matroid::ElementSet;
use brokenline::polytope::Rational;
use brokenline::session::render_sweep;
use brokenline::sweep::{run_search, ResultStore, SearchParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map_or(Ok(7), |s| s.parse())?;
    let m = fixtures::graphic_matroid();
    let mut params = SearchParams::new(ElementSet::from_elements([0, 1, 2]));
    params.pivots = vec![1, 2];
    params.limit = 3;
    params.misses = 50;
    params.w = Rational::from_integer(5.into());
    params.seed = seed;

    let store = run_search(&m, &params, ResultStore::new())?;
    println!("{} sweeps, {} distinct restriction-set families", store.len(), store.distinct_families().len());
    for (id, stored) in store.sweeps().iter().enumerate() {
        println!("{}", render_sweep(&m, id, stored));
    }
    Ok(())
}
