//! Decide whether restriction-set posets are divisibility posets of pure
//! multicomplexes, and check the h-vector decomposition over a basis.
//!
//! cargo run --example multicomplex_labeling

use brokenline::fixtures;
use brokenline::matroid::Matroid;
use brokenline::multicomplex::{find_pure_labeling, h_decomposition_identity, verify_labeling, LabelingOutcome};
use brokenline::poset::build_poset;
use brokenline::shelling::RestrictionSets;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graphic = fixtures::graphic_matroid();
    let catalan = Matroid::catalan(3)?;
    let posets = [
        ("graphic line shelling", build_poset(&RestrictionSets::from_table(&graphic, &fixtures::graphic_line_table())?)?),
        ("catalan pivot sweep", build_poset(&fixtures::catalan_pivot_sweep().restriction_sets(&catalan))?),
    ];
    for (name, p) in &posets {
        match find_pure_labeling(p)? {
            LabelingOutcome::Labeling { labeling } => {
                let labels: Vec<String> = (0..p.len()).map(|i| format!("{}={}", p.set(i), labeling.labels[i])).collect();
                println!("{name}: {}", labels.join(" "));
                println!("  verified: {}", verify_labeling(p, &labeling).is_none());
            }
            LabelingOutcome::NoLabeling { certificate } => println!("{name}: no labeling, {certificate:?}"),
        }
    }

    let d = h_decomposition_identity(&graphic, graphic.basis(0))?;
    for term in &d.terms {
        println!("I = {:?}: h = {:?}", term.independent, term.minor_h);
    }
    println!("sum {:?} vs h(M) {:?}: {}", d.total, d.expected, d.holds);
    Ok(())
}
