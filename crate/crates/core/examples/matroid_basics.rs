//! Build matroids and read off their face counts.
//!
//! cargo run --example matroid_basics

use brokenline::fixtures;
use brokenline::matroid::{ElementSet, Matroid};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let matroids = [
        ("U(4,2)", Matroid::uniform(4, 2)?),
        ("K4", Matroid::graphic(4, &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 2), (1, 3)])?),
        ("catalan(3)", Matroid::catalan(3)?),
        ("graphic fixture", fixtures::graphic_matroid()),
    ];
    for (name, m) in &matroids {
        println!(
            "{name}: n={} rank={} bases={} f={:?} h={:?}",
            m.ground_size(),
            m.rank(),
            m.basis_count(),
            m.f_vector(),
            m.h_vector().0
        );
    }

    let m = fixtures::graphic_matroid();
    let contract = ElementSet::from_elements([3]);
    let restrict = ElementSet::from_elements([0, 1, 2]);
    let minor = m.minor(contract, restrict)?;
    println!(
        "(M / {contract}) | {restrict}: bases {:?} over original elements {:?}",
        minor.matroid.bases().iter().map(|b| b.to_vec()).collect::<Vec<_>>(),
        minor.element_map
    );

    let json = serde_json::to_string(&m.to_json())?;
    println!("matroid file: {json}");
    Ok(())
}
