//! Compare simplicial and polytopal shellability on U(4,2), whose dual
//! matroid polytope is a cube, and extend partial shellings.
//!
//! cargo run --example polytopal_check

use brokenline::fixtures;
use brokenline::matroid::Matroid;
use brokenline::polytope::face_lattice_oracle;
use brokenline::shelling::{
    extend_partial_shelling, is_polytopal_shelling, is_shelling, restriction_sets, FacetOrder, GroundOrder,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = Matroid::uniform(4, 2)?;
    let lattice = face_lattice_oracle(&m)?;
    println!("faces by dimension {:?}", lattice.f_counts());

    let order = fixtures::non_polytopal_order(&m);
    let rs = restriction_sets(&m, &order)?;
    println!(
        "{:?}: simplicial {}, polytopal {}, restriction sets {:?}",
        order.facets(&m).iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        is_shelling(&m, &order).is_shelling(),
        is_polytopal_shelling(&m, &order)?,
        rs.sets.iter().map(|s| s.to_vec()).collect::<Vec<_>>()
    );
    println!("reversed is a simplicial shelling: {}", is_shelling(&m, &order.reversed()).is_shelling());

    let prefix = FacetOrder::from_bases(&m, &[vec![0, 1], vec![0, 2]])?;
    println!("extend 01, 02: {:?}", extend_partial_shelling(&m, &prefix, &GroundOrder::natural(4))?);
    Ok(())
}
