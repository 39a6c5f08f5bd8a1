//! Line shellings from generic functionals and their restriction sets.
//!
//! cargo run --example line_shelling

use brokenline::fixtures;
use brokenline::polytope::{first_tie, Functional};
use brokenline::shelling::{
    internally_passive_set, is_shelling, lexicographic_functional, line_shelling_order, perturb_lexicographic,
    restriction_sets, GroundOrder,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = fixtures::graphic_matroid();
    let l = Functional::from_integers(&[1, 2, 3, 4, 5, 6]);
    if let Some((a, b)) = first_tie(&m, &l) {
        println!("{} ties bases {} and {}", l.display_sig3(), m.basis(a), m.basis(b));
    }
    let l = perturb_lexicographic(&m, &l);
    let order = line_shelling_order(&m, &l)?;
    println!("{}", is_shelling(&m, &order));

    let rs = restriction_sets(&m, &order)?;
    let ground = GroundOrder::from_functional(&l);
    for (basis, r) in rs.facets.iter().zip(&rs.sets) {
        let ip = internally_passive_set(&m, &ground, *basis)?;
        println!("{basis}  R = {r}  IP = {ip}");
    }
    println!("size histogram {:?} = h-vector {:?}", rs.size_histogram(m.rank()).0, m.h_vector().0);

    let lex = lexicographic_functional(m.ground_size());
    let lex_order = line_shelling_order(&m, &lex)?;
    println!("lexicographic functional {}: {}", lex.display_sig3(), is_shelling(&m, &lex_order));
    Ok(())
}
