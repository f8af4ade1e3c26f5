//! Automorphism groups by refinement and backtracking, and which of them
//! extend along an embedding.
use rigid_fraisse::aut::{automorphisms, extension_square, ge_group, is_rigid, Embedding};
use rigid_fraisse::graph::Graph;

fn main() {
    let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
    let auts = automorphisms(&c5, None).unwrap();
    println!("C5: |Aut| = {}, group = {}", auts.order(), auts.is_group());
    for p in auts.perms().iter().take(3) {
        println!("  {p}");
    }

    // C5 plus a pendant at 0 keeps only the reflection through 0
    let mut bigger = c5.clone();
    let v = bigger.add_vertex();
    bigger.add_edge(0, v).unwrap();
    let e = Embedding::prefix_inclusion(c5.clone(), bigger.clone()).unwrap();
    let ge = ge_group(&e).unwrap();
    println!("extending along C5 + pendant: {} of {}", ge.order(), auts.order());
    let rotation = auts.perms().iter().find(|p| p.apply(0) == 1).unwrap();
    println!("rotation {rotation} extends: {:?}", extension_square(&e, rotation).unwrap());

    let asym = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (4, 5), (1, 4)]).unwrap();
    println!("6-vertex sample is rigid: {}", is_rigid(&asym).unwrap());
}
