//! Build a prefix of the binary Rado graph, then close a small graph under
//! the k-extension property.
use rigid_fraisse::graph::{binary_rado, extension_defects, find_witness, saturate, set_pairs_of_size, Graph, WitnessQuery};
use std::collections::BTreeSet;

fn main() {
    let r = binary_rado(32);
    println!("rado32: {} vertices, {} edges", r.vertex_count(), r.edge_count());

    let q = WitnessQuery::new(BTreeSet::from([1, 2]), BTreeSet::from([3])).unwrap();
    println!("witness for X={{1,2}} Y={{3}}: {:?}", find_witness(&r, &q).unwrap());

    let p4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
    let k = 2;
    println!("path P4 has {} defects at k={k}", extension_defects(&p4, k).len());
    let s = saturate(&p4, k);
    let orig: Vec<usize> = (0..4).collect();
    let open = (1..=k)
        .flat_map(|size| set_pairs_of_size(&orig, size))
        .filter(|q| find_witness(&s, q).unwrap().is_none())
        .count();
    println!("saturated: {} vertices, open queries over P4: {open}", s.vertex_count());
}
