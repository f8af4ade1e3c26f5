//! Stack rigidified layers with pairwise distinct degree schedules and audit
//! the result.
use rigid_fraisse::graph::Graph;
use rigid_fraisse::rigid::{build_tower, DegreeSchedule};

fn main() {
    let base = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
    let family: Vec<DegreeSchedule> = (0..3).map(|i| DegreeSchedule::consecutive(2 + i, 6).unwrap()).collect();
    let tower = build_tower(&base, &family, 6, 3).unwrap();
    println!("top: {} vertices", tower.top().vertex_count());
    for layer in 1..tower.layers.len() {
        println!("layer {layer}: degrees {:?}", tower.layer_degree_sequence(layer));
    }
    let audit = tower.audit(1);
    for (name, ok) in &audit.checks {
        println!("{} {name}", if *ok { "PASS" } else { "FAIL" });
    }
    for f in &audit.failures {
        println!("  {f}");
    }
}
