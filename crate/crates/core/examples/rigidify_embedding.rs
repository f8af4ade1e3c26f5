//! Attach a degree fingerprint so that automorphisms moving base pairs no
//! longer extend.
use rigid_fraisse::aut::automorphisms;
use rigid_fraisse::graph::binary_rado;
use rigid_fraisse::rigid::{format_query, rigidify, rigidity_violations, DegreeSchedule};

fn main() {
    let base = binary_rado(8);
    let schedule = DegreeSchedule::parse("2,3,4").unwrap();
    let (out, state) = rigidify(&base, &schedule, 4).unwrap();
    println!("base {} vertices, |Aut| = {}", base.vertex_count(), automorphisms(&base, None).unwrap().order());
    println!("out {} vertices, fingerprint {:?}", out.vertex_count(), state.v1);
    for (n, (u1, u2)) in state.pair_enum.iter().enumerate() {
        let sp = state.setpair_enum[n].as_ref().map(format_query).unwrap_or_else(|| "-".into());
        println!("  step {n}: pair ({u1},{u2}) setpair {sp} witness {:?}", state.witnesses[n]);
    }
    let bad = rigidity_violations(&base, &out, &state, 64).unwrap();
    println!("rigidity violations: {}", bad.len());
}
