//! Build a two-stage metric tower, audit every stage and round-trip the
//! file format.
use rigid_fraisse::mtower::{audit_stage_rigidity, build_tower, demo_base, read_tower, write_tower, RMatrix, StageConfig};
use rigid_fraisse::rational::Frac;

fn main() {
    let matrix = RMatrix::parse("2,3,5,6;5/2,7/2,11/2,13/2").unwrap();
    let t = build_tower(demo_base(), matrix, 2, &StageConfig::default()).unwrap();
    for (i, s) in t.stages.iter().enumerate() {
        println!("X_{i}: {} points", s.len());
    }
    for (id, stage, j, r) in t.anchors() {
        println!("anchor {id}: stage {stage} r_{j} = {}", Frac(r));
    }
    for beta in 0..t.stages.len() {
        let report = audit_stage_rigidity(&t, beta).unwrap();
        println!("beta {beta}: {}", if report.passed() { "pass" } else { "fail" });
    }
    let back = read_tower(&write_tower(&t)).unwrap();
    println!("round trip exact: {}", back == t);
}
