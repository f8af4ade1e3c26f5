//! One-point extensions by Katětov types, then saturation over a menu of
//! distances.
use rigid_fraisse::metric::{enumerate_types, one_point_extend, qu_saturate, validate_metric, KatetovType, QMetricSpace};
use rigid_fraisse::rational::{q, qi, Frac};

fn main() {
    let m = QMetricSpace::from_entries(vec![0, 1, 2], &[(0, 1, qi(2)), (0, 2, qi(3)), (1, 2, qi(2))]).unwrap();

    // a type on {0} only; the min-closure fills in 1 and 2
    let t = KatetovType::new([(0, q(3, 2))]).unwrap();
    let x = one_point_extend(&m, &t, 10).unwrap();
    for &p in m.ids() {
        println!("d(10,{p}) = {}", Frac(x.d(10, p)));
    }

    let bad = KatetovType::new([(0, qi(1)), (2, qi(5))]).unwrap();
    println!("{{0:1, 2:5}} realizable: {:?}", bad.check_realizable(&m).err().map(|e| e.to_string()));

    let menu = [qi(1), qi(2)];
    println!("types over {{0,1}} with k=2: {}", enumerate_types(&m, &[0, 1], 2, &menu).len());
    let s = qu_saturate(&m, 1, &menu).unwrap();
    println!("saturated: {} points, violations {}", s.len(), validate_metric(&s).len());
}
