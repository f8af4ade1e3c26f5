//! Glue two metric spaces over a shared subspace with the largest distances
//! the triangle inequality allows.
use rigid_fraisse::metric::{pushout_amalgam, QMetricSpace};
use rigid_fraisse::rational::{qi, Frac};
use std::collections::BTreeMap;

fn main() {
    let a = QMetricSpace::from_entries(vec![0, 1], &[(0, 1, qi(2))]).unwrap();
    let b1 = QMetricSpace::from_entries(vec![0, 1, 2], &[(0, 1, qi(2)), (0, 2, qi(1)), (1, 2, qi(2))]).unwrap();
    let b2 = QMetricSpace::from_entries(vec![5, 6, 7], &[(5, 6, qi(2)), (5, 7, qi(3)), (6, 7, qi(1))]).unwrap();
    let e1 = BTreeMap::from([(0, 0), (1, 1)]);
    let e2 = BTreeMap::from([(0, 5), (1, 6)]);
    let am = pushout_amalgam(&a, &b1, &b2, &e1, &e2).unwrap();
    println!("ids {:?}, b2 maps to {:?}", am.space.ids(), am.right);
    let (x, y) = (am.left[&2], am.right[&7]);
    println!("d({x},{y}) = {}", Frac(am.space.d(x, y)));
}
