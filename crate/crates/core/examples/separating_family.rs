//! Anchors at distinct distances r, each glued over a pair of points.
use rigid_fraisse::metric::{validate_metric, QMetricSpace};
use rigid_fraisse::rational::{q, qi, Frac};
use rigid_fraisse::rtype::{separating_family, RTypeSpec};

fn main() {
    let base = QMetricSpace::from_entries(vec![0, 1, 2], &[(0, 1, qi(1)), (0, 2, qi(1)), (1, 2, qi(1))]).unwrap();
    let rs = [RTypeSpec::new(q(5, 2)).unwrap(), RTypeSpec::new(q(7, 2)).unwrap()];
    let fam = separating_family(&base, &[0, 1, 2], &rs, &[(0, 1), (1, 2)]).unwrap();
    for (&x, &(p0, p1)) in fam.anchors.iter().zip(&fam.pairs) {
        println!("anchor {x}: d(x,{p0}) = {}, d(x,{p1}) = {}", Frac(fam.space.d(x, p0)), Frac(fam.space.d(x, p1)));
    }
    println!("violations {}", validate_metric(&fam.space).len());
}
