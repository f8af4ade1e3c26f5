//! r-floor saturation, the obstruction gadget, and the support closure of a
//! fill point.
use rigid_fraisse::metric::{validate_metric, QMetricSpace};
use rigid_fraisse::mtower::{build_tower, demo_base, RMatrix, StageConfig};
use rigid_fraisse::rational::{q, qi, Frac};
use rigid_fraisse::rtype::{
    gadget_embeds, make_gadget, mr_validate, obstruction_cases, rtype_saturate, support_closure, PointedSpace,
    RTypeSpec, RoleView,
};

fn main() {
    let r = RTypeSpec::new(qi(2)).unwrap();
    let space = QMetricSpace::from_entries(vec![0, 1], &[(0, 1, qi(3))]).unwrap();
    let p = PointedSpace { space, special: 0 };
    let s = rtype_saturate(&p, r, 1, &[qi(1), qi(2), qi(3)]).unwrap();
    println!("rtype: {} points, floor holds {}", s.space.len(), mr_validate(&s, r));

    let g = make_gadget(3, q(5, 2)).unwrap();
    println!("gadget n=3: {} points, violations {}", g.space.len(), validate_metric(&g.space).len());
    println!("embeds in itself at centre: {}", gadget_embeds(&g.space, g.centre(), &g).is_some());

    let t = build_tower(demo_base(), RMatrix::parse("2,3,5,6").unwrap(), 1, &StageConfig::default()).unwrap();
    let roles = t.metric_roles();
    let view = RoleView::new(t.top(), &roles);
    for y in view.fills() {
        let c = support_closure(&view, y).unwrap();
        let reach: Vec<String> = c.reach.iter().map(|(s, v)| format!("{s}:{}", Frac(*v))).collect();
        println!("fill {y} ({}) reach {}", roles[&y], reach.join(" "));
        for id in c.identities(&view) {
            println!("  z={} stored {} formula {} holds {}", id.z, Frac(id.stored), Frac(id.formula), id.holds());
        }
        for case in obstruction_cases(&view, y).unwrap() {
            println!("  gadget n={} L={} embeds {}", case.n, Frac(case.l), case.embedding.is_some());
        }
    }
}
