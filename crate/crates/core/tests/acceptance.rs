//! Acceptance suite: one PASS/FAIL line per criterion. Every comparison is
//! exact (zero tolerance); each criterion also has a pinned wall-clock budget.

mod common;

use common::closure_metric;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rigid_fraisse::aut::automorphisms_capped;
use rigid_fraisse::graph::{binary_rado, find_witness, saturate, set_pairs_of_size, Graph};
use rigid_fraisse::metric::{
    one_point_extend, pushout_amalgam, qu_saturate, validate_metric, write_metric, KatetovType, QMetricSpace,
};
use rigid_fraisse::mtower::{
    audit_stage_rigidity, build_tower, demo_base, four_point_gadget, RMatrix, StageConfig, TowerState,
};
use rigid_fraisse::rational::{q, qi, Q};
use rigid_fraisse::rigid::{self, build_fingerprint, DegreeSchedule};
use rigid_fraisse::rtype::{make_gadget, obstruction_cases, rtype_lower_bound, RoleView};
use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn c1_extension_property() -> Outcome {
    let g = saturate(&binary_rado(16), 2);
    let universe: Vec<usize> = (0..16).collect();
    let mut checked = 0;
    let mut missing = 0;
    for size in 1..=2 {
        for qy in set_pairs_of_size(&universe, size) {
            checked += 1;
            if find_witness(&g, &qy).unwrap().is_none() {
                missing += 1;
            }
        }
    }
    outcome(missing == 0, format!("{} vertices, {checked} queries, {missing} without witness", g.vertex_count()))
}

fn c2_fingerprint_rigidity() -> Outcome {
    let s = DegreeSchedule::consecutive(2, 8).unwrap();
    let fp = build_fingerprint(&s, 12).unwrap();
    let mut orders = Vec::new();
    for len in 6..=fp.exact_prefix {
        let prefix: Vec<usize> = (0..len).collect();
        let order = automorphisms_capped(&fp.graph.induced(&prefix), None, 64).unwrap().order();
        orders.push(format!("prefix {len}: order {order}"));
        if order == 1 {
            return outcome(true, format!("exact prefix {}, {}", fp.exact_prefix, orders.join(", ")));
        }
    }
    outcome(false, format!("exact prefix {}, {}; no rigid prefix of >= 6 vertices", fp.exact_prefix, orders.join(", ")))
}

fn c3_rigid_embedding() -> Outcome {
    let base = saturate(&binary_rado(8), 2);
    let s = DegreeSchedule::consecutive(2, 8).unwrap();
    let (out, state) = rigid::rigidify(&base, &s, 6).unwrap();
    let order = automorphisms_capped(&base, None, 64).unwrap().order();
    let bad = rigid::rigidity_violations(&base, &out, &state, 64).unwrap();
    outcome(
        bad.is_empty(),
        format!(
            "base {} vertices, extension {} vertices, |Aut(base)| = {order}, 6 pairs, {} automorphisms extend",
            base.vertex_count(),
            out.vertex_count(),
            bad.len()
        ),
    )
}

fn c4_graph_tower() -> Outcome {
    let p4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
    let family: Vec<DegreeSchedule> = (0..3).map(|i| DegreeSchedule::consecutive(2 + i, 6).unwrap()).collect();
    let t = rigid::build_tower(&p4, &family, 6, 3).unwrap();
    let audit = t.audit(1);
    let names: Vec<String> =
        audit.checks.iter().map(|(n, p)| format!("{n}={}", if *p { "ok" } else { "FAIL" })).collect();
    outcome(audit.passed(), format!("{} vertices; {}", t.top().vertex_count(), names.join(" ")))
}

fn c5_metric_soundness() -> Outcome {
    let params = (
        (2usize..=6, proptest::collection::vec(1u8..=8, 15), proptest::collection::vec(any::<bool>(), 6)),
        (1usize..=2, 0usize..6, 1u8..32),
        (2i64..=12, 1i64..=12, 1i64..=6, 0i64..=12),
        (1usize..=6, 1i64..=40, 1i64..=4),
    );
    let mut runner = TestRunner::new_with_rng(
        Config { cases: 1000, failure_persistence: None, ..Config::default() },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let runs = std::cell::Cell::new(0usize);
    let result = runner.run(&params, |((n, w, picks), (ka, split, menu_bits), (r2, pd_raw, dd, ee), (gn, ln, ld))| {
        let m = closure_metric(n, &w[..n * (n - 1) / 2]);

        // one-point extension by the type of the last point
        let rest = m.restrict(&m.ids()[..n - 1]).unwrap();
        let mut support: Vec<usize> = (0..n - 1).filter(|&i| picks[i]).collect();
        if support.is_empty() {
            support.push(0);
        }
        let t = KatetovType::new(support.iter().map(|&s| (s, m.d(s, n - 1)))).unwrap();
        let e = one_point_extend(&rest, &t, 50).unwrap();
        prop_assert!(validate_metric(&e).is_empty());

        // push-out over a prefix
        let ka = ka.min(n - 1);
        let tail: Vec<usize> = (ka..n).collect();
        let cut = split % (tail.len() + 1);
        let a_ids: Vec<usize> = (0..ka).collect();
        let b1: Vec<usize> = a_ids.iter().chain(&tail[..cut]).copied().collect();
        let b2: Vec<usize> = a_ids.iter().chain(&tail[cut..]).copied().collect();
        let id: BTreeMap<usize, usize> = a_ids.iter().map(|&c| (c, c)).collect();
        let am = pushout_amalgam(&m.restrict(&a_ids).unwrap(), &m.restrict(&b1).unwrap(), &m.restrict(&b2).unwrap(), &id, &id)
            .unwrap();
        prop_assert!(validate_metric(&am.space).is_empty());

        // one saturation round on a small prefix
        let small = m.restrict(&m.ids()[..n.min(3)]).unwrap();
        let all = [q(1, 2), qi(1), q(3, 2), qi(2), qi(3)];
        let menu: Vec<Q> = all.iter().enumerate().filter(|(i, _)| menu_bits >> i & 1 == 1).map(|(_, v)| *v).collect();
        let s = qu_saturate(&small, 2, &menu).unwrap();
        prop_assert!(validate_metric(&s).is_empty());

        // four-point gadget with its preconditions met
        let r = q(r2, 2) + qi(1);
        let pd = r * q(pd_raw, 12);
        let d1 = r + q(dd, 2);
        let d0 = d1 + pd * q(ee, 12);
        let g = four_point_gadget((d0, d1), pd, r).unwrap();
        prop_assert!(validate_metric(&g).is_empty());

        let og = make_gadget(gn, q(ln, ld)).unwrap();
        prop_assert!(validate_metric(&og.space).is_empty());
        runs.set(runs.get() + 5);
        Ok(())
    });
    outcome(result.is_ok(), format!("1000 parameter draws, {} constructions audited, error: {:?}", runs.get(), result.err()))
}

/// All amalgamations of b1 and b2 over a with cross distances from `cross`.
fn c6_pushout_maximality() -> Outcome {
    fn is_metric(d: &[Vec<i64>]) -> bool {
        let n = d.len();
        (0..n).all(|i| (0..n).all(|j| i == j || d[i][j] > 0))
            && (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| d[i][k] <= d[i][j] + d[j][k])))
    }
    let cross: Vec<i64> = (1..=5).collect();
    let internal = [1i64, 2];
    let mut instances = 0usize;
    let mut amalgams = 0usize;
    let mut failures = Vec::new();
    for ka in 1..=2usize {
        for da in if ka == 2 { vec![1i64, 2] } else { vec![0] } {
            // every b_i = a plus m extra points, free distances from `internal`
            let mut sides: Vec<QMetricSpace> = Vec::new();
            for m in 1..=2usize {
                let n = ka + m;
                let free: Vec<(usize, usize)> =
                    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| j >= ka || i >= ka).collect();
                for code in 0..internal.len().pow(free.len() as u32) {
                    let mut c = code;
                    let mut entries = Vec::new();
                    if ka == 2 {
                        entries.push((0, 1, qi(da)));
                    }
                    for &(i, j) in &free {
                        entries.push((i, j, qi(internal[c % internal.len()])));
                        c /= internal.len();
                    }
                    let sp = QMetricSpace::from_entries((0..n).collect(), &entries).unwrap();
                    if validate_metric(&sp).is_empty() {
                        sides.push(sp);
                    }
                }
            }
            let a = sides[0].restrict(&(0..ka).collect::<Vec<_>>()).unwrap();
            let id: BTreeMap<usize, usize> = (0..ka).map(|c| (c, c)).collect();
            for b1 in &sides {
                for b2 in &sides {
                    instances += 1;
                    let am = pushout_amalgam(&a, b1, b2, &id, &id).unwrap();
                    let n1 = b1.len();
                    let extra1: Vec<usize> = (ka..n1).collect();
                    let extra2: Vec<usize> = (ka..b2.len()).collect();
                    let total = n1 + extra2.len();
                    let po = |p: usize, qq: usize| am.space.d(p, am.right[&qq]);
                    let mut base = vec![vec![0i64; total]; total];
                    let idx2 = |qq: usize| if qq < ka { qq } else { n1 + qq - ka };
                    let to_i = |v: Q| *v.numer() / *v.denom();
                    for i in 0..n1 {
                        for j in 0..n1 {
                            base[i][j] = to_i(b1.d(i, j));
                        }
                    }
                    for i in 0..b2.len() {
                        for j in 0..b2.len() {
                            base[idx2(i)][idx2(j)] = to_i(b2.d(i, j));
                        }
                    }
                    let cells: Vec<(usize, usize)> =
                        extra1.iter().flat_map(|&p| extra2.iter().map(move |&qq| (p, qq))).collect();
                    let mut saw_pushout = false;
                    for code in 0..cross.len().pow(cells.len() as u32) {
                        let mut c = code;
                        let mut d = base.clone();
                        for &(p, qq) in &cells {
                            let v = cross[c % cross.len()];
                            c /= cross.len();
                            d[p][idx2(qq)] = v;
                            d[idx2(qq)][p] = v;
                        }
                        if !is_metric(&d) {
                            continue;
                        }
                        amalgams += 1;
                        let mut all_equal = true;
                        for &(p, qq) in &cells {
                            let v = qi(d[p][idx2(qq)]);
                            if v > po(p, qq) {
                                failures.push(format!("b1={b1:?} b2={b2:?} cross ({p},{qq}) = {v} > push-out"));
                            }
                            all_equal &= v == po(p, qq);
                        }
                        saw_pushout |= all_equal;
                    }
                    if !saw_pushout {
                        failures.push(format!("push-out not among valid amalgamations for b1={b1:?} b2={b2:?}"));
                    }
                }
            }
        }
    }
    let detail = format!(
        "{instances} instances, {amalgams} valid grid amalgamations, {} exceed the push-out{}",
        failures.len(),
        failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
    );
    outcome(failures.is_empty() && instances > 0, detail)
}

fn demo_matrix() -> RMatrix {
    RMatrix::parse("2,3,5,6;5/2,7/2,11/2,13/2").unwrap()
}

fn c7_obstruction() -> Outcome {
    let towers = [
        build_tower(demo_base(), demo_matrix(), 1, &StageConfig::default()).unwrap(),
        build_tower(demo_base(), demo_matrix(), 2, &StageConfig::default()).unwrap(),
    ];
    let mut stages = 0;
    let mut searches = 0;
    let mut inequalities = 0;
    let mut failures = Vec::new();
    for t in &towers {
        let roles = t.metric_roles();
        for st in t.stages.iter().filter(|s| s.len() <= 14) {
            stages += 1;
            let stage_roles = roles.iter().filter(|(p, _)| st.contains(**p)).map(|(&p, r)| (p, r.clone())).collect();
            let view = RoleView::new(st, &stage_roles);
            for y in view.fills() {
                for case in obstruction_cases(&view, y).unwrap() {
                    searches += 1;
                    if case.embedding.is_some() {
                        failures.push(format!("gadget n={} L={} embeds at fill {y}", case.n, case.l));
                    }
                }
                for z in view.anchors() {
                    inequalities += 1;
                    let (bound, holds) = rtype_lower_bound(&view, y, z).unwrap();
                    if !holds {
                        failures.push(format!("d({y},{z}) < {bound}"));
                    }
                }
            }
        }
    }
    outcome(
        failures.is_empty() && searches > 0,
        format!("{stages} stages, {searches} gadget searches absent, {inequalities} fill/anchor inequalities; {failures:?}"),
    )
}

fn c8_four_point_golden() -> Outcome {
    let g = four_point_gadget((qi(5), qi(4)), qi(3), qi(3)).unwrap();
    let (x, q0, q1, z) = (3, 1, 2, 0);
    let mut passing = 0;
    let mut tight = 0;
    let pts = [0usize, 1, 2, 3];
    for i in 0..4 {
        for j in i + 1..4 {
            for k in j + 1..4 {
                let mut sides = [g.d(pts[i], pts[j]), g.d(pts[j], pts[k]), g.d(pts[i], pts[k])];
                sides.sort();
                if sides[2] <= sides[0] + sides[1] {
                    passing += 1;
                }
                if sides[2] == sides[0] + sides[1] {
                    tight += 1;
                }
            }
        }
    }
    let golden = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/four_point.txt")).unwrap();
    let text = write_metric(&g, &BTreeMap::new());
    let ok = g.d(x, q0) == qi(4) && g.d(x, q1) == qi(7) && g.d(x, z) == qi(3) && passing == 4 && tight == 2 && text == golden;
    outcome(
        ok,
        format!(
            "d(x,q0)={} d(x,q1)={} triangles passing {passing}/4, equalities {tight}, golden match {}",
            g.d(x, q0),
            g.d(x, q1),
            text == golden
        ),
    )
}

fn c9_stage_rigidity() -> Outcome {
    let t: TowerState = build_tower(demo_base(), demo_matrix(), 1, &StageConfig::default()).unwrap();
    let rep = audit_stage_rigidity(&t, 0).unwrap();
    let mut mutated = t.clone();
    let (x, .., r) = mutated.anchors()[0];
    let w = mutated.seeds[&x].w;
    mutated.stages.last_mut().unwrap().set_distance(x, w, r + qi(1)).unwrap();
    let bad = audit_stage_rigidity(&mutated, 0).unwrap();
    outcome(
        rep.passed() && !bad.passed() && t.anchors().len() == 2 && t.fills().len() == 2,
        format!(
            "{} points, {} audit lines, {} failures; mutated d(x,w)+1 -> failing checks {:?}",
            t.top().len(),
            rep.lines.len(),
            rep.failures().len(),
            bad.failed_checks()
        ),
    )
}

fn c10_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let w = |name: &str, body: &str| std::fs::write(d.join(name), body).unwrap();
    w("k3.txt", "3 3\n0 1\n0 2\n1 2\n");
    w("p4.txt", "4 3\n0 1\n1 2\n2 3\n");
    w("m.txt", "points 2\n0\n1\ndistances\n0 1 2/1\n");
    w("a.txt", "points 1\n0\ndistances\n");
    w("b1.txt", "points 2\n0\n1\ndistances\n0 1 1/1\n");
    w("b2.txt", "points 2\n0\n1\ndistances\n0 1 2/1\n");
    w("tower.cfg", "stages = 1\npairs = 2\nfills = 2\n");
    let bin = env!("CARGO_BIN_EXE_rigid");
    let cmds: Vec<Vec<&str>> = vec![
        vec!["graph", "rado", "--n", "8", "--k", "1", "--out", "OUT"],
        vec!["graph", "rigidify", "--base", "rado8", "--schedule", "2,3,4", "--steps", "4", "--out", "OUT"],
        vec!["graph", "tower", "--base", "p4.txt", "--layers", "3", "--layer-size", "6", "--out", "OUT"],
        vec!["graph", "aut", "--input", "k3.txt"],
        vec!["graph", "defects", "--input", "rado6", "--k", "2"],
        vec!["metric", "validate", "--input", "m.txt"],
        vec!["metric", "extend", "--input", "m.txt", "--type", "0:1", "--out", "OUT"],
        vec!["metric", "pushout", "--a", "a.txt", "--b1", "b1.txt", "--b2", "b2.txt", "--out", "OUT"],
        vec!["metric", "qu", "--input", "m.txt", "--k", "2", "--menu", "1,2", "--out", "OUT"],
        vec!["metric", "rtype", "--input", "m.txt", "--special", "0", "--r", "2", "--menu", "2,3", "--out", "OUT"],
        vec!["metric", "gadget", "--n", "2", "--L", "10", "--out", "OUT"],
        vec!["metric", "tower", "--config", "tower.cfg", "--out", "OUT"],
        vec!["metric", "audit", "--input", "tower.txt"],
    ];
    let mut failures = Vec::new();
    for cmd in &cmds {
        let mut results = Vec::new();
        for run in 0..2 {
            let out_name = format!("out{run}.txt");
            let args: Vec<&str> = cmd.iter().map(|a| if *a == "OUT" { out_name.as_str() } else { a }).collect();
            let o = Command::new(bin).args(&args).current_dir(d).output().unwrap();
            let file = std::fs::read(d.join(&out_name)).unwrap_or_default();
            let _ = std::fs::remove_file(d.join(&out_name));
            results.push((o.status.code(), o.stdout, file));
        }
        if results[0] != results[1] || results[0].0 != Some(0) {
            failures.push(format!("{} {} (exit {:?})", cmd[0], cmd[1], results[0].0));
        }
        if cmd[1] == "tower" && cmd[0] == "metric" {
            // feed the audit step
            let args: Vec<&str> = cmd.iter().map(|a| if *a == "OUT" { "tower.txt" } else { a }).collect();
            Command::new(bin).args(&args).current_dir(d).output().unwrap();
        }
    }
    outcome(failures.is_empty(), format!("{} subcommands run twice; differing or failing: {failures:?}", cmds.len()))
}

fn main() {
    type Criterion = (u32, &'static str, Duration, fn() -> Outcome);
    let criteria: Vec<Criterion> = vec![
        (1, "extension property of saturate(binary_rado(16), 2)", secs(5), c1_extension_property),
        (2, "fingerprint prefix rigidity for schedule 2..9, m = 12", secs(5), c2_fingerprint_rigidity),
        (3, "rigid embedding over saturate(binary_rado(8), 2), 6 steps", secs(60), c3_rigid_embedding),
        (4, "graph tower with 3 layers passes its audits", secs(10), c4_graph_tower),
        (5, "metric soundness over 1000 random parameter draws", secs(60), c5_metric_soundness),
        (6, "push-out maximality against grid amalgamations", secs(60), c6_pushout_maximality),
        (7, "obstruction gadget absent and fill lower bound in tower stages", secs(120), c7_obstruction),
        (8, "four-point gadget worked instance and golden file", secs(5), c8_four_point_golden),
        (9, "stage rigidity audit and mutation negative test", secs(30), c9_stage_rigidity),
        (10, "CLI determinism", secs(60), c10_determinism),
    ];
    let mut failed = 0;
    for (id, name, budget, f) in criteria {
        let start = Instant::now();
        let o = f();
        let elapsed = start.elapsed();
        let pass = o.pass && elapsed <= budget;
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {id}: {name} [{:.2}s of {}s] {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
            o.detail
        );
    }
    println!("acceptance: {} of 10 criteria pass", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
