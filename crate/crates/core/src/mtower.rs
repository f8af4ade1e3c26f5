//! Staged metric towers: each stage glues one anchor per enumerated pair via a
//! four-point gadget, then adds finitely supported fill points.

use crate::metric::{
    enumerate_types, isometric_injections_where, normalize_menu, one_point_extend, pushout_amalgam, read_metric_block,
    validate_metric, write_metric, KatetovType, MetricError, PointId, QMetricSpace, Role,
};
use crate::rational::{parse_q, parse_q_list, qi, Frac, Q};
use crate::rtype::{obstruction_cases, rtype_lower_bound, support_closure, RTypeError, RoleView};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Largest top stage on which the self-isometry search runs.
pub const ISOMETRY_SEARCH_CAP: usize = 14;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum TowerError {
    #[error("r matrix: {0}")]
    Matrix(String),
    #[error("stage {stage} is out of range: the matrix has {rows} rows")]
    StageOutOfRange { stage: usize, rows: usize },
    #[error("stage {stage} cannot be built next; expected stage {expected}")]
    StageOutOfOrder { stage: usize, expected: usize },
    #[error("no unused r in row {stage} is at least d({a},{b}) = {d}")]
    NoAdmissibleJ { stage: usize, a: PointId, b: PointId, d: String },
    #[error("no base point lies farther than r = {r} from both {a} and {b}; saturate the base first")]
    NoBaseTriple { a: PointId, b: PointId, r: String },
    #[error("four-point gadget precondition fails: {0}")]
    GadgetPrecondition(String),
    #[error("fill menu value {menu} is not below the smallest r = {r}")]
    MenuNotBelowR { menu: String, r: String },
    #[error("no unrealized fill type left at stage {0}")]
    FillsExhausted(usize),
    #[error("audit stage {beta} does not exist ({stages} stages)")]
    NoSuchStage { beta: usize, stages: usize },
    #[error("tower text line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    RType(#[from] RTypeError),
}

/// Rows of r values, one row per stage; every entry exceeds 1 and no value
/// repeats anywhere in the matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMatrix {
    rows: Vec<Vec<Q>>,
}

impl RMatrix {
    pub fn new(rows: Vec<Vec<Q>>) -> Result<Self, TowerError> {
        let mut seen = BTreeSet::new();
        for v in rows.iter().flatten() {
            if *v <= qi(1) {
                return Err(TowerError::Matrix(format!("entry {} is not above 1", Frac(*v))));
            }
            if !seen.insert(*v) {
                return Err(TowerError::Matrix(format!("entry {} repeats", Frac(*v))));
            }
        }
        Ok(RMatrix { rows })
    }

    /// Rows separated by `;`, entries by `,`.
    pub fn parse(s: &str) -> Result<Self, TowerError> {
        let rows = s
            .split(';')
            .map(|row| parse_q_list(row).map_err(|e| TowerError::Matrix(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        RMatrix::new(rows)
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    pub fn row(&self, stage: usize) -> Option<&[Q]> {
        self.rows.get(stage).map(Vec::as_slice)
    }
}

impl fmt::Display for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|v| Frac(*v).to_string()).collect::<Vec<_>>().join(","))
            .collect();
        f.write_str(&rows.join(";"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TowerRole {
    Base,
    Anchor { stage: usize, j: usize, r: Q },
    Fill { stage: usize, support: Vec<PointId> },
}

impl TowerRole {
    pub fn stage(&self) -> Option<usize> {
        match self {
            TowerRole::Base => None,
            TowerRole::Anchor { stage, .. } | TowerRole::Fill { stage, .. } => Some(*stage),
        }
    }

    fn as_metric_role(&self) -> Role {
        match self {
            TowerRole::Base => Role::Base,
            TowerRole::Anchor { r, .. } => Role::Anchor(*r),
            TowerRole::Fill { support, .. } => Role::Fill(support.clone()),
        }
    }
}

/// The base triple an anchor was glued onto: `z = w`, `q0 = p0`, `q1 = p1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnchorSeed {
    pub w: PointId,
    pub p0: PointId,
    pub p1: PointId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerState {
    pub matrix: RMatrix,
    /// Snapshots `X_0 ⊆ X_1 ⊆ ...`.
    pub stages: Vec<QMetricSpace>,
    pub roles: BTreeMap<PointId, TowerRole>,
    pub seeds: BTreeMap<PointId, AnchorSeed>,
}

impl TowerState {
    pub fn new(base: QMetricSpace, matrix: RMatrix) -> Self {
        let roles = base.ids().iter().map(|&p| (p, TowerRole::Base)).collect();
        TowerState { matrix, stages: vec![base], roles, seeds: BTreeMap::new() }
    }

    pub fn base(&self) -> &QMetricSpace {
        &self.stages[0]
    }

    pub fn top(&self) -> &QMetricSpace {
        self.stages.last().expect("a tower always has its base")
    }

    /// The part of stage `alpha` whose pairs are enumerated. Every point of a
    /// finite stage is kept, so this is the whole snapshot.
    pub fn dense_part(&self, alpha: usize) -> Vec<PointId> {
        let mut ids = self.stages[alpha].ids().to_vec();
        ids.sort_unstable();
        ids
    }

    pub fn metric_roles(&self) -> BTreeMap<PointId, Role> {
        self.roles.iter().map(|(&p, r)| (p, r.as_metric_role())).collect()
    }

    pub fn anchors(&self) -> Vec<(PointId, usize, usize, Q)> {
        self.roles
            .iter()
            .filter_map(|(&p, r)| match r {
                TowerRole::Anchor { stage, j, r } => Some((p, *stage, *j, *r)),
                _ => None,
            })
            .collect()
    }

    pub fn fills(&self) -> Vec<(PointId, usize)> {
        self.roles
            .iter()
            .filter_map(|(&p, r)| match r {
                TowerRole::Fill { stage, .. } => Some((p, *stage)),
                _ => None,
            })
            .collect()
    }
}

/// Stage parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageConfig {
    pub pair_budget: usize,
    pub fills: usize,
    pub menu: Vec<Q>,
    pub support_bound: usize,
}

impl Default for StageConfig {
    fn default() -> Self {
        StageConfig { pair_budget: 2, fills: 2, menu: vec![qi(1)], support_bound: 1 }
    }
}

/// The space `{z = 0, q0 = 1, q1 = 2, x = 3}` anchoring `x` at distance `r`
/// from `z`, with `q0, x, q1` collinear.
pub fn four_point_gadget(w_dists: (Q, Q), pair_dist: Q, r: Q) -> Result<QMetricSpace, TowerError> {
    let (d0, d1) = w_dists;
    let fail = |s: String| Err(TowerError::GadgetPrecondition(s));
    if d0 < d1 {
        return fail(format!("d(w,p0) = {} < d(w,p1) = {}", Frac(d0), Frac(d1)));
    }
    if d1 <= r {
        return fail(format!("d(w,p1) = {} is not above r = {}", Frac(d1), Frac(r)));
    }
    if pair_dist > r {
        return fail(format!("d(p0,p1) = {} exceeds r = {}", Frac(pair_dist), Frac(r)));
    }
    if pair_dist <= qi(0) || d0 > d1 + pair_dist {
        return fail(format!(
            "(w, p0, p1) with distances {}, {}, {} is not a metric triangle",
            Frac(d0),
            Frac(d1),
            Frac(pair_dist)
        ));
    }
    let entries = [(0, 1, d0), (0, 2, d1), (1, 2, pair_dist), (0, 3, r), (1, 3, d1), (2, 3, d1 + pair_dist)];
    let g = QMetricSpace::from_entries(vec![0, 1, 2, 3], &entries)?;
    debug_assert!(validate_metric(&g).is_empty());
    Ok(g)
}

/// Builds `X_{stage+1}` on top of `prev`, whose last snapshot is `X_stage`.
pub fn build_stage(prev: &TowerState, stage: usize, cfg: &StageConfig) -> Result<TowerState, TowerError> {
    let rows = prev.matrix.rows().len();
    let row = prev.matrix.row(stage).ok_or(TowerError::StageOutOfRange { stage, rows })?;
    let expected = prev.stages.len() - 1;
    if stage != expected {
        return Err(TowerError::StageOutOfOrder { stage, expected });
    }
    let mut t = prev.clone();
    let mut x = prev.top().clone();
    let base = prev.base();
    let mut base_ids = base.ids().to_vec();
    base_ids.sort_unstable();

    let dense = prev.dense_part(stage);
    let mut pairs = Vec::new();
    'enumerate: for (i, &a) in dense.iter().enumerate() {
        for &b in &dense[i + 1..] {
            if pairs.len() == cfg.pair_budget {
                break 'enumerate;
            }
            pairs.push((a, b));
        }
    }

    let mut used = BTreeSet::new();
    for (a, b) in pairs {
        let d = x.d(a, b);
        let j = (0..row.len())
            .find(|j| !used.contains(j) && row[*j] >= d)
            .ok_or_else(|| TowerError::NoAdmissibleJ { stage, a, b, d: Frac(d).to_string() })?;
        used.insert(j);
        let r = row[j];
        let w = base_ids
            .iter()
            .copied()
            .find(|&w| w != a && w != b && x.d(w, a) > r && x.d(w, b) > r)
            .ok_or_else(|| TowerError::NoBaseTriple { a, b, r: Frac(r).to_string() })?;
        let (p0, p1) = if x.d(w, a) >= x.d(w, b) { (a, b) } else { (b, a) };
        let gadget = four_point_gadget((x.d(w, p0), x.d(w, p1)), d, r)?;
        let common = x.restrict(&[w, p0, p1])?;
        let e1 = BTreeMap::from([(w, w), (p0, p0), (p1, p1)]);
        let e2 = BTreeMap::from([(w, 0), (p0, 1), (p1, 2)]);
        let am = pushout_amalgam(&common, &x, &gadget, &e1, &e2)?;
        let anchor = am.right[&3];
        x = am.space;
        t.roles.insert(anchor, TowerRole::Anchor { stage, j, r });
        t.seeds.insert(anchor, AnchorSeed { w, p0, p1 });
    }

    if cfg.fills > 0 {
        let menu = normalize_menu(&cfg.menu)?;
        let r_min = row.iter().min().copied().unwrap_or(qi(1));
        if let Some(&top) = menu.last().filter(|&&m| m >= r_min) {
            return Err(TowerError::MenuNotBelowR { menu: Frac(top).to_string(), r: Frac(r_min).to_string() });
        }
        for _ in 0..cfg.fills {
            let t_fill = next_fill_type(&x, cfg.support_bound, &menu).ok_or(TowerError::FillsExhausted(stage))?;
            let id = x.fresh_id();
            x = one_point_extend(&x, &t_fill, id)?;
            t.roles.insert(id, TowerRole::Fill { stage, support: t_fill.support().collect() });
        }
    }
    t.stages.push(x);
    Ok(t)
}

/// First type, newest support points first, not yet realized by a point.
fn next_fill_type(x: &QMetricSpace, k: usize, menu: &[Q]) -> Option<KatetovType> {
    let mut newest_first = x.ids().to_vec();
    newest_first.reverse();
    enumerate_types(x, &newest_first, k, menu)
        .into_iter()
        .map(|t| t.min_closed(x))
        .find(|t| {
            let v = t.distance_vector(x);
            !x.ids().iter().enumerate().any(|(pi, &p)| {
                t.value(p).is_none() && x.ids().iter().enumerate().all(|(zi, _)| zi == pi || x.d_at(pi, zi) == v[zi])
            })
        })
}

/// Builds `stages` stages with the same configuration.
pub fn build_tower(base: QMetricSpace, matrix: RMatrix, stages: usize, cfg: &StageConfig) -> Result<TowerState, TowerError> {
    let mut t = TowerState::new(base, matrix);
    for s in 0..stages {
        t = build_stage(&t, s, cfg)?;
    }
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditLine {
    pub check: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub lines: Vec<AuditLine>,
}

impl AuditReport {
    fn push(&mut self, check: &'static str, pass: bool, detail: String) {
        self.lines.push(AuditLine { check, pass, detail });
    }

    pub fn failures(&self) -> Vec<&AuditLine> {
        self.lines.iter().filter(|l| !l.pass).collect()
    }

    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    pub fn failed_checks(&self) -> BTreeSet<&'static str> {
        self.failures().into_iter().map(|l| l.check).collect()
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{} {} {}", if l.pass { "PASS" } else { "FAIL" }, l.check, l.detail)?;
        }
        writeln!(f, "failures {}", self.failures().len())
    }
}

/// Exact audits of the finite tower relative to stage `beta`.
pub fn audit_stage_rigidity(t: &TowerState, beta: usize) -> Result<AuditReport, TowerError> {
    if beta >= t.stages.len() {
        return Err(TowerError::NoSuchStage { beta, stages: t.stages.len() });
    }
    let mut rep = AuditReport::default();
    let top = t.top();
    let roles = t.metric_roles();
    let view = RoleView::new(top, &roles);
    let x_beta = &t.stages[beta];
    let from_beta = |p: &PointId| t.roles.get(p).and_then(TowerRole::stage).is_some_and(|s| s >= beta);

    for (i, s) in t.stages.iter().enumerate() {
        let v = validate_metric(s);
        let detail = match v.first() {
            Some(first) => format!("stage={i} violations={} first: {first}", v.len()),
            None => format!("stage={i} violations=0"),
        };
        rep.push("metric", v.is_empty(), detail);
    }
    for i in 1..t.stages.len() {
        rep.push("chain", t.stages[i].contains_isometrically(&t.stages[i - 1]), format!("stage={} in stage={i}", i - 1));
    }

    let anchors: Vec<_> = t.anchors().into_iter().filter(|(p, ..)| from_beta(p)).collect();
    let fills: Vec<PointId> = view.fills().into_iter().filter(from_beta).collect();

    // (a) fills against the skeleton
    for &y in &fills {
        for &(z, ..) in &anchors {
            let (bound, holds) = rtype_lower_bound(&view, y, z)?;
            rep.push("lower-bound", holds, format!("y={y} z={z} d={} bound={}", Frac(top.d(y, z)), Frac(bound)));
        }
        let closure = support_closure(&view, y)?;
        for id in closure.identities(&view) {
            rep.push(
                "closure",
                id.holds(),
                format!("y={y} z={} stored={} formula={}", id.z, Frac(id.stored), Frac(id.formula)),
            );
        }
        if top.len() <= ISOMETRY_SEARCH_CAP {
            for case in obstruction_cases(&view, y)? {
                rep.push(
                    "gadget",
                    case.embedding.is_none(),
                    format!("y={y} n={} L={} embeds={}", case.n, Frac(case.l), case.embedding.is_some()),
                );
            }
        }
    }

    // (b) anchors are pinned to the base at their own r
    let base = t.base();
    for &(x, stage, j, r) in &anchors {
        let seed = t.seeds.get(&x);
        let d0 = top.dist_to_set(x, base.ids().iter().copied());
        let attained = seed.is_some_and(|s| top.d(x, s.w) == r);
        rep.push(
            "anchor-floor",
            d0 == Some(r) && attained,
            format!("x={x} stage={stage} j={j} r={} d(x,X0)={}", Frac(r), d0.map_or("-".into(), |d| Frac(d).to_string())),
        );
        let db = top.dist_to_set(x, x_beta.ids().iter().copied());
        rep.push(
            "anchor-beta",
            db == Some(r),
            format!("x={x} r={} d(x,X{beta})={}", Frac(r), db.map_or("-".into(), |d| Frac(d).to_string())),
        );
        match seed {
            Some(s) => {
                let pd = top.d(s.p0, s.p1);
                let lhs = top.d(x, s.p0) + pd;
                let rhs = top.d(x, s.p1);
                rep.push(
                    "pair",
                    pd <= r && lhs == rhs,
                    format!("x={x} p0={} p1={} d(p0,p1)={} d(x,p0)+d(p0,p1)={} d(x,p1)={}", s.p0, s.p1, Frac(pd), Frac(lhs), Frac(rhs)),
                );
            }
            None => rep.push("pair", false, format!("x={x} has no seed record")),
        }
    }
    let rs: BTreeSet<Q> = anchors.iter().map(|a| a.3).collect();
    rep.push("anchor-distinct", rs.len() == anchors.len(), format!("anchors={} distinct_r={}", anchors.len(), rs.len()));

    // (c) self-isometries fixing X_beta setwise
    if top.len() <= ISOMETRY_SEARCH_CAP {
        let in_beta = |p: PointId| x_beta.contains(p);
        let mut maps = 0usize;
        let mut moving = Vec::new();
        isometric_injections_where(top, top, &BTreeMap::new(), &|s, h| in_beta(s) == in_beta(h), &mut |m| {
            maps += 1;
            if let Some(&(x, ..)) = anchors.iter().find(|(x, ..)| m[x] != *x) {
                moving.push(format!("{x}->{}", m[&x]));
            }
            true
        });
        rep.push("isometry", moving.is_empty(), format!("points={} maps={maps} moving_anchor={}", top.len(), moving.len()));
    } else {
        rep.push("isometry", true, format!("points={} skipped above {ISOMETRY_SEARCH_CAP}", top.len()));
    }
    Ok(rep)
}

/// Tower text: the matrix, every stage snapshot in the metric format, then
/// the role table.
pub fn write_tower(t: &TowerState) -> String {
    let roles = t.metric_roles();
    let mut s = format!("tower\nmatrix {}\nstages {}\n", t.matrix, t.stages.len());
    for (i, st) in t.stages.iter().enumerate() {
        s.push_str(&format!("stage {i}\n"));
        let stage_roles = roles.iter().filter(|(p, _)| st.contains(**p)).map(|(&p, r)| (p, r.clone())).collect();
        s.push_str(&write_metric(st, &stage_roles));
    }
    s.push_str("roles\n");
    for (p, r) in &t.roles {
        match r {
            TowerRole::Base => s.push_str(&format!("{p} base\n")),
            TowerRole::Anchor { stage, j, r } => {
                let seed = t.seeds[p];
                s.push_str(&format!(
                    "{p} anchor stage={stage} j={j} r={} w={} p0={} p1={}\n",
                    Frac(*r),
                    seed.w,
                    seed.p0,
                    seed.p1
                ));
            }
            TowerRole::Fill { stage, support } => {
                let sup: Vec<String> = support.iter().map(|x| x.to_string()).collect();
                s.push_str(&format!("{p} fill stage={stage} support={}\n", sup.join(",")));
            }
        }
    }
    s
}

pub fn read_tower(text: &str) -> Result<TowerState, TowerError> {
    let lines: Vec<&str> = text.lines().collect();
    let err = |i: usize, msg: &str| TowerError::Parse { line: i + 1, msg: msg.to_string() };
    let field = |i: usize, prefix: &str| -> Result<&str, TowerError> {
        lines.get(i).and_then(|l| l.strip_prefix(prefix)).ok_or_else(|| err(i, &format!("expected `{prefix}...`")))
    };
    if lines.first().map(|l| l.trim()) != Some("tower") {
        return Err(err(0, "expected `tower`"));
    }
    let matrix = RMatrix::parse(field(1, "matrix ")?)?;
    let n: usize = field(2, "stages ")?.trim().parse().map_err(|_| err(2, "bad stage count"))?;
    let mut i = 3;
    let mut stages = Vec::with_capacity(n);
    for k in 0..n {
        if lines.get(i).map(|l| l.trim()) != Some(format!("stage {k}").as_str()) {
            return Err(err(i, &format!("expected `stage {k}`")));
        }
        let (m, _, next) = read_metric_block(&lines, i + 1)?;
        stages.push(m);
        i = next;
    }
    if lines.get(i).map(|l| l.trim()) != Some("roles") {
        return Err(err(i, "expected `roles`"));
    }
    i += 1;
    let mut roles = BTreeMap::new();
    let mut seeds = BTreeMap::new();
    for (k, line) in lines.iter().enumerate().skip(i) {
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.is_empty() {
            continue;
        }
        let p: PointId = parts[0].parse().map_err(|_| err(k, "bad point id"))?;
        let kv: BTreeMap<&str, &str> = parts[2..].iter().filter_map(|s| s.split_once('=')).collect();
        let get = |key: &str| kv.get(key).copied().ok_or_else(|| err(k, &format!("missing {key}=")));
        let num = |key: &str| -> Result<usize, TowerError> { get(key)?.parse().map_err(|_| err(k, &format!("bad {key}"))) };
        let role = match parts.get(1).copied() {
            Some("base") => TowerRole::Base,
            Some("anchor") => {
                seeds.insert(p, AnchorSeed { w: num("w")?, p0: num("p0")?, p1: num("p1")? });
                TowerRole::Anchor {
                    stage: num("stage")?,
                    j: num("j")?,
                    r: parse_q(get("r")?).map_err(|e| err(k, &e.to_string()))?,
                }
            }
            Some("fill") => TowerRole::Fill {
                stage: num("stage")?,
                support: get("support")?
                    .split(',')
                    .map(|s| s.parse().map_err(|_| err(k, "bad support id")))
                    .collect::<Result<_, _>>()?,
            },
            _ => return Err(err(k, "unknown role")),
        };
        roles.insert(p, role);
    }
    if stages.is_empty() {
        return Err(err(2, "a tower needs at least its base stage"));
    }
    Ok(TowerState { matrix, stages, roles, seeds })
}

/// Four base points: a unit triangle `{0, 1, 2}` and a point 3 at distance 4
/// from each of them.
pub fn demo_base() -> QMetricSpace {
    QMetricSpace::from_fn(vec![0, 1, 2, 3], |a, b| if a == 3 || b == 3 { qi(4) } else { qi(1) })
        .expect("distinct ids")
}
