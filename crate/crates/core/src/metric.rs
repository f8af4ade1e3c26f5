//! Finite metric spaces with exact rational distances.
//!
//! Nothing here uses floating point: every equality and inequality the
//! constructions depend on (collinear triples, the push-out minimum, the
//! r-floor) is decided exactly.

use crate::graph::for_each_combination;
use crate::rational::{abs_diff, is_positive, parse_q, Frac, Q};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

pub type PointId = usize;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error("point {0} appears twice")]
    DuplicatePoint(PointId),
    #[error("unknown point {0}")]
    UnknownPoint(PointId),
    #[error("point id {0} is already taken")]
    IdCollision(PointId),
    #[error("type support is empty")]
    EmptySupport,
    #[error("type value at {0} must be positive")]
    NonPositiveValue(PointId),
    #[error("type is not realizable: values at {a} and {b} violate |f(a) - f(b)| <= d(a, b) <= f(a) + f(b)")]
    Unrealizable { a: PointId, b: PointId },
    #[error("embedding is not isometric at ({0}, {1})")]
    NotIsometric(PointId, PointId),
    #[error("embedding map does not cover the common subspace exactly: {0}")]
    BadEmbedding(String),
    #[error("push-out over an empty common subspace leaves cross distances unconstrained")]
    EmptyAmalgamationBase,
    #[error("value menu must be non-empty with positive entries")]
    BadMenu,
    #[error("missing distance between {0} and {1}")]
    MissingDistance(PointId, PointId),
    #[error("metric text line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A finite point set with exact rational distances. Symmetry and the zero
/// diagonal hold by representation; positivity and the triangle inequality are
/// what `validate_metric` audits.
#[derive(Clone, PartialEq, Eq)]
pub struct QMetricSpace {
    ids: Vec<PointId>,
    index: BTreeMap<PointId, usize>,
    dist: Vec<Vec<Q>>,
}

impl Default for QMetricSpace {
    fn default() -> Self {
        Self::new()
    }
}

impl QMetricSpace {
    pub fn new() -> Self {
        QMetricSpace { ids: Vec::new(), index: BTreeMap::new(), dist: Vec::new() }
    }

    /// Builds a space from ids and a distance function evaluated on `i < j`.
    pub fn from_fn(ids: Vec<PointId>, mut d: impl FnMut(PointId, PointId) -> Q) -> Result<Self, MetricError> {
        let mut s = QMetricSpace::new();
        for (i, &p) in ids.iter().enumerate() {
            let row: Vec<Q> = ids[..i].iter().map(|&a| d(a, p)).collect();
            s.push_point(p, row)?;
        }
        Ok(s)
    }

    /// Builds a space from an explicit list of upper-triangle entries.
    pub fn from_entries(ids: Vec<PointId>, entries: &[(PointId, PointId, Q)]) -> Result<Self, MetricError> {
        let mut table = BTreeMap::new();
        for &(a, b, d) in entries {
            table.insert((a.min(b), a.max(b)), d);
        }
        let mut missing = None;
        let s = QMetricSpace::from_fn(ids, |a, b| match table.get(&(a.min(b), a.max(b))) {
            Some(&d) => d,
            None => {
                missing.get_or_insert((a, b));
                Q::zero()
            }
        })?;
        match missing {
            Some((a, b)) => Err(MetricError::MissingDistance(a, b)),
            None => Ok(s),
        }
    }

    /// Appends a point whose distances to the existing points are `row`
    /// (in point order).
    pub fn push_point(&mut self, id: PointId, row: Vec<Q>) -> Result<(), MetricError> {
        if self.index.contains_key(&id) {
            return Err(MetricError::DuplicatePoint(id));
        }
        assert_eq!(row.len(), self.ids.len(), "one distance per existing point");
        let n = self.ids.len();
        for (i, r) in self.dist.iter_mut().enumerate() {
            r.push(row[i]);
        }
        let mut own = row;
        own.push(Q::zero());
        self.dist.push(own);
        self.ids.push(id);
        self.index.insert(id, n);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[PointId] {
        &self.ids
    }

    pub fn contains(&self, p: PointId) -> bool {
        self.index.contains_key(&p)
    }

    pub fn position(&self, p: PointId) -> Option<usize> {
        self.index.get(&p).copied()
    }

    /// Distance between two points; panics on unknown ids.
    #[inline]
    pub fn d(&self, a: PointId, b: PointId) -> Q {
        let i = self.index.get(&a).unwrap_or_else(|| panic!("unknown point {a}"));
        let j = self.index.get(&b).unwrap_or_else(|| panic!("unknown point {b}"));
        self.dist[*i][*j]
    }

    pub fn try_d(&self, a: PointId, b: PointId) -> Result<Q, MetricError> {
        let i = self.position(a).ok_or(MetricError::UnknownPoint(a))?;
        let j = self.position(b).ok_or(MetricError::UnknownPoint(b))?;
        Ok(self.dist[i][j])
    }

    /// Distance by position rather than id.
    #[inline]
    pub fn d_at(&self, i: usize, j: usize) -> Q {
        self.dist[i][j]
    }

    /// Overwrites one distance (both orientations). Used for mutation tests.
    pub fn set_distance(&mut self, a: PointId, b: PointId, d: Q) -> Result<(), MetricError> {
        let i = self.position(a).ok_or(MetricError::UnknownPoint(a))?;
        let j = self.position(b).ok_or(MetricError::UnknownPoint(b))?;
        self.dist[i][j] = d;
        self.dist[j][i] = d;
        Ok(())
    }

    /// Smallest id not yet in use.
    pub fn fresh_id(&self) -> PointId {
        self.ids.iter().max().map_or(0, |m| m + 1)
    }

    /// Distance from `p` to the nearest point of `set` (ignoring `p` itself).
    pub fn dist_to_set(&self, p: PointId, set: impl IntoIterator<Item = PointId>) -> Option<Q> {
        set.into_iter().filter(|&s| s != p).map(|s| self.d(p, s)).min()
    }

    /// Subspace on `keep`, in the given order.
    pub fn restrict(&self, keep: &[PointId]) -> Result<QMetricSpace, MetricError> {
        for &p in keep {
            if !self.contains(p) {
                return Err(MetricError::UnknownPoint(p));
            }
        }
        QMetricSpace::from_fn(keep.to_vec(), |a, b| self.d(a, b))
    }

    /// True when every pair of `other` has the same distance here.
    pub fn contains_isometrically(&self, other: &QMetricSpace) -> bool {
        other.ids.iter().all(|&p| self.contains(p))
            && other.ids.iter().enumerate().all(|(i, &a)| {
                other.ids[..i].iter().all(|&b| self.d(a, b) == other.d(a, b))
            })
    }

    /// Renames points through `map` (which must be injective on the ids).
    pub fn relabel(&self, map: &BTreeMap<PointId, PointId>) -> Result<QMetricSpace, MetricError> {
        let ids: Vec<PointId> = self.ids.iter().map(|p| map.get(p).copied().unwrap_or(*p)).collect();
        let mut s = QMetricSpace::new();
        for (i, &p) in ids.iter().enumerate() {
            s.push_point(p, self.dist[i][..i].to_vec())?;
        }
        Ok(s)
    }
}

impl fmt::Debug for QMetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QMetricSpace {{ ids: {:?}, d: [", self.ids)?;
        for (i, &a) in self.ids.iter().enumerate() {
            for &b in &self.ids[i + 1..] {
                write!(f, " {a}-{b}:{}", Frac(self.d(a, b)))?;
            }
        }
        write!(f, " ] }}")
    }
}

/// A failed metric axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `d(a, b) <= 0` for distinct points.
    NonPositive { a: PointId, b: PointId, d: Q },
    /// `d(a, c) > d(a, b) + d(b, c)`.
    Triangle { a: PointId, b: PointId, c: PointId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonPositive { a, b, d } => write!(f, "non-positive distance d({a},{b}) = {}", Frac(*d)),
            Violation::Triangle { a, b, c } => write!(f, "triangle violation d({a},{c}) > d({a},{b}) + d({b},{c})"),
        }
    }
}

/// Every positivity and triangle failure, pairs first then triples with the
/// middle point last-varying.
pub fn validate_metric(m: &QMetricSpace) -> Vec<Violation> {
    let n = m.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if !is_positive(&m.dist[i][j]) {
                out.push(Violation::NonPositive { a: m.ids[i], b: m.ids[j], d: m.dist[i][j] });
            }
        }
    }
    for i in 0..n {
        for k in i + 1..n {
            for j in 0..n {
                if j != i && j != k && m.dist[i][k] > m.dist[i][j] + m.dist[j][k] {
                    out.push(Violation::Triangle { a: m.ids[i], b: m.ids[j], c: m.ids[k] });
                }
            }
        }
    }
    out
}

/// A finitely supported one-point type: distances to the support points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KatetovType {
    values: BTreeMap<PointId, Q>,
}

impl KatetovType {
    pub fn new(values: impl IntoIterator<Item = (PointId, Q)>) -> Result<Self, MetricError> {
        let values: BTreeMap<PointId, Q> = values.into_iter().collect();
        if values.is_empty() {
            return Err(MetricError::EmptySupport);
        }
        if let Some((&p, _)) = values.iter().find(|(_, v)| !is_positive(v)) {
            return Err(MetricError::NonPositiveValue(p));
        }
        Ok(KatetovType { values })
    }

    pub fn support(&self) -> impl Iterator<Item = PointId> + '_ {
        self.values.keys().copied()
    }

    pub fn values(&self) -> &BTreeMap<PointId, Q> {
        &self.values
    }

    pub fn value(&self, p: PointId) -> Option<Q> {
        self.values.get(&p).copied()
    }

    pub fn max_value(&self) -> Q {
        *self.values.values().max().expect("support is non-empty")
    }

    /// Checks `|f(a) - f(b)| <= d(a, b) <= f(a) + f(b)` over the support.
    pub fn check_realizable(&self, m: &QMetricSpace) -> Result<(), MetricError> {
        for &p in self.values.keys() {
            if !m.contains(p) {
                return Err(MetricError::UnknownPoint(p));
            }
        }
        let entries: Vec<(PointId, Q)> = self.values.iter().map(|(&p, &v)| (p, v)).collect();
        for (i, &(a, fa)) in entries.iter().enumerate() {
            for &(b, fb) in &entries[i + 1..] {
                let d = m.d(a, b);
                if abs_diff(fa, fb) > d || d > fa + fb {
                    return Err(MetricError::Unrealizable { a, b });
                }
            }
        }
        Ok(())
    }

    /// `min over support y of (f(y) + d(y, z))`.
    pub fn induced_distance(&self, m: &QMetricSpace, z: PointId) -> Q {
        self.values.iter().map(|(&y, &f)| f + m.d(y, z)).min().expect("support is non-empty")
    }

    /// The type with each value replaced by its min-closure over the support.
    pub fn min_closed(&self, m: &QMetricSpace) -> KatetovType {
        let values = self.values.keys().map(|&y| (y, self.induced_distance(m, y))).collect();
        KatetovType { values }
    }

    /// Distances from the realizing point to every point of `m`, in point order.
    pub fn distance_vector(&self, m: &QMetricSpace) -> Vec<Q> {
        m.ids().iter().map(|&z| self.induced_distance(m, z)).collect()
    }
}

/// Adds a point realizing `t` (after min-closing its values).
pub fn one_point_extend(m: &QMetricSpace, t: &KatetovType, new_id: PointId) -> Result<QMetricSpace, MetricError> {
    if m.contains(new_id) {
        return Err(MetricError::IdCollision(new_id));
    }
    t.check_realizable(m)?;
    let closed = t.min_closed(m);
    let mut out = m.clone();
    out.push_point(new_id, closed.distance_vector(m))?;
    Ok(out)
}

/// Result of a push-out: the glued space and where each input point went.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Amalgam {
    pub space: QMetricSpace,
    pub left: BTreeMap<PointId, PointId>,
    pub right: BTreeMap<PointId, PointId>,
}

fn check_embedding(
    a: &QMetricSpace,
    b: &QMetricSpace,
    e: &BTreeMap<PointId, PointId>,
) -> Result<(), MetricError> {
    if e.len() != a.len() || a.ids().iter().any(|p| !e.contains_key(p)) {
        return Err(MetricError::BadEmbedding(format!("domain {:?} vs points {:?}", e.keys(), a.ids())));
    }
    let mut seen = std::collections::BTreeSet::new();
    for (&s, &t) in e {
        if !b.contains(t) {
            return Err(MetricError::UnknownPoint(t));
        }
        if !seen.insert(t) {
            return Err(MetricError::BadEmbedding(format!("{s} and another point both map to {t}")));
        }
    }
    for (i, &x) in a.ids().iter().enumerate() {
        for &y in &a.ids()[..i] {
            if a.d(x, y) != b.d(e[&x], e[&y]) {
                return Err(MetricError::NotIsometric(y, x));
            }
        }
    }
    Ok(())
}

/// Maximal amalgamation of `b1` and `b2` over the common subspace `a`.
/// Points of `b1` keep their ids; the remaining points of `b2` get fresh ids
/// above every id of `b1`, in `b2` order.
pub fn pushout_amalgam(
    a: &QMetricSpace,
    b1: &QMetricSpace,
    b2: &QMetricSpace,
    e1: &BTreeMap<PointId, PointId>,
    e2: &BTreeMap<PointId, PointId>,
) -> Result<Amalgam, MetricError> {
    if a.is_empty() {
        return Err(MetricError::EmptyAmalgamationBase);
    }
    check_embedding(a, b1, e1)?;
    check_embedding(a, b2, e2)?;

    let glued: BTreeMap<PointId, PointId> = a.ids().iter().map(|&c| (e2[&c], e1[&c])).collect();
    let mut space = b1.clone();
    let left: BTreeMap<PointId, PointId> = b1.ids().iter().map(|&p| (p, p)).collect();
    let mut right = BTreeMap::new();
    let mut added: Vec<PointId> = Vec::new();
    let mut next = b1.fresh_id();
    for &q in b2.ids() {
        if let Some(&p) = glued.get(&q) {
            right.insert(q, p);
            continue;
        }
        // On glued points the minimum is attained at the point itself.
        let mut row: Vec<Q> = b1
            .ids()
            .iter()
            .map(|&p| a.ids().iter().map(|&c| b1.d(p, e1[&c]) + b2.d(e2[&c], q)).min().expect("a is non-empty"))
            .collect();
        row.extend(added.iter().map(|&q2| b2.d(q, q2)));
        space.push_point(next, row)?;
        right.insert(q, next);
        added.push(q);
        next += 1;
    }
    Ok(Amalgam { space, left, right })
}

/// Canonical menu: sorted, deduplicated, all positive.
pub fn normalize_menu(menu: &[Q]) -> Result<Vec<Q>, MetricError> {
    let mut m = menu.to_vec();
    m.sort();
    m.dedup();
    if m.is_empty() || m.iter().any(|v| !is_positive(v)) {
        return Err(MetricError::BadMenu);
    }
    Ok(m)
}

/// Realizable types with support inside `over`, `1 <= |support| <= k` and
/// values from `menu`, in canonical order: support size, then the support's
/// position list in `over`, then value tuples in menu order.
pub fn enumerate_types(m: &QMetricSpace, over: &[PointId], k: usize, menu: &[Q]) -> Vec<KatetovType> {
    let mut out = Vec::new();
    for size in 1..=k.min(over.len()) {
        for_each_combination(over.len(), size, |idx| {
            let support: Vec<PointId> = idx.iter().map(|&i| over[i]).collect();
            let mut choice = vec![0usize; size];
            loop {
                let t = KatetovType {
                    values: support.iter().zip(&choice).map(|(&p, &c)| (p, menu[c])).collect(),
                };
                if t.check_realizable(m).is_ok() {
                    out.push(t);
                }
                // odometer, last position fastest
                let mut pos = size;
                loop {
                    if pos == 0 {
                        return;
                    }
                    pos -= 1;
                    choice[pos] += 1;
                    if choice[pos] < menu.len() {
                        break;
                    }
                    choice[pos] = 0;
                }
            }
        });
    }
    out
}

/// Adds one point per type (all realizable over `m`), glued to each other by
/// the push-out over `m`: `d(x, x') = min over z in m of d(x, z) + d(z, x')`.
/// Returns the new space and the ids given to the types, in order.
pub fn add_independent_points(
    m: &QMetricSpace,
    types: &[KatetovType],
) -> Result<(QMetricSpace, Vec<PointId>), MetricError> {
    let vectors: Vec<Vec<Q>> = types.iter().map(|t| t.min_closed(m).distance_vector(m)).collect();
    let mut out = m.clone();
    let mut ids = Vec::new();
    let mut next = m.fresh_id();
    for (i, v) in vectors.iter().enumerate() {
        let mut row = v.clone();
        for w in &vectors[..i] {
            let cross = v.iter().zip(w).map(|(a, b)| a + b).min().expect("m is non-empty");
            row.push(cross);
        }
        out.push_point(next, row)?;
        ids.push(next);
        next += 1;
    }
    Ok((out, ids))
}

/// One saturation round: a fresh point for every realizable type of support
/// size at most `k` with values from `menu`, computed over the input and
/// deduplicated by induced distance vector.
pub fn qu_saturate(m: &QMetricSpace, k: usize, menu: &[Q]) -> Result<QMetricSpace, MetricError> {
    let menu = normalize_menu(menu)?;
    let mut seen = std::collections::BTreeSet::new();
    let types: Vec<KatetovType> = enumerate_types(m, m.ids(), k, &menu)
        .into_iter()
        .filter(|t| seen.insert(t.min_closed(m).distance_vector(m)))
        .collect();
    Ok(add_independent_points(m, &types)?.0)
}

/// Depth-first search for isometric injections `source -> host` extending
/// `fixed`. Source points are assigned in source order, host candidates in
/// host order; `visit` returns false to stop. Returns whether it was stopped.
pub fn isometric_injections(
    source: &QMetricSpace,
    host: &QMetricSpace,
    fixed: &BTreeMap<PointId, PointId>,
    visit: &mut dyn FnMut(&BTreeMap<PointId, PointId>) -> bool,
) -> bool {
    isometric_injections_where(source, host, fixed, &|_, _| true, visit)
}

/// As `isometric_injections`, restricted to pairs `(source, host)` accepted
/// by `allowed`.
pub fn isometric_injections_where(
    source: &QMetricSpace,
    host: &QMetricSpace,
    fixed: &BTreeMap<PointId, PointId>,
    allowed: &dyn Fn(PointId, PointId) -> bool,
    visit: &mut dyn FnMut(&BTreeMap<PointId, PointId>) -> bool,
) -> bool {
    struct Ctx<'a> {
        source: &'a QMetricSpace,
        host: &'a QMetricSpace,
        fixed: &'a BTreeMap<PointId, PointId>,
        allowed: &'a dyn Fn(PointId, PointId) -> bool,
        image: Vec<usize>,
        used: Vec<bool>,
    }
    fn step(c: &mut Ctx<'_>, i: usize, visit: &mut dyn FnMut(&BTreeMap<PointId, PointId>) -> bool) -> bool {
        if i == c.source.len() {
            let map = c
                .source
                .ids()
                .iter()
                .zip(&c.image)
                .map(|(&s, &h)| (s, c.host.ids()[h]))
                .collect();
            return !visit(&map);
        }
        let sid = c.source.ids()[i];
        let candidates: Vec<usize> = match c.fixed.get(&sid) {
            Some(h) => c.host.position(*h).into_iter().collect(),
            None => (0..c.host.len()).collect(),
        };
        for h in candidates {
            if c.used[h]
                || !(c.allowed)(sid, c.host.ids()[h])
                || (0..i).any(|j| c.source.d_at(i, j) != c.host.d_at(h, c.image[j]))
            {
                continue;
            }
            c.image[i] = h;
            c.used[h] = true;
            let stop = step(c, i + 1, visit);
            c.used[h] = false;
            if stop {
                return true;
            }
        }
        false
    }
    if source.len() > host.len() {
        return false;
    }
    let mut c = Ctx { source, host, fixed, allowed, image: vec![0; source.len()], used: vec![false; host.len()] };
    step(&mut c, 0, visit)
}

/// Role tag attached to a point in the text format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Role {
    Base,
    Anchor(Q),
    Fill(Vec<PointId>),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Base => f.write_str("base"),
            Role::Anchor(r) => write!(f, "anchor({})", Frac(*r)),
            Role::Fill(s) => {
                let parts: Vec<String> = s.iter().map(|p| p.to_string()).collect();
                write!(f, "fill(support={})", parts.join(","))
            }
        }
    }
}

impl Role {
    pub fn parse(s: &str) -> Option<Role> {
        let s = s.trim();
        if s == "base" {
            return Some(Role::Base);
        }
        if let Some(inner) = s.strip_prefix("anchor(").and_then(|r| r.strip_suffix(')')) {
            return parse_q(inner).ok().map(Role::Anchor);
        }
        let inner = s.strip_prefix("fill(support=")?.strip_suffix(')')?;
        let ids = inner
            .split(',')
            .filter(|t| !t.is_empty())
            .map(|t| t.trim().parse().ok())
            .collect::<Option<Vec<PointId>>>()?;
        Some(Role::Fill(ids))
    }
}

/// Writes the metric text format:
///
/// ```text
/// points 3
/// 0 role: base
/// 1
/// 2
/// distances
/// 0 1 1/1
/// ...
/// ```
pub fn write_metric(m: &QMetricSpace, roles: &BTreeMap<PointId, Role>) -> String {
    let mut s = format!("points {}\n", m.len());
    for &p in m.ids() {
        match roles.get(&p) {
            Some(r) => s.push_str(&format!("{p} role: {r}\n")),
            None => s.push_str(&format!("{p}\n")),
        }
    }
    s.push_str("distances\n");
    for (i, &a) in m.ids().iter().enumerate() {
        for &b in &m.ids()[i + 1..] {
            s.push_str(&format!("{a} {b} {}\n", Frac(m.d(a, b))));
        }
    }
    s
}

/// Reads one metric block; returns the space, its roles and the number of
/// lines consumed (so blocks can be concatenated).
pub fn read_metric(text: &str) -> Result<(QMetricSpace, BTreeMap<PointId, Role>), MetricError> {
    let lines: Vec<&str> = text.lines().collect();
    let (m, roles, _) = read_metric_block(&lines, 0)?;
    Ok((m, roles))
}

pub(crate) fn read_metric_block(
    lines: &[&str],
    start: usize,
) -> Result<(QMetricSpace, BTreeMap<PointId, Role>, usize), MetricError> {
    let err = |line: usize, msg: String| MetricError::Parse { line: line + 1, msg };
    let mut i = start;
    while i < lines.len() && (lines[i].trim().is_empty() || lines[i].trim_start().starts_with('#')) {
        i += 1;
    }
    let header = lines.get(i).ok_or_else(|| err(i, "missing `points` header".into()))?;
    let n: usize = header
        .strip_prefix("points ")
        .and_then(|t| t.trim().parse().ok())
        .ok_or_else(|| err(i, format!("expected `points <n>`, got {header:?}")))?;
    i += 1;
    let mut ids = Vec::with_capacity(n);
    let mut roles = BTreeMap::new();
    for _ in 0..n {
        let line = lines.get(i).ok_or_else(|| err(i, "truncated point list".into()))?;
        let (id_part, role_part) = match line.split_once(" role: ") {
            Some((a, b)) => (a, Some(b)),
            None => (*line, None),
        };
        let id: PointId = id_part.trim().parse().map_err(|_| err(i, format!("bad point id {id_part:?}")))?;
        if let Some(r) = role_part {
            roles.insert(id, Role::parse(r).ok_or_else(|| err(i, format!("bad role {r:?}")))?);
        }
        ids.push(id);
        i += 1;
    }
    if lines.get(i).map(|l| l.trim()) != Some("distances") {
        return Err(err(i, "expected `distances`".into()));
    }
    i += 1;
    let mut entries = Vec::new();
    for _ in 0..n * n.saturating_sub(1) / 2 {
        let line = lines.get(i).ok_or_else(|| err(i, "truncated distance list".into()))?;
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(err(i, format!("expected `a b p/q`, got {line:?}")));
        }
        let a: PointId = parts[0].parse().map_err(|_| err(i, format!("bad id {:?}", parts[0])))?;
        let b: PointId = parts[1].parse().map_err(|_| err(i, format!("bad id {:?}", parts[1])))?;
        let d = parse_q(parts[2]).map_err(|e| err(i, e.to_string()))?;
        entries.push((a, b, d));
        i += 1;
    }
    let m = QMetricSpace::from_entries(ids, &entries)?;
    Ok((m, roles, i))
}
