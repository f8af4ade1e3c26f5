//! Pointed spaces with an r-floor around a special point, the obstruction
//! gadget, iterated supports of fill points, and separating anchor families.

use crate::metric::{
    add_independent_points, enumerate_types, isometric_injections, normalize_menu, pushout_amalgam, validate_metric,
    MetricError, PointId, QMetricSpace, Role,
};
use crate::rational::{is_positive, qi, Frac, Q};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum RTypeError {
    #[error("r must be greater than 1, got {0}")]
    RTooSmall(String),
    #[error("r values must be pairwise distinct ({0} repeats)")]
    DuplicateR(String),
    #[error("point {0} is closer than r to the special point")]
    FloorViolated(PointId),
    #[error("special point {0} is not in the space")]
    MissingSpecial(PointId),
    #[error("point {0} is not a fill point")]
    NotFill(PointId),
    #[error("point {0} is not an anchor")]
    NotAnchor(PointId),
    #[error("fill {fill} lists support point {support} that was not created before it")]
    SupportNotEarlier { fill: PointId, support: PointId },
    #[error("gadget needs n >= 1 and L > 0")]
    BadGadget,
    #[error("{pairs} pairs given for {rs} r values")]
    LengthMismatch { pairs: usize, rs: usize },
    #[error("pair point {0} is not in the dense part")]
    NotDense(PointId),
    #[error("seed fails the triangle audit: {0}")]
    SeedTriangle(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Validated r > 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RTypeSpec(Q);

impl RTypeSpec {
    pub fn new(r: Q) -> Result<Self, RTypeError> {
        if r <= qi(1) {
            return Err(RTypeError::RTooSmall(Frac(r).to_string()));
        }
        Ok(RTypeSpec(r))
    }

    pub fn r(&self) -> Q {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedSpace {
    pub space: QMetricSpace,
    pub special: PointId,
}

/// Every non-special point lies at distance at least r from the special one.
pub fn mr_validate(p: &PointedSpace, r: RTypeSpec) -> bool {
    p.space.contains(p.special)
        && p.space.ids().iter().all(|&y| y == p.special || p.space.d(p.special, y) >= r.r())
}

/// One saturation round over the whole pointed space, admitting only types
/// that keep the special point's floor.
pub fn rtype_saturate(p: &PointedSpace, r: RTypeSpec, k: usize, menu: &[Q]) -> Result<PointedSpace, RTypeError> {
    if !p.space.contains(p.special) {
        return Err(RTypeError::MissingSpecial(p.special));
    }
    if let Some(&bad) = p.space.ids().iter().find(|&&y| y != p.special && p.space.d(p.special, y) < r.r()) {
        return Err(RTypeError::FloorViolated(bad));
    }
    let menu = normalize_menu(menu)?;
    let m = &p.space;
    let mut seen = BTreeSet::new();
    let types: Vec<_> = enumerate_types(m, m.ids(), k, &menu)
        .into_iter()
        .filter(|t| t.induced_distance(m, p.special) >= r.r())
        .filter(|t| seen.insert(t.min_closed(m).distance_vector(m)))
        .collect();
    let (space, _) = add_independent_points(m, &types)?;
    Ok(PointedSpace { space, special: p.special })
}

/// `n + 1` points pairwise `2L` apart, each at `L` from a centre `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionGadget {
    pub n: usize,
    pub l: Q,
    pub space: QMetricSpace,
}

impl ObstructionGadget {
    /// Id of the centre; the outer points are `0..=n`.
    pub fn centre(&self) -> PointId {
        self.n + 1
    }
}

pub fn make_gadget(n: usize, l: Q) -> Result<ObstructionGadget, RTypeError> {
    if n == 0 || !is_positive(&l) {
        return Err(RTypeError::BadGadget);
    }
    let w = n + 1;
    let space = QMetricSpace::from_fn((0..=w).collect(), |a, b| if a == w || b == w { l } else { l + l })?;
    Ok(ObstructionGadget { n, l, space })
}

/// Least isometric injection of the gadget into `host` sending the centre to
/// `anchor`, if any.
pub fn gadget_embeds(
    host: &QMetricSpace,
    anchor: PointId,
    g: &ObstructionGadget,
) -> Option<BTreeMap<PointId, PointId>> {
    if !host.contains(anchor) {
        return None;
    }
    let fixed = BTreeMap::from([(g.centre(), anchor)]);
    let mut found = None;
    isometric_injections(&g.space, host, &fixed, &mut |m| {
        found = Some(m.clone());
        false
    });
    found
}

/// A metric space with role tags. Points without a tag, `Base` points and
/// anchors form the skeleton; `Fill` points carry their support.
#[derive(Clone, Copy, Debug)]
pub struct RoleView<'a> {
    pub space: &'a QMetricSpace,
    pub roles: &'a BTreeMap<PointId, Role>,
}

impl<'a> RoleView<'a> {
    pub fn new(space: &'a QMetricSpace, roles: &'a BTreeMap<PointId, Role>) -> Self {
        RoleView { space, roles }
    }

    pub fn fill_support(&self, p: PointId) -> Option<&'a [PointId]> {
        match self.roles.get(&p) {
            Some(Role::Fill(s)) => Some(s),
            _ => None,
        }
    }

    pub fn is_fill(&self, p: PointId) -> bool {
        self.fill_support(p).is_some()
    }

    pub fn is_anchor(&self, p: PointId) -> bool {
        matches!(self.roles.get(&p), Some(Role::Anchor(_)))
    }

    pub fn fills(&self) -> Vec<PointId> {
        self.space.ids().iter().copied().filter(|&p| self.is_fill(p)).collect()
    }

    pub fn anchors(&self) -> Vec<PointId> {
        self.space.ids().iter().copied().filter(|&p| self.is_anchor(p)).collect()
    }

    pub fn skeleton(&self) -> Vec<PointId> {
        self.space.ids().iter().copied().filter(|&p| !self.is_fill(p)).collect()
    }
}

/// Skeleton points reachable from a fill through chains of supports, with the
/// least chain sum to each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportClosure {
    pub origin: PointId,
    pub reach: BTreeMap<PointId, Q>,
    /// Minimizing chain per reached point, from `origin` to that point.
    pub chains: BTreeMap<PointId, Vec<PointId>>,
    /// Every fill met on some chain, `origin` included.
    pub fills: BTreeSet<PointId>,
}

/// One check of the closure identity `d(y, z) = min over s of reach(s) + d(s, z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureIdentity {
    pub z: PointId,
    pub stored: Q,
    pub formula: Q,
}

impl ClosureIdentity {
    pub fn holds(&self) -> bool {
        self.stored == self.formula
    }
}

impl SupportClosure {
    /// Closure identities at every skeleton point created before all the fills
    /// of the closure; later points were attached by other means and are not
    /// governed by the support formula.
    pub fn identities(&self, view: &RoleView<'_>) -> Vec<ClosureIdentity> {
        let first_fill = self.fills.iter().filter_map(|&f| view.space.position(f)).min().unwrap_or(0);
        view.skeleton()
            .into_iter()
            .filter(|&z| view.space.position(z).is_some_and(|p| p < first_fill))
            .map(|z| {
                let formula = self
                    .reach
                    .iter()
                    .map(|(&s, &v)| v + view.space.d(s, z))
                    .min()
                    .expect("closure of a fill is non-empty");
                ClosureIdentity { z, stored: view.space.d(self.origin, z), formula }
            })
            .collect()
    }
}

pub fn support_closure(view: &RoleView<'_>, y: PointId) -> Result<SupportClosure, RTypeError> {
    type Best = BTreeMap<PointId, (Q, Vec<PointId>)>;
    fn walk(
        view: &RoleView<'_>,
        p: PointId,
        memo: &mut BTreeMap<PointId, Best>,
        fills: &mut BTreeSet<PointId>,
    ) -> Result<Best, RTypeError> {
        if let Some(b) = memo.get(&p) {
            return Ok(b.clone());
        }
        fills.insert(p);
        let support = view.fill_support(p).ok_or(RTypeError::NotFill(p))?;
        let pos = view.space.position(p).ok_or(MetricError::UnknownPoint(p))?;
        let mut best: Best = BTreeMap::new();
        let mut offer = |z: PointId, v: Q, chain: Vec<PointId>| match best.get(&z) {
            Some((old, _)) if *old <= v => {}
            _ => {
                best.insert(z, (v, chain));
            }
        };
        for &s in support {
            let spos = view.space.position(s).ok_or(MetricError::UnknownPoint(s))?;
            if spos >= pos {
                return Err(RTypeError::SupportNotEarlier { fill: p, support: s });
            }
            let step = view.space.d(p, s);
            if view.is_fill(s) {
                for (z, (v, chain)) in walk(view, s, memo, fills)? {
                    offer(z, step + v, chain);
                }
            } else {
                offer(s, step, vec![s]);
            }
        }
        for (_, chain) in best.values_mut() {
            chain.insert(0, p);
        }
        memo.insert(p, best.clone());
        Ok(best)
    }

    let mut fills = BTreeSet::new();
    let best = walk(view, y, &mut BTreeMap::new(), &mut fills)?;
    let reach = best.iter().map(|(&z, (v, _))| (z, *v)).collect();
    let chains = best.into_iter().map(|(z, (_, c))| (z, c)).collect();
    Ok(SupportClosure { origin: y, reach, chains, fills })
}

/// `(d(y, skeleton), d(y, z) >= d(y, skeleton))` for a fill `y` and anchor `z`.
pub fn rtype_lower_bound(view: &RoleView<'_>, y: PointId, z: PointId) -> Result<(Q, bool), RTypeError> {
    if !view.is_fill(y) {
        return Err(RTypeError::NotFill(y));
    }
    if !view.is_anchor(z) {
        return Err(RTypeError::NotAnchor(z));
    }
    let bound = view
        .space
        .dist_to_set(y, view.skeleton())
        .expect("an anchor is part of the skeleton");
    Ok((bound, view.space.d(y, z) >= bound))
}

/// One gadget query against a fill point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionCase {
    pub fill: PointId,
    pub n: usize,
    pub l: Q,
    pub embedding: Option<BTreeMap<PointId, PointId>>,
}

/// The space a fill's type was defined over, plus the fill itself: every point
/// created no later than `y`.
pub fn governed_host(space: &QMetricSpace, y: PointId) -> Result<QMetricSpace, RTypeError> {
    let pos = space.position(y).ok_or(MetricError::UnknownPoint(y))?;
    Ok(space.restrict(&space.ids()[..=pos])?)
}

/// Searches for `make_gadget(|support|, L)` centred at `y` inside its governed
/// host, for every `L` above the largest support value that occurs as a
/// distance from `y` (other scales cannot embed) plus one scale that does not.
pub fn obstruction_cases(view: &RoleView<'_>, y: PointId) -> Result<Vec<ObstructionCase>, RTypeError> {
    let support = view.fill_support(y).ok_or(RTypeError::NotFill(y))?;
    let host = governed_host(view.space, y)?;
    let max_value = support.iter().map(|&s| view.space.d(y, s)).max().ok_or(RTypeError::NotFill(y))?;
    let mut scales: BTreeSet<Q> =
        host.ids().iter().map(|&t| host.d(y, t)).filter(|&d| d > max_value).collect();
    let fresh = scales.iter().next_back().copied().unwrap_or(max_value) + qi(1);
    scales.insert(fresh);
    scales
        .into_iter()
        .map(|l| {
            let g = make_gadget(support.len(), l)?;
            Ok(ObstructionCase { fill: y, n: support.len(), l, embedding: gadget_embeds(&host, y, &g) })
        })
        .collect()
}

/// Output of `separating_family`: the enlarged space and one anchor per r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatingFamily {
    pub space: QMetricSpace,
    pub anchors: Vec<PointId>,
    pub pairs: Vec<(PointId, PointId)>,
}

/// Adds an anchor `x_i` per `r_i`, with `d(x_i, p0) = r_i` and
/// `d(x_i, p1) = r_i + d(p0, p1)`, glued by push-out over `{p0, p1}`.
pub fn separating_family(
    base: &QMetricSpace,
    dense: &[PointId],
    rs: &[RTypeSpec],
    pairs: &[(PointId, PointId)],
) -> Result<SeparatingFamily, RTypeError> {
    if rs.len() != pairs.len() {
        return Err(RTypeError::LengthMismatch { pairs: pairs.len(), rs: rs.len() });
    }
    let mut distinct = BTreeSet::new();
    for r in rs {
        if !distinct.insert(*r) {
            return Err(RTypeError::DuplicateR(Frac(r.r()).to_string()));
        }
    }
    let mut space = base.clone();
    let mut anchors = Vec::new();
    for (r, &(p0, p1)) in rs.iter().zip(pairs) {
        for p in [p0, p1] {
            if !dense.contains(&p) || !base.contains(p) {
                return Err(RTypeError::NotDense(p));
            }
        }
        let mut common = vec![p0];
        if p1 != p0 {
            common.push(p1);
        }
        let a = space.restrict(&common)?;
        let x = *common.iter().max().expect("non-empty") + 1;
        let seed = QMetricSpace::from_fn(
            common.iter().copied().chain([x]).collect(),
            |u, v| match (u == x || v == x, u.min(v)) {
                (true, o) if o == p0 => r.r(),
                (true, _) => r.r() + space.d(p0, p1),
                (false, _) => space.d(u, v),
            },
        )?;
        if let Some(v) = validate_metric(&seed).first() {
            return Err(RTypeError::SeedTriangle(v.to_string()));
        }
        let id: BTreeMap<_, _> = common.iter().map(|&c| (c, c)).collect();
        let am = pushout_amalgam(&a, &space, &seed, &id, &id)?;
        anchors.push(am.right[&x]);
        space = am.space;
    }
    Ok(SeparatingFamily { space, anchors, pairs: pairs.to_vec() })
}
