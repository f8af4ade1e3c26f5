//! Degree-coded fingerprints, the rigidifying one-step extension of a graph
//! and the layered tower built from it.
//!
//! All constructions are finite truncations. Fingerprint vertices whose
//! degree budget could not be met inside the truncation are reported via the
//! exact prefix and excluded from rigidity claims.

use crate::aut::{self, AutError, Embedding, Perm};
use crate::graph::{self, Graph, WitnessQuery};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum RigidError {
    #[error("degree schedule must be non-empty")]
    EmptySchedule,
    #[error("degree schedule must start at 2 or more, got {0}")]
    ScheduleStartsTooLow(usize),
    #[error("degree schedule must be strictly increasing: {prev} is followed by {next}")]
    ScheduleNotIncreasing { prev: usize, next: usize },
    #[error("malformed degree schedule {0:?}")]
    ScheduleParse(String),
    #[error("fingerprint needs at least 2 vertices, got {0}")]
    FingerprintTooSmall(usize),
    #[error("base graph is empty")]
    EmptyBase,
    #[error("{steps} steps requested but only {available} are available")]
    TooManySteps { steps: usize, available: usize },
    #[error("no unused witness in the base for step {step} (set pair {query})")]
    WitnessExhausted { step: usize, query: String },
    #[error("layer {layer} has no degree schedule ({available} given)")]
    ScheduleShortage { layer: usize, available: usize },
    #[error("layer size {layer_size} cannot separate the {pairs} base pairs")]
    LayerTooSmall { layer_size: usize, pairs: usize },
    #[error("layers {0} and {1} would carry identical fingerprint degree sequences")]
    DuplicateSchedule(usize, usize),
    #[error("tower text: {0}")]
    Parse(String),
    #[error(transparent)]
    Aut(#[from] AutError),
}

/// Strictly increasing degree targets `a_1 < a_2 < ...`, with `a_1 >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegreeSchedule(Vec<usize>);

impl DegreeSchedule {
    pub fn new(values: Vec<usize>) -> Result<Self, RigidError> {
        let first = *values.first().ok_or(RigidError::EmptySchedule)?;
        if first < 2 {
            return Err(RigidError::ScheduleStartsTooLow(first));
        }
        for w in values.windows(2) {
            if w[1] <= w[0] {
                return Err(RigidError::ScheduleNotIncreasing { prev: w[0], next: w[1] });
            }
        }
        Ok(DegreeSchedule(values))
    }

    /// `start, start + 1, ..., start + len - 1`.
    pub fn consecutive(start: usize, len: usize) -> Result<Self, RigidError> {
        DegreeSchedule::new((start..start + len).collect())
    }

    /// Parses a comma-separated list such as `2,3,4`.
    pub fn parse(s: &str) -> Result<Self, RigidError> {
        let values = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| RigidError::ScheduleParse(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        DegreeSchedule::new(values)
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for DegreeSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Fingerprint graph on `v_1..v_m` (ids `0..m`) and its exact prefix length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub graph: Graph,
    pub exact_prefix: usize,
}

/// Builds the fingerprint: at step `n`, with `k` the current degree of `v_n`,
/// joins `v_n` to `v_{n+1}, ..., v_{n + a_n - k}` (those that exist).
pub fn build_fingerprint(schedule: &DegreeSchedule, m: usize) -> Result<Fingerprint, RigidError> {
    if m < 2 {
        return Err(RigidError::FingerprintTooSmall(m));
    }
    let mut g = Graph::empty(m);
    let mut exact = Vec::with_capacity(m);
    for n in 0..m {
        let Some(&target) = schedule.values().get(n) else {
            exact.push(false);
            continue;
        };
        let k = g.degree(n);
        // a_n >= n + 1 > k, so the budget is always positive
        for s in 1..=target.saturating_sub(k) {
            if n + s < m {
                g.add_edge(n, n + s).expect("fingerprint ids are in range");
            }
        }
        exact.push(g.degree(n) == target);
    }
    let exact_prefix = exact.iter().take_while(|&&e| e).count();
    Ok(Fingerprint { graph: g, exact_prefix })
}

/// Bookkeeping of a rigidify run. Output ids: base vertices keep their ids,
/// `v1[i]` is the id of fingerprint vertex `v_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidifyState {
    pub base_size: usize,
    pub v1: Vec<usize>,
    /// Base pairs `u_n = (u_n^1, u_n^2)`; `v_n` is joined to the first and not the second.
    pub pair_enum: Vec<(usize, usize)>,
    /// The set pair handled at each step, when one was eligible.
    pub setpair_enum: Vec<Option<WitnessQuery>>,
    /// The base witness chosen for each handled set pair.
    pub witnesses: Vec<Option<usize>>,
    pub exact_prefix: usize,
}

impl RigidifyState {
    pub fn is_fingerprint_vertex(&self, v: usize) -> bool {
        v >= self.base_size && v < self.base_size + self.v1.len()
    }

    pub fn used_witnesses(&self) -> Vec<usize> {
        self.witnesses.iter().flatten().copied().collect()
    }
}

/// Parameters of one rigidify run; `rigidify` fills them from a schedule.
#[derive(Clone, Debug)]
pub struct RigidifyPlan {
    pub fingerprint_size: usize,
    pub pairs: Vec<(usize, usize)>,
    pub steps: usize,
    /// Largest `|W^1| + |W^2|` considered when enumerating set pairs.
    pub setpair_bound: usize,
    /// Number of leading steps that also handle a set pair.
    pub setpair_steps: usize,
}

/// All ordered pairs of distinct ids in `0..n`, lexicographic.
pub fn ordered_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect()
}

/// Unordered pairs `(a, b)` with `a < b < n`, lexicographic.
pub fn unordered_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

/// Extends `base` by a fingerprint `V_1` of `max(schedule.len(), steps, 2)`
/// vertices and runs `steps` steps over the lexicographic enumeration of
/// ordered base pairs. Vertices past the schedule get no degree target.
pub fn rigidify(
    base: &Graph,
    schedule: &DegreeSchedule,
    steps: usize,
) -> Result<(Graph, RigidifyState), RigidError> {
    let plan = RigidifyPlan {
        fingerprint_size: schedule.len().max(steps).max(2),
        pairs: ordered_pairs(base.vertex_count()),
        steps,
        setpair_bound: 2,
        setpair_steps: steps,
    };
    if base.vertex_count() == 0 {
        return Err(RigidError::EmptyBase);
    }
    let available = plan.pairs.len().min(plan.fingerprint_size);
    if steps > available {
        return Err(RigidError::TooManySteps { steps, available });
    }
    rigidify_with(base, schedule, &plan)
}

pub fn rigidify_with(
    base: &Graph,
    schedule: &DegreeSchedule,
    plan: &RigidifyPlan,
) -> Result<(Graph, RigidifyState), RigidError> {
    let nb = base.vertex_count();
    if nb == 0 {
        return Err(RigidError::EmptyBase);
    }
    let m = plan.fingerprint_size;
    if plan.steps > m {
        return Err(RigidError::TooManySteps { steps: plan.steps, available: m });
    }
    let fp = build_fingerprint(schedule, m)?;
    let mut g = base.disjoint_union(&fp.graph);
    let v1: Vec<usize> = (nb..nb + m).collect();

    let mut state = RigidifyState {
        base_size: nb,
        v1: v1.clone(),
        pair_enum: Vec::new(),
        setpair_enum: Vec::new(),
        witnesses: Vec::new(),
        exact_prefix: fp.exact_prefix,
    };
    let mut used = vec![false; nb];
    let mut handled: BTreeSet<WitnessQuery> = BTreeSet::new();
    // second component of the pair processed by each fingerprint vertex
    let mut forbidden_for: Vec<Option<usize>> = vec![None; m];

    for n in 0..plan.steps {
        if let Some(&(p1, p2)) = plan.pairs.get(n) {
            g.add_edge(v1[n], p1).expect("ids in range");
            state.pair_enum.push((p1, p2));
            forbidden_for[n] = Some(p2);
        }

        if n >= plan.setpair_steps {
            state.setpair_enum.push(None);
            state.witnesses.push(None);
            continue;
        }
        // eligible set pairs meet V_1 only inside v_1..v_{n-1}
        let universe: Vec<usize> = (0..nb).chain(v1[..n].iter().copied()).collect();
        let next = (1..=plan.setpair_bound).find_map(|size| {
            graph::set_pairs_of_size(&universe, size)
                .into_iter()
                .find(|q| q.vertices().any(|v| v >= nb) && !handled.contains(q))
        });
        let Some(q) = next else {
            state.setpair_enum.push(None);
            state.witnesses.push(None);
            continue;
        };
        let w = (0..nb)
            .find(|&w| {
                !used[w]
                    && !q.x().contains(&w)
                    && !q.y().contains(&w)
                    && q.x().iter().all(|&a| a >= nb || g.has_edge(w, a))
                    && q.y().iter().all(|&b| !g.has_edge(w, b))
                    && q.x().iter().all(|&a| a < nb || forbidden_for[a - nb] != Some(w))
            })
            .ok_or_else(|| RigidError::WitnessExhausted { step: n + 1, query: format_query(&q) })?;
        used[w] = true;
        for &a in q.x().iter().filter(|&&a| a >= nb) {
            g.add_edge(w, a).expect("ids in range");
        }
        handled.insert(q.clone());
        state.setpair_enum.push(Some(q));
        state.witnesses.push(Some(w));
    }
    Ok((g, state))
}

pub fn format_query(q: &WitnessQuery) -> String {
    format!("({:?}, {:?})", q.x(), q.y())
}

/// Automorphisms of a rigidify output that map the base onto itself and
/// `V_1` onto itself, without any further constraint.
pub fn setwise_automorphisms(
    g: &Graph,
    state: &RigidifyState,
    cap: usize,
) -> Result<aut::AutSet, RigidError> {
    let classes: Vec<usize> = (0..g.vertex_count()).map(|v| usize::from(state.is_fingerprint_vertex(v))).collect();
    Ok(aut::automorphisms_preserving(g, &classes, None, cap)?)
}

/// Checks the finite consequence of the rigidifying extension: every base
/// automorphism sending `u^1` to `u^2` for a processed pair `(u^1, u^2)` has
/// no commuting extension. Returns the offending automorphisms.
pub fn rigidity_violations(
    base: &Graph,
    out: &Graph,
    state: &RigidifyState,
    cap: usize,
) -> Result<Vec<Perm>, RigidError> {
    let e = Embedding::prefix_inclusion(base.clone(), out.clone())?;
    let auts = aut::automorphisms_capped(base, None, cap)?;
    let mut bad = Vec::new();
    for alpha in auts.perms() {
        let moves_pair = state.pair_enum.iter().any(|&(x, y)| alpha.apply(x) == y);
        if moves_pair && aut::extension_square(&e, alpha)?.is_some() {
            bad.push(alpha.clone());
        }
    }
    Ok(bad)
}

/// Layered tower `R_0 ⊆ R_1 ⊆ ... ⊆ R_t`. Layer `i > 0` adds `layer_size`
/// fresh vertices carrying their own fingerprint, joined only to `R_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    pub layers: Vec<Graph>,
    pub layer_of: Vec<usize>,
    pub family: Vec<DegreeSchedule>,
    pub layer_size: usize,
    /// Exact fingerprint prefix length of each positive layer.
    pub exact_prefixes: Vec<usize>,
}

pub fn build_tower(
    base: &Graph,
    family: &[DegreeSchedule],
    layer_size: usize,
    t: usize,
) -> Result<Tower, RigidError> {
    build_tower_with(base, family, layer_size, t, base.vertex_count().saturating_sub(1))
}

/// As `build_tower`, handling single-vertex set pairs in the first
/// `setpair_steps` steps of each layer. Every handled pair consumes a base
/// witness, so the budget is bounded by the size of `R_0`.
pub fn build_tower_with(
    base: &Graph,
    family: &[DegreeSchedule],
    layer_size: usize,
    t: usize,
    setpair_steps: usize,
) -> Result<Tower, RigidError> {
    let nb = base.vertex_count();
    if nb == 0 {
        return Err(RigidError::EmptyBase);
    }
    if t > family.len() {
        return Err(RigidError::ScheduleShortage { layer: family.len() + 1, available: family.len() });
    }
    let pairs = unordered_pairs(nb);
    if t > 0 && layer_size < pairs.len().max(2) {
        return Err(RigidError::LayerTooSmall { layer_size, pairs: pairs.len() });
    }
    let mut seqs: Vec<Vec<usize>> = Vec::new();
    for (i, s) in family.iter().take(t).enumerate() {
        let fp = build_fingerprint(s, layer_size)?;
        let degrees: Vec<usize> = (0..layer_size).map(|v| fp.graph.degree(v)).collect();
        if let Some(j) = seqs.iter().position(|d| *d == degrees) {
            return Err(RigidError::DuplicateSchedule(j + 1, i + 1));
        }
        seqs.push(degrees);
    }

    let mut current = base.clone();
    let mut layers = vec![base.clone()];
    let mut layer_of = vec![0; nb];
    let mut exact_prefixes = Vec::new();
    for (i, schedule) in family.iter().take(t).enumerate() {
        let plan = RigidifyPlan {
            fingerprint_size: layer_size,
            pairs: pairs.clone(),
            steps: layer_size,
            setpair_bound: 1,
            setpair_steps: setpair_steps.min(layer_size),
        };
        let (layer_graph, state) = rigidify_with(base, schedule, &plan)?;
        let offset = current.vertex_count();
        for _ in 0..layer_size {
            current.add_vertex();
            layer_of.push(i + 1);
        }
        let relabel = |v: usize| if v < nb { v } else { offset + (v - nb) };
        for (u, v) in layer_graph.edges() {
            if u >= nb || v >= nb {
                current.add_edge(relabel(u), relabel(v)).expect("ids in range");
            }
        }
        exact_prefixes.push(state.exact_prefix);
        layers.push(current.clone());
    }
    Ok(Tower { layers, layer_of, family: family.iter().take(t).cloned().collect(), layer_size, exact_prefixes })
}

/// Outcome of the finitized tower conditions; `failures` empty means pass.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TowerAudit {
    pub checks: Vec<(String, bool)>,
    pub failures: Vec<String>,
}

impl TowerAudit {
    fn record(&mut self, name: &str, failures: Vec<String>) {
        self.checks.push((name.to_string(), failures.is_empty()));
        self.failures.extend(failures.into_iter().map(|f| format!("{name}: {f}")));
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl Tower {
    pub fn top(&self) -> &Graph {
        self.layers.last().expect("tower has at least the base layer")
    }

    pub fn base_size(&self) -> usize {
        self.layers[0].vertex_count()
    }

    pub fn layer_vertices(&self, layer: usize) -> Vec<usize> {
        (0..self.layer_of.len()).filter(|&v| self.layer_of[v] == layer).collect()
    }

    /// Within-layer degrees of the fresh vertices of a positive layer.
    pub fn layer_degree_sequence(&self, layer: usize) -> Vec<usize> {
        let verts = self.layer_vertices(layer);
        let set: BTreeSet<usize> = verts.iter().copied().collect();
        verts
            .iter()
            .map(|&v| graph::degree_within(self.top(), v, &set).expect("vertex in range"))
            .collect()
    }

    /// Exact-prefix fingerprint vertices of a positive layer (tower ids).
    pub fn exact_prefix_vertices(&self, layer: usize) -> Vec<usize> {
        self.layer_vertices(layer).into_iter().take(self.exact_prefixes[layer - 1]).collect()
    }

    /// Runs the five finitized tower conditions with defect bound `k`.
    pub fn audit(&self, k: usize) -> TowerAudit {
        let mut report = TowerAudit::default();
        let top = self.top();

        let mut f = Vec::new();
        for (i, w) in self.layers.windows(2).enumerate() {
            let prefix: Vec<usize> = (0..w[0].vertex_count()).collect();
            if w[1].induced(&prefix) != w[0] {
                f.push(format!("R_{i} is not an induced subgraph of R_{}", i + 1));
            }
        }
        report.record("chain", f);

        let mut f = Vec::new();
        for (i, w) in self.layers.windows(2).enumerate() {
            let added = w[1].vertex_count() - w[0].vertex_count();
            if added != self.layer_size {
                f.push(format!("layer {} adds {added} vertices, expected {}", i + 1, self.layer_size));
            }
        }
        report.record("layer-size", f);

        let mut f = Vec::new();
        for (i, layer) in self.layers.iter().enumerate() {
            let defects = graph::extension_defects(layer, k);
            if let Some(q) = defects.first() {
                f.push(format!("R_{i} has {} defects at k={k}, first {}", defects.len(), format_query(q)));
            }
        }
        report.record("extension-defects", f);

        let mut f = Vec::new();
        for (u, v) in top.edges() {
            let (lu, lv) = (self.layer_of[u], self.layer_of[v]);
            if lu > 0 && lv > 0 && lu != lv {
                f.push(format!("edge {u}-{v} joins layers {lu} and {lv}"));
            }
        }
        report.record("cross-layer-ban", f);

        let mut f = Vec::new();
        for layer in 1..self.layers.len() {
            let g = &self.layers[layer];
            let fresh = self.layer_vertices(layer);
            for (a, b) in unordered_pairs(self.base_size()) {
                if !fresh.iter().any(|&u| g.has_edge(u, a) && !g.has_edge(u, b)) {
                    f.push(format!("layer {layer} has no vertex adjacent to {a} and not to {b}"));
                }
            }
        }
        report.record("base-pair-separation", f);

        let mut f = Vec::new();
        let seqs: Vec<Vec<usize>> = (1..self.layers.len()).map(|l| self.layer_degree_sequence(l)).collect();
        for i in 0..seqs.len() {
            for j in i + 1..seqs.len() {
                let (mut a, mut b) = (seqs[i].clone(), seqs[j].clone());
                a.sort_unstable();
                b.sort_unstable();
                if a == b {
                    f.push(format!("layers {} and {} have equal degree multisets", i + 1, j + 1));
                }
            }
        }
        report.record("distinct-fingerprints", f);
        report
    }

    /// Graph text followed by a `layers` section of `vertex layer` lines.
    pub fn to_text(&self) -> String {
        let mut s = self.top().to_text();
        s.push_str(&format!("layers {}\n", self.layer_of.len()));
        for (v, l) in self.layer_of.iter().enumerate() {
            s.push_str(&format!("{v} {l}\n"));
        }
        s
    }

    /// Reads back the top graph and layer map written by `to_text`.
    pub fn parse_layers(text: &str) -> Result<(Graph, Vec<usize>), RigidError> {
        let g = Graph::from_text(text).map_err(|e| RigidError::Parse(e.to_string()))?;
        let mut lines = text.lines().skip_while(|l| !l.starts_with("layers"));
        let header = lines.next().ok_or_else(|| RigidError::Parse("missing layers section".into()))?;
        let count: usize = header
            .trim_start_matches("layers")
            .trim()
            .parse()
            .map_err(|_| RigidError::Parse(format!("bad header {header:?}")))?;
        let mut layer_of = vec![0; count];
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let mut it = line.split_whitespace().map(str::parse::<usize>);
            match (it.next(), it.next()) {
                (Some(Ok(v)), Some(Ok(l))) if v < count => layer_of[v] = l,
                _ => return Err(RigidError::Parse(format!("bad layer line {line:?}"))),
            }
        }
        Ok((g, layer_of))
    }
}
