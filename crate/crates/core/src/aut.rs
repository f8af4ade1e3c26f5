//! Exact automorphism groups of small graphs and the commuting-square
//! extension test for embeddings.
//!
//! The search assigns images to vertices `0, 1, ...` in order, trying
//! candidates in increasing id order. Candidates are restricted to the same
//! cell of a stable colour refinement (seeded with degree and the multiset of
//! neighbour degrees), and every partial map is checked against all earlier
//! assignments, so the first complete map found is the lexicographically
//! least one.

use crate::graph::Graph;
use std::collections::BTreeMap;
use std::fmt;

/// Largest graph `automorphisms` will enumerate unless told otherwise.
pub const DEFAULT_VERTEX_CAP: usize = 24;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum AutError {
    #[error("graph has {n} vertices, above the automorphism search cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("map is not an automorphism of the source graph: {0}")]
    NotAutomorphism(String),
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("malformed permutation: {0}")]
    Parse(String),
}

/// A permutation of `0..n`, stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, AutError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(AutError::Parse(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.0[v]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&v| self.0[v]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p] = i;
        }
        Perm(inv)
    }

    pub fn is_automorphism_of(&self, g: &Graph) -> bool {
        let n = g.vertex_count();
        if self.len() != n {
            return false;
        }
        g.edges().iter().all(|&(u, v)| g.has_edge(self.0[u], self.0[v]))
    }

    pub fn parse(line: &str) -> Result<Perm, AutError> {
        let images = line
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| AutError::Parse(format!("bad image {t:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Perm::from_images(images)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{self}]")
    }
}

/// Explicit, sorted list of automorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutSet {
    perms: Vec<Perm>,
    complete: bool,
}

impl AutSet {
    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn perms(&self) -> &[Perm] {
        &self.perms
    }

    /// False when enumeration stopped at the caller's limit.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.perms.binary_search(p).is_ok()
    }

    /// Identity present, closed under composition and inverses.
    pub fn is_group(&self) -> bool {
        let Some(first) = self.perms.first() else {
            return false;
        };
        if !self.contains(&Perm::identity(first.len())) {
            return false;
        }
        self.perms.iter().all(|a| {
            self.contains(&a.inverse()) && self.perms.iter().all(|b| self.contains(&a.compose(b)))
        })
    }
}

/// Stable colour refinement; equal colours are a necessary condition for
/// two vertices to lie in one orbit of any automorphism group that
/// preserves `seed`.
pub fn refine_colors(g: &Graph, seed: Option<&[usize]>) -> Vec<usize> {
    let n = g.vertex_count();
    let deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut sigs: Vec<(usize, usize, Vec<usize>)> = (0..n)
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbors(v).map(|u| deg[u]).collect();
            nd.sort_unstable();
            (seed.map_or(0, |s| s[v]), deg[v], nd)
        })
        .collect();
    let mut colors = relabel(&sigs);
    loop {
        let cells = colors.iter().max().map_or(0, |m| m + 1);
        sigs = (0..n)
            .map(|v| {
                let mut nc: Vec<usize> = g.neighbors(v).map(|u| colors[u]).collect();
                nc.sort_unstable();
                (colors[v], 0, nc)
            })
            .collect();
        let next = relabel(&sigs);
        let next_cells = next.iter().max().map_or(0, |m| m + 1);
        colors = next;
        if next_cells == cells {
            return colors;
        }
    }
}

fn relabel<T: Ord + Clone>(sigs: &[T]) -> Vec<usize> {
    let mut distinct: Vec<T> = sigs.to_vec();
    distinct.sort();
    distinct.dedup();
    let index: BTreeMap<&T, usize> = distinct.iter().enumerate().map(|(i, s)| (s, i)).collect();
    sigs.iter().map(|s| index[s]).collect()
}

struct Search<'a> {
    g: &'a Graph,
    colors: Vec<usize>,
    fixed: Vec<Option<usize>>,
    reserved: Vec<bool>,
    image: Vec<usize>,
    used: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, seed: Option<&[usize]>, fixed: Vec<Option<usize>>) -> Self {
        let n = g.vertex_count();
        let mut reserved = vec![false; n];
        for t in fixed.iter().flatten() {
            reserved[*t] = true;
        }
        Search {
            g,
            colors: refine_colors(g, seed),
            fixed,
            reserved,
            image: vec![usize::MAX; n],
            used: vec![false; n],
        }
    }

    fn consistent(&self, v: usize, t: usize) -> bool {
        if self.colors[v] != self.colors[t] || self.used[t] {
            return false;
        }
        (0..v).all(|w| self.g.has_edge(v, w) == self.g.has_edge(t, self.image[w]))
    }

    /// Visits complete maps in lexicographic order until `visit` returns false.
    fn run(&mut self, visit: &mut dyn FnMut(&[usize]) -> bool) {
        self.step(0, visit);
    }

    fn step(&mut self, v: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let n = self.g.vertex_count();
        if v == n {
            return visit(&self.image);
        }
        let candidates: Vec<usize> = match self.fixed[v] {
            Some(t) => vec![t],
            None => (0..n).filter(|&t| !self.reserved[t]).collect(),
        };
        for t in candidates {
            if !self.consistent(v, t) {
                continue;
            }
            self.image[v] = t;
            self.used[t] = true;
            let go_on = self.step(v + 1, visit);
            self.used[t] = false;
            if !go_on {
                return false;
            }
        }
        true
    }
}

fn enumerate(g: &Graph, seed: Option<&[usize]>, limit: Option<usize>) -> AutSet {
    let mut perms = Vec::new();
    let mut complete = true;
    let mut search = Search::new(g, seed, vec![None; g.vertex_count()]);
    search.run(&mut |img| {
        perms.push(Perm(img.to_vec()));
        if limit.is_some_and(|l| perms.len() >= l) {
            complete = false;
            return false;
        }
        true
    });
    AutSet { perms, complete }
}

/// All automorphisms of `g` (at most `limit` of them), for graphs within the default cap.
pub fn automorphisms(g: &Graph, limit: Option<usize>) -> Result<AutSet, AutError> {
    automorphisms_capped(g, limit, DEFAULT_VERTEX_CAP)
}

pub fn automorphisms_capped(g: &Graph, limit: Option<usize>, cap: usize) -> Result<AutSet, AutError> {
    if g.vertex_count() > cap {
        return Err(AutError::TooLarge { n: g.vertex_count(), cap });
    }
    Ok(enumerate(g, None, limit))
}

/// Automorphisms mapping every class of `classes` (a label per vertex) onto itself.
pub fn automorphisms_preserving(
    g: &Graph,
    classes: &[usize],
    limit: Option<usize>,
    cap: usize,
) -> Result<AutSet, AutError> {
    if g.vertex_count() > cap {
        return Err(AutError::TooLarge { n: g.vertex_count(), cap });
    }
    assert_eq!(classes.len(), g.vertex_count(), "one class label per vertex");
    Ok(enumerate(g, Some(classes), limit))
}

pub fn is_rigid(g: &Graph) -> Result<bool, AutError> {
    Ok(automorphisms(g, Some(2))?.order() == 1)
}

/// Induced-subgraph embedding of `source` into `target`.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Graph,
    target: Graph,
    map: Vec<usize>,
}

impl Embedding {
    pub fn new(source: Graph, target: Graph, map: Vec<usize>) -> Result<Self, AutError> {
        if map.len() != source.vertex_count() {
            return Err(AutError::InvalidEmbedding(format!(
                "map has {} entries for {} source vertices",
                map.len(),
                source.vertex_count()
            )));
        }
        let mut seen = vec![false; target.vertex_count()];
        for &t in &map {
            if t >= target.vertex_count() || seen[t] {
                return Err(AutError::InvalidEmbedding(format!("image {t} out of range or repeated")));
            }
            seen[t] = true;
        }
        for a in 0..map.len() {
            for b in a + 1..map.len() {
                if source.has_edge(a, b) != target.has_edge(map[a], map[b]) {
                    return Err(AutError::InvalidEmbedding(format!(
                        "pair ({a}, {b}) is not preserved as an induced pair"
                    )));
                }
            }
        }
        Ok(Embedding { source, target, map })
    }

    /// Inclusion of the first `source.vertex_count()` vertices of `target`.
    pub fn prefix_inclusion(source: Graph, target: Graph) -> Result<Self, AutError> {
        let map = (0..source.vertex_count()).collect();
        Embedding::new(source, target, map)
    }

    pub fn source(&self) -> &Graph {
        &self.source
    }

    pub fn target(&self) -> &Graph {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }
}

/// Least `beta ∈ Aut(target)` with `beta ∘ e = e ∘ alpha`, if any.
pub fn extension_square(e: &Embedding, alpha: &Perm) -> Result<Option<Perm>, AutError> {
    if alpha.len() != e.source.vertex_count() || !alpha.is_automorphism_of(&e.source) {
        return Err(AutError::NotAutomorphism(alpha.to_string()));
    }
    let mut fixed = vec![None; e.target.vertex_count()];
    for (s, &t) in e.map.iter().enumerate() {
        fixed[t] = Some(e.map[alpha.apply(s)]);
    }
    let mut found = None;
    let mut search = Search::new(&e.target, None, fixed);
    search.run(&mut |img| {
        found = Some(Perm(img.to_vec()));
        false
    });
    Ok(found)
}

/// The automorphisms of the source that extend across `e`.
pub fn ge_group(e: &Embedding) -> Result<AutSet, AutError> {
    if e.target.vertex_count() > DEFAULT_VERTEX_CAP {
        return Err(AutError::TooLarge { n: e.target.vertex_count(), cap: DEFAULT_VERTEX_CAP });
    }
    let aut = automorphisms(&e.source, None)?;
    let mut perms = Vec::new();
    for a in aut.perms {
        if extension_square(e, &a)?.is_some() {
            perms.push(a);
        }
    }
    Ok(AutSet { perms, complete: true })
}
