//! Finite simple graphs, bounded extension-property checks and one-round
//! one-point-extension saturation.

use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    UnknownVertex { vertex: usize, n: usize },
    #[error("witness query sides overlap at vertex {0}")]
    OverlappingQuery(usize),
    #[error("graph text line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Finite simple graph on vertex ids `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<bool>>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![vec![false; n]; n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|row| row.iter().filter(|&&b| b).count()).sum::<usize>() / 2
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex { vertex: v, n: self.vertex_count() })
        }
    }

    /// Appends an isolated vertex and returns its id.
    pub fn add_vertex(&mut self) -> usize {
        for row in &mut self.adj {
            row.push(false);
        }
        let n = self.adj.len();
        self.adj.push(vec![false; n + 1]);
        n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.adj[u][v] = true;
        self.adj[v][u] = true;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        self.adj[u][v] = false;
        self.adj[v][u] = false;
        Ok(())
    }

    /// Adjacency test; out-of-range ids are simply non-adjacent.
    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u).and_then(|row| row.get(v)).copied().unwrap_or(false)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&b| b).count()
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertex_count();
        let mut out = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if self.adj[u][v] {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Induced subgraph on `verts`, relabelled `0..verts.len()` in the given order.
    pub fn induced(&self, verts: &[usize]) -> Graph {
        let mut g = Graph::empty(verts.len());
        for (i, &a) in verts.iter().enumerate() {
            for (j, &b) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    g.adj[i][j] = true;
                    g.adj[j][i] = true;
                }
            }
        }
        g
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.vertex_count()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.vertex_count();
        let mut g = Graph::empty(off + other.vertex_count());
        for (u, v) in self.edges() {
            g.adj[u][v] = true;
            g.adj[v][u] = true;
        }
        for (u, v) in other.edges() {
            g.adj[u + off][v + off] = true;
            g.adj[v + off][u + off] = true;
        }
        g
    }

    /// Serializes to the `n m` / `u v` text format.
    pub fn to_text(&self) -> String {
        let edges = self.edges();
        let mut s = format!("{} {}\n", self.vertex_count(), edges.len());
        for (u, v) in edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or(GraphError::Parse { line: 1, msg: "missing header".into() })?;
        let nums = parse_pair(header, hl + 1)?;
        let (n, m) = nums;
        let mut g = Graph::empty(n);
        let mut count = 0;
        for (i, line) in lines {
            if line.trim_start().starts_with("layers") {
                break;
            }
            let (u, v) = parse_pair(line, i + 1)?;
            if u >= v {
                return Err(GraphError::Parse { line: i + 1, msg: format!("expected u < v, got {u} {v}") });
            }
            g.add_edge(u, v).map_err(|e| GraphError::Parse { line: i + 1, msg: e.to_string() })?;
            count += 1;
            if count == m {
                break;
            }
        }
        if count != m {
            return Err(GraphError::Parse { line: 1, msg: format!("header announces {m} edges, found {count}") });
        }
        Ok(g)
    }
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize), GraphError> {
    let err = |msg: String| GraphError::Parse { line: lineno, msg };
    let mut it = line.split_whitespace();
    let a = it.next().ok_or_else(|| err("expected two integers".into()))?;
    let b = it.next().ok_or_else(|| err("expected two integers".into()))?;
    if it.next().is_some() {
        return Err(err("trailing tokens".into()));
    }
    let a = a.parse().map_err(|_| err(format!("bad integer {a:?}")))?;
    let b = b.parse().map_err(|_| err(format!("bad integer {b:?}")))?;
    Ok((a, b))
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.vertex_count(), self.edges())
    }
}

/// A request for a vertex adjacent to all of `x` and to none of `y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WitnessQuery {
    x: BTreeSet<usize>,
    y: BTreeSet<usize>,
}

impl WitnessQuery {
    pub fn new(
        x: impl IntoIterator<Item = usize>,
        y: impl IntoIterator<Item = usize>,
    ) -> Result<Self, GraphError> {
        let x: BTreeSet<usize> = x.into_iter().collect();
        let y: BTreeSet<usize> = y.into_iter().collect();
        if let Some(&v) = x.intersection(&y).next() {
            return Err(GraphError::OverlappingQuery(v));
        }
        Ok(WitnessQuery { x, y })
    }

    pub fn x(&self) -> &BTreeSet<usize> {
        &self.x
    }

    pub fn y(&self) -> &BTreeSet<usize> {
        &self.y
    }

    pub fn size(&self) -> usize {
        self.x.len() + self.y.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.x.iter().chain(self.y.iter()).copied()
    }

    /// Whether `v` satisfies the query in `g`.
    pub fn is_witnessed_by(&self, g: &Graph, v: usize) -> bool {
        !self.x.contains(&v)
            && !self.y.contains(&v)
            && self.x.iter().all(|&a| g.has_edge(v, a))
            && self.y.iter().all(|&b| !g.has_edge(v, b))
    }
}

/// All disjoint pairs `(X, Y)` over `universe` with `|X| + |Y| == size`,
/// ordered by the sorted union and then by side assignment with `X` first.
pub fn set_pairs_of_size(universe: &[usize], size: usize) -> Vec<WitnessQuery> {
    let mut sorted = universe.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut out = Vec::new();
    for_each_combination(sorted.len(), size, |idx| {
        let union: Vec<usize> = idx.iter().map(|&i| sorted[i]).collect();
        for mask in 0u64..(1u64 << size) {
            let mut x = BTreeSet::new();
            let mut y = BTreeSet::new();
            for (pos, &v) in union.iter().enumerate() {
                // most significant bit belongs to the first element
                if mask >> (size - 1 - pos) & 1 == 0 {
                    x.insert(v);
                } else {
                    y.insert(v);
                }
            }
            out.push(WitnessQuery { x, y });
        }
    });
    out
}

/// Calls `f` with every `k`-subset of `0..n` (as sorted indices) in lexicographic order.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Vertices `0..n`; for `i < j` the edge `{i, j}` is present iff bit `i` of `j` is set.
pub fn binary_rado(n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for j in 0..n {
        for i in 0..j.min(usize::BITS as usize) {
            if j >> i & 1 == 1 {
                g.adj[i][j] = true;
                g.adj[j][i] = true;
            }
        }
    }
    g
}

fn check_query(g: &Graph, q: &WitnessQuery) -> Result<(), GraphError> {
    q.vertices().try_for_each(|v| g.check_vertex(v))
}

/// Least vertex adjacent to all of `q.x()` and none of `q.y()`, outside both.
pub fn find_witness(g: &Graph, q: &WitnessQuery) -> Result<Option<usize>, GraphError> {
    check_query(g, q)?;
    Ok((0..g.vertex_count()).find(|&v| q.is_witnessed_by(g, v)))
}

/// Every query with `|X| + |Y| <= k` over the vertices of `g` that has no witness.
pub fn extension_defects(g: &Graph, k: usize) -> Vec<WitnessQuery> {
    let verts: Vec<usize> = (0..g.vertex_count()).collect();
    let mut out = Vec::new();
    for size in 0..=k.min(verts.len()) {
        for q in set_pairs_of_size(&verts, size) {
            if !(0..g.vertex_count()).any(|v| q.is_witnessed_by(g, v)) {
                out.push(q);
            }
        }
    }
    out
}

/// One saturation round: a fresh vertex per defect of the input graph, adjacent
/// to exactly the defect's `X` and to no other fresh vertex.
pub fn saturate(g: &Graph, k: usize) -> Graph {
    let defects = extension_defects(g, k);
    let mut out = g.clone();
    for q in defects {
        let v = out.add_vertex();
        for &a in q.x() {
            out.adj[v][a] = true;
            out.adj[a][v] = true;
        }
    }
    out
}

/// Number of neighbours of `v` inside `set`.
pub fn degree_within(g: &Graph, v: usize, set: &BTreeSet<usize>) -> Result<usize, GraphError> {
    g.check_vertex(v)?;
    Ok(set.iter().filter(|&&s| g.has_edge(v, s)).count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn binary_rado_small_cases() {
        let g1 = binary_rado(1);
        assert_eq!((g1.vertex_count(), g1.edge_count()), (1, 0));
        assert_eq!(binary_rado(4).edges(), vec![(0, 1), (0, 3), (1, 2), (1, 3)]);
        let g8 = binary_rado(8);
        assert!(g8.has_edge(5, 0));
        assert!(!g8.has_edge(5, 1));
        assert_eq!(binary_rado(0).vertex_count(), 0);
    }

    #[test]
    fn witness_examples() {
        let g8 = binary_rado(8);
        let q = WitnessQuery::new([0], [1]).unwrap();
        assert_eq!(find_witness(&g8, &q).unwrap(), Some(5));
        assert_eq!(find_witness(&binary_rado(2), &q).unwrap(), None);
        let empty = WitnessQuery::new([], []).unwrap();
        assert_eq!(find_witness(&g8, &empty).unwrap(), Some(0));
    }

    #[test]
    fn overlapping_query_rejected() {
        assert_eq!(WitnessQuery::new([1, 2], [2]), Err(GraphError::OverlappingQuery(2)));
    }

    #[test]
    fn witness_rejects_unknown_vertex() {
        let q = WitnessQuery::new([9], []).unwrap();
        assert!(matches!(find_witness(&binary_rado(3), &q), Err(GraphError::UnknownVertex { vertex: 9, .. })));
    }

    #[test]
    fn defects_of_single_vertex() {
        let d = extension_defects(&binary_rado(1), 1);
        assert_eq!(d, vec![WitnessQuery::new([0], []).unwrap(), WitnessQuery::new([], [0]).unwrap()]);
        assert!(extension_defects(&binary_rado(5), 0).is_empty());
        // the empty graph cannot even witness (∅, ∅)
        assert_eq!(extension_defects(&Graph::empty(0), 0).len(), 1);
    }

    #[test]
    fn saturate_single_vertex() {
        let s = saturate(&binary_rado(1), 1);
        assert_eq!(s.vertex_count(), 3);
        assert_eq!(s.edges(), vec![(0, 1)]);
        let g = binary_rado(6);
        assert_eq!(saturate(&g, 0), g);
    }

    #[test]
    fn degree_within_examples() {
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(degree_within(&path, 1, &set(&[0, 2])).unwrap(), 2);
        assert_eq!(degree_within(&path, 1, &set(&[])).unwrap(), 0);
        assert_eq!(degree_within(&binary_rado(4), 1, &set(&[0, 2, 3])).unwrap(), 3);
        assert!(degree_within(&path, 7, &set(&[0])).is_err());
    }

    #[test]
    fn set_pair_order_puts_x_side_first() {
        let qs = set_pairs_of_size(&[0, 1], 2);
        let shown: Vec<(Vec<usize>, Vec<usize>)> = qs
            .iter()
            .map(|q| (q.x().iter().copied().collect(), q.y().iter().copied().collect()))
            .collect();
        assert_eq!(
            shown,
            vec![(vec![0, 1], vec![]), (vec![0], vec![1]), (vec![1], vec![0]), (vec![], vec![0, 1])]
        );
    }

    #[test]
    fn combinations_enumerate_in_order() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |c| seen.push(c.to_vec()));
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut zero = 0;
        for_each_combination(3, 0, |_| zero += 1);
        assert_eq!(zero, 1);
        let mut none = 0;
        for_each_combination(2, 3, |_| none += 1);
        assert_eq!(none, 0);
    }

    #[test]
    fn text_format_is_exact() {
        let g = binary_rado(4);
        assert_eq!(g.to_text(), "4 4\n0 1\n0 3\n1 2\n1 3\n");
        assert_eq!(Graph::from_text(&g.to_text()).unwrap(), g);
        assert!(Graph::from_text("3 1\n2 1\n").is_err());
        assert!(Graph::from_text("3 2\n0 1\n").is_err());
    }
}
