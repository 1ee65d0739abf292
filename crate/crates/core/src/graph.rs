//! Simple connected undirected graphs with arbitrary positive integer
//! identifiers, plus the tree and ordering machinery the certification
//! protocol runs on: BFS spanning trees, rerooting, and degeneracy orders.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

/// A vertex identifier. Identifiers are arbitrary positive integers; the
/// library never assumes they form a contiguous range.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(u64);

impl VertexId {
    pub fn new(value: u64) -> Result<Self, GraphError> {
        if value == 0 {
            return Err(GraphError::ZeroId);
        }
        Ok(VertexId(value))
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// An undirected edge, stored with the smaller identifier first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge {
    lo: VertexId,
    hi: VertexId,
}

impl Edge {
    /// Normalizes the endpoint order. Panics on a loop; loops are rejected
    /// at parse/build time so they cannot reach this constructor.
    pub fn new(a: VertexId, b: VertexId) -> Self {
        assert!(a != b, "loop edge {a}-{b}");
        if a < b {
            Edge { lo: a, hi: b }
        } else {
            Edge { lo: b, hi: a }
        }
    }

    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.lo, self.hi)
    }

    pub fn other(self, v: VertexId) -> Option<VertexId> {
        if v == self.lo {
            Some(self.hi)
        } else if v == self.hi {
            Some(self.lo)
        } else {
            None
        }
    }

    pub fn touches(self, v: VertexId) -> bool {
        v == self.lo || v == self.hi
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("identifiers must be positive")]
    ZeroId,
    #[error("line {line}: malformed: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("duplicate vertex identifier {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error("loop edge at vertex {0}")]
    Loop(VertexId),
    #[error("edge endpoint {0} is not a declared vertex")]
    UnknownEndpoint(VertexId),
    #[error("graph is not connected")]
    Disconnected,
    #[error("declared {declared} {what}, found {found}")]
    CountMismatch {
        what: &'static str,
        declared: usize,
        found: usize,
    },
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("vertex {0} is not in the graph")]
    NoSuchVertex(VertexId),
}

/// A simple connected undirected graph. Immutable after construction;
/// neighbor iteration is always in ascending identifier order.
#[derive(Clone, Debug)]
pub struct Graph {
    ids: Vec<VertexId>,              // ascending
    index: HashMap<VertexId, usize>, // id -> position in `ids`
    adj: Vec<Vec<usize>>,            // ascending neighbor indices
    edges: Vec<(usize, usize)>,      // (lo, hi) index pairs, sorted
}

impl Graph {
    pub fn from_edges<V, E>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = u64>,
        E: IntoIterator<Item = (u64, u64)>,
    {
        let mut ids = Vec::new();
        for v in vertices {
            ids.push(VertexId::new(v)?);
        }
        if ids.is_empty() {
            return Err(GraphError::Empty);
        }
        ids.sort_unstable();
        for w in ids.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateVertex(w[0]));
            }
        }
        let index: HashMap<VertexId, usize> =
            ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();

        let mut adj = vec![Vec::new(); ids.len()];
        let mut edge_list = Vec::new();
        for (a, b) in edges {
            let a = VertexId::new(a)?;
            let b = VertexId::new(b)?;
            if a == b {
                return Err(GraphError::Loop(a));
            }
            let ia = *index.get(&a).ok_or(GraphError::UnknownEndpoint(a))?;
            let ib = *index.get(&b).ok_or(GraphError::UnknownEndpoint(b))?;
            let key = (ia.min(ib), ia.max(ib));
            edge_list.push(key);
        }
        edge_list.sort_unstable();
        for w in edge_list.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(Edge::new(ids[w[0].0], ids[w[0].1])));
            }
        }
        for &(a, b) in &edge_list {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }

        let g = Graph {
            ids,
            index,
            adj,
            edges: edge_list,
        };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    fn is_connected(&self) -> bool {
        let n = self.ids.len();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &u in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count == n
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn max_id(&self) -> VertexId {
        *self.ids.last().expect("graph is never empty")
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.index.contains_key(&v)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[self.index[&v]].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Neighbors of `v` in ascending identifier order.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj[self.index[&v]].iter().map(move |&i| self.ids[i])
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        match (self.index.get(&a), self.index.get(&b)) {
            (Some(&ia), Some(&ib)) => self.adj[ia].binary_search(&ib).is_ok(),
            _ => false,
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges
            .iter()
            .map(move |&(a, b)| Edge::new(self.ids[a], self.ids[b]))
    }

    pub fn is_tree(&self) -> bool {
        self.m() == self.n() - 1
    }

    pub(crate) fn index_of(&self, v: VertexId) -> usize {
        self.index[&v]
    }

    pub(crate) fn id_at(&self, i: usize) -> VertexId {
        self.ids[i]
    }

    pub(crate) fn adj_indices(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    /// Applies an identifier relabeling. Identifiers missing from the map
    /// are kept as-is; the result must still be a valid simple graph.
    pub fn relabel(&self, map: &BTreeMap<VertexId, VertexId>) -> Result<Graph, GraphError> {
        let f = |v: VertexId| map.get(&v).copied().unwrap_or(v).value();
        Graph::from_edges(
            self.ids.iter().map(|&v| f(v)),
            self.edges().map(|e| {
                let (a, b) = e.endpoints();
                (f(a), f(b))
            }),
        )
    }

    /// Renders the graph in the graph file format.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("graph {} {}\n", self.n(), self.m());
        for &v in &self.ids {
            out.push_str(&format!("v {v}\n"));
        }
        for e in self.edges() {
            let (a, b) = e.endpoints();
            out.push_str(&format!("e {a} {b}\n"));
        }
        out
    }

    // Common test/fixture graphs, with identifiers 1..=n.

    pub fn path(n: u64) -> Graph {
        Graph::from_edges(1..=n, (1..n).map(|i| (i, i + 1))).expect("valid path")
    }

    pub fn cycle(n: u64) -> Graph {
        assert!(n >= 3);
        Graph::from_edges(1..=n, (1..n).map(|i| (i, i + 1)).chain([(n, 1)])).expect("valid cycle")
    }

    pub fn complete(n: u64) -> Graph {
        let edges = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j)));
        Graph::from_edges(1..=n, edges).expect("valid complete graph")
    }

    /// Complete bipartite graph; the first class is 1..=a, the second a+1..=a+b.
    pub fn complete_bipartite(a: u64, b: u64) -> Graph {
        let edges = (1..=a).flat_map(move |i| (a + 1..=a + b).map(move |j| (i, j)));
        Graph::from_edges(1..=a + b, edges).expect("valid complete bipartite graph")
    }

    /// Star with center 1 and the given number of leaves.
    pub fn star(leaves: u64) -> Graph {
        Graph::from_edges(1..=leaves + 1, (2..=leaves + 1).map(|i| (1, i))).expect("valid star")
    }

    /// Removes one edge; fails if the result would be disconnected.
    pub fn without_edge(&self, e: Edge) -> Result<Graph, GraphError> {
        Graph::from_edges(
            self.ids.iter().map(|v| v.value()),
            self.edges().filter(|&x| x != e).map(|x| {
                let (a, b) = x.endpoints();
                (a.value(), b.value())
            }),
        )
    }
}

/// Parses the line-based graph file format:
/// `graph <n> <m>`, then `v <id>` and `e <id1> <id2>` lines.
/// Lines starting with `#` are comments.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut vertices: Vec<u64> = Vec::new();
    let mut edges: Vec<(u64, u64)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tok = line.split_whitespace();
        let kind = tok.next().unwrap();
        let malformed = |reason: &str| GraphError::Malformed {
            line: lineno,
            reason: reason.to_string(),
        };
        match kind {
            "graph" => {
                if header.is_some() {
                    return Err(malformed("duplicate header"));
                }
                let n = parse_num(tok.next(), lineno)? as usize;
                let m = parse_num(tok.next(), lineno)? as usize;
                if tok.next().is_some() {
                    return Err(malformed("trailing tokens"));
                }
                header = Some((n, m));
            }
            "v" => {
                if header.is_none() {
                    return Err(malformed("vertex line before header"));
                }
                vertices.push(parse_num(tok.next(), lineno)?);
                if tok.next().is_some() {
                    return Err(malformed("trailing tokens"));
                }
            }
            "e" => {
                if header.is_none() {
                    return Err(malformed("edge line before header"));
                }
                let a = parse_num(tok.next(), lineno)?;
                let b = parse_num(tok.next(), lineno)?;
                if tok.next().is_some() {
                    return Err(malformed("trailing tokens"));
                }
                edges.push((a, b));
            }
            _ => return Err(malformed("unknown directive")),
        }
    }

    let (n, m) = header.ok_or(GraphError::Malformed {
        line: 0,
        reason: "missing `graph <n> <m>` header".to_string(),
    })?;
    if vertices.len() != n {
        return Err(GraphError::CountMismatch {
            what: "vertices",
            declared: n,
            found: vertices.len(),
        });
    }
    if edges.len() != m {
        return Err(GraphError::CountMismatch {
            what: "edges",
            declared: m,
            found: edges.len(),
        });
    }
    Graph::from_edges(vertices, edges)
}

fn parse_num(tok: Option<&str>, line: usize) -> Result<u64, GraphError> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| GraphError::Malformed {
            line,
            reason: "expected a decimal integer".to_string(),
        })
}

/// Degeneracy ordering by iterated minimum-degree removal (ties broken by
/// least identifier). Returns the order and the degeneracy `k`: every vertex
/// has at most `k` neighbors earlier in the order.
pub fn degeneracy_order(g: &Graph) -> (Vec<VertexId>, usize) {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|i| g.adj_indices(i).len()).collect();
    let mut removed = vec![false; n];
    let mut removal = Vec::with_capacity(n);
    let mut k = 0;

    for _ in 0..n {
        let mut best: Option<usize> = None;
        for i in 0..n {
            if !removed[i] && best.is_none_or(|b| deg[i] < deg[b]) {
                best = Some(i);
            }
        }
        let v = best.expect("vertices remain");
        k = k.max(deg[v]);
        removed[v] = true;
        removal.push(v);
        for &u in g.adj_indices(v) {
            if !removed[u] {
                deg[u] -= 1;
            }
        }
    }

    removal.reverse();
    (removal.into_iter().map(|i| g.id_at(i)).collect(), k)
}

/// Smallest integer `k >= 5` with `k(k-5) >= 6g - 6`; pure integer search,
/// equal to the ceiling of `max(5, (5 + sqrt(1 + 24g)) / 2)`.
pub fn heawood_bound(g: u64) -> u64 {
    let mut k: u64 = 5;
    let need = 6i128 * g as i128 - 6;
    while (k as i128) * (k as i128 - 5) < need {
        k += 1;
    }
    k
}

/// A rooted spanning tree, stored as parent pointers and depths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    pub root: VertexId,
    pub parent: BTreeMap<VertexId, VertexId>,
    pub depth: BTreeMap<VertexId, u64>,
}

impl RootedTree {
    pub fn parent_of(&self, v: VertexId) -> Option<VertexId> {
        self.parent.get(&v).copied()
    }

    pub fn depth_of(&self, v: VertexId) -> u64 {
        self.depth[&v]
    }

    pub fn children(&self, v: VertexId) -> Vec<VertexId> {
        self.parent
            .iter()
            .filter(|&(_, &p)| p == v)
            .map(|(&c, _)| c)
            .collect()
    }

    /// Tree edges as normalized pairs.
    pub fn edge_set(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = self
            .parent
            .iter()
            .map(|(&c, &p)| Edge::new(c, p))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        let (a, b) = e.endpoints();
        self.parent.get(&a) == Some(&b) || self.parent.get(&b) == Some(&a)
    }

    /// Vertices on the path from `v` up to the root, inclusive.
    pub fn path_to_root(&self, v: VertexId) -> Vec<VertexId> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent_of(cur) {
            path.push(p);
            cur = p;
        }
        path
    }

    /// Vertices ordered by decreasing depth; children always precede parents.
    pub fn bottom_up(&self) -> Vec<VertexId> {
        let mut vs: Vec<VertexId> = self.depth.keys().copied().collect();
        vs.sort_by_key(|v| std::cmp::Reverse(self.depth[v]));
        vs
    }
}

/// Breadth-first spanning tree from `root`, visiting neighbors in ascending
/// identifier order, so the result is deterministic.
pub fn bfs_tree(g: &Graph, root: VertexId) -> Result<RootedTree, GraphError> {
    if !g.contains(root) {
        return Err(GraphError::NoSuchVertex(root));
    }
    let mut parent = BTreeMap::new();
    let mut depth = BTreeMap::from([(root, 0u64)]);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let d = depth[&v];
        for u in g.neighbors(v) {
            if !depth.contains_key(&u) {
                depth.insert(u, d + 1);
                parent.insert(u, v);
                queue.push_back(u);
            }
        }
    }
    Ok(RootedTree {
        root,
        parent,
        depth,
    })
}

/// Rebuilds the same tree (same undirected edge set) rooted at `new_root`.
pub fn reroot(t: &RootedTree, g: &Graph, new_root: VertexId) -> Result<RootedTree, GraphError> {
    if !g.contains(new_root) {
        return Err(GraphError::NoSuchVertex(new_root));
    }
    let mut tree_adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for (&c, &p) in &t.parent {
        tree_adj.entry(c).or_default().push(p);
        tree_adj.entry(p).or_default().push(c);
    }
    tree_adj.entry(t.root).or_default();

    let mut parent = BTreeMap::new();
    let mut depth = BTreeMap::from([(new_root, 0u64)]);
    let mut queue = VecDeque::from([new_root]);
    while let Some(v) = queue.pop_front() {
        let d = depth[&v];
        let mut nbrs = tree_adj[&v].clone();
        nbrs.sort_unstable();
        for u in nbrs {
            if !depth.contains_key(&u) {
                depth.insert(u, d + 1);
                parent.insert(u, v);
                queue.push_back(u);
            }
        }
    }
    Ok(RootedTree {
        root: new_root,
        parent,
        depth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(v: u64) -> VertexId {
        VertexId::new(v).unwrap()
    }

    #[test]
    fn parse_p3() {
        let g = parse_graph("# a path\ngraph 3 2\nv 1\nv 2\nv 3\ne 1 2\ne 2 3\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 2);
        assert!(g.has_edge(id(1), id(2)));
        assert!(g.has_edge(id(2), id(3)));
        assert!(!g.has_edge(id(1), id(3)));
    }

    #[test]
    fn parse_loop_rejected() {
        let err = parse_graph("graph 2 2\nv 4\nv 5\ne 4 5\ne 5 5\n").unwrap_err();
        assert_eq!(err, GraphError::Loop(id(5)));
    }

    #[test]
    fn parse_disconnected_rejected() {
        let err = parse_graph("graph 4 2\nv 1\nv 2\nv 3\nv 4\ne 1 2\ne 3 4\n").unwrap_err();
        assert_eq!(err, GraphError::Disconnected);
    }

    #[test]
    fn parse_duplicate_edge_rejected() {
        let err = parse_graph("graph 2 2\nv 1\nv 2\ne 1 2\ne 2 1\n").unwrap_err();
        assert!(matches!(err, GraphError::DuplicateEdge(_)));
    }

    #[test]
    fn parse_duplicate_vertex_rejected() {
        let err = parse_graph("graph 2 1\nv 7\nv 7\ne 7 7\n").unwrap_err();
        assert!(matches!(
            err,
            GraphError::DuplicateVertex(_) | GraphError::Loop(_)
        ));
    }

    #[test]
    fn parse_unknown_endpoint_rejected() {
        let err = parse_graph("graph 2 1\nv 1\nv 2\ne 1 9\n").unwrap_err();
        assert_eq!(err, GraphError::UnknownEndpoint(id(9)));
    }

    #[test]
    fn parse_count_mismatch_rejected() {
        let err = parse_graph("graph 3 1\nv 1\nv 2\ne 1 2\n").unwrap_err();
        assert!(matches!(err, GraphError::CountMismatch { .. }));
    }

    #[test]
    fn file_round_trip() {
        let g = Graph::complete(5);
        let g2 = parse_graph(&g.to_file_string()).unwrap();
        assert_eq!(g.to_file_string(), g2.to_file_string());
    }

    #[test]
    fn degeneracy_examples() {
        assert_eq!(degeneracy_order(&Graph::cycle(8)).1, 2);
        assert_eq!(degeneracy_order(&Graph::complete(5)).1, 4);
        assert_eq!(degeneracy_order(&Graph::star(6)).1, 1);
    }

    #[test]
    fn degeneracy_order_witnesses_k() {
        for g in [
            Graph::cycle(8),
            Graph::complete(5),
            Graph::star(6),
            Graph::complete_bipartite(3, 3),
        ] {
            let (order, k) = degeneracy_order(&g);
            assert_eq!(order.len(), g.n());
            let pos: HashMap<VertexId, usize> =
                order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            for &v in &order {
                let earlier = g.neighbors(v).filter(|u| pos[u] < pos[&v]).count();
                assert!(earlier <= k, "vertex {v} has {earlier} earlier neighbors");
            }
        }
    }

    #[test]
    fn heawood_values() {
        assert_eq!(heawood_bound(0), 5);
        assert_eq!(heawood_bound(1), 5);
        assert_eq!(heawood_bound(2), 6);
        // monotone, and matching the closed-form ceiling
        let mut prev = 0;
        for g in 0..200u64 {
            let k = heawood_bound(g);
            assert!(k >= prev);
            prev = k;
            let closed = (5.0 + (1.0 + 24.0 * g as f64).sqrt()) / 2.0;
            assert_eq!(k, closed.max(5.0).ceil() as u64);
        }
    }

    #[test]
    fn bfs_path_from_end() {
        let g = Graph::path(3);
        let t = bfs_tree(&g, id(1)).unwrap();
        assert_eq!(t.parent_of(id(2)), Some(id(1)));
        assert_eq!(t.parent_of(id(3)), Some(id(2)));
        assert_eq!(t.depth_of(id(1)), 0);
        assert_eq!(t.depth_of(id(3)), 2);
    }

    #[test]
    fn bfs_k5_is_star() {
        let g = Graph::complete(5);
        let t = bfs_tree(&g, id(1)).unwrap();
        for v in 2..=5 {
            assert_eq!(t.parent_of(id(v)), Some(id(1)));
            assert_eq!(t.depth_of(id(v)), 1);
        }
    }

    #[test]
    fn bfs_c4_depths() {
        let g = Graph::cycle(4);
        let t = bfs_tree(&g, id(1)).unwrap();
        assert_eq!(t.depth_of(id(3)), 2);
    }

    #[test]
    fn reroot_path() {
        let g = Graph::path(3);
        let t = bfs_tree(&g, id(1)).unwrap();
        let r = reroot(&t, &g, id(3)).unwrap();
        assert_eq!(r.parent_of(id(2)), Some(id(3)));
        assert_eq!(r.parent_of(id(1)), Some(id(2)));
        assert_eq!(r.edge_set(), t.edge_set());
    }

    #[test]
    fn reroot_identity() {
        let g = Graph::cycle(5);
        let t = bfs_tree(&g, id(2)).unwrap();
        let r = reroot(&t, &g, id(2)).unwrap();
        assert_eq!(t, r);
    }

    #[test]
    fn reroot_star_at_leaf() {
        let g = Graph::star(4);
        let t = bfs_tree(&g, id(1)).unwrap();
        let r = reroot(&t, &g, id(3)).unwrap();
        assert_eq!(r.parent_of(id(1)), Some(id(3)));
        assert_eq!(r.depth_of(id(5)), 2);
    }
}
