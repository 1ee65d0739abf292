//! Index-based half-edge tables used by the face tracers and the genus
//! oracle. Everything here works on dense `u32` indices so that orbit
//! counting over hundreds of thousands of candidate rotation systems stays
//! cheap; the id-level API in `embedding` wraps these tables.

use crate::graph::Graph;

/// A graph re-indexed to 0..n with sorted adjacency slots and edge ids.
pub(crate) struct IndexedGraph {
    pub n: usize,
    pub m: usize,
    /// adj[v] = neighbor vertex indices, ascending
    pub adj: Vec<Vec<u32>>,
    /// edge id per adjacency slot, parallel to `adj`
    pub edge_at: Vec<Vec<u32>>,
    /// edge id -> endpoint indices (lo, hi)
    pub edges: Vec<(u32, u32)>,
}

impl IndexedGraph {
    pub fn new(g: &Graph) -> Self {
        let n = g.n();
        let mut adj: Vec<Vec<u32>> = Vec::with_capacity(n);
        for i in 0..n {
            adj.push(g.adj_indices(i).iter().map(|&x| x as u32).collect());
        }
        let edges: Vec<(u32, u32)> = g
            .edges()
            .map(|e| {
                let (a, b) = e.endpoints();
                (g.index_of(a) as u32, g.index_of(b) as u32)
            })
            .collect();
        let mut edge_at: Vec<Vec<u32>> = adj.iter().map(|l| vec![0; l.len()]).collect();
        for (eid, &(a, b)) in edges.iter().enumerate() {
            let sa = adj[a as usize].binary_search(&b).expect("edge endpoint");
            let sb = adj[b as usize].binary_search(&a).expect("edge endpoint");
            edge_at[a as usize][sa] = eid as u32;
            edge_at[b as usize][sb] = eid as u32;
        }
        IndexedGraph {
            n,
            m: edges.len(),
            adj,
            edge_at,
            edges,
        }
    }

    /// The identity rotation: each vertex's neighbors in adjacency (ascending
    /// id) order, expressed as slot permutations.
    pub fn ascending_rotation(&self) -> Vec<Vec<u32>> {
        self.adj
            .iter()
            .map(|l| (0..l.len() as u32).collect())
            .collect()
    }
}

/// Arcs (directed half-edges) laid out per tail vertex in rotation order:
/// arc `offset[v] + k` is the k-th half-edge of `v`'s rotation.
pub(crate) struct Arcs {
    pub offset: Vec<u32>, // len n+1
    pub tail: Vec<u32>,
    pub head: Vec<u32>,
    pub rev: Vec<u32>,
    pub edge_id: Vec<u32>,
}

impl Arcs {
    /// `rot[v]` is a permutation of `v`'s adjacency slots.
    pub fn build(ig: &IndexedGraph, rot: &[Vec<u32>]) -> Self {
        let total: usize = ig.adj.iter().map(Vec::len).sum();
        let mut offset = Vec::with_capacity(ig.n + 1);
        let mut tail = Vec::with_capacity(total);
        let mut head = Vec::with_capacity(total);
        let mut edge_id = Vec::with_capacity(total);
        let mut acc = 0u32;
        // two arc slots per edge, filled in scan order
        let mut edge_arcs: Vec<[u32; 2]> = vec![[u32::MAX; 2]; ig.m];
        for v in 0..ig.n {
            offset.push(acc);
            for &slot in &rot[v] {
                let a = tail.len() as u32;
                let e = ig.edge_at[v][slot as usize];
                tail.push(v as u32);
                head.push(ig.adj[v][slot as usize]);
                edge_id.push(e);
                let pair = &mut edge_arcs[e as usize];
                if pair[0] == u32::MAX {
                    pair[0] = a;
                } else {
                    pair[1] = a;
                }
                acc += 1;
            }
        }
        offset.push(acc);
        let mut rev = vec![0u32; total];
        for pair in edge_arcs {
            rev[pair[0] as usize] = pair[1];
            rev[pair[1] as usize] = pair[0];
        }
        Arcs {
            offset,
            tail,
            head,
            rev,
            edge_id,
        }
    }

    pub fn count(&self) -> usize {
        self.tail.len()
    }

    #[inline]
    pub fn degree_of_tail(&self, a: u32) -> u32 {
        let v = self.tail[a as usize] as usize;
        self.offset[v + 1] - self.offset[v]
    }

    /// Next arc around the same tail vertex, in rotation order.
    #[inline]
    pub fn next_at_tail(&self, a: u32) -> u32 {
        let v = self.tail[a as usize] as usize;
        let base = self.offset[v];
        let d = self.offset[v + 1] - base;
        let k = a - base;
        base + if k + 1 == d { 0 } else { k + 1 }
    }

    #[inline]
    pub fn prev_at_tail(&self, a: u32) -> u32 {
        let v = self.tail[a as usize] as usize;
        let base = self.offset[v];
        let d = self.offset[v + 1] - base;
        let k = a - base;
        base + if k == 0 { d - 1 } else { k - 1 }
    }

    /// The signed face successor: sigma^(lambda) after the edge involution.
    #[inline]
    pub fn phi(&self, a: u32, neg: &[bool]) -> u32 {
        let b = self.rev[a as usize];
        if neg[self.edge_id[a as usize] as usize] {
            self.prev_at_tail(b)
        } else {
            self.next_at_tail(b)
        }
    }

    /// One step of the direction-tracking traversal on states `2*arc + dir`
    /// (dir bit 1 means reversed). The direction flips on negative edges and
    /// selects which way to turn around the new tail.
    #[inline]
    pub fn doubled_step(&self, state: u32, neg: &[bool]) -> u32 {
        let a = state >> 1;
        let d = state & 1;
        let nd = d ^ (neg[self.edge_id[a as usize] as usize] as u32);
        let b = self.rev[a as usize];
        let next = if nd == 0 {
            self.next_at_tail(b)
        } else {
            self.prev_at_tail(b)
        };
        (next << 1) | nd
    }
}

/// Advances `a` to its lexicographic successor; returns false (leaving `a`
/// sorted ascending again) when `a` was the last permutation.
pub(crate) fn next_permutation<T: Ord + Copy>(a: &mut [T]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        a.reverse();
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Orbit count of the all-positive face successor (a permutation).
/// `visited` is scratch space of length >= arc count, reset on entry.
pub(crate) fn count_sigma_alpha_orbits(arcs: &Arcs, visited: &mut [bool]) -> usize {
    let total = arcs.count();
    visited[..total].fill(false);
    let mut orbits = 0;
    for start in 0..total as u32 {
        if visited[start as usize] {
            continue;
        }
        orbits += 1;
        let mut a = start;
        loop {
            visited[a as usize] = true;
            let b = arcs.rev[a as usize];
            a = arcs.next_at_tail(b);
            if a == start {
                break;
            }
        }
    }
    orbits
}

/// Orbit count of the doubled traversal over all `4m` states. The orbit
/// count of a valid embedding scheme is always even (each facial walk is
/// traced once per direction); this is enforced, not rounded.
pub(crate) fn count_doubled_orbits(arcs: &Arcs, neg: &[bool], visited: &mut [bool]) -> usize {
    let states = arcs.count() * 2;
    visited[..states].fill(false);
    let mut orbits = 0;
    for start in 0..states as u32 {
        if visited[start as usize] {
            continue;
        }
        orbits += 1;
        let mut s = start;
        loop {
            visited[s as usize] = true;
            s = arcs.doubled_step(s, neg);
            if s == start {
                break;
            }
        }
    }
    assert!(
        orbits % 2 == 0,
        "doubled traversal produced an odd orbit count ({orbits}); \
         the scheme cannot be a valid embedding scheme"
    );
    orbits
}

/// Doubled face count: orbits paired by traversal direction.
pub(crate) fn doubled_face_count(arcs: &Arcs, neg: &[bool], visited: &mut [bool]) -> usize {
    count_doubled_orbits(arcs, neg, visited) / 2
}
