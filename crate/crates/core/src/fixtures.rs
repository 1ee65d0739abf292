//! A catalog of graphs with known embedding schemes and face counts,
//! grounding the test suites: planar cycles and K4, toroidal K5 and K7,
//! projective-plane K5 and K6, the one-negative-edge triangle whose two face
//! tracers disagree, and trees for the tree certification mode.

use std::collections::{BTreeMap, BTreeSet};

use once_cell::sync::Lazy;

use crate::arcs::next_permutation;
use crate::embedding::{trace_faces_doubled, trace_faces_phi, EmbeddingScheme};
use crate::graph::{Edge, Graph, VertexId};
use crate::oracle::{min_genus_nonorientable, min_genus_orientable, OracleBudget};

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub graph: Graph,
    /// Absent for tree-mode fixtures, which carry no embedding.
    pub scheme: Option<EmbeddingScheme>,
    pub phi_face_count: usize,
    pub doubled_face_count: usize,
    /// Genus the signed-successor face count yields; the proving target for
    /// cellular fixtures.
    pub euler_genus_phi: u64,
    /// Genus of the embedded surface (doubled traversal).
    pub euler_genus_doubled: u64,
    /// Genus the completeness suite certifies this fixture at.
    pub target_eg: u64,
    pub tree_mode: bool,
}

fn id(v: u64) -> VertexId {
    VertexId::new(v).unwrap()
}

fn cellular(name: &'static str, graph: Graph, scheme: EmbeddingScheme) -> Fixture {
    let phi = trace_faces_phi(&graph, &scheme).expect("fixture scheme is valid");
    let doubled = trace_faces_doubled(&graph, &scheme).expect("fixture scheme is valid");
    let raw = |f: usize| (2 + graph.m() - graph.n() - f) as u64;
    let euler_genus_phi = raw(phi.face_count);
    Fixture {
        name,
        phi_face_count: phi.face_count,
        doubled_face_count: doubled.face_count,
        euler_genus_phi,
        euler_genus_doubled: raw(doubled.face_count),
        target_eg: euler_genus_phi,
        graph,
        scheme: Some(scheme),
        tree_mode: false,
    }
}

fn tree(name: &'static str, graph: Graph) -> Fixture {
    Fixture {
        name,
        graph,
        scheme: None,
        phi_face_count: 0,
        doubled_face_count: 0,
        euler_genus_phi: 0,
        euler_genus_doubled: 0,
        target_eg: 1,
        tree_mode: true,
    }
}

fn ascending(g: &Graph) -> EmbeddingScheme {
    EmbeddingScheme::orientable(
        g.vertex_ids()
            .iter()
            .map(|&v| (v, g.neighbors(v).collect()))
            .collect(),
    )
}

/// Toroidal K7: rotations are a fixed offset sequence mod 7, searched over
/// the cyclic patterns until the face count hits the 14 triangles.
fn k7_torus() -> (Graph, EmbeddingScheme) {
    let g = Graph::complete(7);
    let mut rest: [u64; 5] = [2, 3, 4, 5, 6];
    loop {
        let offsets: Vec<u64> = std::iter::once(1).chain(rest.iter().copied()).collect();
        let rotations: BTreeMap<VertexId, Vec<VertexId>> = (0..7u64)
            .map(|r| {
                let order = offsets.iter().map(|&o| id((r + o) % 7 + 1)).collect();
                (id(r + 1), order)
            })
            .collect();
        let s = EmbeddingScheme::orientable(rotations);
        let faces = trace_faces_phi(&g, &s)
            .expect("cyclic scheme is valid")
            .face_count;
        if faces == 14 {
            return (g, s);
        }
        assert!(
            next_permutation(&mut rest),
            "no cyclic rotation pattern of K7 reaches 14 faces"
        );
    }
}

/// Projective-plane K6 as the antipodal quotient of the icosahedron.
///
/// The icosahedron is the orientation double cover: classes are {north,
/// south} and the five {upper_k, lower_(k+3)} pairs, each represented by its
/// upper-ring vertex. Rotations are the representatives' rotations in the
/// global orientation; an edge is negative exactly when its representatives
/// are not adjacent upstairs (the lift crosses to the antipodal sheet).
/// Pentagon-distance-two pairs are the crossing ones, so the five diagonals
/// of the 5-cycle on {2..6} carry the negative signs.
fn k6_projective() -> (Graph, EmbeddingScheme) {
    let g = Graph::complete(6);
    let cls = |k: i64| id((k.rem_euclid(5)) as u64 + 2);
    let mut rotations: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    rotations.insert(id(1), (2..=6).map(id).collect());
    for k in 0..5i64 {
        rotations.insert(
            cls(k),
            vec![id(1), cls(k - 1), cls(k + 2), cls(k + 3), cls(k + 1)],
        );
    }
    let negatives: BTreeSet<Edge> = (0..5i64).map(|k| Edge::new(cls(k), cls(k + 2))).collect();
    (g, EmbeddingScheme::with_signs(rotations, negatives))
}

fn negative_triangle() -> (Graph, EmbeddingScheme) {
    let g = Graph::cycle(3);
    let rotations = g
        .vertex_ids()
        .iter()
        .map(|&v| (v, g.neighbors(v).collect()))
        .collect();
    let s = EmbeddingScheme::with_signs(rotations, BTreeSet::from([Edge::new(id(1), id(3))]));
    (g, s)
}

static CATALOG: Lazy<Vec<Fixture>> = Lazy::new(|| {
    let budget = OracleBudget::default();

    let c4 = Graph::cycle(4);
    let c6 = Graph::cycle(6);
    let c4s = ascending(&c4);
    let c6s = ascending(&c6);

    let k4 = Graph::complete(4);
    let k4s = min_genus_orientable(&k4, &budget)
        .expect("K4 within budget")
        .witness;

    let k5 = Graph::complete(5);
    let k5_torus = min_genus_orientable(&k5, &budget)
        .expect("K5 within budget")
        .witness;
    let k5_projective = min_genus_nonorientable(&k5, &budget)
        .expect("K5 within budget")
        .witness;

    let (k7, k7s) = k7_torus();
    let (k6, k6s) = k6_projective();
    let (c3, c3s) = negative_triangle();

    vec![
        cellular("c4_planar", c4, c4s),
        cellular("c6_planar", c6, c6s),
        cellular("k4_planar", k4, k4s),
        cellular("k5_torus", k5.clone(), k5_torus),
        cellular("k7_torus", k7, k7s),
        cellular("k5_projective", k5, k5_projective),
        cellular("k6_projective", k6, k6s),
        cellular("negative_triangle", c3, c3s),
        tree("tree_path4", Graph::path(4)),
        tree("tree_star5", Graph::star(5)),
    ]
});

/// The fixture catalog; built once per process.
pub fn fixtures() -> &'static [Fixture] {
    &CATALOG
}

pub fn fixture(name: &str) -> &'static Fixture {
    fixtures()
        .iter()
        .find(|f| f.name == name)
        .unwrap_or_else(|| panic!("no fixture named {name}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{is_orientable_scheme, validate_scheme};

    /// The explicit icosahedron the K6 fixture quotients: upper vertex k is
    /// adjacent to lower vertices k and k+1, rotations in one global
    /// orientation. Tracing it must give the 20 triangles of the sphere.
    #[test]
    fn icosahedron_double_cover_is_a_sphere() {
        // ids: 1 = north, 2..=6 = upper_0..4, 7..=11 = lower_0..4, 12 = south
        let up = |k: i64| (k.rem_euclid(5)) as u64 + 2;
        let lo = |k: i64| (k.rem_euclid(5)) as u64 + 7;
        let mut edges = Vec::new();
        for k in 0..5i64 {
            edges.push((1, up(k)));
            edges.push((up(k), up(k + 1)));
            edges.push((up(k), lo(k)));
            edges.push((up(k), lo(k + 1)));
            edges.push((lo(k), lo(k + 1)));
            edges.push((12, lo(k)));
        }
        let g = Graph::from_edges(1..=12, edges).unwrap();
        let mut rotations: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        rotations.insert(id(1), (0..5).map(|k| id(up(k))).collect());
        rotations.insert(id(12), (0..5).map(|k| id(lo(-k))).collect());
        for k in 0..5i64 {
            rotations.insert(
                id(up(k)),
                vec![
                    id(1),
                    id(up(k - 1)),
                    id(lo(k)),
                    id(lo(k + 1)),
                    id(up(k + 1)),
                ],
            );
            rotations.insert(
                id(lo(k)),
                vec![
                    id(up(k)),
                    id(up(k - 1)),
                    id(lo(k - 1)),
                    id(12),
                    id(lo(k + 1)),
                ],
            );
        }
        let s = EmbeddingScheme::orientable(rotations);
        validate_scheme(&g, &s).unwrap();
        let fs = trace_faces_phi(&g, &s).unwrap();
        assert_eq!(fs.face_count, 20, "icosahedron must triangulate the sphere");
    }

    #[test]
    fn catalog_values_hold() {
        for fx in fixtures() {
            if fx.tree_mode {
                assert!(fx.graph.is_tree());
                continue;
            }
            let s = fx.scheme.as_ref().unwrap();
            validate_scheme(&fx.graph, s).unwrap();
            let phi = trace_faces_phi(&fx.graph, s).unwrap();
            let doubled = trace_faces_doubled(&fx.graph, s).unwrap();
            assert_eq!(phi.face_count, fx.phi_face_count, "{}", fx.name);
            assert_eq!(doubled.face_count, fx.doubled_face_count, "{}", fx.name);
        }
    }

    #[test]
    fn pinned_face_counts() {
        assert_eq!(fixture("c4_planar").doubled_face_count, 2);
        assert_eq!(fixture("c6_planar").doubled_face_count, 2);
        assert_eq!(fixture("c6_planar").euler_genus_doubled, 0);
        assert_eq!(fixture("k4_planar").doubled_face_count, 4);
        assert_eq!(fixture("k4_planar").euler_genus_doubled, 0);
        assert_eq!(fixture("k5_torus").euler_genus_doubled, 2);
        assert_eq!(fixture("k7_torus").doubled_face_count, 14);
        assert_eq!(fixture("k7_torus").euler_genus_doubled, 2);
        assert_eq!(fixture("k5_projective").doubled_face_count, 6);
        assert_eq!(fixture("k5_projective").euler_genus_doubled, 1);
        assert_eq!(fixture("k6_projective").doubled_face_count, 10);
        assert_eq!(fixture("k6_projective").euler_genus_doubled, 1);
        assert_eq!(fixture("negative_triangle").phi_face_count, 2);
        assert_eq!(fixture("negative_triangle").doubled_face_count, 1);
    }

    #[test]
    fn nonorientable_fixtures_are_nonorientable() {
        for name in ["k5_projective", "k6_projective", "negative_triangle"] {
            let fx = fixture(name);
            let s = fx.scheme.as_ref().unwrap();
            assert!(!s.orientable_mode());
            assert!(!is_orientable_scheme(&fx.graph, s).unwrap(), "{name}");
        }
    }
}
