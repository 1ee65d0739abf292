//! The honest prover: rotation indices, face roots and face indices, the
//! spanning-tree counters, and their assembly into per-vertex and per-edge
//! certificates. Also the degeneracy-based packing that moves every edge
//! certificate onto one endpoint, and the text bundle format.
//!
//! `prove` always runs the verifier over its own output before returning:
//! with mixed signs the signed successor can be non-injective, and
//! construct-then-check is the only completeness contract that survives
//! that subtlety.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::embedding::{
    find_odd_negative_cycle, trace_faces_phi, validate_scheme, EmbeddingScheme, FaceStructure,
    HalfEdge, SchemeError, Sign,
};
use crate::graph::{bfs_tree, degeneracy_order, Edge, Graph, GraphError, RootedTree, VertexId};
use crate::verifier::{self, Rule, VerifierParams};

/// Which certification mode a vertex certificate belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CertMode {
    OrientableCellular,
    NonorientableCellular,
    Tree,
}

impl std::fmt::Display for CertMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CertMode::OrientableCellular => "orientable",
            CertMode::NonorientableCellular => "nonorientable",
            CertMode::Tree => "tree",
        })
    }
}

/// Everything the prover stores at one vertex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VertexCertificate {
    pub own_id: VertexId,
    pub mode: CertMode,
    pub root_id: VertexId,
    pub tree_depth: u64,
    /// Absent exactly at the root.
    pub parent_id: Option<VertexId>,
    pub total_n: u64,
    /// Vertices in the subtree rooted here.
    pub nu: u64,
    pub total_2m: u64,
    /// Doubled subtree degree sum, so the arithmetic stays integral.
    pub mu2: u64,
    /// Total face count; absent in tree mode.
    pub total_f: Option<u64>,
    /// Faces pointing into the subtree rooted here; absent in tree mode.
    pub phi_count: Option<u64>,
    /// Parity of negative tree edges up to the root; non-orientable mode only.
    pub eta: Option<u8>,
    /// Other endpoint of the special negative non-tree edge; root only,
    /// non-orientable mode.
    pub special_edge_neighbor: Option<VertexId>,
}

/// Everything the prover stores at one edge.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EdgeCertificate {
    pub endpoint_ids: (VertexId, VertexId),
    /// Index of v in u's rotation, numbered from u's least-id neighbor.
    pub u_index_of_v: u64,
    pub v_index_of_u: u64,
    /// Root half-edge of the face bounding (u -> v), and its face index.
    pub face_root_u: HalfEdge,
    pub f_index_u: u64,
    pub face_root_v: HalfEdge,
    pub f_index_v: u64,
    /// Fixed +1 in orientable mode; absent only in adversarial data.
    pub sign: Option<Sign>,
}

impl EdgeCertificate {
    pub fn edge(&self) -> Edge {
        Edge::new(self.endpoint_ids.0, self.endpoint_ids.1)
    }

    /// Index of `x`'s opposite endpoint in `x`'s rotation, if `x` matches
    /// one of the endpoint ids.
    pub fn index_at(&self, x: VertexId) -> Option<u64> {
        if x == self.endpoint_ids.0 {
            Some(self.u_index_of_v)
        } else if x == self.endpoint_ids.1 {
            Some(self.v_index_of_u)
        } else {
            None
        }
    }

    /// Face root and face index of the half-edge leaving `x`.
    pub fn face_at(&self, x: VertexId) -> Option<(HalfEdge, u64)> {
        if x == self.endpoint_ids.0 {
            Some((self.face_root_u, self.f_index_u))
        } else if x == self.endpoint_ids.1 {
            Some((self.face_root_v, self.f_index_v))
        } else {
            None
        }
    }
}

/// A full certificate assignment, logical or packed. In packed form every
/// edge certificate additionally lives in exactly one endpoint's store.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CertificateAssignment {
    pub vertex_certs: BTreeMap<VertexId, VertexCertificate>,
    pub edge_certs: BTreeMap<Edge, EdgeCertificate>,
    pub packing: Option<BTreeMap<VertexId, Vec<EdgeCertificate>>>,
}

impl CertificateAssignment {
    pub fn mode(&self) -> Option<CertMode> {
        self.vertex_certs.values().next().map(|c| c.mode)
    }

    pub fn is_packed(&self) -> bool {
        self.packing.is_some()
    }
}

#[derive(Debug, Error)]
pub enum ProveError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("scheme has {phi_genus} > {target} Euler genus by the face-count inequality")]
    GenusTooLarge { phi_genus: u64, target: u64 },
    #[error("non-orientable mode requires an odd negative cycle, but the scheme is orientable")]
    OrientableSchemeInNonorientableMode,
    #[error("face {face} admits no root placement with non-negative face indices")]
    InfeasibleFaceIndices { face: usize },
    #[error("input graph is not a tree (m = {m}, n = {n})")]
    NotATree { n: usize, m: usize },
    #[error("prover self-check failed at vertex {vertex}: {rule} ({detail})")]
    SelfCheckFailed {
        vertex: VertexId,
        rule: Rule,
        detail: String,
    },
}

/// Numbers each vertex's rotation 0..d-1 starting from its least-id
/// neighbor; returns neighbor -> index per vertex.
pub fn assign_rotation_indices(
    g: &Graph,
    s: &EmbeddingScheme,
) -> Result<BTreeMap<VertexId, BTreeMap<VertexId, u64>>, ProveError> {
    validate_scheme(g, s)?;
    let mut out = BTreeMap::new();
    for &v in g.vertex_ids() {
        let rot = s.rotation(v).expect("validated");
        let mut indices = BTreeMap::new();
        if !rot.is_empty() {
            let start = rot
                .iter()
                .enumerate()
                .min_by_key(|(_, &u)| u)
                .map(|(i, _)| i)
                .unwrap();
            for i in 0..rot.len() {
                indices.insert(rot[(start + i) % rot.len()], i as u64);
            }
        }
        out.insert(v, indices);
    }
    Ok(out)
}

/// Face root and face index for every half-edge, straight from the traced
/// face structure. Fails if some face had no feasible root placement.
pub fn assign_face_certificates(
    g: &Graph,
    s: &EmbeddingScheme,
    fs: &FaceStructure,
) -> Result<BTreeMap<HalfEdge, (HalfEdge, u64)>, ProveError> {
    let _ = (g, s);
    if let Some(&face) = fs.infeasible_faces().first() {
        return Err(ProveError::InfeasibleFaceIndices { face });
    }
    let mut out = BTreeMap::new();
    for h in fs.half_edges() {
        let f = fs.face_of(h).expect("half-edge belongs to a face");
        out.insert(h, (fs.root_of_face(f), fs.f_index(h).expect("indexed")));
    }
    Ok(out)
}

/// The subtree counters collected along a rooted spanning tree.
pub struct TreeCounters {
    pub nu: BTreeMap<VertexId, u64>,
    pub mu2: BTreeMap<VertexId, u64>,
    /// Faces pointing into the subtree; present when a face structure is.
    pub phi: Option<BTreeMap<VertexId, u64>>,
    /// Negative-edge parity to the root; present when a signed scheme is.
    pub eta: Option<BTreeMap<VertexId, u8>>,
}

/// Bottom-up aggregation: nu counts subtree vertices, mu2 sums subtree
/// degrees, phi counts the face roots pointing into the subtree, and eta
/// chains the parity of negative tree edges down from the root.
pub fn build_tree_counters(
    g: &Graph,
    t: &RootedTree,
    fs: Option<&FaceStructure>,
    s: Option<&EmbeddingScheme>,
) -> TreeCounters {
    let mut nu: BTreeMap<VertexId, u64> = BTreeMap::new();
    let mut mu2: BTreeMap<VertexId, u64> = BTreeMap::new();
    let mut phi: BTreeMap<VertexId, u64> = BTreeMap::new();

    let own_roots = |v: VertexId| -> u64 {
        let Some(fs) = fs else { return 0 };
        g.neighbors(v)
            .filter(|&u| fs.is_root(HalfEdge::new(v, u)))
            .count() as u64
    };

    for v in t.bottom_up() {
        let children = t.children(v);
        nu.insert(
            v,
            1 + children.iter().map(|c| nu[c]).sum::<u64>(),
        );
        mu2.insert(
            v,
            g.degree(v) as u64 + children.iter().map(|c| mu2[c]).sum::<u64>(),
        );
        phi.insert(
            v,
            own_roots(v) + children.iter().map(|c| phi[c]).sum::<u64>(),
        );
    }

    let eta = s.map(|scheme| {
        let mut eta: BTreeMap<VertexId, u8> = BTreeMap::from([(t.root, 0)]);
        let mut order: Vec<VertexId> = t.depth.keys().copied().collect();
        order.sort_by_key(|v| t.depth[v]);
        for v in order {
            if v == t.root {
                continue;
            }
            let p = t.parent[&v];
            let flip = scheme.sign(Edge::new(v, p)).is_negative() as u8;
            let val = eta[&p] ^ flip;
            eta.insert(v, val);
        }
        eta
    });

    TreeCounters {
        nu,
        mu2,
        phi: fs.map(|_| phi),
        eta,
    }
}

fn assemble(
    g: &Graph,
    s: &EmbeddingScheme,
    fs: &FaceStructure,
    tree: &RootedTree,
    mode: CertMode,
    special_edge: Option<Edge>,
) -> Result<CertificateAssignment, ProveError> {
    let indices = assign_rotation_indices(g, s)?;
    let faces = assign_face_certificates(g, s, fs)?;
    let counters = build_tree_counters(
        g,
        tree,
        Some(fs),
        (mode == CertMode::NonorientableCellular).then_some(s),
    );

    let total_f = fs.face_count as u64;
    let mut edge_certs = BTreeMap::new();
    for e in g.edges() {
        let (u, v) = e.endpoints();
        let (root_u, fi_u) = faces[&HalfEdge::new(u, v)];
        let (root_v, fi_v) = faces[&HalfEdge::new(v, u)];
        edge_certs.insert(
            e,
            EdgeCertificate {
                endpoint_ids: (u, v),
                u_index_of_v: indices[&u][&v],
                v_index_of_u: indices[&v][&u],
                face_root_u: root_u,
                f_index_u: fi_u,
                face_root_v: root_v,
                f_index_v: fi_v,
                sign: Some(s.sign(e)),
            },
        );
    }

    let mut vertex_certs = BTreeMap::new();
    for &v in g.vertex_ids() {
        vertex_certs.insert(
            v,
            VertexCertificate {
                own_id: v,
                mode,
                root_id: tree.root,
                tree_depth: tree.depth_of(v),
                parent_id: tree.parent_of(v),
                total_n: g.n() as u64,
                nu: counters.nu[&v],
                total_2m: 2 * g.m() as u64,
                mu2: counters.mu2[&v],
                total_f: Some(total_f),
                phi_count: counters.phi.as_ref().map(|p| p[&v]),
                eta: counters.eta.as_ref().map(|e| e[&v]),
                special_edge_neighbor: special_edge.and_then(|e| {
                    (v == tree.root).then(|| e.other(tree.root).expect("root endpoint"))
                }),
            },
        );
    }

    Ok(CertificateAssignment {
        vertex_certs,
        edge_certs,
        packing: None,
    })
}

fn self_check(
    g: &Graph,
    a: &CertificateAssignment,
    params: &VerifierParams,
) -> Result<(), ProveError> {
    for view in verifier::build_local_views(g, a) {
        let verdict = verifier::verify(params, &view);
        if !verdict.accepted {
            return Err(ProveError::SelfCheckFailed {
                vertex: view.own_id,
                rule: verdict.rule.expect("rejection carries a rule"),
                detail: verdict.detail,
            });
        }
    }
    Ok(())
}

/// Builds the full certificate assignment for a cellular embedding claim of
/// Euler genus at most `target_eg`. The mode follows the scheme: orientable
/// schemes use an arbitrary BFS root, non-orientable schemes take the root,
/// special edge, and tree from the odd-negative-cycle witness.
pub fn prove(
    g: &Graph,
    s: &EmbeddingScheme,
    target_eg: u64,
) -> Result<CertificateAssignment, ProveError> {
    validate_scheme(g, s)?;
    let fs = trace_faces_phi(g, s)?;
    let phi_genus = crate::embedding::euler_genus(g, fs.face_count)?;
    if phi_genus > target_eg {
        return Err(ProveError::GenusTooLarge {
            phi_genus,
            target: target_eg,
        });
    }

    let assignment = if s.orientable_mode() {
        let root = g.vertex_ids()[0];
        let tree = bfs_tree(g, root)?;
        assemble(g, s, &fs, &tree, CertMode::OrientableCellular, None)?
    } else {
        let witness = find_odd_negative_cycle(g, s)?
            .ok_or(ProveError::OrientableSchemeInNonorientableMode)?;
        assemble(
            g,
            s,
            &fs,
            &witness.tree,
            CertMode::NonorientableCellular,
            Some(witness.special_edge),
        )?
    };

    let params = VerifierParams {
        target_eg,
        orientable: s.orientable_mode(),
        packed: false,
    };
    self_check(g, &assignment, &params)?;
    Ok(assignment)
}

/// Tree-mode certificates: the spanning tree is the graph itself, rooted at
/// the least identifier, carrying only the subtree counters.
pub fn prove_tree(g: &Graph) -> Result<CertificateAssignment, ProveError> {
    if !g.is_tree() {
        return Err(ProveError::NotATree { n: g.n(), m: g.m() });
    }
    let root = g.vertex_ids()[0];
    let tree = bfs_tree(g, root)?;
    let counters = build_tree_counters(g, &tree, None, None);

    let mut vertex_certs = BTreeMap::new();
    for &v in g.vertex_ids() {
        vertex_certs.insert(
            v,
            VertexCertificate {
                own_id: v,
                mode: CertMode::Tree,
                root_id: root,
                tree_depth: tree.depth_of(v),
                parent_id: tree.parent_of(v),
                total_n: g.n() as u64,
                nu: counters.nu[&v],
                total_2m: 2 * g.m() as u64,
                mu2: counters.mu2[&v],
                total_f: None,
                phi_count: None,
                eta: None,
                special_edge_neighbor: None,
            },
        );
    }
    let assignment = CertificateAssignment {
        vertex_certs,
        edge_certs: BTreeMap::new(),
        packing: None,
    };
    let params = VerifierParams {
        target_eg: 0,
        orientable: false,
        packed: false,
    };
    self_check(g, &assignment, &params)?;
    Ok(assignment)
}

/// Moves each edge certificate into the store of the endpoint that comes
/// later in the degeneracy order, so no vertex stores more than the
/// degeneracy many certificates.
pub fn pack(g: &Graph, a: &CertificateAssignment) -> CertificateAssignment {
    let (order, _k) = degeneracy_order(g);
    let pos: BTreeMap<VertexId, usize> =
        order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut stores: BTreeMap<VertexId, Vec<EdgeCertificate>> =
        g.vertex_ids().iter().map(|&v| (v, Vec::new())).collect();
    for (e, cert) in &a.edge_certs {
        let (u, v) = e.endpoints();
        let owner = if pos[&u] > pos[&v] { u } else { v };
        stores.get_mut(&owner).expect("owner is a vertex").push(cert.clone());
    }
    for list in stores.values_mut() {
        list.sort_by_key(|c| c.edge());
    }
    CertificateAssignment {
        vertex_certs: a.vertex_certs.clone(),
        edge_certs: a.edge_certs.clone(),
        packing: Some(stores),
    }
}

/// Rebuilds the logical assignment from a packed one; `None` if some edge
/// certificate is missing from both stores or two copies disagree.
pub fn unpack(a: &CertificateAssignment) -> Option<CertificateAssignment> {
    let stores = a.packing.as_ref()?;
    let mut edge_certs: BTreeMap<Edge, EdgeCertificate> = BTreeMap::new();
    for cert in stores.values().flatten() {
        let e = cert.edge();
        match edge_certs.get(&e) {
            None => {
                edge_certs.insert(e, cert.clone());
            }
            Some(existing) if existing == cert => {}
            Some(_) => return None,
        }
    }
    Some(CertificateAssignment {
        vertex_certs: a.vertex_certs.clone(),
        edge_certs,
        packing: None,
    })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BundleError {
    #[error("bundle line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// A parsed certificate bundle file.
#[derive(Clone, Debug)]
pub struct Bundle {
    pub assignment: CertificateAssignment,
    pub mode: CertMode,
    pub target_eg: u64,
    pub n: usize,
    pub m: usize,
}

fn opt_id(v: Option<VertexId>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn opt_num(v: Option<u64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

/// Renders the bundle text format; packed assignments additionally get one
/// `store` line per vertex.
pub fn write_bundle(a: &CertificateAssignment, target_eg: u64) -> String {
    let mode = a.mode().unwrap_or(CertMode::Tree);
    let n = a.vertex_certs.len();
    let m = a.edge_certs.len();
    let mut out = format!("certs {mode} {target_eg} {n} {m}\n");
    for (v, c) in &a.vertex_certs {
        out.push_str(&format!(
            "vc {v} root={} depth={} parent={} n={} nu={} m2={} mu2={} F={} phi={} eta={} er={}\n",
            c.root_id,
            c.tree_depth,
            opt_id(c.parent_id),
            c.total_n,
            c.nu,
            c.total_2m,
            c.mu2,
            opt_num(c.total_f),
            opt_num(c.phi_count),
            opt_num(c.eta.map(u64::from)),
            opt_id(c.special_edge_neighbor),
        ));
    }
    for c in a.edge_certs.values() {
        out.push_str(&format!(
            "ec {} {} iu={} iv={} ru={} fu={} rv={} fv={} sign={}\n",
            c.endpoint_ids.0,
            c.endpoint_ids.1,
            c.u_index_of_v,
            c.v_index_of_u,
            c.face_root_u,
            c.f_index_u,
            c.face_root_v,
            c.f_index_v,
            c.sign.map_or_else(|| ".".to_string(), |s| s.to_string()),
        ));
    }
    if let Some(stores) = &a.packing {
        for (v, list) in stores {
            out.push_str(&format!("store {v}:"));
            for cert in list {
                let (a, b) = cert.edge().endpoints();
                out.push_str(&format!(" {a},{b}"));
            }
            out.push('\n');
        }
    }
    out
}

pub fn parse_bundle(text: &str) -> Result<Bundle, BundleError> {
    let err = |line: usize, reason: &str| BundleError::Parse {
        line,
        reason: reason.to_string(),
    };
    let parse_vid = |tok: &str, line: usize| -> Result<VertexId, BundleError> {
        tok.parse::<u64>()
            .ok()
            .and_then(|x| VertexId::new(x).ok())
            .ok_or_else(|| err(line, &format!("bad identifier `{tok}`")))
    };
    let parse_opt_vid = |tok: &str, line: usize| -> Result<Option<VertexId>, BundleError> {
        if tok == "-" {
            Ok(None)
        } else {
            parse_vid(tok, line).map(Some)
        }
    };
    let parse_u64 = |tok: &str, line: usize| -> Result<u64, BundleError> {
        tok.parse::<u64>()
            .map_err(|_| err(line, &format!("bad number `{tok}`")))
    };
    let parse_opt_u64 = |tok: &str, line: usize| -> Result<Option<u64>, BundleError> {
        if tok == "-" {
            Ok(None)
        } else {
            parse_u64(tok, line).map(Some)
        }
    };
    let parse_half = |tok: &str, line: usize| -> Result<HalfEdge, BundleError> {
        let (a, b) = tok
            .split_once(',')
            .ok_or_else(|| err(line, "expected `id,id`"))?;
        Ok(HalfEdge::new(parse_vid(a, line)?, parse_vid(b, line)?))
    };
    // fields appear as `key=value` tokens after the positional ids
    fn field<'t>(
        tokens: &[(&'t str, &'t str)],
        key: &str,
        line: usize,
    ) -> Result<&'t str, BundleError> {
        tokens
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| BundleError::Parse {
                line,
                reason: format!("missing field {key}"),
            })
    }

    let mut header: Option<(CertMode, u64, usize, usize)> = None;
    let mut vertex_certs: BTreeMap<VertexId, VertexCertificate> = BTreeMap::new();
    let mut edge_certs: BTreeMap<Edge, EdgeCertificate> = BTreeMap::new();
    let mut stores: BTreeMap<VertexId, Vec<EdgeCertificate>> = BTreeMap::new();
    let mut packed = false;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("certs ") {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.len() != 4 {
                return Err(err(lineno, "header needs `certs <mode> <g> <n> <m>`"));
            }
            let mode = match toks[0] {
                "orientable" => CertMode::OrientableCellular,
                "nonorientable" => CertMode::NonorientableCellular,
                "tree" => CertMode::Tree,
                other => return Err(err(lineno, &format!("unknown mode `{other}`"))),
            };
            header = Some((
                mode,
                parse_u64(toks[1], lineno)?,
                parse_u64(toks[2], lineno)? as usize,
                parse_u64(toks[3], lineno)? as usize,
            ));
        } else if let Some(rest) = line.strip_prefix("vc ") {
            let (mode, ..) = header.ok_or_else(|| err(lineno, "vc before header"))?;
            let mut toks = rest.split_whitespace();
            let own = parse_vid(toks.next().ok_or_else(|| err(lineno, "missing id"))?, lineno)?;
            let fields: Vec<(&str, &str)> = toks
                .map(|t| t.split_once('=').ok_or_else(|| err(lineno, "expected key=value")))
                .collect::<Result<_, _>>()?;
            let cert = VertexCertificate {
                own_id: own,
                mode,
                root_id: parse_vid(field(&fields, "root", lineno)?, lineno)?,
                tree_depth: parse_u64(field(&fields, "depth", lineno)?, lineno)?,
                parent_id: parse_opt_vid(field(&fields, "parent", lineno)?, lineno)?,
                total_n: parse_u64(field(&fields, "n", lineno)?, lineno)?,
                nu: parse_u64(field(&fields, "nu", lineno)?, lineno)?,
                total_2m: parse_u64(field(&fields, "m2", lineno)?, lineno)?,
                mu2: parse_u64(field(&fields, "mu2", lineno)?, lineno)?,
                total_f: parse_opt_u64(field(&fields, "F", lineno)?, lineno)?,
                phi_count: parse_opt_u64(field(&fields, "phi", lineno)?, lineno)?,
                eta: parse_opt_u64(field(&fields, "eta", lineno)?, lineno)?.map(|x| x as u8),
                special_edge_neighbor: parse_opt_vid(field(&fields, "er", lineno)?, lineno)?,
            };
            if vertex_certs.insert(own, cert).is_some() {
                return Err(err(lineno, "duplicate vertex certificate"));
            }
        } else if let Some(rest) = line.strip_prefix("ec ") {
            let mut toks = rest.split_whitespace();
            let u = parse_vid(toks.next().ok_or_else(|| err(lineno, "missing id"))?, lineno)?;
            let v = parse_vid(toks.next().ok_or_else(|| err(lineno, "missing id"))?, lineno)?;
            if u == v {
                return Err(err(lineno, "loop edge"));
            }
            let fields: Vec<(&str, &str)> = toks
                .map(|t| t.split_once('=').ok_or_else(|| err(lineno, "expected key=value")))
                .collect::<Result<_, _>>()?;
            let sign = match field(&fields, "sign", lineno)? {
                "+" => Some(Sign::Plus),
                "-" => Some(Sign::Minus),
                "." => None,
                other => return Err(err(lineno, &format!("bad sign `{other}`"))),
            };
            let cert = EdgeCertificate {
                endpoint_ids: (u, v),
                u_index_of_v: parse_u64(field(&fields, "iu", lineno)?, lineno)?,
                v_index_of_u: parse_u64(field(&fields, "iv", lineno)?, lineno)?,
                face_root_u: parse_half(field(&fields, "ru", lineno)?, lineno)?,
                f_index_u: parse_u64(field(&fields, "fu", lineno)?, lineno)?,
                face_root_v: parse_half(field(&fields, "rv", lineno)?, lineno)?,
                f_index_v: parse_u64(field(&fields, "fv", lineno)?, lineno)?,
                sign,
            };
            if edge_certs.insert(Edge::new(u, v), cert).is_some() {
                return Err(err(lineno, "duplicate edge certificate"));
            }
        } else if let Some(rest) = line.strip_prefix("store ") {
            packed = true;
            let (v, tail) = rest
                .split_once(':')
                .ok_or_else(|| err(lineno, "missing `:`"))?;
            let owner = parse_vid(v.trim(), lineno)?;
            let mut list = Vec::new();
            for tok in tail.split_whitespace() {
                let h = parse_half(tok, lineno)?;
                let cert = edge_certs
                    .get(&h.edge())
                    .ok_or_else(|| err(lineno, &format!("store references unknown edge {tok}")))?;
                list.push(cert.clone());
            }
            if stores.insert(owner, list).is_some() {
                return Err(err(lineno, "duplicate store line"));
            }
        } else {
            return Err(err(lineno, "unknown directive"));
        }
    }

    let (mode, target_eg, n, m) = header.ok_or_else(|| err(0, "missing `certs` header"))?;
    Ok(Bundle {
        assignment: CertificateAssignment {
            vertex_certs,
            edge_certs,
            packing: packed.then_some(stores),
        },
        mode,
        target_eg,
        n,
        m,
    })
}
