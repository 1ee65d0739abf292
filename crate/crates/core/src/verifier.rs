//! The local verifier: a pure function from one vertex's one-round view to
//! accept/reject. The view carries exactly what one round of communication
//! delivers (own certificate, neighbor identifiers and certificates, and the
//! incident edge certificates, reconstructed from stores in packed mode);
//! the verifier never sees the graph.
//!
//! Sub-checks run in a stable order and the verdict reports the first
//! failure, so fuzz statistics are reproducible.

use std::collections::BTreeMap;

use crate::certificate::{CertMode, CertificateAssignment, EdgeCertificate, VertexCertificate};
use crate::embedding::{HalfEdge, Sign};
use crate::graph::{heawood_bound, Graph, VertexId};

/// Public parameters of the scheme: the class being certified fixes the
/// verifier, so the genus bound and orientability kind are not certificate
/// content.
#[derive(Clone, Copy, Debug)]
pub struct VerifierParams {
    pub target_eg: u64,
    pub orientable: bool,
    pub packed: bool,
}

/// Rejection rule tags, in evaluation order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Rule {
    MissingCert,
    PackOverflow,
    PackMissing,
    PackConflict,
    R1Rotation,
    R2FaceSuccession,
    R3Tree,
    R4Counters,
    R5Euler,
    R6Signs,
    R7TreeMode,
    R8Mode,
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Rule::MissingCert => "MISSING_CERT",
            Rule::PackOverflow => "PACK_OVERFLOW",
            Rule::PackMissing => "PACK_MISSING",
            Rule::PackConflict => "PACK_CONFLICT",
            Rule::R1Rotation => "R1_ROTATION",
            Rule::R2FaceSuccession => "R2_FACE_SUCCESSION",
            Rule::R3Tree => "R3_TREE",
            Rule::R4Counters => "R4_COUNTERS",
            Rule::R5Euler => "R5_EULER",
            Rule::R6Signs => "R6_SIGNS",
            Rule::R7TreeMode => "R7_TREE_MODE",
            Rule::R8Mode => "R8_MODE",
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RuleInfo {
    pub rule: Rule,
    pub description: &'static str,
}

/// Stable catalog of every rule the verifier can reject with.
pub fn enumerate_rules() -> Vec<RuleInfo> {
    vec![
        RuleInfo {
            rule: Rule::MissingCert,
            description: "a vertex in the view carries no certificate",
        },
        RuleInfo {
            rule: Rule::PackOverflow,
            description: "packed store exceeds the Heawood degeneracy bound for the target genus",
        },
        RuleInfo {
            rule: Rule::PackMissing,
            description: "no copy of an incident edge certificate in either endpoint store",
        },
        RuleInfo {
            rule: Rule::PackConflict,
            description: "two differing copies of one edge certificate across stores",
        },
        RuleInfo {
            rule: Rule::R1Rotation,
            description: "identifiers must match the view and the collected rotation indices \
                          must form a circular permutation of 0..d-1",
        },
        RuleInfo {
            rule: Rule::R2FaceSuccession,
            description: "consecutive half-edges of a face must agree on the face root, with \
                          face indices increasing by one except at the root",
        },
        RuleInfo {
            rule: Rule::R3Tree,
            description: "spanning tree certification: shared root identity, parent is a \
                          neighbor, depth increases by one",
        },
        RuleInfo {
            rule: Rule::R4Counters,
            description: "subtree counters: nu = 1 + children, mu2 = degree + children, \
                          phi = own face roots + children, totals agreed and met at the root",
        },
        RuleInfo {
            rule: Rule::R5Euler,
            description: "the Euler inequality 2 + m - n - F <= g, checked at every vertex",
        },
        RuleInfo {
            rule: Rule::R6Signs,
            description: "edge signs present, eta parity chain from the root, and a negative \
                          non-tree special edge closing an odd cycle at the root",
        },
        RuleInfo {
            rule: Rule::R7TreeMode,
            description: "tree mode: every incident edge joins parent or child, so the graph \
                          is its own spanning tree",
        },
        RuleInfo {
            rule: Rule::R8Mode,
            description: "mode coherence: neighbors share the mode, the mode fits the public \
                          parameters, and orientable targets forbid signs and eta",
        },
    ]
}

/// The accept/reject decision of one vertex, with the first failed rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub accepted: bool,
    pub rule: Option<Rule>,
    pub detail: String,
}

impl Verdict {
    fn accept() -> Self {
        Verdict {
            accepted: true,
            rule: None,
            detail: String::new(),
        }
    }

    fn reject(rule: Rule, detail: impl Into<String>) -> Self {
        Verdict {
            accepted: false,
            rule: Some(rule),
            detail: detail.into(),
        }
    }
}

/// One neighbor as seen in the one-round view.
#[derive(Clone, Debug)]
pub struct NeighborView {
    pub id: VertexId,
    pub cert: Option<VertexCertificate>,
    pub store: Vec<EdgeCertificate>,
}

/// Exactly what one vertex sees in one round.
#[derive(Clone, Debug)]
pub struct LocalView {
    pub own_id: VertexId,
    pub own_cert: Option<VertexCertificate>,
    pub own_store: Vec<EdgeCertificate>,
    /// Ascending by identifier.
    pub neighbors: Vec<NeighborView>,
    /// Logical-mode incident edge certificates, keyed by neighbor.
    pub incident_edge_certs: BTreeMap<VertexId, EdgeCertificate>,
}

/// Builds every vertex's one-round view from an assignment. This is the only
/// place the graph is consulted; `verify` itself works on views alone.
pub fn build_local_views(g: &Graph, a: &CertificateAssignment) -> Vec<LocalView> {
    let store_of = |v: VertexId| -> Vec<EdgeCertificate> {
        a.packing
            .as_ref()
            .and_then(|p| p.get(&v).cloned())
            .unwrap_or_default()
    };
    g.vertex_ids()
        .iter()
        .map(|&v| {
            let neighbors = g
                .neighbors(v)
                .map(|u| NeighborView {
                    id: u,
                    cert: a.vertex_certs.get(&u).cloned(),
                    store: store_of(u),
                })
                .collect();
            let incident_edge_certs = g
                .neighbors(v)
                .filter_map(|u| {
                    a.edge_certs
                        .get(&crate::graph::Edge::new(v, u))
                        .map(|c| (u, c.clone()))
                })
                .collect();
            LocalView {
                own_id: v,
                own_cert: a.vertex_certs.get(&v).cloned(),
                own_store: store_of(v),
                neighbors,
                incident_edge_certs,
            }
        })
        .collect()
}

/// Reconstructs the incident edge certificates from the packed stores:
/// exactly one authoritative copy per incident edge, identical duplicates
/// tolerated, and the own store bounded by the Heawood degeneracy bound.
pub fn unpack_local(
    view: &LocalView,
    bound: u64,
) -> Result<BTreeMap<VertexId, EdgeCertificate>, Verdict> {
    if view.own_store.len() as u64 > bound {
        return Err(Verdict::reject(
            Rule::PackOverflow,
            format!("store holds {} > {bound} certificates", view.own_store.len()),
        ));
    }
    let mut out = BTreeMap::new();
    for nb in &view.neighbors {
        let mut found: Option<&EdgeCertificate> = None;
        for cert in view.own_store.iter().chain(&nb.store) {
            let (a, b) = cert.endpoint_ids;
            if (a, b) != (view.own_id, nb.id) && (b, a) != (view.own_id, nb.id) {
                continue;
            }
            match found {
                None => found = Some(cert),
                Some(existing) if existing == cert => {}
                Some(_) => {
                    return Err(Verdict::reject(
                        Rule::PackConflict,
                        format!("conflicting copies for edge to {}", nb.id),
                    ));
                }
            }
        }
        match found {
            Some(cert) => {
                out.insert(nb.id, cert.clone());
            }
            None => {
                return Err(Verdict::reject(
                    Rule::PackMissing,
                    format!("no certificate for edge to {}", nb.id),
                ));
            }
        }
    }
    Ok(out)
}

struct Ctx<'v> {
    own: &'v VertexCertificate,
    view: &'v LocalView,
    nb_certs: Vec<&'v VertexCertificate>,
    edge_certs: BTreeMap<VertexId, EdgeCertificate>,
    /// rotation position -> neighbor id, filled by R1
    at_index: Vec<VertexId>,
}

fn check_r1(ctx: &mut Ctx) -> Result<(), Verdict> {
    let own_id = ctx.view.own_id;
    if ctx.own.own_id != own_id {
        return Err(Verdict::reject(
            Rule::R1Rotation,
            format!("certificate claims id {}, vertex is {own_id}", ctx.own.own_id),
        ));
    }
    for (nb, cert) in ctx.view.neighbors.iter().zip(&ctx.nb_certs) {
        if cert.own_id != nb.id {
            return Err(Verdict::reject(
                Rule::R1Rotation,
                format!("neighbor {} carries certificate of {}", nb.id, cert.own_id),
            ));
        }
    }
    let d = ctx.view.neighbors.len();
    let mut seen = vec![false; d];
    let mut at_index = vec![own_id; d];
    for nb in &ctx.view.neighbors {
        let Some(cert) = ctx.edge_certs.get(&nb.id) else {
            return Err(Verdict::reject(
                Rule::R1Rotation,
                format!("missing certificate for edge to {}", nb.id),
            ));
        };
        let (a, b) = cert.endpoint_ids;
        if (a, b) != (own_id, nb.id) && (b, a) != (own_id, nb.id) {
            return Err(Verdict::reject(
                Rule::R1Rotation,
                format!("edge certificate endpoints {a}-{b} do not match {own_id}-{}", nb.id),
            ));
        }
        let idx = cert.index_at(own_id).expect("endpoint checked");
        if idx >= d as u64 || seen[idx as usize] {
            return Err(Verdict::reject(
                Rule::R1Rotation,
                format!("rotation indices are not a permutation of 0..{d}"),
            ));
        }
        seen[idx as usize] = true;
        at_index[idx as usize] = nb.id;
    }
    ctx.at_index = at_index;
    Ok(())
}

fn check_r2(ctx: &Ctx, params: &VerifierParams) -> Result<(), Verdict> {
    let own_id = ctx.view.own_id;
    let d = ctx.at_index.len();
    for j in 0..d {
        let u = ctx.at_index[j];
        let cert_in = &ctx.edge_certs[&u];
        let lambda: i64 = if params.orientable {
            1
        } else {
            match cert_in.sign.unwrap_or(Sign::Plus) {
                Sign::Plus => 1,
                Sign::Minus => -1,
            }
        };
        let (root_in, fi_in) = cert_in.face_at(u).expect("endpoints checked in R1");
        let j2 = (j as i64 + lambda).rem_euclid(d as i64) as usize;
        let u2 = ctx.at_index[j2];
        let cert_out = &ctx.edge_certs[&u2];
        let (root_out, fi_out) = cert_out.face_at(own_id).expect("endpoints checked in R1");
        if root_in != root_out {
            return Err(Verdict::reject(
                Rule::R2FaceSuccession,
                format!(
                    "half-edges {u},{own_id} and {own_id},{u2} disagree on the face root \
                     ({root_in} vs {root_out})"
                ),
            ));
        }
        let successor = HalfEdge::new(own_id, u2);
        if successor == root_out {
            if fi_out != 0 {
                return Err(Verdict::reject(
                    Rule::R2FaceSuccession,
                    format!("root half-edge {successor} has face index {fi_out} != 0"),
                ));
            }
        } else if Some(fi_out) != fi_in.checked_add(1) {
            return Err(Verdict::reject(
                Rule::R2FaceSuccession,
                format!(
                    "face index of {successor} is {fi_out}, expected {} + 1",
                    fi_in
                ),
            ));
        }
    }
    Ok(())
}

fn check_r3(ctx: &Ctx) -> Result<(), Verdict> {
    let own = ctx.own;
    let own_id = ctx.view.own_id;
    if own.own_id != own_id {
        return Err(Verdict::reject(
            Rule::R3Tree,
            format!("certificate claims id {}, vertex is {own_id}", own.own_id),
        ));
    }
    for (nb, cert) in ctx.view.neighbors.iter().zip(&ctx.nb_certs) {
        if cert.own_id != nb.id {
            return Err(Verdict::reject(
                Rule::R3Tree,
                format!("neighbor {} carries certificate of {}", nb.id, cert.own_id),
            ));
        }
        if cert.root_id != own.root_id {
            return Err(Verdict::reject(
                Rule::R3Tree,
                format!("root disagreement: {} vs {}", own.root_id, cert.root_id),
            ));
        }
    }
    if own.own_id == own.root_id {
        if own.tree_depth != 0 || own.parent_id.is_some() {
            return Err(Verdict::reject(
                Rule::R3Tree,
                "root must have depth 0 and no parent",
            ));
        }
    } else {
        let Some(p) = own.parent_id else {
            return Err(Verdict::reject(Rule::R3Tree, "non-root without a parent"));
        };
        let Some(pc) = ctx
            .view
            .neighbors
            .iter()
            .position(|nb| nb.id == p)
            .map(|i| ctx.nb_certs[i])
        else {
            return Err(Verdict::reject(
                Rule::R3Tree,
                format!("parent {p} is not a neighbor"),
            ));
        };
        if Some(own.tree_depth) != pc.tree_depth.checked_add(1) {
            return Err(Verdict::reject(
                Rule::R3Tree,
                format!(
                    "depth {} is not parent depth {} + 1",
                    own.tree_depth, pc.tree_depth
                ),
            ));
        }
    }
    Ok(())
}

/// Children of this vertex: neighbors whose parent pointer names it.
fn children<'a>(ctx: &'a Ctx) -> impl Iterator<Item = &'a VertexCertificate> + 'a {
    let own_id = ctx.view.own_id;
    ctx.nb_certs
        .iter()
        .copied()
        .filter(move |c| c.parent_id == Some(own_id))
}

fn own_face_root_count(ctx: &Ctx) -> u64 {
    let own_id = ctx.view.own_id;
    ctx.view
        .neighbors
        .iter()
        .filter(|nb| {
            ctx.edge_certs
                .get(&nb.id)
                .and_then(|c| c.face_at(own_id))
                .is_some_and(|(root, fi)| root == HalfEdge::new(own_id, nb.id) && fi == 0)
        })
        .count() as u64
}

fn check_r4(ctx: &Ctx) -> Result<(), Verdict> {
    let own = ctx.own;
    for cert in &ctx.nb_certs {
        if cert.total_n != own.total_n
            || cert.total_2m != own.total_2m
            || cert.total_f != own.total_f
        {
            return Err(Verdict::reject(
                Rule::R4Counters,
                "totals differ from a neighbor's",
            ));
        }
    }
    let Some(total_f) = own.total_f else {
        return Err(Verdict::reject(Rule::R4Counters, "missing face total"));
    };
    let nu_sum: u128 = 1 + children(ctx).map(|c| u128::from(c.nu)).sum::<u128>();
    if u128::from(own.nu) != nu_sum {
        return Err(Verdict::reject(
            Rule::R4Counters,
            format!("nu {} != 1 + children sum {}", own.nu, nu_sum - 1),
        ));
    }
    let mu_sum: u128 = ctx.view.neighbors.len() as u128
        + children(ctx).map(|c| u128::from(c.mu2)).sum::<u128>();
    if u128::from(own.mu2) != mu_sum {
        return Err(Verdict::reject(
            Rule::R4Counters,
            format!("mu2 {} != degree + children sum {mu_sum}", own.mu2),
        ));
    }
    let Some(own_phi) = own.phi_count else {
        return Err(Verdict::reject(Rule::R4Counters, "missing phi counter"));
    };
    let mut phi_sum: u128 = u128::from(own_face_root_count(ctx));
    for c in children(ctx) {
        let Some(p) = c.phi_count else {
            return Err(Verdict::reject(
                Rule::R4Counters,
                "child without phi counter",
            ));
        };
        phi_sum += u128::from(p);
    }
    if u128::from(own_phi) != phi_sum {
        return Err(Verdict::reject(
            Rule::R4Counters,
            format!("phi {own_phi} != own face roots + children sum {phi_sum}"),
        ));
    }
    if own.own_id == own.root_id
        && (own.nu != own.total_n || own.mu2 != own.total_2m || own_phi != total_f)
    {
        return Err(Verdict::reject(
            Rule::R4Counters,
            "root counters do not meet the claimed totals",
        ));
    }
    Ok(())
}

fn check_r5(ctx: &Ctx, params: &VerifierParams) -> Result<(), Verdict> {
    let own = ctx.own;
    if own.total_2m % 2 != 0 {
        return Err(Verdict::reject(
            Rule::R5Euler,
            format!("doubled edge count {} is odd", own.total_2m),
        ));
    }
    let total_f = own.total_f.unwrap_or(0);
    let lhs = 2i128 + i128::from(own.total_2m / 2) - i128::from(own.total_n) - i128::from(total_f);
    if lhs > i128::from(params.target_eg) {
        return Err(Verdict::reject(
            Rule::R5Euler,
            format!(
                "Euler inequality fails: 2 + {} - {} - {} = {lhs} > {}",
                own.total_2m / 2,
                own.total_n,
                total_f,
                params.target_eg
            ),
        ));
    }
    Ok(())
}

fn check_r6(ctx: &Ctx) -> Result<(), Verdict> {
    let own = ctx.own;
    let own_id = ctx.view.own_id;
    for nb in &ctx.view.neighbors {
        if ctx.edge_certs[&nb.id].sign.is_none() {
            return Err(Verdict::reject(
                Rule::R6Signs,
                format!("edge to {} carries no sign", nb.id),
            ));
        }
    }
    let Some(eta) = own.eta else {
        return Err(Verdict::reject(Rule::R6Signs, "missing eta"));
    };
    if eta > 1 {
        return Err(Verdict::reject(Rule::R6Signs, "eta must be 0 or 1"));
    }
    if own.own_id == own.root_id {
        if eta != 0 {
            return Err(Verdict::reject(Rule::R6Signs, "root eta must be 0"));
        }
        let Some(er) = own.special_edge_neighbor else {
            return Err(Verdict::reject(
                Rule::R6Signs,
                "root without a special negative edge",
            ));
        };
        let Some(nb_pos) = ctx.view.neighbors.iter().position(|nb| nb.id == er) else {
            return Err(Verdict::reject(
                Rule::R6Signs,
                format!("special edge endpoint {er} is not a neighbor"),
            ));
        };
        if ctx.edge_certs[&er].sign != Some(Sign::Minus) {
            return Err(Verdict::reject(
                Rule::R6Signs,
                format!("special edge to {er} is not negative"),
            ));
        }
        let nb_cert = ctx.nb_certs[nb_pos];
        if nb_cert.parent_id == Some(own_id) {
            return Err(Verdict::reject(
                Rule::R6Signs,
                format!("special edge to {er} is a tree edge"),
            ));
        }
        if nb_cert.eta != Some(0) {
            return Err(Verdict::reject(
                Rule::R6Signs,
                format!("eta of special neighbor {er} is not 0"),
            ));
        }
    } else {
        let p = own.parent_id.expect("checked by R3");
        let p_cert = ctx
            .view
            .neighbors
            .iter()
            .position(|nb| nb.id == p)
            .map(|i| ctx.nb_certs[i])
            .expect("checked by R3");
        let Some(p_eta) = p_cert.eta else {
            return Err(Verdict::reject(Rule::R6Signs, "parent without eta"));
        };
        let negative = ctx.edge_certs[&p].sign == Some(Sign::Minus);
        if eta != (p_eta & 1) ^ u8::from(negative) {
            return Err(Verdict::reject(
                Rule::R6Signs,
                format!("eta {eta} breaks the parity chain from parent {p}"),
            ));
        }
    }
    Ok(())
}

/// Tree mode: the nu chain of R4 plus the requirement that every incident
/// edge is a tree edge, so accepting everywhere certifies G = T.
fn check_tree_mode(ctx: &Ctx) -> Result<(), Verdict> {
    check_r3(ctx)?;
    let own = ctx.own;
    for cert in &ctx.nb_certs {
        if cert.total_n != own.total_n {
            return Err(Verdict::reject(
                Rule::R4Counters,
                "vertex count disagreement",
            ));
        }
    }
    let nu_sum: u128 = 1 + children(ctx).map(|c| u128::from(c.nu)).sum::<u128>();
    if u128::from(own.nu) != nu_sum {
        return Err(Verdict::reject(
            Rule::R4Counters,
            format!("nu {} != 1 + children sum {}", own.nu, nu_sum - 1),
        ));
    }
    if own.own_id == own.root_id && own.nu != own.total_n {
        return Err(Verdict::reject(
            Rule::R4Counters,
            "root nu does not meet the claimed vertex count",
        ));
    }
    let own_id = ctx.view.own_id;
    for (nb, cert) in ctx.view.neighbors.iter().zip(&ctx.nb_certs) {
        let is_parent = own.parent_id == Some(nb.id);
        let is_child = cert.parent_id == Some(own_id);
        if !is_parent && !is_child {
            return Err(Verdict::reject(
                Rule::R7TreeMode,
                format!("edge to {} is neither parent nor child edge", nb.id),
            ));
        }
    }
    Ok(())
}

fn check_r8(ctx: &Ctx, params: &VerifierParams) -> Result<(), Verdict> {
    let own = ctx.own;
    let allowed = if params.orientable {
        own.mode == CertMode::OrientableCellular
    } else {
        matches!(own.mode, CertMode::NonorientableCellular | CertMode::Tree)
    };
    if !allowed {
        return Err(Verdict::reject(
            Rule::R8Mode,
            format!("mode {} is not valid for these parameters", own.mode),
        ));
    }
    for cert in &ctx.nb_certs {
        if cert.mode != own.mode {
            return Err(Verdict::reject(
                Rule::R8Mode,
                format!("neighbor mode {} differs from {}", cert.mode, own.mode),
            ));
        }
    }
    if params.orientable {
        if own.eta.is_some() || own.special_edge_neighbor.is_some() {
            return Err(Verdict::reject(
                Rule::R8Mode,
                "orientable target forbids eta and special-edge fields",
            ));
        }
        for (nb, cert) in ctx.edge_certs.iter() {
            if cert.sign == Some(Sign::Minus) {
                return Err(Verdict::reject(
                    Rule::R8Mode,
                    format!("negative sign on edge to {nb} under an orientable target"),
                ));
            }
        }
    }
    Ok(())
}

/// The verifier: accept iff every sub-check passes. Pure in the view and
/// parameters; evaluation order is MISSING_CERT, packing rules, then
/// R1..R8 (tree mode runs R3, the nu chain, R7, R8).
pub fn verify(params: &VerifierParams, view: &LocalView) -> Verdict {
    let Some(own) = &view.own_cert else {
        return Verdict::reject(Rule::MissingCert, "vertex carries no certificate");
    };
    let mut nb_certs = Vec::with_capacity(view.neighbors.len());
    for nb in &view.neighbors {
        match &nb.cert {
            Some(c) => nb_certs.push(c),
            None => {
                return Verdict::reject(
                    Rule::MissingCert,
                    format!("neighbor {} carries no certificate", nb.id),
                );
            }
        }
    }

    let tree_mode = own.mode == CertMode::Tree;
    let edge_certs = if params.packed && !tree_mode {
        match unpack_local(view, heawood_bound(params.target_eg)) {
            Ok(certs) => certs,
            Err(verdict) => return verdict,
        }
    } else if params.packed {
        // tree certificates carry no edge content; only the storage bound applies
        let bound = heawood_bound(params.target_eg);
        if view.own_store.len() as u64 > bound {
            return Verdict::reject(
                Rule::PackOverflow,
                format!("store holds {} > {bound} certificates", view.own_store.len()),
            );
        }
        BTreeMap::new()
    } else {
        view.incident_edge_certs.clone()
    };

    let mut ctx = Ctx {
        own,
        view,
        nb_certs,
        edge_certs,
        at_index: Vec::new(),
    };

    let result = if tree_mode {
        check_tree_mode(&ctx).and_then(|()| check_r8(&ctx, params))
    } else {
        check_r1(&mut ctx)
            .and_then(|()| check_r2(&ctx, params))
            .and_then(|()| check_r3(&ctx))
            .and_then(|()| check_r4(&ctx))
            .and_then(|()| check_r5(&ctx, params))
            .and_then(|()| {
                if ctx.own.mode == CertMode::NonorientableCellular {
                    check_r6(&ctx)
                } else {
                    Ok(())
                }
            })
            .and_then(|()| check_r8(&ctx, params))
    };

    match result {
        Ok(()) => Verdict::accept(),
        Err(verdict) => verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::{pack, prove, prove_tree};
    use crate::fixtures::{fixture, fixtures};

    fn id(v: u64) -> VertexId {
        VertexId::new(v).unwrap()
    }

    fn params(target_eg: u64, orientable: bool) -> VerifierParams {
        VerifierParams {
            target_eg,
            orientable,
            packed: false,
        }
    }

    #[test]
    fn rule_catalog_is_stable() {
        let rules = enumerate_rules();
        assert!(rules.len() >= 10);
        let mut tags: Vec<String> = rules.iter().map(|r| r.rule.to_string()).collect();
        let before = tags.clone();
        tags.sort();
        tags.dedup();
        assert_eq!(tags.len(), before.len(), "tags are unique");
        let euler = rules.iter().find(|r| r.rule == Rule::R5Euler).unwrap();
        assert!(euler.description.contains("2 + m - n - F <= g"));
    }

    #[test]
    fn honest_c4_accepts_everywhere() {
        let fx = fixture("c4_planar");
        let a = prove(&fx.graph, fx.scheme.as_ref().unwrap(), 0).unwrap();
        for view in build_local_views(&fx.graph, &a) {
            let v = verify(&params(0, true), &view);
            assert!(v.accepted, "{}: {:?}", view.own_id, v);
        }
    }

    #[test]
    fn honest_k5_rejects_at_planar_target() {
        let fx = fixture("k5_torus");
        let a = prove(&fx.graph, fx.scheme.as_ref().unwrap(), 2).unwrap();
        for view in build_local_views(&fx.graph, &a) {
            let v = verify(&params(0, true), &view);
            assert_eq!(v.rule, Some(Rule::R5Euler), "every vertex sees the gap");
        }
    }

    #[test]
    fn corrupted_nu_rejects() {
        let fx = fixture("c6_planar");
        let mut a = prove(&fx.graph, fx.scheme.as_ref().unwrap(), 0).unwrap();
        a.vertex_certs.get_mut(&id(3)).unwrap().nu += 1;
        let rejected = build_local_views(&fx.graph, &a)
            .iter()
            .filter(|view| !verify(&params(0, true), view).accepted)
            .count();
        assert!(rejected > 0, "vertex or parent must notice the nu bump");
    }

    #[test]
    fn monotone_in_target_genus() {
        let fx = fixture("k5_torus");
        let a = prove(&fx.graph, fx.scheme.as_ref().unwrap(), 2).unwrap();
        for g in 2..6 {
            for view in build_local_views(&fx.graph, &a) {
                assert!(verify(&params(g, true), &view).accepted);
            }
        }
    }

    #[test]
    fn packed_views_round_trip() {
        let fx = fixture("k5_torus");
        let a = prove(&fx.graph, fx.scheme.as_ref().unwrap(), 2).unwrap();
        let packed = pack(&fx.graph, &a);
        let p = VerifierParams {
            target_eg: 2,
            orientable: true,
            packed: true,
        };
        for view in build_local_views(&fx.graph, &packed) {
            let v = verify(&p, &view);
            assert!(v.accepted, "{}: {:?}", view.own_id, v);
        }
    }

    #[test]
    fn packed_missing_cert_rejects() {
        let fx = fixture("c4_planar");
        let a = prove(&fx.graph, fx.scheme.as_ref().unwrap(), 0).unwrap();
        let mut packed = pack(&fx.graph, &a);
        for list in packed.packing.as_mut().unwrap().values_mut() {
            list.retain(|c| c.edge() != crate::graph::Edge::new(id(1), id(2)));
        }
        let p = VerifierParams {
            target_eg: 0,
            orientable: true,
            packed: true,
        };
        let views = build_local_views(&fx.graph, &packed);
        let verdicts: Vec<Verdict> = views.iter().map(|v| verify(&p, v)).collect();
        assert!(verdicts
            .iter()
            .any(|v| v.rule == Some(Rule::PackMissing)));
    }

    #[test]
    fn packed_conflict_rejects() {
        let fx = fixture("c4_planar");
        let a = prove(&fx.graph, fx.scheme.as_ref().unwrap(), 0).unwrap();
        let mut packed = pack(&fx.graph, &a);
        // plant a second, differing copy of vertex 1's edge cert at vertex 2
        let mut forged = a.edge_certs[&crate::graph::Edge::new(id(1), id(2))].clone();
        forged.f_index_u += 1;
        packed
            .packing
            .as_mut()
            .unwrap()
            .entry(id(2))
            .or_default()
            .push(forged);
        let p = VerifierParams {
            target_eg: 0,
            orientable: true,
            packed: true,
        };
        let verdicts: Vec<Verdict> = build_local_views(&fx.graph, &packed)
            .iter()
            .map(|v| verify(&p, v))
            .collect();
        assert!(verdicts
            .iter()
            .any(|v| v.rule == Some(Rule::PackConflict)));
    }

    #[test]
    fn packed_overflow_rejects() {
        let fx = fixture("k5_torus");
        let a = prove(&fx.graph, fx.scheme.as_ref().unwrap(), 2).unwrap();
        let mut packed = pack(&fx.graph, &a);
        // the degeneracy-order maximum of K5 holds 4 certificates, within
        // heawood_bound(2) = 6; padding its store past the bound must trip
        // the overflow rule even though the copies are identical
        let store = packed.packing.as_mut().unwrap().get_mut(&id(1)).unwrap();
        assert_eq!(store.len(), 4);
        let filler = store[0].clone();
        while store.len() <= 6 {
            store.push(filler.clone());
        }
        let p = VerifierParams {
            target_eg: 2,
            orientable: true,
            packed: true,
        };
        let verdicts: Vec<Verdict> = build_local_views(&fx.graph, &packed)
            .iter()
            .map(|v| verify(&p, v))
            .collect();
        assert!(verdicts
            .iter()
            .any(|v| v.rule == Some(Rule::PackOverflow)));
    }

    #[test]
    fn tree_mode_accepts_trees_and_rejects_cycles() {
        let fx = fixture("tree_star5");
        let a = prove_tree(&fx.graph).unwrap();
        for view in build_local_views(&fx.graph, &a) {
            assert!(verify(&params(1, false), &view).accepted);
        }

        // graft those tree certificates onto a graph with an extra edge
        let g = Graph::from_edges(1..=6, [(1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (2, 3)]);
        let g = g.unwrap();
        let verdicts: Vec<Verdict> = build_local_views(&g, &a)
            .iter()
            .map(|v| verify(&params(1, false), v))
            .collect();
        assert!(verdicts.iter().any(|v| v.rule == Some(Rule::R7TreeMode)));
    }

    #[test]
    fn tree_mode_rejected_under_orientable_params() {
        let fx = fixture("tree_path4");
        let a = prove_tree(&fx.graph).unwrap();
        let verdicts: Vec<Verdict> = build_local_views(&fx.graph, &a)
            .iter()
            .map(|v| verify(&params(0, true), v))
            .collect();
        assert!(verdicts.iter().all(|v| v.rule == Some(Rule::R8Mode)));
    }

    #[test]
    fn smuggled_signs_rejected_under_orientable_params() {
        let fx = fixture("c4_planar");
        let mut a = prove(&fx.graph, fx.scheme.as_ref().unwrap(), 0).unwrap();
        for cert in a.edge_certs.values_mut() {
            cert.sign = Some(Sign::Minus);
        }
        let verdicts: Vec<Verdict> = build_local_views(&fx.graph, &a)
            .iter()
            .map(|v| verify(&params(0, true), v))
            .collect();
        assert!(verdicts.iter().all(|v| !v.accepted));
        assert!(verdicts.iter().any(|v| v.rule == Some(Rule::R8Mode)));
    }

    #[test]
    fn all_fixture_proofs_accept(){
        for fx in fixtures() {
            let (a, p) = if fx.tree_mode {
                (prove_tree(&fx.graph).unwrap(), params(fx.target_eg, false))
            } else {
                let s = fx.scheme.as_ref().unwrap();
                (
                    prove(&fx.graph, s, fx.target_eg).unwrap(),
                    params(fx.target_eg, s.orientable_mode()),
                )
            };
            for view in build_local_views(&fx.graph, &a) {
                let v = verify(&p, &view);
                assert!(v.accepted, "{} at {}: {:?}", fx.name, view.own_id, v);
            }
        }
    }

    #[test]
    fn determinism_identical_views_identical_verdicts() {
        let fx = fixture("k6_projective");
        let a = prove(&fx.graph, fx.scheme.as_ref().unwrap(), fx.target_eg).unwrap();
        let p = params(fx.target_eg, false);
        let views = build_local_views(&fx.graph, &a);
        for view in &views {
            assert_eq!(verify(&p, view), verify(&p, view));
        }
    }
}
