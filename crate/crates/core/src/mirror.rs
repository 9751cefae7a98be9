//! The mirror graph: two signed copies of the instance plus one twin edge per vertex.
//!
//! Every vertex `u` has a left copy `u_ℓ` and a right copy `u_r`. A genuine
//! edge `k = (a, b)` yields four parallel-free edges, laid out by id as
//!
//! | id       | left   | right  | left tag | right tag |
//! |----------|--------|--------|----------|-----------|
//! | `4k`     | `a_ℓ`  | `b_r`  | `+`      | `-`       |
//! | `4k + 1` | `a_ℓ`  | `b_r`  | `-`      | `+`       |
//! | `4k + 2` | `b_ℓ`  | `a_r`  | `+`      | `-`       |
//! | `4k + 3` | `b_ℓ`  | `a_r`  | `-`      | `+`       |
//!
//! and the twin of `u` is `4m + u = (u_ℓ⁻, u_r⁺)`. A tag is how the *other*
//! endpoint sees this one. Left copies rank their `-`-tagged partners first,
//! then the `+`-tagged ones, then the twin. Right copies rank `-`-tagged
//! partners, then the twin, then `+`-tagged partners. Inside each group the
//! instance's order is kept.
//!
//! The upper half is the `a_ℓ`–`b_r` copy of the instance, the lower half the
//! `b_ℓ`–`a_r` copy.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::engine::{EngineMatching, ProposalSystem};
use crate::instance::{Instance, Matching};
use crate::legal::EdgeClassification;
use crate::popularity::{edge_weight, EdgeOrLoop, Witness};
use crate::stable::blocking_edges as g_blocking_edges;
use crate::{EdgeId, MirrorEdgeId, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MirrorEdge {
    /// Vertex whose left copy is an endpoint.
    pub left: Vertex,
    /// Vertex whose right copy is an endpoint.
    pub right: Vertex,
    /// Tag of the left endpoint.
    pub left_sign: Sign,
    /// Tag of the right endpoint.
    pub right_sign: Sign,
    pub origin: EdgeOrLoop,
}

impl MirrorEdge {
    pub fn is_twin(&self) -> bool {
        matches!(self.origin, EdgeOrLoop::Loop(_))
    }
}

/// Perfect when stable: every left copy holds an edge.
pub type MirrorMatching = EngineMatching;

#[derive(Debug, Clone)]
pub struct MirrorGraph {
    n: usize,
    m: usize,
    edges: Vec<MirrorEdge>,
    system: ProposalSystem,
}

impl MirrorGraph {
    /// Number of vertices of the instance; the mirror has twice as many.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: MirrorEdgeId) -> &MirrorEdge {
        &self.edges[id]
    }

    pub fn copies(&self, e: EdgeId) -> [MirrorEdgeId; 4] {
        [4 * e, 4 * e + 1, 4 * e + 2, 4 * e + 3]
    }

    pub fn twin(&self, u: Vertex) -> MirrorEdgeId {
        4 * self.m + u
    }

    /// The proposal system with the legality restrictions as forbidden edges.
    pub fn system(&self) -> &ProposalSystem {
        &self.system
    }

    pub fn is_forbidden(&self, id: MirrorEdgeId) -> bool {
        self.system.is_forbidden(id)
    }

    pub fn is_perfect(&self, mm: &MirrorMatching) -> bool {
        mm.left.iter().all(Option::is_some) && mm.right.iter().all(Option::is_some)
    }

    /// Edges of the mirror that block `mm`, forbidden ones included.
    pub fn blocking_edges(&self, mm: &MirrorMatching) -> Vec<MirrorEdgeId> {
        self.system.blocking_edges(mm)
    }

    pub fn is_stable(&self, mm: &MirrorMatching) -> bool {
        self.is_perfect(mm) && self.blocking_edges(mm).is_empty()
    }

    /// Whether `mm` avoids every edge forbidden by legality.
    pub fn is_legal(&self, mm: &MirrorMatching) -> bool {
        mm.edges().all(|e| !self.is_forbidden(e))
    }

    /// Ranked edge lists of every copy, with forbidden edges marked `!`.
    pub fn dump(&self, inst: &Instance) -> String {
        let mut out = String::new();
        let mut right_lists: Vec<Vec<MirrorEdgeId>> = vec![Vec::new(); self.n];
        for id in 0..self.num_edges() {
            right_lists[self.edges[id].right].push(id);
        }
        for list in &mut right_lists {
            list.sort_by_key(|&id| self.system.right_rank(id));
        }
        let flag = |id| if self.is_forbidden(id) { "!" } else { "" };
        for u in 0..self.n {
            let _ = write!(out, "{}_l >", inst.name(u));
            for &id in self.system.left_list(u) {
                let e = &self.edges[id];
                let _ = write!(out, " {}_r{}{}", inst.name(e.right), e.right_sign.symbol(), flag(id));
            }
            out.push('\n');
        }
        for (u, list) in right_lists.iter().enumerate() {
            let _ = write!(out, "{}_r >", inst.name(u));
            for &id in list {
                let e = &self.edges[id];
                let _ = write!(out, " {}_l{}{}", inst.name(e.left), e.left_sign.symbol(), flag(id));
            }
            out.push('\n');
        }
        out
    }
}

/// Builds the mirror, forbidding every copy of an illegal edge and the twin of every illegal loop.
pub fn build_mirror(inst: &Instance, classes: &EdgeClassification) -> MirrorGraph {
    let (n, m) = (inst.n(), inst.m());
    let mut edges = Vec::with_capacity(4 * m + n);
    for (k, &(a, b)) in inst.edges().iter().enumerate() {
        let origin = EdgeOrLoop::Edge(k);
        let e = |left, right, left_sign, right_sign| MirrorEdge { left, right, left_sign, right_sign, origin };
        edges.push(e(a, b, Sign::Plus, Sign::Minus));
        edges.push(e(a, b, Sign::Minus, Sign::Plus));
        edges.push(e(b, a, Sign::Plus, Sign::Minus));
        edges.push(e(b, a, Sign::Minus, Sign::Plus));
    }
    for u in 0..n {
        edges.push(MirrorEdge {
            left: u,
            right: u,
            left_sign: Sign::Minus,
            right_sign: Sign::Plus,
            origin: EdgeOrLoop::Loop(u),
        });
    }

    let mut builder = ProposalSystem::builder(n, n);
    for u in 0..n {
        builder.may_stay_single(u, false);
    }
    for (id, e) in edges.iter().enumerate() {
        let (left_rank, right_rank) = match e.origin {
            EdgeOrLoop::Loop(u) => {
                let d = inst.degree(u) as u32;
                (2 * d, d)
            }
            EdgeOrLoop::Edge(_) => {
                let dl = inst.degree(e.left) as u32;
                let dr = inst.degree(e.right) as u32;
                let il = inst.rank(e.left, e.right).expect("adjacent") as u32;
                let ir = inst.rank(e.right, e.left).expect("adjacent") as u32;
                // a `+` left tag means the right endpoint is `-` to the left copy
                let left_rank = if e.left_sign == Sign::Plus { il } else { dl + il };
                let right_rank = if e.left_sign == Sign::Minus { ir } else { dr + 1 + ir };
                (left_rank, right_rank)
            }
        };
        let added = builder.add_edge(e.left, e.right, left_rank, right_rank);
        debug_assert_eq!(added, id);
        if !classes.legal.contains(e.origin) {
            builder.forbid(id);
        }
    }
    MirrorGraph { n, m, edges, system: builder.build() }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MirrorError {
    #[error("matching is not stable: `{0}` and `{1}` block it")]
    NotStable(String, String),
    #[error("witness is not tight on matched pair `{0}`, `{1}`")]
    NotTight(String, String),
    #[error("witness entry {1} cannot be realized at `{0}`")]
    BadEntry(String, i8),
}

fn from_pairs(g: &MirrorGraph, picks: impl IntoIterator<Item = MirrorEdgeId>) -> MirrorMatching {
    let mut mm = MirrorMatching { left: vec![None; g.n], right: vec![None; g.n] };
    for id in picks {
        let e = g.edges[id];
        debug_assert!(mm.left[e.left].is_none() && mm.right[e.right].is_none());
        mm.left[e.left] = Some(id);
        mm.right[e.right] = Some(id);
    }
    mm
}

/// Copies a stable matching into both halves, `-` on the left copies, and twins the unmatched.
pub fn embed_stable(g: &MirrorGraph, inst: &Instance, s: &Matching) -> Result<MirrorMatching, MirrorError> {
    if let Some(&e) = g_blocking_edges(inst, s).first() {
        let (a, b) = inst.edge(e);
        return Err(MirrorError::NotStable(inst.name(a).into(), inst.name(b).into()));
    }
    realize_witnessed(g, inst, s, &Witness::zeros(inst.n()))
}

/// The realization of `n` chosen by the witness `w`.
///
/// A matched pair `(a, b)` is placed by `(α_a, α_b)`: `(-1, 1)` takes `4k+1`
/// and `4k+2`, `(1, -1)` takes `4k` and `4k+3`, `(0, 0)` takes `4k+1` and
/// `4k+3`. Unmatched vertices take their twin. The tags at `u_ℓ` and `u_r`
/// then sum to `2α_u`.
pub fn realize_witnessed(
    g: &MirrorGraph,
    inst: &Instance,
    n: &Matching,
    w: &Witness,
) -> Result<MirrorMatching, MirrorError> {
    let mut picks = Vec::with_capacity(2 * inst.n());
    for u in inst.vertices() {
        if !n.is_matched(u) {
            if w.get(u) != 0 {
                return Err(MirrorError::BadEntry(inst.name(u).into(), w.get(u)));
            }
            picks.push(g.twin(u));
        }
    }
    for (a, b) in n.pairs() {
        let k = inst.edge_between(a, b).expect("matched pair is an edge");
        let pair = match (w.get(a), w.get(b)) {
            (-1, 1) => [4 * k + 1, 4 * k + 2],
            (1, -1) => [4 * k, 4 * k + 3],
            (0, 0) => [4 * k + 1, 4 * k + 3],
            _ => return Err(MirrorError::NotTight(inst.name(a).into(), inst.name(b).into())),
        };
        picks.extend(pair);
    }
    Ok(from_pairs(g, picks))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Half {
    /// `a_ℓ`–`b_r`.
    Upper,
    /// `b_ℓ`–`a_r`.
    Lower,
}

/// The instance matching read off one half; twins become unmatched vertices.
pub fn project(g: &MirrorGraph, inst: &Instance, mm: &MirrorMatching, half: Half) -> Matching {
    let mut partner: Vec<Vertex> = inst.vertices().collect();
    for a in inst.agents() {
        let held = match half {
            Half::Upper => mm.left[a],
            Half::Lower => mm.right[a],
        };
        let Some(id) = held else { continue };
        let e = g.edges[id];
        if !e.is_twin() {
            let b = if half == Half::Upper { e.right } else { e.left };
            partner[a] = b;
            partner[b] = a;
        }
    }
    Matching::from_partners(partner)
}

/// The tag of a vertex in one half of a mirror matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    Plus,
    Minus,
    /// Twin-matched (or, on an infeasible state, uncovered).
    Unmatched,
}

impl From<Sign> for Tag {
    fn from(s: Sign) -> Tag {
        match s {
            Sign::Plus => Tag::Plus,
            Sign::Minus => Tag::Minus,
        }
    }
}

/// Per-vertex tags in both halves.
///
/// In the upper half an agent is tagged at its left copy and a job at its
/// right copy; the lower half uses the other copy. Twin-matched vertices form
/// `U_A` and `U_B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    num_agents: usize,
    pub upper: Vec<Tag>,
    pub lower: Vec<Tag>,
}

impl Partition {
    pub fn in_u(&self, u: Vertex) -> bool {
        self.upper[u] == Tag::Unmatched
    }

    /// Agents tagged `-` above and `+` below, or jobs tagged `+` above and `-` below.
    pub fn is_candidate(&self, u: Vertex) -> bool {
        let want = if u < self.num_agents { (Tag::Minus, Tag::Plus) } else { (Tag::Plus, Tag::Minus) };
        (self.upper[u], self.lower[u]) == want
    }

    fn collect(&self, agents: bool, keep: impl Fn(Vertex) -> bool) -> Vec<Vertex> {
        let range = if agents { 0..self.num_agents } else { self.num_agents..self.upper.len() };
        range.filter(|&u| keep(u)).collect()
    }

    pub fn u_a(&self) -> Vec<Vertex> {
        self.collect(true, |u| self.in_u(u))
    }

    pub fn u_b(&self) -> Vec<Vertex> {
        self.collect(false, |u| self.in_u(u))
    }

    /// Agents (or jobs) with the given upper tag.
    pub fn upper_set(&self, agents: bool, tag: Tag) -> Vec<Vertex> {
        self.collect(agents, |u| self.upper[u] == tag)
    }

    /// Agents (or jobs) with the given lower tag.
    pub fn lower_set(&self, agents: bool, tag: Tag) -> Vec<Vertex> {
        self.collect(agents, |u| self.lower[u] == tag)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = |t: Tag| match t {
            Tag::Plus => '+',
            Tag::Minus => '-',
            Tag::Unmatched => 'U',
        };
        for u in 0..self.upper.len() {
            write!(f, "{}{}", sym(self.upper[u]), sym(self.lower[u]))?;
            if u + 1 < self.upper.len() {
                f.write_char(' ')?;
            }
        }
        Ok(())
    }
}

/// Tag of `u` in one half, read from the copies' held edges.
pub fn tag_of(g: &MirrorGraph, inst: &Instance, mm: &MirrorMatching, u: Vertex, half: Half) -> Tag {
    let at_left = inst.is_agent(u) == (half == Half::Upper);
    let held = if at_left { mm.left[u] } else { mm.right[u] };
    match held.map(|id| g.edges[id]) {
        None => Tag::Unmatched,
        Some(e) if e.is_twin() => Tag::Unmatched,
        Some(e) => (if at_left { e.left_sign } else { e.right_sign }).into(),
    }
}

pub fn classify_partition(g: &MirrorGraph, inst: &Instance, mm: &MirrorMatching) -> Partition {
    Partition {
        num_agents: inst.num_agents(),
        upper: inst.vertices().map(|u| tag_of(g, inst, mm, u, Half::Upper)).collect(),
        lower: inst.vertices().map(|u| tag_of(g, inst, mm, u, Half::Lower)).collect(),
    }
}

/// Sum of the tags at `u_ℓ` and `u_r` (twins count `-` and `+`).
pub fn tag_sum(g: &MirrorGraph, mm: &MirrorMatching, u: Vertex) -> i8 {
    let l = mm.left[u].map_or(0, |id| g.edges[id].left_sign.value());
    let r = mm.right[u].map_or(0, |id| g.edges[id].right_sign.value());
    l + r
}

/// Checks `w` is tight on every pair of `n`, which [`realize_witnessed`] requires.
pub fn is_tight(inst: &Instance, n: &Matching, w: &Witness) -> bool {
    inst.vertices().all(|u| {
        let v = n.partner(u);
        if v == u {
            w.get(u) as i32 == edge_weight(inst, n, EdgeOrLoop::Loop(u))
        } else {
            w.get(u) + w.get(v) == 0
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::propose_dispose;
    use crate::instance::fixtures::inst1;
    use crate::legal::legal_edge_set;
    use crate::stable::agent_optimal;

    #[test]
    fn small_mirror_shape() {
        let g = inst1();
        let h = build_mirror(&g, &legal_edge_set(&g));
        assert_eq!(h.num_edges(), 16);
        let forbidden_twins: Vec<_> = g.vertices().filter(|&u| h.is_forbidden(h.twin(u))).collect();
        assert_eq!(forbidden_twins, vec![1, 3]);
        // a1_l: b1- b0- b1+ b0+ twin
        let list: Vec<_> = h.system().left_list(1).to_vec();
        let e11 = g.edge_between(1, 3).unwrap();
        let e10 = g.edge_between(1, 2).unwrap();
        assert_eq!(list, vec![4 * e11, 4 * e10, 4 * e11 + 1, 4 * e10 + 1, h.twin(1)]);
        assert!(h.dump(&g).contains("a1_l > b1_r- b0_r- b1_r+ b0_r+ a1_r+!"));
    }

    #[test]
    fn embedding_the_stable_matching() {
        let g = inst1();
        let h = build_mirror(&g, &legal_edge_set(&g));
        let s = agent_optimal(&g);
        let mm = embed_stable(&h, &g, &s).unwrap();
        assert_eq!(mm.size(), 4);
        assert!(h.is_stable(&mm));
        assert_eq!(project(&h, &g, &mm, Half::Upper), s);
        assert_eq!(project(&h, &g, &mm, Half::Lower), s);
        let p = classify_partition(&h, &g, &mm);
        assert_eq!((p.u_a(), p.u_b()), (vec![0], vec![2]));
        assert_eq!(p.upper_set(true, Tag::Minus), vec![1]);
        assert_eq!(p.upper_set(false, Tag::Plus), vec![3]);
        assert_eq!(p.lower_set(true, Tag::Plus), vec![1]);
        assert_eq!(p.lower_set(false, Tag::Minus), vec![3]);
        assert!(p.is_candidate(1) && p.is_candidate(3));

        let mmax = Matching::from_names(&g, &[("a0", "b1"), ("a1", "b0")]).unwrap();
        assert!(embed_stable(&h, &g, &mmax).is_err());
    }

    #[test]
    fn realizing_a_witnessed_matching() {
        let g = inst1();
        let h = build_mirror(&g, &legal_edge_set(&g));
        let mmax = Matching::from_names(&g, &[("a0", "b1"), ("a1", "b0")]).unwrap();
        let w = Witness { alpha: vec![-1, 1, -1, 1] };
        let mm = realize_witnessed(&h, &g, &mmax, &w).unwrap();
        assert!(h.is_stable(&mm) && h.is_legal(&mm));
        for u in g.vertices() {
            assert_eq!(tag_sum(&h, &mm, u), 2 * w.get(u));
        }
        assert_eq!(project(&h, &g, &mm, Half::Upper), mmax);
        assert_eq!(project(&h, &g, &mm, Half::Lower), mmax);
    }

    #[test]
    fn edgeless_mirror_is_all_twins() {
        let g = Instance::from_names(&[], &["b"], &[]).unwrap();
        let h = build_mirror(&g, &legal_edge_set(&g));
        let mm = embed_stable(&h, &g, &Matching::unmatched(1)).unwrap();
        assert_eq!(mm.left, vec![Some(h.twin(0))]);
        assert_eq!(propose_dispose(h.system()).matching(), Some(&mm));
    }
}
