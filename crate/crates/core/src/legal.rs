//! Valid, popular and legal edges, and the components of the popular subgraph.

use std::collections::VecDeque;

use crate::instance::{compute_posts, Instance, Posts};
use crate::oracle;
use crate::popularity::EdgeOrLoop;
use crate::stable::{is_stable_pair, stable_mask, stable_pairs};
use crate::{EdgeId, Vertex};

/// A set of augmented edges: genuine edges by id, self-loops by vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    pub edges: Vec<bool>,
    pub loops: Vec<bool>,
}

impl EdgeSet {
    pub fn empty(inst: &Instance) -> Self {
        EdgeSet { edges: vec![false; inst.m()], loops: vec![false; inst.n()] }
    }

    pub fn contains(&self, e: EdgeOrLoop) -> bool {
        match e {
            EdgeOrLoop::Edge(e) => self.edges[e],
            EdgeOrLoop::Loop(u) => self.loops[u],
        }
    }

    pub fn insert(&mut self, e: EdgeOrLoop) {
        match e {
            EdgeOrLoop::Edge(e) => self.edges[e] = true,
            EdgeOrLoop::Loop(u) => self.loops[u] = true,
        }
    }

    pub fn intersection(&self, other: &EdgeSet) -> EdgeSet {
        let and = |x: &[bool], y: &[bool]| x.iter().zip(y).map(|(&p, &q)| p && q).collect();
        EdgeSet { edges: and(&self.edges, &other.edges), loops: and(&self.loops, &other.loops) }
    }

    /// Members, genuine edges first, each group ascending.
    pub fn iter(&self) -> impl Iterator<Item = EdgeOrLoop> + '_ {
        let edges = self.edges.iter().enumerate().filter(|p| *p.1).map(|(e, _)| EdgeOrLoop::Edge(e));
        let loops = self.loops.iter().enumerate().filter(|p| *p.1).map(|(u, _)| EdgeOrLoop::Loop(u));
        edges.chain(loops)
    }

    pub fn len(&self) -> usize {
        self.edges.iter().chain(&self.loops).filter(|&&x| x).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Edges an agent-popular matching may use: `(a, f(a))`, `(a, s(a))` (a loop when `s(a) = a`),
/// and loops of jobs nobody ranks first.
pub fn valid_edges(inst: &Instance, posts: &Posts) -> EdgeSet {
    let mut set = EdgeSet::empty(inst);
    for a in inst.agents() {
        for post in [posts.f[a], posts.s[a]] {
            if post == a {
                set.loops[a] = true;
            } else {
                set.edges[inst.edge_between(a, post).expect("posts are neighbours")] = true;
            }
        }
    }
    for b in inst.jobs() {
        set.loops[b] = !posts.is_top[b];
    }
    set
}

/// How to decide which edges lie in some popular matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PopularBackend {
    /// Stable pairs of the instance and of its two-level instance, in linear time.
    #[default]
    Fast,
    /// Same reduction with one truncated proposal run per edge, quadratic.
    PerEdge,
    /// Exhaustive enumeration; small instances only.
    Oracle,
}

/// The two-level instance whose stable matchings are the dominant matchings.
///
/// Every agent `a` becomes a low copy `a0` and a high copy `a1` that share a
/// private job `d(a)`. `a0` ranks `a`'s jobs then `d(a)`; `a1` ranks `d(a)`
/// then `a`'s jobs; `d(a)` prefers `a0`. Jobs rank every high copy above every
/// low copy, keeping the original order inside each level. In any stable
/// matching `d(a)` holds one copy, so at most one copy of `a` holds a real job.
#[derive(Debug, Clone)]
pub struct TwoLevel {
    pub inst: Instance,
    /// `(low, high)` edge ids in the two-level instance for each original edge.
    pub copies: Vec<(EdgeId, EdgeId)>,
}

pub fn two_level(inst: &Instance) -> TwoLevel {
    let na = inst.num_agents();
    let nb = inst.num_jobs();
    let low = |a: Vertex| a;
    let high = |a: Vertex| na + a;
    let job = |b: Vertex| na + b;
    let dummy = |a: Vertex| 2 * na + nb + a;

    let mut prefs: Vec<Vec<Vertex>> = vec![Vec::new(); 3 * na + nb];
    for a in inst.agents() {
        let jobs: Vec<Vertex> = inst.prefs(a).iter().map(|&b| job(b)).collect();
        prefs[low(a)] = jobs.iter().copied().chain([dummy(a)]).collect();
        prefs[high(a)] = [dummy(a)].into_iter().chain(jobs).collect();
        prefs[dummy(a)] = vec![low(a), high(a)];
    }
    for b in inst.jobs() {
        let list = inst.prefs(b);
        prefs[job(b)] = list.iter().map(|&a| high(a)).chain(list.iter().map(|&a| low(a))).collect();
    }
    let aux = Instance::from_ids(2 * na, prefs).expect("two-level lists are symmetric");
    let copies = inst
        .edges()
        .iter()
        .map(|&(a, b)| {
            let lo = aux.edge_between(low(a), job(b)).expect("low copy edge");
            let hi = aux.edge_between(high(a), job(b)).expect("high copy edge");
            (lo, hi)
        })
        .collect();
    TwoLevel { inst: aux, copies }
}

/// Edges and loops lying in some popular matching, by the default backend.
pub fn popular_edges(inst: &Instance) -> EdgeSet {
    popular_edges_with(inst, PopularBackend::Fast)
}

/// Edges and loops lying in some popular matching.
///
/// An edge is popular iff some stable or some dominant matching contains it,
/// and a loop is popular iff its vertex is unmatched in the stable matchings.
pub fn popular_edges_with(inst: &Instance, backend: PopularBackend) -> EdgeSet {
    let stable_loops = || stable_mask(inst).into_iter().map(|s| !s).collect();
    match backend {
        PopularBackend::Fast => {
            let aux = two_level(inst);
            let in_g = stable_pairs(inst);
            let in_aux = stable_pairs(&aux.inst);
            let edges = (0..inst.m())
                .map(|e| {
                    let (lo, hi) = aux.copies[e];
                    in_g[e] || in_aux[lo] || in_aux[hi]
                })
                .collect();
            EdgeSet { edges, loops: stable_loops() }
        }
        PopularBackend::PerEdge => {
            let aux = two_level(inst);
            let edges = (0..inst.m())
                .map(|e| {
                    let (lo, hi) = aux.copies[e];
                    is_stable_pair(inst, e) || is_stable_pair(&aux.inst, lo) || is_stable_pair(&aux.inst, hi)
                })
                .collect();
            EdgeSet { edges, loops: stable_loops() }
        }
        PopularBackend::Oracle => {
            oracle::popular_edge_union(inst, &oracle::OracleConfig::from_env()).expect("instance within the oracle cap")
        }
    }
}

/// Valid, popular and legal edges, plus the connected components of the
/// subgraph formed by the popular genuine edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClassification {
    pub valid: EdgeSet,
    pub popular: EdgeSet,
    pub legal: EdgeSet,
    /// Component id of each vertex, numbered by smallest member.
    pub component: Vec<usize>,
    /// Members of each component, ascending.
    pub members: Vec<Vec<Vertex>>,
}

impl EdgeClassification {
    pub fn num_components(&self) -> usize {
        self.members.len()
    }
}

pub fn legal_edge_set(inst: &Instance) -> EdgeClassification {
    classify_with(inst, PopularBackend::Fast)
}

pub fn classify_with(inst: &Instance, backend: PopularBackend) -> EdgeClassification {
    let valid = valid_edges(inst, &compute_posts(inst));
    let popular = popular_edges_with(inst, backend);
    let legal = valid.intersection(&popular);

    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); inst.n()];
    for (e, &(a, b)) in inst.edges().iter().enumerate() {
        if popular.edges[e] {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut component = vec![usize::MAX; inst.n()];
    let mut members = Vec::new();
    let mut queue = VecDeque::new();
    for root in inst.vertices() {
        if component[root] != usize::MAX {
            continue;
        }
        let id = members.len();
        let mut group = vec![root];
        component[root] = id;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if component[v] == usize::MAX {
                    component[v] = id;
                    group.push(v);
                    queue.push_back(v);
                }
            }
        }
        group.sort_unstable();
        members.push(group);
    }
    EdgeClassification { valid, popular, legal, component, members }
}
