//! Preference instances and matchings over them.
//!
//! Vertex names are interned to dense ids at construction: agents take
//! `0..num_agents`, jobs take `num_agents..n`. Every vertex implicitly has a
//! self-loop ranked below all genuine neighbours, so a matching is stored as a
//! total partner map where unmatched vertices are their own partner.

mod election;
mod matching;
mod parse;

use std::collections::HashMap;

use rustc_hash::FxHashMap;
use std::fmt::Write as _;

use crate::error::InstanceError;
use crate::{EdgeId, Vertex};

pub use election::{compute_posts, run_election, vote, Election, Posts, VoteError};
pub use matching::Matching;
pub use parse::{parse_instance, parse_matching};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Agent,
    Job,
}

/// A bipartite instance with strict preference lists on both sides.
#[derive(Debug, Clone)]
pub struct Instance {
    names: Vec<String>,
    index: FxHashMap<String, Vertex>,
    num_agents: usize,
    prefs: Vec<Vec<Vertex>>,
    pref_edges: Vec<Vec<EdgeId>>,
    /// `(agent, job)` per edge.
    edges: Vec<(Vertex, Vertex)>,
    /// Rank of the job in the agent's list and of the agent in the job's list.
    edge_ranks: Vec<(usize, usize)>,
    lookup: FxHashMap<(Vertex, Vertex), EdgeId>,
}

impl Instance {
    /// Builds an instance from names and id-based preference lists.
    ///
    /// `prefs[u]` lists `u`'s neighbours from most to least preferred. Ids follow
    /// the usual layout: `agents[i]` is vertex `i`, `jobs[j]` is vertex `agents.len() + j`.
    pub fn new(agents: Vec<String>, jobs: Vec<String>, prefs: Vec<Vec<Vertex>>) -> Result<Self, InstanceError> {
        let num_agents = agents.len();
        let names: Vec<String> = agents.into_iter().chain(jobs).collect();
        let n = names.len();
        assert_eq!(prefs.len(), n, "one preference list per vertex");

        let mut index = FxHashMap::with_capacity_and_hasher(n, Default::default());
        for (id, name) in names.iter().enumerate() {
            if index.insert(name.clone(), id).is_some() {
                return Err(InstanceError::DuplicateName(name.clone()));
            }
        }

        let is_agent = |v: Vertex| v < num_agents;
        for (u, list) in prefs.iter().enumerate() {
            for &v in list {
                if v >= n {
                    return Err(InstanceError::UnknownName(format!("#{v}")));
                }
                if is_agent(u) == is_agent(v) {
                    return Err(InstanceError::SameSide(names[u].clone(), names[v].clone()));
                }
            }
        }
        if let Some(a) = (0..num_agents).find(|&a| prefs[a].is_empty()) {
            return Err(InstanceError::EmptyAgent(names[a].clone()));
        }

        // edges are numbered along the agents' lists; job ranks are filled in from the other side
        let m: usize = prefs[..num_agents].iter().map(Vec::len).sum();
        let mut edges = Vec::with_capacity(m);
        let mut edge_ranks = Vec::with_capacity(m);
        let mut lookup = FxHashMap::with_capacity_and_hasher(m, Default::default());
        let mut pref_edges: Vec<Vec<EdgeId>> = Vec::with_capacity(n);
        for (a, list) in prefs.iter().enumerate().take(num_agents) {
            let mut own = Vec::with_capacity(list.len());
            for (ra, &b) in list.iter().enumerate() {
                if lookup.insert((a, b), edges.len()).is_some() {
                    return Err(InstanceError::DuplicateNeighbor(names[a].clone(), names[b].clone()));
                }
                own.push(edges.len());
                edges.push((a, b));
                edge_ranks.push((ra, usize::MAX));
            }
            pref_edges.push(own);
        }
        for (b, list) in prefs.iter().enumerate().skip(num_agents) {
            let mut own = Vec::with_capacity(list.len());
            for (rb, &a) in list.iter().enumerate() {
                let e = *lookup
                    .get(&(a, b))
                    .ok_or_else(|| InstanceError::Asymmetric(names[b].clone(), names[a].clone()))?;
                if edge_ranks[e].1 != usize::MAX {
                    return Err(InstanceError::DuplicateNeighbor(names[b].clone(), names[a].clone()));
                }
                edge_ranks[e].1 = rb;
                own.push(e);
            }
            pref_edges.push(own);
        }
        if let Some(e) = edge_ranks.iter().position(|r| r.1 == usize::MAX) {
            let (a, b) = edges[e];
            return Err(InstanceError::Asymmetric(names[a].clone(), names[b].clone()));
        }

        Ok(Instance { names, index, num_agents, prefs, pref_edges, edges, edge_ranks, lookup })
    }

    /// Builds an instance from names, as `(vertex, ranked neighbours)` entries.
    /// Vertices without an entry get an empty list.
    pub fn from_names(agents: &[&str], jobs: &[&str], lists: &[(&str, &[&str])]) -> Result<Self, InstanceError> {
        let agents: Vec<String> = agents.iter().map(|s| s.to_string()).collect();
        let jobs: Vec<String> = jobs.iter().map(|s| s.to_string()).collect();
        let index: HashMap<&str, Vertex> =
            agents.iter().chain(jobs.iter()).enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut prefs = vec![Vec::new(); agents.len() + jobs.len()];
        for (owner, list) in lists {
            let u = *index.get(owner).ok_or_else(|| InstanceError::UnknownName(owner.to_string()))?;
            prefs[u] = list
                .iter()
                .map(|v| index.get(v).copied().ok_or_else(|| InstanceError::UnknownName(v.to_string())))
                .collect::<Result<_, _>>()?;
        }
        Instance::new(agents, jobs, prefs)
    }

    /// Builds an instance with generated names `u0, u1, ...`, used for auxiliary instances.
    pub(crate) fn from_ids(num_agents: usize, prefs: Vec<Vec<Vertex>>) -> Result<Self, InstanceError> {
        let names: Vec<String> = (0..prefs.len()).map(|i| format!("u{i}")).collect();
        let jobs = names[num_agents..].to_vec();
        let agents = names[..num_agents].to_vec();
        Instance::new(agents, jobs, prefs)
    }

    /// Number of vertices `|A ∪ B|`.
    pub fn n(&self) -> usize {
        self.names.len()
    }

    /// Number of genuine edges.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn num_agents(&self) -> usize {
        self.num_agents
    }

    pub fn num_jobs(&self) -> usize {
        self.n() - self.num_agents
    }

    pub fn agents(&self) -> std::ops::Range<Vertex> {
        0..self.num_agents
    }

    pub fn jobs(&self) -> std::ops::Range<Vertex> {
        self.num_agents..self.n()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n()
    }

    pub fn is_agent(&self, v: Vertex) -> bool {
        v < self.num_agents
    }

    pub fn side(&self, v: Vertex) -> Side {
        if self.is_agent(v) {
            Side::Agent
        } else {
            Side::Job
        }
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.names[v]
    }

    pub fn id(&self, name: &str) -> Option<Vertex> {
        self.index.get(name).copied()
    }

    /// `u`'s genuine neighbours, most preferred first.
    pub fn prefs(&self, u: Vertex) -> &[Vertex] {
        &self.prefs[u]
    }

    /// Edge ids parallel to [`Instance::prefs`].
    pub fn pref_edges(&self, u: Vertex) -> &[EdgeId] {
        &self.pref_edges[u]
    }

    pub fn degree(&self, u: Vertex) -> usize {
        self.prefs[u].len()
    }

    /// All edges as `(agent, job)`, indexed by [`EdgeId`].
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.edges[e]
    }

    /// `(rank of job at agent, rank of agent at job)`.
    pub fn edge_ranks(&self, e: EdgeId) -> (usize, usize) {
        self.edge_ranks[e]
    }

    /// The edge joining `u` and `v`, in either orientation.
    pub fn edge_between(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        if self.is_agent(u) {
            self.lookup.get(&(u, v)).copied()
        } else {
            self.lookup.get(&(v, u)).copied()
        }
    }

    /// Position of `v` in `u`'s list; `u` itself ranks last, at `degree(u)`.
    pub fn rank(&self, u: Vertex, v: Vertex) -> Option<usize> {
        if u == v {
            return Some(self.degree(u));
        }
        let e = self.edge_between(u, v)?;
        let (ra, rb) = self.edge_ranks[e];
        Some(if self.is_agent(u) { ra } else { rb })
    }

    /// Whether `u` strictly prefers `v` to `w`; both must be neighbours of `u` or `u` itself.
    pub fn prefers(&self, u: Vertex, v: Vertex, w: Vertex) -> bool {
        self.rank(u, v).expect("not adjacent") < self.rank(u, w).expect("not adjacent")
    }

    /// Serializes to the line-oriented instance format accepted by [`parse_instance`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let join = |range: std::ops::Range<Vertex>| range.map(|v| self.names[v].as_str()).collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "agents: {}", join(self.agents()));
        let _ = writeln!(out, "jobs: {}", join(self.jobs()));
        for u in self.vertices() {
            let _ = write!(out, "{} >", self.names[u]);
            for &v in &self.prefs[u] {
                let _ = write!(out, " {}", self.names[v]);
            }
            out.push('\n');
        }
        out
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::inst1;
    use super::*;

    #[test]
    fn ids_and_ranks() {
        let g = inst1();
        assert_eq!((g.n(), g.m()), (4, 3));
        let (a0, a1, b0, b1) = (0, 1, 2, 3);
        assert_eq!(g.id("b1"), Some(b1));
        assert_eq!(g.rank(a1, b0), Some(1));
        assert_eq!(g.rank(b1, a0), Some(1));
        assert_eq!(g.rank(a0, a0), Some(1));
        assert_eq!(g.rank(a0, b0), None);
        assert!(g.prefers(b1, a1, a0));
        assert_eq!(g.edge_between(b0, a1), g.edge_between(a1, b0));
        assert!(g.edge_between(a0, b0).is_none());
    }

    #[test]
    fn rejects_invariant_violations() {
        let asym = Instance::from_names(&["a"], &["b"], &[("a", &["b"])]);
        assert_eq!(asym.unwrap_err(), InstanceError::Asymmetric("a".into(), "b".into()));
        let empty = Instance::from_names(&["a", "c"], &["b"], &[("a", &["b"]), ("b", &["a"])]);
        assert_eq!(empty.unwrap_err(), InstanceError::EmptyAgent("c".into()));
        let dup = Instance::from_names(&["a"], &["a"], &[]);
        assert_eq!(dup.unwrap_err(), InstanceError::DuplicateName("a".into()));
        let same = Instance::from_names(&["a", "c"], &["b"], &[("a", &["c"])]);
        assert_eq!(same.unwrap_err(), InstanceError::SameSide("a".into(), "c".into()));
        let twice = Instance::from_names(&["a"], &["b"], &[("a", &["b", "b"]), ("b", &["a"])]);
        assert_eq!(twice.unwrap_err(), InstanceError::DuplicateNeighbor("a".into(), "b".into()));
    }

    #[test]
    fn text_round_trip() {
        let g = inst1();
        let h = parse_instance(&g.to_text()).unwrap();
        assert_eq!(h.to_text(), g.to_text());
        assert_eq!(h.edges(), g.edges());
    }
}
