use std::fmt::Write as _;

use super::Instance;
use crate::error::MatchingError;
use crate::{EdgeId, Vertex};

/// A matching viewed as a perfect matching of the self-loop augmented graph:
/// `partner(u) == u` means `u` is unmatched.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    partner: Vec<Vertex>,
}

impl Matching {
    /// Every vertex matched to itself.
    pub fn unmatched(n: usize) -> Self {
        Matching { partner: (0..n).collect() }
    }

    /// Wraps a partner map without checking it; see [`Matching::validate`].
    pub fn from_partners(partner: Vec<Vertex>) -> Self {
        Matching { partner }
    }

    /// Builds a matching from genuine edges, checking adjacency and disjointness.
    pub fn from_pairs(inst: &Instance, pairs: &[(Vertex, Vertex)]) -> Result<Self, MatchingError> {
        let mut m = Matching::unmatched(inst.n());
        for &(u, v) in pairs {
            if inst.edge_between(u, v).is_none() || inst.is_agent(u) == inst.is_agent(v) {
                return Err(MatchingError::NotAnEdge(inst.name(u).into(), inst.name(v).into()));
            }
            for x in [u, v] {
                if m.partner[x] != x {
                    return Err(MatchingError::MatchedTwice(inst.name(x).into()));
                }
            }
            m.partner[u] = v;
            m.partner[v] = u;
        }
        Ok(m)
    }

    /// Same as [`Matching::from_pairs`] but by vertex name.
    pub fn from_names(inst: &Instance, pairs: &[(&str, &str)]) -> Result<Self, MatchingError> {
        let id = |s: &str| inst.id(s).ok_or_else(|| MatchingError::UnknownName(s.to_string()));
        let pairs = pairs.iter().map(|&(a, b)| Ok((id(a)?, id(b)?))).collect::<Result<Vec<_>, MatchingError>>()?;
        Matching::from_pairs(inst, &pairs)
    }

    /// Builds a matching from edge ids.
    pub fn from_edges(inst: &Instance, edges: impl IntoIterator<Item = EdgeId>) -> Result<Self, MatchingError> {
        let pairs: Vec<_> = edges.into_iter().map(|e| inst.edge(e)).collect();
        Matching::from_pairs(inst, &pairs)
    }

    /// Checks the involution and adjacency invariants against `inst`.
    pub fn validate(&self, inst: &Instance) -> Result<(), MatchingError> {
        if self.partner.len() != inst.n() {
            return Err(MatchingError::WrongSize { expected: inst.n(), found: self.partner.len() });
        }
        for (u, &v) in self.partner.iter().enumerate() {
            if v >= self.partner.len() || self.partner[v] != u {
                return Err(MatchingError::NotInvolution(inst.name(u).into()));
            }
            if v != u && inst.edge_between(u, v).is_none() {
                return Err(MatchingError::NotAnEdge(inst.name(u).into(), inst.name(v).into()));
            }
        }
        Ok(())
    }

    pub fn partner(&self, u: Vertex) -> Vertex {
        self.partner[u]
    }

    pub fn partners(&self) -> &[Vertex] {
        &self.partner
    }

    pub fn is_matched(&self, u: Vertex) -> bool {
        self.partner[u] != u
    }

    pub fn len(&self) -> usize {
        self.partner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partner.is_empty()
    }

    /// Number of genuine edges.
    pub fn size(&self) -> usize {
        self.partner.iter().enumerate().filter(|&(u, &v)| u < v).count()
    }

    /// Genuine pairs `(lower id, higher id)`; with the agents-first layout that is `(agent, job)`.
    pub fn pairs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.partner.iter().enumerate().filter(|&(u, &v)| u < v).map(|(u, &v)| (u, v))
    }

    pub fn edge_ids(&self, inst: &Instance) -> Vec<EdgeId> {
        self.pairs().map(|(a, b)| inst.edge_between(a, b).expect("matched pair is an edge")).collect()
    }

    pub fn contains_edge(&self, inst: &Instance, e: EdgeId) -> bool {
        let (a, b) = inst.edge(e);
        self.partner[a] == b
    }

    /// Serializes to the matching file format.
    pub fn to_text(&self, inst: &Instance) -> String {
        let mut out = String::new();
        for (a, b) in self.pairs() {
            let _ = writeln!(out, "{} {}", inst.name(a), inst.name(b));
        }
        out
    }
}
