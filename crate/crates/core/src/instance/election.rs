use std::cmp::Ordering;

use thiserror::Error;

use super::{Instance, Matching};
use crate::Vertex;

/// Top choice `f(a)` and best non-top-choice neighbour `s(a)` of every agent,
/// indexed by agent id. `s(a) == a` when every neighbour of `a` is some agent's top choice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Posts {
    pub f: Vec<Vertex>,
    pub s: Vec<Vertex>,
    /// `is_top[v]`: some agent has `v` as its top choice.
    pub is_top: Vec<bool>,
}

pub fn compute_posts(inst: &Instance) -> Posts {
    let f: Vec<Vertex> = inst.agents().map(|a| inst.prefs(a)[0]).collect();
    let mut is_top = vec![false; inst.n()];
    for &b in &f {
        is_top[b] = true;
    }
    let s = inst.agents().map(|a| inst.prefs(a).iter().copied().find(|&b| !is_top[b]).unwrap_or(a)).collect();
    Posts { f, s, is_top }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{candidate}` is neither `{voter}` nor one of its neighbours")]
pub struct VoteError {
    pub voter: String,
    pub candidate: String,
}

/// `u`'s vote for `v` versus `w`: `+1` if `u` prefers `v`, `-1` if it prefers `w`, `0` if `v == w`.
pub fn vote(inst: &Instance, u: Vertex, v: Vertex, w: Vertex) -> Result<i8, VoteError> {
    let rank = |x: Vertex| {
        inst.rank(u, x).ok_or_else(|| VoteError { voter: inst.name(u).into(), candidate: inst.name(x).into() })
    };
    Ok(match rank(v)?.cmp(&rank(w)?) {
        Ordering::Less => 1,
        Ordering::Greater => -1,
        Ordering::Equal => 0,
    })
}

/// Vote tallies of an `M` versus `N` election, over all vertices and over agents only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Election {
    pub phi_mn: usize,
    pub phi_nm: usize,
    pub phi_a_mn: usize,
    pub phi_a_nm: usize,
}

impl Election {
    pub fn reversed(self) -> Election {
        Election { phi_mn: self.phi_nm, phi_nm: self.phi_mn, phi_a_mn: self.phi_a_nm, phi_a_nm: self.phi_a_mn }
    }
}

pub fn run_election(inst: &Instance, m: &Matching, n: &Matching) -> Election {
    let mut tally = Election::default();
    for u in inst.vertices() {
        let ord = inst.rank(u, m.partner(u)).cmp(&inst.rank(u, n.partner(u)));
        let agent = inst.is_agent(u);
        match ord {
            Ordering::Less => {
                tally.phi_mn += 1;
                tally.phi_a_mn += agent as usize;
            }
            Ordering::Greater => {
                tally.phi_nm += 1;
                tally.phi_a_nm += agent as usize;
            }
            Ordering::Equal => {}
        }
    }
    tally
}
