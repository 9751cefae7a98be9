//! Proposer/disposer engine with forbidden edges.
//!
//! Left vertices propose along their ranked edge lists; right vertices keep the
//! best proposal so far. A right vertex remembers the rank of the best proposal
//! it has ever *received*, accepted or not, and rejects every edge ranked at
//! or below it from then on. A forbidden edge is therefore still able to block:
//! the engine returns the left-optimal matching among those that avoid forbidden
//! edges and admit no blocking edge at all, or reports that none exists.
//!
//! The engine can be resumed after more edges are forbidden. Left pointers never
//! move backwards, so a whole sequence of resumes costs at most one pass over
//! the left lists.

use crate::EdgeId;

const NO_THRESHOLD: u32 = u32::MAX;

/// Ranked edge lists on the left, per-edge ranks on the right, and a forbidden set.
#[derive(Debug, Clone)]
pub struct ProposalSystem {
    n_right: usize,
    left_lists: Vec<Vec<EdgeId>>,
    may_stay_single: Vec<bool>,
    edge_left: Vec<usize>,
    edge_right: Vec<usize>,
    right_rank: Vec<u32>,
    forbidden: Vec<bool>,
}

#[derive(Debug, Clone)]
pub struct ProposalSystemBuilder {
    n_right: usize,
    may_stay_single: Vec<bool>,
    edges: Vec<(usize, usize, u32, u32)>,
    forbidden: Vec<bool>,
}

impl ProposalSystemBuilder {
    /// Adds an edge with its rank in the left and right vertex's orders (lower is better).
    pub fn add_edge(&mut self, left: usize, right: usize, left_rank: u32, right_rank: u32) -> EdgeId {
        assert!(left < self.may_stay_single.len() && right < self.n_right);
        self.edges.push((left, right, left_rank, right_rank));
        self.forbidden.push(false);
        self.edges.len() - 1
    }

    /// Whether exhausting `left`'s list leaves it single (true) or makes the system infeasible (false).
    pub fn may_stay_single(&mut self, left: usize, allowed: bool) -> &mut Self {
        self.may_stay_single[left] = allowed;
        self
    }

    pub fn forbid(&mut self, e: EdgeId) -> &mut Self {
        self.forbidden[e] = true;
        self
    }

    /// Panics if some vertex ranks two of its edges equally.
    pub fn build(self) -> ProposalSystem {
        let n_left = self.may_stay_single.len();
        let mut left_lists: Vec<Vec<EdgeId>> = vec![Vec::new(); n_left];
        for (e, &(l, ..)) in self.edges.iter().enumerate() {
            left_lists[l].push(e);
        }
        for list in &mut left_lists {
            list.sort_by_key(|&e| self.edges[e].2);
            assert!(list.windows(2).all(|w| self.edges[w[0]].2 < self.edges[w[1]].2), "left ranks must be strict");
        }
        let mut by_right: Vec<Vec<u32>> = vec![Vec::new(); self.n_right];
        for &(_, r, _, rr) in &self.edges {
            by_right[r].push(rr);
        }
        for ranks in &mut by_right {
            ranks.sort_unstable();
            assert!(ranks.windows(2).all(|w| w[0] < w[1]), "right ranks must be strict");
        }
        ProposalSystem {
            n_right: self.n_right,
            left_lists,
            may_stay_single: self.may_stay_single,
            edge_left: self.edges.iter().map(|e| e.0).collect(),
            edge_right: self.edges.iter().map(|e| e.1).collect(),
            right_rank: self.edges.iter().map(|e| e.3).collect(),
            forbidden: self.forbidden,
        }
    }
}

impl ProposalSystem {
    /// Every left vertex defaults to `may_stay_single = true`.
    pub fn builder(n_left: usize, n_right: usize) -> ProposalSystemBuilder {
        ProposalSystemBuilder { n_right, may_stay_single: vec![true; n_left], edges: Vec::new(), forbidden: Vec::new() }
    }

    pub fn n_left(&self) -> usize {
        self.left_lists.len()
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn num_edges(&self) -> usize {
        self.edge_left.len()
    }

    pub fn left_list(&self, l: usize) -> &[EdgeId] {
        &self.left_lists[l]
    }

    pub fn endpoints(&self, e: EdgeId) -> (usize, usize) {
        (self.edge_left[e], self.edge_right[e])
    }

    pub fn right_rank(&self, e: EdgeId) -> u32 {
        self.right_rank[e]
    }

    pub fn is_forbidden(&self, e: EdgeId) -> bool {
        self.forbidden[e]
    }

    pub fn forbid(&mut self, e: EdgeId) {
        self.forbidden[e] = true;
    }

    pub fn may_stay_single(&self, l: usize) -> bool {
        self.may_stay_single[l]
    }

    /// Position of `e` in its left vertex's list.
    pub fn left_position(&self, e: EdgeId) -> usize {
        let l = self.edge_left[e];
        self.left_lists[l].iter().position(|&x| x == e).expect("edge in its own list")
    }

    /// Whether `e` blocks `m`: both endpoints strictly prefer `e` to what they hold (holding nothing is worst).
    pub fn blocks(&self, m: &EngineMatching, e: EdgeId) -> bool {
        let (l, r) = self.endpoints(e);
        let left_better = match m.left[l] {
            None => true,
            Some(h) => self.left_position(e) < self.left_position(h),
        };
        let right_better = match m.right[r] {
            None => true,
            Some(h) => self.right_rank[e] < self.right_rank[h],
        };
        left_better && right_better && m.left[l] != Some(e)
    }

    /// All edges, forbidden or not, that block `m`.
    pub fn blocking_edges(&self, m: &EngineMatching) -> Vec<EdgeId> {
        // positions are precomputed per left list to keep this O(edges)
        let mut pos = vec![0usize; self.num_edges()];
        for list in &self.left_lists {
            for (i, &e) in list.iter().enumerate() {
                pos[e] = i;
            }
        }
        (0..self.num_edges())
            .filter(|&e| {
                let (l, r) = self.endpoints(e);
                let left_better = m.left[l].is_none_or(|h| pos[e] < pos[h]);
                let right_better = m.right[r].is_none_or(|h| self.right_rank[e] < self.right_rank[h]);
                left_better && right_better
            })
            .collect()
    }
}

/// A matching over a proposal system, by held edge per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineMatching {
    pub left: Vec<Option<EdgeId>>,
    pub right: Vec<Option<EdgeId>>,
}

impl EngineMatching {
    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.left.iter().flatten().copied()
    }

    pub fn size(&self) -> usize {
        self.left.iter().flatten().count()
    }
}

/// Why no matching avoiding the forbidden edges is stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stall {
    /// A left vertex that may not stay single ran out of edges.
    ExhaustedLeft(usize),
    /// A right vertex rejected some proposal yet ended up holding nothing,
    /// so the rejected edge blocks.
    UnheldRight(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EngineOutcome {
    Matched(EngineMatching),
    Infeasible(Stall),
}

impl EngineOutcome {
    pub fn matching(&self) -> Option<&EngineMatching> {
        match self {
            EngineOutcome::Matched(m) => Some(m),
            EngineOutcome::Infeasible(_) => None,
        }
    }
}

/// Cheap status after a run, without copying the matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Stable,
    Infeasible(Stall),
}

/// A resumable run over a [`ProposalSystem`].
#[derive(Debug, Clone)]
pub struct Engine<'a> {
    sys: &'a ProposalSystem,
    forbidden: Vec<bool>,
    next: Vec<usize>,
    left_holds: Vec<Option<EdgeId>>,
    right_holds: Vec<Option<EdgeId>>,
    threshold: Vec<u32>,
    free: Vec<usize>,
    exhausted: usize,
    unheld: usize,
    proposals: u64,
    rejections: u64,
    touched_left: Vec<usize>,
    touched_right: Vec<usize>,
}

impl<'a> Engine<'a> {
    /// Sets up a run; nothing is proposed until [`Engine::run`].
    pub fn new(sys: &'a ProposalSystem) -> Self {
        let n_left = sys.n_left();
        Engine {
            sys,
            forbidden: sys.forbidden.clone(),
            next: vec![0; n_left],
            left_holds: vec![None; n_left],
            right_holds: vec![None; sys.n_right],
            threshold: vec![NO_THRESHOLD; sys.n_right],
            // popped from the back, so lower ids propose first
            free: (0..n_left).rev().collect(),
            exhausted: 0,
            unheld: 0,
            proposals: 0,
            rejections: 0,
            touched_left: Vec::new(),
            touched_right: Vec::new(),
        }
    }

    pub fn system(&self) -> &'a ProposalSystem {
        self.sys
    }

    /// Runs until no free left vertex can propose.
    pub fn run(&mut self) -> Status {
        while let Some(l) = self.free.pop() {
            self.propose_from(l);
        }
        self.status()
    }

    fn propose_from(&mut self, l: usize) {
        let list = &self.sys.left_lists[l];
        loop {
            let Some(&e) = list.get(self.next[l]) else {
                if !self.sys.may_stay_single[l] {
                    self.exhausted += 1;
                }
                return;
            };
            self.next[l] += 1;
            self.proposals += 1;
            let r = self.sys.edge_right[e];
            let rank = self.sys.right_rank[e];
            if rank >= self.threshold[r] {
                self.rejections += 1;
                continue;
            }
            let was_unheld = self.threshold[r] != NO_THRESHOLD && self.right_holds[r].is_none();
            self.threshold[r] = rank;
            if let Some(old) = self.right_holds[r].take() {
                let loser = self.sys.edge_left[old];
                self.left_holds[loser] = None;
                self.free.push(loser);
                self.touched_left.push(loser);
            }
            self.touched_right.push(r);
            if self.forbidden[e] {
                self.rejections += 1;
                if !was_unheld {
                    self.unheld += 1;
                }
                continue;
            }
            if was_unheld {
                self.unheld -= 1;
            }
            self.right_holds[r] = Some(e);
            self.left_holds[l] = Some(e);
            self.touched_left.push(l);
            return;
        }
    }

    /// Forbids more edges and resumes. Already-forbidden edges are ignored.
    ///
    /// The result equals a from-scratch run with the enlarged forbidden set.
    pub fn resume_after_forbid(&mut self, newly_forbidden: &[EdgeId]) -> Status {
        for &e in newly_forbidden {
            if self.forbidden[e] {
                continue;
            }
            self.forbidden[e] = true;
            let r = self.sys.edge_right[e];
            if self.right_holds[r] == Some(e) {
                let l = self.sys.edge_left[e];
                self.right_holds[r] = None;
                self.left_holds[l] = None;
                self.unheld += 1;
                self.free.push(l);
                self.touched_left.push(l);
                self.touched_right.push(r);
            }
        }
        self.run()
    }

    pub fn status(&self) -> Status {
        if self.exhausted > 0 {
            let l = (0..self.sys.n_left())
                .find(|&l| self.left_holds[l].is_none() && !self.sys.may_stay_single[l])
                .expect("exhausted vertex");
            Status::Infeasible(Stall::ExhaustedLeft(l))
        } else if self.unheld > 0 {
            let r = (0..self.sys.n_right)
                .find(|&r| self.right_holds[r].is_none() && self.threshold[r] != NO_THRESHOLD)
                .expect("unheld vertex");
            Status::Infeasible(Stall::UnheldRight(r))
        } else {
            Status::Stable
        }
    }

    /// Snapshot of the current state as an outcome.
    pub fn outcome(&self) -> EngineOutcome {
        match self.status() {
            Status::Stable => EngineOutcome::Matched(self.matching()),
            Status::Infeasible(s) => EngineOutcome::Infeasible(s),
        }
    }

    pub fn matching(&self) -> EngineMatching {
        EngineMatching { left: self.left_holds.clone(), right: self.right_holds.clone() }
    }

    pub fn left_holds(&self, l: usize) -> Option<EdgeId> {
        self.left_holds[l]
    }

    pub fn right_holds(&self, r: usize) -> Option<EdgeId> {
        self.right_holds[r]
    }

    pub fn is_forbidden(&self, e: EdgeId) -> bool {
        self.forbidden[e]
    }

    /// Total proposals so far, including rejected ones.
    pub fn proposals(&self) -> u64 {
        self.proposals
    }

    pub fn rejections(&self) -> u64 {
        self.rejections
    }

    /// Left and right vertices whose holdings changed since the last drain, in event order.
    pub fn drain_touched(&mut self) -> (Vec<usize>, Vec<usize>) {
        (std::mem::take(&mut self.touched_left), std::mem::take(&mut self.touched_right))
    }
}

/// One-shot run of the engine.
pub fn propose_dispose(sys: &ProposalSystem) -> EngineOutcome {
    let mut engine = Engine::new(sys);
    engine.run();
    engine.outcome()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two-by-two system where both lefts rank right 0 first and right 0 prefers left 1.
    fn small() -> ProposalSystem {
        let mut b = ProposalSystem::builder(2, 2);
        b.add_edge(0, 0, 0, 1);
        b.add_edge(0, 1, 1, 0);
        b.add_edge(1, 0, 0, 0);
        b.add_edge(1, 1, 1, 1);
        b.build()
    }

    #[test]
    fn plain_gale_shapley() {
        let sys = small();
        let out = propose_dispose(&sys);
        let m = out.matching().unwrap();
        assert_eq!(m.left, vec![Some(1), Some(2)]);
        assert!(sys.blocking_edges(m).is_empty());
    }

    #[test]
    fn empty_left_side() {
        let sys = ProposalSystem::builder(0, 3).build();
        let m = propose_dispose(&sys);
        assert_eq!(m.matching().unwrap().size(), 0);
    }

    #[test]
    fn forbidden_edge_still_blocks() {
        // single edge, forbidden: the right vertex rejects it and stays unheld
        let mut b = ProposalSystem::builder(1, 1);
        let e = b.add_edge(0, 0, 0, 0);
        b.forbid(e);
        assert_eq!(propose_dispose(&b.build()), EngineOutcome::Infeasible(Stall::UnheldRight(0)));
    }

    #[test]
    fn exhausting_a_required_vertex() {
        let mut b = ProposalSystem::builder(1, 1);
        let e = b.add_edge(0, 0, 0, 0);
        b.may_stay_single(0, false);
        let sys = b.build();
        let mut engine = Engine::new(&sys);
        assert_eq!(engine.run(), Status::Stable);
        assert_eq!(engine.resume_after_forbid(&[e]), Status::Infeasible(Stall::ExhaustedLeft(0)));
    }

    #[test]
    fn resume_with_nothing_is_identity() {
        let sys = small();
        let mut engine = Engine::new(&sys);
        engine.run();
        let before = engine.outcome();
        let proposals = engine.proposals();
        engine.resume_after_forbid(&[]);
        assert_eq!(engine.outcome(), before);
        assert_eq!(engine.proposals(), proposals);
    }

    #[test]
    fn resume_matches_fresh_run() {
        let sys = small();
        let mut engine = Engine::new(&sys);
        engine.run();
        engine.resume_after_forbid(&[2]);
        let mut fresh = sys.clone();
        fresh.forbid(2);
        assert_eq!(engine.outcome(), propose_dispose(&fresh));
    }
}
