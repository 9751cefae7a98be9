//! Iterated forbidding in the mirror graph.
//!
//! Start from the left-optimal legal stable matching of the mirror. While some
//! unmarked agent is tagged `-` above and `+` below (or some unmarked job `+`
//! above and `-` below), take its component in the popular subgraph, forbid
//! `(a_ℓ⁺, ·)` and `(·, a_r⁻)` for every agent `a` there, resume the proposal
//! engine, and mark the component. If the engine stalls there is no fully
//! popular matching; otherwise the upper half of the final matching is a
//! maximum-size fully popular matching, and its tags give a witness.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::engine::{Engine, Stall, Status};
use crate::instance::{compute_posts, Instance, Matching};
use crate::legal::{classify_with, EdgeClassification, PopularBackend};
use crate::mirror::{
    build_mirror, classify_partition, project, Half, MirrorGraph, MirrorMatching, Partition, Sign, Tag,
};
use crate::popularity::{check_a_popular, check_witness, check_witness_within, Witness};
use crate::stable::blocking_edges;
use crate::{Alpha, MirrorEdgeId, Vertex};

/// Which unmarked candidate the loop takes next.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TriggerOrder {
    /// Smallest vertex id among current candidates.
    #[default]
    LowestId,
    /// First discovered, in engine event order.
    Discovery,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub trigger_order: TriggerOrder,
    pub backend: PopularBackend,
    /// Check the structural invariants of the final state and panic on violation.
    pub check_invariants: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            trigger_order: TriggerOrder::default(),
            backend: PopularBackend::default(),
            check_invariants: cfg!(debug_assertions),
        }
    }
}

/// One pass of the forbidding loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationRecord {
    pub trigger: Vertex,
    /// The trigger's component in the popular subgraph, now marked.
    pub component: Vec<Vertex>,
    /// Mirror edges newly forbidden in this pass.
    pub forbidden_edges: Vec<MirrorEdgeId>,
    /// Proposals made while resuming.
    pub proposals: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveStats {
    pub mirror_edges: usize,
    /// Total proposals, including the initial run; never exceeds `mirror_edges`.
    pub proposals: u64,
    pub rejections: u64,
    pub iterations: usize,
}

/// Everything known at the end of a successful run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinalState {
    /// Upper half: the answer.
    pub matching: Matching,
    pub witness: Witness,
    pub size: usize,
    /// Lower half.
    pub lower: Matching,
    pub partition: Partition,
    pub marked: Vec<bool>,
    /// Marked vertices not twin-matched.
    pub z: Vec<bool>,
    pub mirror_matching: MirrorMatching,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Found(Box<FinalState>),
    /// The engine stalled after `iteration` passes (0: no legal stable matching at all).
    NoneExists {
        iteration: usize,
        stall: Stall,
    },
}

impl SolveOutcome {
    pub fn found(&self) -> Option<&FinalState> {
        match self {
            SolveOutcome::Found(s) => Some(s),
            SolveOutcome::NoneExists { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub outcome: SolveOutcome,
    pub trace: Vec<IterationRecord>,
    pub stats: SolveStats,
}

pub fn solve(inst: &Instance) -> SolveReport {
    solve_with(inst, &SolveOptions::default())
}

/// Pending candidates in one of the two trigger orders. Entries are checked
/// lazily when taken, so stale ones are simply skipped.
enum Queue {
    Heap(BinaryHeap<Reverse<Vertex>>),
    List { items: Vec<Vertex>, next: usize },
}

impl Queue {
    fn new(order: TriggerOrder) -> Self {
        match order {
            TriggerOrder::LowestId => Queue::Heap(BinaryHeap::new()),
            TriggerOrder::Discovery => Queue::List { items: Vec::new(), next: 0 },
        }
    }

    fn push(&mut self, u: Vertex) {
        match self {
            Queue::Heap(h) => h.push(Reverse(u)),
            Queue::List { items, .. } => items.push(u),
        }
    }

    fn take(&mut self, valid: impl Fn(Vertex) -> bool) -> Option<Vertex> {
        match self {
            Queue::Heap(h) => {
                while let Some(Reverse(u)) = h.pop() {
                    if valid(u) {
                        return Some(u);
                    }
                }
                None
            }
            Queue::List { items, next } => {
                while let Some(&u) = items.get(*next) {
                    *next += 1;
                    if valid(u) {
                        return Some(u);
                    }
                }
                None
            }
        }
    }
}

fn is_candidate(g: &MirrorGraph, engine: &Engine<'_>, u: Vertex) -> bool {
    let (Some(l), Some(r)) = (engine.left_holds(u), engine.right_holds(u)) else {
        return false;
    };
    let (el, er) = (g.edge(l), g.edge(r));
    if el.is_twin() || er.is_twin() {
        return false;
    }
    // agents read upper at u_ℓ and jobs read it at u_r, so both sides reduce to `-` at u_ℓ, `+` at u_r
    el.left_sign == Sign::Minus && er.right_sign == Sign::Plus
}

pub fn solve_with(inst: &Instance, opts: &SolveOptions) -> SolveReport {
    let classes = classify_with(inst, opts.backend);
    let mirror = build_mirror(inst, &classes);
    let mut engine = Engine::new(mirror.system());
    let mut stats = SolveStats { mirror_edges: mirror.num_edges(), ..SolveStats::default() };
    let mut trace = Vec::new();

    let finish = |engine: &Engine<'_>, stats: &mut SolveStats| {
        stats.proposals = engine.proposals();
        stats.rejections = engine.rejections();
    };

    if let Status::Infeasible(stall) = engine.run() {
        finish(&engine, &mut stats);
        return SolveReport { outcome: SolveOutcome::NoneExists { iteration: 0, stall }, trace, stats };
    }
    engine.drain_touched();

    let mut marked = vec![false; inst.n()];
    let mut queue = Queue::new(opts.trigger_order);
    for u in inst.vertices() {
        if is_candidate(&mirror, &engine, u) {
            queue.push(u);
        }
    }

    while let Some(v) = queue.take(|u| !marked[u] && is_candidate(&mirror, &engine, u)) {
        let component = classes.members[classes.component[v]].clone();
        let mut newly = Vec::new();
        for &a in component.iter().filter(|&&a| inst.is_agent(a)) {
            for &k in inst.pref_edges(a) {
                // (a_ℓ⁺, b_r⁻) and (b_ℓ⁺, a_r⁻)
                for id in [4 * k, 4 * k + 2] {
                    if !engine.is_forbidden(id) {
                        newly.push(id);
                    }
                }
            }
        }
        let before = engine.proposals();
        let status = engine.resume_after_forbid(&newly);
        for &u in &component {
            marked[u] = true;
        }
        stats.iterations += 1;
        trace.push(IterationRecord {
            trigger: v,
            component,
            forbidden_edges: newly,
            proposals: engine.proposals() - before,
        });
        if let Status::Infeasible(stall) = status {
            finish(&engine, &mut stats);
            return SolveReport {
                outcome: SolveOutcome::NoneExists { iteration: stats.iterations, stall },
                trace,
                stats,
            };
        }
        let (left, right) = engine.drain_touched();
        for u in left.into_iter().chain(right) {
            if !marked[u] && is_candidate(&mirror, &engine, u) {
                queue.push(u);
            }
        }
    }
    finish(&engine, &mut stats);

    let mm = engine.matching();
    let partition = classify_partition(&mirror, inst, &mm);
    let z: Vec<bool> = inst.vertices().map(|u| marked[u] && !partition.in_u(u)).collect();
    let matching = project(&mirror, inst, &mm, Half::Upper);
    let lower = project(&mirror, inst, &mm, Half::Lower);
    let witness = extract_witness(&partition, &z);
    let state =
        FinalState { size: matching.size(), matching, witness, lower, partition, marked, z, mirror_matching: mm };
    if opts.check_invariants {
        let violations = check_final_state(inst, &classes, &mirror, &state);
        assert!(violations.is_empty(), "solver invariants violated: {violations:?}");
    }
    SolveReport { outcome: SolveOutcome::Found(Box::new(state)), trace, stats }
}

fn tag_value(t: Tag) -> Alpha {
    match t {
        Tag::Plus => 1,
        Tag::Minus => -1,
        Tag::Unmatched => 0,
    }
}

/// `0` on `Z` and the twin-matched vertices, otherwise the upper tag.
pub fn extract_witness(partition: &Partition, z: &[bool]) -> Witness {
    let alpha = partition.upper.iter().zip(z).map(|(&t, &in_z)| if in_z { 0 } else { tag_value(t) }).collect();
    Witness { alpha }
}

/// Upper tags as a labelling (`γ`): certifies the upper matching once twin-matched jobs are removed.
pub fn upper_witness(partition: &Partition) -> Witness {
    Witness { alpha: partition.upper.iter().map(|&t| tag_value(t)).collect() }
}

/// Lower tags as a labelling (`β`): certifies the lower matching once twin-matched agents are removed.
pub fn lower_witness(partition: &Partition) -> Witness {
    Witness { alpha: partition.lower.iter().map(|&t| tag_value(t)).collect() }
}

/// Checks every structural property of a final state, returning a description of each failure.
pub fn check_final_state(
    inst: &Instance,
    classes: &EdgeClassification,
    mirror: &MirrorGraph,
    state: &FinalState,
) -> Vec<String> {
    let mut bad = Vec::new();
    let (m, l, p) = (&state.matching, &state.lower, &state.partition);
    let mm = &state.mirror_matching;

    if !mirror.is_stable(mm) {
        bad.push("final mirror matching is not stable".into());
    }
    if !mirror.is_legal(mm) {
        bad.push("final mirror matching uses a forbidden edge".into());
    }
    if !check_a_popular(inst, &compute_posts(inst), m) {
        bad.push("matching is not agent-popular".into());
    }
    if !check_witness(inst, m, &state.witness) {
        bad.push("witness does not certify the matching".into());
    }
    if m.edge_ids(inst).iter().any(|&e| !classes.legal.edges[e]) {
        bad.push("matching uses an illegal edge".into());
    }

    let core: Vec<bool> = inst.vertices().map(|u| state.z[u] || p.in_u(u)).collect();
    for (name, x) in [("upper", m), ("lower", l)] {
        let inside = blocking_edges(inst, x).into_iter().find(|&e| {
            let (a, b) = inst.edge(e);
            core[a] && core[b]
        });
        if let Some(e) = inside {
            bad.push(format!("{name} half blocked inside Z and U by edge {e}"));
        }
    }
    if let Some(u) = inst.vertices().find(|&u| state.z[u] && m.partner(u) != l.partner(u)) {
        bad.push(format!("halves differ on marked vertex {u}"));
    }
    let weakly_prefers_upper = |a: Vertex| inst.rank(a, m.partner(a)) <= inst.rank(a, l.partner(a));
    for a in inst.agents() {
        if p.upper[a] == Tag::Minus && !state.z[a] && !weakly_prefers_upper(a) {
            bad.push(format!("agent {a} tagged - above prefers its lower partner"));
        }
        if p.upper[a] == Tag::Plus && p.lower[a] == Tag::Plus && !weakly_prefers_upper(a) {
            bad.push(format!("agent {a} tagged + twice prefers its lower partner"));
        }
    }

    let not_u_b: Vec<bool> = inst.vertices().map(|u| inst.is_agent(u) || !p.in_u(u)).collect();
    let not_u_a: Vec<bool> = inst.vertices().map(|u| !inst.is_agent(u) || !p.in_u(u)).collect();
    if !check_witness_within(inst, m, &upper_witness(p), &not_u_b) {
        bad.push("upper tags do not certify the upper half without twin-matched jobs".into());
    }
    if !check_witness_within(inst, l, &lower_witness(p), &not_u_a) {
        bad.push("lower tags do not certify the lower half without twin-matched agents".into());
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::inst1;

    #[test]
    fn small_instance_solution() {
        let g = inst1();
        let report = solve(&g);
        let state = report.outcome.found().expect("fully popular matching exists");
        assert_eq!(state.matching, Matching::from_names(&g, &[("a0", "b1"), ("a1", "b0")]).unwrap());
        assert_eq!(state.size, 2);
        // the left-optimal start is already symmetric with no candidate
        assert!(report.trace.is_empty());
        assert_eq!(state.witness, Witness { alpha: vec![-1, 1, -1, 1] });
        assert!(report.stats.proposals <= report.stats.mirror_edges as u64);
    }

    #[test]
    fn identical_agents_have_no_solution() {
        let list: &[&str] = &["b1", "b2", "b3"];
        let jobs: &[&str] = &["a1", "a2", "a3"];
        let g = Instance::from_names(
            &["a1", "a2", "a3"],
            &["b1", "b2", "b3"],
            &[("a1", list), ("a2", list), ("a3", list), ("b1", jobs), ("b2", jobs), ("b3", jobs)],
        )
        .unwrap();
        assert!(matches!(solve(&g).outcome, SolveOutcome::NoneExists { .. }));
    }

    #[test]
    fn stable_case_needs_no_iterations() {
        let g = Instance::from_names(&["a"], &["b"], &[("a", &["b"]), ("b", &["a"])]).unwrap();
        let report = solve(&g);
        let state = report.outcome.found().unwrap();
        assert!(report.trace.is_empty());
        assert!(check_witness(&g, &state.matching, &state.witness));
        assert_eq!(state.size, 1);
    }

    #[test]
    fn trigger_orders_agree() {
        let g = inst1();
        let lowest = solve_with(&g, &SolveOptions { trigger_order: TriggerOrder::LowestId, ..SolveOptions::default() });
        let found = solve_with(&g, &SolveOptions { trigger_order: TriggerOrder::Discovery, ..SolveOptions::default() });
        assert_eq!(lowest.outcome.found().unwrap().matching, found.outcome.found().unwrap().matching);
    }
}
