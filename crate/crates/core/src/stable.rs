//! Stable matchings of an instance: the two extreme ones, stable vertices,
//! stable pairs and blocking-edge scans.

use crate::engine::{propose_dispose, EngineMatching, ProposalSystem};
use crate::instance::{Instance, Matching, Side};
use crate::{EdgeId, Vertex};

/// The instance as a proposal system. Edge ids coincide with the instance's,
/// and every proposer may stay single.
pub fn g_system(inst: &Instance, proposing: Side) -> ProposalSystem {
    let na = inst.num_agents();
    let mut b = match proposing {
        Side::Agent => ProposalSystem::builder(na, inst.num_jobs()),
        Side::Job => ProposalSystem::builder(inst.num_jobs(), na),
    };
    for (e, &(a, j)) in inst.edges().iter().enumerate() {
        let (ra, rj) = inst.edge_ranks(e);
        match proposing {
            Side::Agent => b.add_edge(a, j - na, ra as u32, rj as u32),
            Side::Job => b.add_edge(j - na, a, rj as u32, ra as u32),
        };
    }
    b.build()
}

/// Reads an engine matching over a [`g_system`] back into the instance.
pub fn to_matching(inst: &Instance, m: &EngineMatching) -> Matching {
    let pairs: Vec<_> = m.edges().map(|e| inst.edge(e)).collect();
    Matching::from_pairs(inst, &pairs).expect("engine matching uses instance edges")
}

fn extreme(inst: &Instance, proposing: Side) -> Matching {
    let out = propose_dispose(&g_system(inst, proposing));
    to_matching(inst, out.matching().expect("no forbidden edges, so always stable"))
}

/// The agent-optimal stable matching.
pub fn agent_optimal(inst: &Instance) -> Matching {
    extreme(inst, Side::Agent)
}

/// The job-optimal stable matching.
pub fn job_optimal(inst: &Instance) -> Matching {
    extreme(inst, Side::Job)
}

/// `mask[u]`: `u` is matched in every stable matching (and so in all of them).
pub fn stable_mask(inst: &Instance) -> Vec<bool> {
    let s = agent_optimal(inst);
    inst.vertices().map(|u| s.is_matched(u)).collect()
}

/// Vertices matched in the stable matchings, ascending.
pub fn stable_vertices(inst: &Instance) -> Vec<Vertex> {
    let mask = stable_mask(inst);
    inst.vertices().filter(|&u| mask[u]).collect()
}

/// Whether edge `e` belongs to some stable matching.
///
/// Drops every edge the job of `e` ranks below its agent, then checks that the
/// agent-proposing run pairs them. `O(m)` per call; [`stable_pairs`] answers all
/// edges at once.
pub fn is_stable_pair(inst: &Instance, e: EdgeId) -> bool {
    let (a, job) = inst.edge(e);
    let (_, cutoff) = inst.edge_ranks(e);
    let na = inst.num_agents();
    let mut b = ProposalSystem::builder(na, inst.num_jobs());
    let mut target = None;
    for (f, &(x, y)) in inst.edges().iter().enumerate() {
        let (rx, ry) = inst.edge_ranks(f);
        if y == job && ry > cutoff {
            continue;
        }
        let id = b.add_edge(x, y - na, rx as u32, ry as u32);
        if f == e {
            target = Some(id);
        }
    }
    let sys = b.build();
    let out = propose_dispose(&sys);
    let m = out.matching().expect("no forbidden edges");
    m.left[a] == target
}

/// Genuine edges whose endpoints both strictly prefer each other to their partners.
pub fn blocking_edges(inst: &Instance, m: &Matching) -> Vec<EdgeId> {
    (0..inst.m())
        .filter(|&e| {
            let (a, b) = inst.edge(e);
            m.partner(a) != b && inst.prefers(a, b, m.partner(a)) && inst.prefers(b, a, m.partner(b))
        })
        .collect()
}

pub fn is_stable(inst: &Instance, m: &Matching) -> bool {
    blocking_edges(inst, m).is_empty()
}

/// `pairs[e]`: edge `e` lies in some stable matching.
///
/// Walks one maximal chain of the stable lattice from the agent-optimal to the
/// job-optimal matching, exposing and eliminating one rotation at a time. Every
/// stable pair is either in the agent-optimal matching or created by some
/// rotation, and every rotation is eliminated on any maximal chain, so the
/// union of the visited matchings is exactly the set of stable pairs. Each
/// agent's scan pointer only moves forward, giving `O(n + m)` overall.
pub fn stable_pairs(inst: &Instance) -> Vec<bool> {
    let m0 = agent_optimal(inst);
    let mz = job_optimal(inst);
    let mut pairs = vec![false; inst.m()];
    for e in m0.edge_ids(inst) {
        pairs[e] = true;
    }

    let mut partner: Vec<Vertex> = m0.partners().to_vec();
    let rank = |u: Vertex, v: Vertex| inst.rank(u, v).expect("adjacent");
    // next candidate position in each agent's list; everything before M0(a) is dead
    let mut ptr: Vec<usize> =
        inst.agents().map(|a| if m0.is_matched(a) { rank(a, partner[a]) + 1 } else { 0 }).collect();

    // the job an agent would move to next, if any
    let next_job = |a: Vertex, ptr: &mut [usize], partner: &[Vertex]| -> Option<Vertex> {
        let list = inst.prefs(a);
        while let Some(&w) = list.get(ptr[a]) {
            let held = partner[w];
            let ok = held != w && inst.prefers(w, a, held) && !inst.prefers(w, a, mz.partner(w));
            if ok {
                return Some(w);
            }
            ptr[a] += 1;
        }
        None
    };

    let mut on_stack = vec![false; inst.num_agents()];
    let mut stack: Vec<Vertex> = Vec::new();
    let mut scan = 0;
    loop {
        if stack.is_empty() {
            while scan < inst.num_agents() && partner[scan] == mz.partner(scan) {
                scan += 1;
            }
            if scan == inst.num_agents() {
                break;
            }
            stack.push(scan);
            on_stack[scan] = true;
        }
        let top = *stack.last().expect("non-empty");
        let w = next_job(top, &mut ptr, &partner).expect("agent above its job-optimal partner has a successor");
        let succ = partner[w];
        if !on_stack[succ] {
            stack.push(succ);
            on_stack[succ] = true;
            continue;
        }
        let start = stack.iter().rposition(|&x| x == succ).expect("on stack");
        let rotation: Vec<Vertex> = stack.drain(start..).collect();
        let moves: Vec<(Vertex, Vertex)> = rotation
            .iter()
            .map(|&x| (x, next_job(x, &mut ptr, &partner).expect("rotation member has a successor")))
            .collect();
        for &(x, w) in &moves {
            on_stack[x] = false;
            partner[x] = w;
            partner[w] = x;
            pairs[inst.edge_between(x, w).expect("edge")] = true;
        }
    }
    debug_assert!(inst.vertices().all(|u| partner[u] == mz.partner(u)));
    pairs
}
