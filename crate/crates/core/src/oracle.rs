//! Exhaustive ground truth for small instances.
//!
//! Everything here is deliberately naive: enumerate every matching, hold every
//! pairwise election, try every labelling. Nothing in this module calls the
//! solver or the assignment machinery, so it can be used to check them.

use thiserror::Error;

use crate::instance::{Instance, Matching};
use crate::legal::EdgeSet;
use crate::popularity::Witness;
use crate::{Alpha, Vertex};

/// Environment variable overriding [`OracleConfig::max_vertices`].
pub const CAP_ENV: &str = "FULLPOP_ORACLE_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest instance enumerated.
    pub max_vertices: usize,
    /// Largest instance for labelling searches (`3^n` candidates).
    pub max_witness_vertices: usize,
    /// Also record, for every matching, whether a witness exists.
    pub with_witnesses: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_vertices: 16, max_witness_vertices: 12, with_witnesses: false }
    }
}

impl OracleConfig {
    /// Defaults, with the vertex cap taken from [`CAP_ENV`] when it parses.
    pub fn from_env() -> Self {
        let mut cfg = OracleConfig::default();
        if let Some(cap) = std::env::var(CAP_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            cfg.max_vertices = cap;
        }
        cfg
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance has {n} vertices, oracle cap is {cap}")]
    TooLarge { n: usize, cap: usize },
}

fn check_cap(n: usize, cap: usize) -> Result<(), OracleError> {
    if n > cap {
        Err(OracleError::TooLarge { n, cap })
    } else {
        Ok(())
    }
}

/// Every matching exactly once, the empty one first.
pub fn enumerate_matchings(inst: &Instance, cfg: &OracleConfig) -> Result<Vec<Matching>, OracleError> {
    check_cap(inst.n(), cfg.max_vertices)?;
    fn branch(inst: &Instance, a: Vertex, partner: &mut Vec<Vertex>, out: &mut Vec<Matching>) {
        if a == inst.num_agents() {
            out.push(Matching::from_partners(partner.clone()));
            return;
        }
        branch(inst, a + 1, partner, out);
        for &b in inst.prefs(a) {
            if partner[b] == b {
                partner[a] = b;
                partner[b] = a;
                branch(inst, a + 1, partner, out);
                partner[a] = a;
                partner[b] = b;
            }
        }
    }
    let mut out = Vec::new();
    branch(inst, 0, &mut inst.vertices().collect(), &mut out);
    Ok(out)
}

/// Exhaustive popularity facts about one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub matchings: Vec<Matching>,
    /// Flags parallel to `matchings`.
    pub popular: Vec<bool>,
    pub a_popular: Vec<bool>,
    pub fully_popular: Vec<bool>,
    pub stable: Vec<bool>,
    /// Union of popular matchings, loops included.
    pub popular_edges: EdgeSet,
    /// Whether some witness certifies each matching; only with [`OracleConfig::with_witnesses`].
    pub witness_exists: Option<Vec<bool>>,
}

impl OracleReport {
    fn sizes(&self, flags: &[bool]) -> impl Iterator<Item = usize> + '_ {
        let flags = flags.to_vec();
        self.matchings.iter().zip(flags).filter(|p| p.1).map(|(m, _)| m.size())
    }

    pub fn popular_size_range(&self) -> Option<(usize, usize)> {
        let min = self.sizes(&self.popular).min()?;
        Some((min, self.sizes(&self.popular).max()?))
    }

    pub fn max_fully_popular_size(&self) -> Option<usize> {
        self.sizes(&self.fully_popular).max()
    }

    pub fn fully_popular_matchings(&self) -> impl Iterator<Item = &Matching> {
        self.matchings.iter().zip(&self.fully_popular).filter(|p| *p.1).map(|p| p.0)
    }

    pub fn popular_matchings(&self) -> impl Iterator<Item = &Matching> {
        self.matchings.iter().zip(&self.popular).filter(|p| *p.1).map(|p| p.0)
    }

    pub fn index_of(&self, m: &Matching) -> Option<usize> {
        self.matchings.iter().position(|x| x == m)
    }
}

/// Rank of each vertex's partner, loops ranked last.
fn rank_profile(inst: &Instance, m: &Matching) -> Vec<usize> {
    inst.vertices().map(|u| inst.rank(u, m.partner(u)).expect("partner is adjacent")).collect()
}

/// Whether `m` (profile `p`) never loses to any other profile, counting votes of `voters` only.
fn undefeated(p: &[usize], all: &[Vec<usize>], voters: std::ops::Range<Vertex>) -> bool {
    all.iter().all(|q| {
        let (mut for_m, mut for_n) = (0usize, 0usize);
        for u in voters.clone() {
            match p[u].cmp(&q[u]) {
                std::cmp::Ordering::Less => for_m += 1,
                std::cmp::Ordering::Greater => for_n += 1,
                std::cmp::Ordering::Equal => {}
            }
        }
        for_m >= for_n
    })
}

fn is_blocked(inst: &Instance, p: &[usize]) -> bool {
    inst.edges().iter().enumerate().any(|(e, &(a, b))| {
        let (ra, rb) = inst.edge_ranks(e);
        ra < p[a] && rb < p[b]
    })
}

pub fn ground_truth(inst: &Instance, cfg: &OracleConfig) -> Result<OracleReport, OracleError> {
    let matchings = enumerate_matchings(inst, cfg)?;
    let profiles: Vec<Vec<usize>> = matchings.iter().map(|m| rank_profile(inst, m)).collect();
    let popular: Vec<bool> = profiles.iter().map(|p| undefeated(p, &profiles, inst.vertices())).collect();
    let a_popular: Vec<bool> = profiles.iter().map(|p| undefeated(p, &profiles, inst.agents())).collect();
    let fully_popular = popular.iter().zip(&a_popular).map(|(&x, &y)| x && y).collect();
    let stable = profiles.iter().map(|p| !is_blocked(inst, p)).collect();

    let mut popular_edges = EdgeSet::empty(inst);
    for (m, _) in matchings.iter().zip(&popular).filter(|p| *p.1) {
        for e in m.edge_ids(inst) {
            popular_edges.edges[e] = true;
        }
        for u in inst.vertices().filter(|&u| !m.is_matched(u)) {
            popular_edges.loops[u] = true;
        }
    }

    let witness_exists = if cfg.with_witnesses {
        check_cap(inst.n(), cfg.max_witness_vertices)?;
        Some(matchings.iter().map(|m| search(inst, m, true).into_iter().next().is_some()).collect())
    } else {
        None
    };
    Ok(OracleReport { matchings, popular, a_popular, fully_popular, stable, popular_edges, witness_exists })
}

/// Edges and loops of the popular matchings.
pub fn popular_edge_union(inst: &Instance, cfg: &OracleConfig) -> Result<EdgeSet, OracleError> {
    Ok(ground_truth(inst, cfg)?.popular_edges)
}

/// Weight of an augmented edge, recomputed from ranks alone.
fn weights(inst: &Instance, m: &Matching) -> (Vec<i32>, Vec<i32>) {
    let p = rank_profile(inst, m);
    let vote = |u: Vertex, r: usize| match r.cmp(&p[u]) {
        std::cmp::Ordering::Less => 1,
        std::cmp::Ordering::Greater => -1,
        std::cmp::Ordering::Equal => 0,
    };
    let edge = (0..inst.m())
        .map(|e| {
            let (a, b) = inst.edge(e);
            let (ra, rb) = inst.edge_ranks(e);
            vote(a, ra) + vote(b, rb)
        })
        .collect();
    let lone = inst.vertices().map(|u| vote(u, inst.degree(u))).collect();
    (edge, lone)
}

/// Depth-first search over labellings in vertex order, pruning on every
/// constraint whose vertices are all labelled and on the reachable sum.
fn search(inst: &Instance, m: &Matching, first_only: bool) -> Vec<Witness> {
    let (edge_wt, loop_wt) = weights(inst, m);
    let n = inst.n();
    // edges checked once both endpoints are labelled, i.e. at the later endpoint
    let mut closing: Vec<Vec<(Vertex, i32)>> = vec![Vec::new(); n];
    for (e, &(a, b)) in inst.edges().iter().enumerate() {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        closing[hi].push((lo, edge_wt[e]));
    }
    struct Ctx<'a> {
        closing: &'a [Vec<(Vertex, i32)>],
        loop_wt: &'a [i32],
        alpha: Vec<Alpha>,
        out: Vec<Witness>,
        first_only: bool,
    }
    fn go(ctx: &mut Ctx<'_>, u: usize, sum: i32) {
        let n = ctx.alpha.len();
        if ctx.first_only && !ctx.out.is_empty() {
            return;
        }
        if u == n {
            if sum == 0 {
                ctx.out.push(Witness { alpha: ctx.alpha.clone() });
            }
            return;
        }
        if sum.unsigned_abs() as usize > n - u {
            return;
        }
        for x in [-1i8, 0, 1] {
            if (x as i32) < ctx.loop_wt[u] {
                continue;
            }
            let ok = ctx.closing[u].iter().all(|&(v, w)| (x + ctx.alpha[v]) as i32 >= w);
            if ok {
                ctx.alpha[u] = x;
                go(ctx, u + 1, sum + x as i32);
            }
        }
        ctx.alpha[u] = 0;
    }
    let mut ctx = Ctx { closing: &closing, loop_wt: &loop_wt, alpha: vec![0; n], out: Vec::new(), first_only };
    go(&mut ctx, 0, 0);
    ctx.out
}

/// Some witness of `m`, found by exhaustive search.
pub fn witness_search(inst: &Instance, m: &Matching) -> Result<Option<Witness>, OracleError> {
    check_cap(inst.n(), OracleConfig::default().max_witness_vertices)?;
    Ok(search(inst, m, true).into_iter().next())
}

/// Every witness of `m`, in lexicographic order of `(α_0, α_1, ...)` over `-1 < 0 < 1`.
pub fn all_witnesses(inst: &Instance, m: &Matching) -> Result<Vec<Witness>, OracleError> {
    check_cap(inst.n(), OracleConfig::default().max_witness_vertices)?;
    Ok(search(inst, m, false))
}

/// Agent-popularity by the one-sided definition alone (no characterization).
pub fn is_a_popular_by_election(inst: &Instance, m: &Matching, cfg: &OracleConfig) -> Result<bool, OracleError> {
    let all: Vec<Vec<usize>> = enumerate_matchings(inst, cfg)?.iter().map(|x| rank_profile(inst, x)).collect();
    Ok(undefeated(&rank_profile(inst, m), &all, inst.agents()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::inst1;

    #[test]
    fn counts_matchings() {
        let cfg = OracleConfig::default();
        assert_eq!(enumerate_matchings(&inst1(), &cfg).unwrap().len(), 5);
        let pair = Instance::from_names(&["a"], &["b"], &[("a", &["b"]), ("b", &["a"])]).unwrap();
        assert_eq!(enumerate_matchings(&pair, &cfg).unwrap().len(), 2);
        let lonely = Instance::from_names(&[], &["b"], &[]).unwrap();
        assert_eq!(enumerate_matchings(&lonely, &cfg).unwrap().len(), 1);
        let tiny = OracleConfig { max_vertices: 3, ..cfg };
        assert_eq!(enumerate_matchings(&inst1(), &tiny), Err(OracleError::TooLarge { n: 4, cap: 3 }));
    }

    #[test]
    fn small_instance_ground_truth() {
        let g = inst1();
        let r = ground_truth(&g, &OracleConfig { with_witnesses: true, ..OracleConfig::default() }).unwrap();
        let s = Matching::from_names(&g, &[("a1", "b1")]).unwrap();
        let mmax = Matching::from_names(&g, &[("a0", "b1"), ("a1", "b0")]).unwrap();
        let fully: Vec<&Matching> = r.fully_popular_matchings().collect();
        assert_eq!(fully.len(), 2);
        assert!(fully.contains(&&s) && fully.contains(&&mmax));
        assert_eq!(r.max_fully_popular_size(), Some(2));
        assert_eq!(r.witness_exists.as_ref().unwrap(), &r.popular);

        assert!(witness_search(&g, &s).unwrap().is_some());
        assert!(all_witnesses(&g, &s).unwrap().contains(&Witness::zeros(4)));
        assert!(witness_search(&g, &mmax).unwrap().is_some());
        let lone = Matching::from_names(&g, &[("a0", "b1")]).unwrap();
        assert_eq!(witness_search(&g, &lone).unwrap(), None);
    }
}
