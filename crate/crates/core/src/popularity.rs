//! Popularity via edge weights relative to a matching.
//!
//! Relative to a matching `M`, an edge weighs the sum of its endpoints' votes
//! for each other over their `M`-partners, and a self-loop weighs its vertex's
//! vote for being alone. The weight of another matching `N` is then exactly its
//! election margin over `M`, so `M` is popular iff the max-weight perfect
//! matching of the loop-augmented graph weighs zero. Dual solutions of that
//! problem are the `{0, ±1}` witnesses checked by [`check_witness`].

use crate::assignment::max_weight_assignment;
use crate::instance::{vote, Instance, Matching, Posts};
use crate::oracle;
use crate::{Alpha, EdgeId, Vertex, Weight};

/// An edge of the loop-augmented graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeOrLoop {
    Edge(EdgeId),
    Loop(Vertex),
}

fn vote_against(inst: &Instance, m: &Matching, u: Vertex, v: Vertex) -> Weight {
    vote(inst, u, v, m.partner(u)).expect("partners and neighbours are comparable") as Weight
}

/// Weight of an augmented edge relative to `m`: `+2` blocking, `-2` if both ends prefer their
/// partners, `0` otherwise; a loop is `0` when in `m`, else `-1`.
pub fn edge_weight(inst: &Instance, m: &Matching, e: EdgeOrLoop) -> Weight {
    match e {
        EdgeOrLoop::Edge(e) => {
            let (a, b) = inst.edge(e);
            vote_against(inst, m, a, b) + vote_against(inst, m, b, a)
        }
        EdgeOrLoop::Loop(u) => vote_against(inst, m, u, u),
    }
}

/// Weight of `n` relative to `m`, i.e. `n`'s election margin over `m`.
pub fn wt_total(inst: &Instance, m: &Matching, n: &Matching) -> Weight {
    inst.vertices()
        .map(|u| {
            let v = n.partner(u);
            if v == u {
                edge_weight(inst, m, EdgeOrLoop::Loop(u))
            } else if u < v {
                edge_weight(inst, m, EdgeOrLoop::Edge(inst.edge_between(u, v).expect("edge")))
            } else {
                0
            }
        })
        .sum()
}

/// A vertex labelling in `{-1, 0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Witness {
    pub alpha: Vec<Alpha>,
}

impl Witness {
    pub fn zeros(n: usize) -> Self {
        Witness { alpha: vec![0; n] }
    }

    pub fn get(&self, u: Vertex) -> Alpha {
        self.alpha[u]
    }

    pub fn sum(&self) -> i64 {
        self.alpha.iter().map(|&x| x as i64).sum()
    }
}

/// Whether `w` certifies `m` popular: entries in `{0, ±1}`, zero sum, and every
/// augmented edge covered (`α_a + α_b >= wt(a, b)`, `α_u >= wt(u, u)`).
pub fn check_witness(inst: &Instance, m: &Matching, w: &Witness) -> bool {
    check_witness_within(inst, m, w, &vec![true; inst.n()])
}

/// [`check_witness`] on the subinstance induced by `keep`.
///
/// Kept vertices whose partner is dropped count as unmatched, and entries of
/// dropped vertices are ignored.
pub fn check_witness_within(inst: &Instance, m: &Matching, w: &Witness, keep: &[bool]) -> bool {
    if w.alpha.len() != inst.n() || w.alpha.iter().any(|x| !(-1..=1).contains(x)) {
        return false;
    }
    let restricted = Matching::from_partners(
        inst.vertices().map(|u| if keep[u] && keep[m.partner(u)] { m.partner(u) } else { u }).collect(),
    );
    let sum: i64 = inst.vertices().filter(|&u| keep[u]).map(|u| w.alpha[u] as i64).sum();
    if sum != 0 {
        return false;
    }
    let loops_ok = inst
        .vertices()
        .filter(|&u| keep[u])
        .all(|u| w.alpha[u] as Weight >= edge_weight(inst, &restricted, EdgeOrLoop::Loop(u)));
    let edges_ok = (0..inst.m()).all(|e| {
        let (a, b) = inst.edge(e);
        !(keep[a] && keep[b])
            || (w.alpha[a] + w.alpha[b]) as Weight >= edge_weight(inst, &restricted, EdgeOrLoop::Edge(e))
    });
    loops_ok && edges_ok
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Dual certificate of popularity.
    Witness(Witness),
    /// A matching that beats the verified one, by the largest possible margin.
    Counterexample(Matching),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopularityVerdict {
    pub popular: bool,
    pub certificate: Certificate,
    /// Max weight of any matching relative to the verified one (its worst election margin).
    pub optimum: Weight,
    /// The dual did not normalize and the witness came from exhaustive search.
    pub fallback: bool,
}

/// Largest `n` for which a failed dual normalization falls back to exhaustive search.
const FALLBACK_MAX_VERTICES: usize = 12;

/// Decides popularity of `m` with a max-weight perfect matching over the augmented graph.
///
/// Rows are agents then one dummy per job, columns are jobs then one dummy per
/// agent. Agent `a` reaches its dummy with its loop weight, job `b`'s dummy
/// reaches `b` with `b`'s loop weight, and the two dummy blocks meet with
/// weight zero. Folding the duals of `a` with `ā` and of `b̄` with `b` yields a
/// feasible, optimal vertex labelling of the augmented problem.
///
/// Panics if `m` fails [`Matching::validate`] for `inst`.
pub fn verify_popular(inst: &Instance, m: &Matching) -> PopularityVerdict {
    m.validate(inst).expect("matching belongs to the instance");
    let na = inst.num_agents();
    let nb = inst.num_jobs();
    let n = inst.n();
    let weight = |i: usize, j: usize| -> Option<Weight> {
        match (i < na, j < nb) {
            (true, true) => inst.edge_between(i, na + j).map(|e| edge_weight(inst, m, EdgeOrLoop::Edge(e))),
            (true, false) => (j - nb == i).then(|| edge_weight(inst, m, EdgeOrLoop::Loop(i))),
            (false, true) => (i - na == j).then(|| edge_weight(inst, m, EdgeOrLoop::Loop(na + j))),
            (false, false) => Some(0),
        }
    };
    let sol = max_weight_assignment(n, n, weight).expect("all-loops assignment always exists");
    let optimum = sol.total;

    if optimum > 0 {
        let mut partner: Vec<Vertex> = inst.vertices().collect();
        for a in 0..na {
            let j = sol.row_to_col[a];
            if j < nb {
                partner[a] = na + j;
                partner[na + j] = a;
            }
        }
        return PopularityVerdict {
            popular: false,
            certificate: Certificate::Counterexample(Matching::from_partners(partner)),
            optimum,
            fallback: false,
        };
    }

    let y: Vec<Weight> = inst
        .vertices()
        .map(|u| {
            if u < na {
                sol.row_potential[u] + sol.col_potential[nb + u]
            } else {
                sol.row_potential[u] + sol.col_potential[u - na]
            }
        })
        .collect();
    let normalized = y
        .iter()
        .map(|&x| Alpha::try_from(x).ok().filter(|v| (-1..=1).contains(v)))
        .collect::<Option<Vec<Alpha>>>()
        .map(|alpha| Witness { alpha })
        .filter(|w| check_witness(inst, m, w));
    match normalized {
        Some(w) => PopularityVerdict { popular: true, certificate: Certificate::Witness(w), optimum, fallback: false },
        None => {
            assert!(n <= FALLBACK_MAX_VERTICES, "dual normalization failed on a popular matching with {n} vertices");
            let w = oracle::witness_search(inst, m).ok().flatten().expect("popular matching has a witness");
            PopularityVerdict { popular: true, certificate: Certificate::Witness(w), optimum, fallback: true }
        }
    }
}

/// Whether `m` is popular when only agents vote.
///
/// Exactly the matchings that use only edges `(a, f(a))` and `(a, s(a))`,
/// match every agent (alone only when `s(a) = a`), and match every job that is
/// someone's top choice.
pub fn check_a_popular(inst: &Instance, posts: &Posts, m: &Matching) -> bool {
    let agents_ok = inst.agents().all(|a| {
        let p = m.partner(a);
        p == posts.f[a] || p == posts.s[a]
    });
    let tops_ok = inst.jobs().filter(|&b| posts.is_top[b]).all(|b| m.is_matched(b));
    agents_ok && tops_ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::inst1;
    use crate::instance::{compute_posts, run_election};
    use crate::stable::agent_optimal;

    fn mmax(g: &Instance) -> Matching {
        Matching::from_names(g, &[("a0", "b1"), ("a1", "b0")]).unwrap()
    }

    #[test]
    fn weights_on_small_instance() {
        let g = inst1();
        let s = agent_optimal(&g);
        let e = |u, v| EdgeOrLoop::Edge(g.edge_between(u, v).unwrap());
        assert_eq!(edge_weight(&g, &s, e(1, 2)), 0);
        assert_eq!(edge_weight(&g, &s, e(1, 3)), 0);
        assert_eq!(edge_weight(&g, &mmax(&g), e(1, 3)), 2);
        assert_eq!(edge_weight(&g, &s, EdgeOrLoop::Loop(0)), 0);
        assert_eq!(edge_weight(&g, &s, EdgeOrLoop::Loop(1)), -1);
        assert_eq!(wt_total(&g, &s, &s), 0);
        assert_eq!(wt_total(&g, &s, &mmax(&g)), 0);
        let el = run_election(&g, &s, &mmax(&g));
        assert_eq!(wt_total(&g, &s, &mmax(&g)), el.phi_nm as Weight - el.phi_mn as Weight);
    }

    #[test]
    fn verifies_popular_and_unpopular() {
        let g = inst1();
        let s = agent_optimal(&g);
        assert!(check_witness(&g, &s, &Witness::zeros(4)));

        let v = verify_popular(&g, &mmax(&g));
        assert!(v.popular && !v.fallback);
        let Certificate::Witness(w) = &v.certificate else { panic!("expected a witness") };
        assert!(check_witness(&g, &mmax(&g), w));
        assert!(!check_witness(&g, &mmax(&g), &Witness::zeros(4)));
        let hand = Witness { alpha: vec![-1, 1, -1, 1] };
        assert!(check_witness(&g, &mmax(&g), &hand));

        let lone = Matching::from_names(&g, &[("a0", "b1")]).unwrap();
        let v = verify_popular(&g, &lone);
        assert!(!v.popular && v.optimum > 0);
        let Certificate::Counterexample(n) = &v.certificate else { panic!("expected a counterexample") };
        assert_eq!(wt_total(&g, &lone, n), v.optimum);
    }

    #[test]
    fn one_sided_popularity() {
        let g = inst1();
        let posts = compute_posts(&g);
        assert!(check_a_popular(&g, &posts, &mmax(&g)));
        assert!(check_a_popular(&g, &posts, &Matching::from_names(&g, &[("a1", "b1")]).unwrap()));
        assert!(!check_a_popular(&g, &posts, &Matching::from_names(&g, &[("a1", "b0")]).unwrap()));
    }
}
