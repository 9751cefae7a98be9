//! Randomized properties over generated instances.

use fullpop::engine::{propose_dispose, Engine, ProposalSystem, Status};
use fullpop::generate::{generate, GeneratorParams};
use fullpop::legal::{classify_with, PopularBackend};
use fullpop::mirror::{build_mirror, embed_stable, project, realize_witnessed, tag_sum, Half};
use fullpop::oracle::{all_witnesses, enumerate_matchings, ground_truth, OracleConfig};
use fullpop::popularity::Certificate;
use fullpop::stable::{agent_optimal, g_system, job_optimal};
use fullpop::{
    check_a_popular, check_witness, compute_posts, parse_instance, parse_matching, run_election, solve, verify_popular,
    wt_total, Instance, Matching, Side, SolveOutcome,
};
use proptest::prelude::*;
use proptest::sample::Index;

fn params(max_side: usize) -> impl Strategy<Value = GeneratorParams> {
    (1..=max_side, 1..=max_side, prop::sample::select(vec![0.3, 0.5, 0.7, 1.0]), any::<u64>())
        .prop_map(|(agents, jobs, density, seed)| GeneratorParams { agents, jobs, density, seed })
}

fn instance(max_side: usize) -> impl Strategy<Value = Instance> {
    params(max_side).prop_map(|p| generate(&p).expect("parameters are feasible"))
}

fn pick(g: &Instance, i: &Index) -> Matching {
    let all = enumerate_matchings(g, &OracleConfig::default()).unwrap();
    all[i.index(all.len())].clone()
}

/// Same system with left vertices relabelled by `perm`, so they start proposing in another order.
fn relabel_left(sys: &ProposalSystem, perm: &[usize]) -> ProposalSystem {
    let mut b = ProposalSystem::builder(sys.n_left(), sys.n_right());
    for (l, &to) in perm.iter().enumerate() {
        for (rank, &e) in sys.left_list(l).iter().enumerate() {
            let id = b.add_edge(to, sys.endpoints(e).1, rank as u32, sys.right_rank(e));
            if sys.is_forbidden(e) {
                b.forbid(id);
            }
        }
        b.may_stay_single(to, sys.may_stay_single(l));
    }
    b.build()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn elections_are_antisymmetric(g in instance(4), i in any::<Index>(), j in any::<Index>()) {
        let (m, n) = (pick(&g, &i), pick(&g, &j));
        let e = run_election(&g, &m, &n);
        prop_assert_eq!(e, run_election(&g, &n, &m).reversed());
        prop_assert!(e.phi_mn + e.phi_nm <= g.n() as _);
        prop_assert!(e.phi_a_mn + e.phi_a_nm <= g.num_agents() as _);
        prop_assert_eq!(wt_total(&g, &m, &n), e.phi_nm as i32 - e.phi_mn as i32);
    }

    #[test]
    fn witnesses_are_tight_on_matched_pairs(g in instance(4), i in any::<Index>()) {
        let m = pick(&g, &i);
        let v = verify_popular(&g, &m);
        match v.certificate {
            Certificate::Witness(w) => {
                prop_assert!(v.popular && check_witness(&g, &m, &w));
                for u in g.vertices() {
                    prop_assert_eq!(w.get(u) + w.get(m.partner(u)), if m.is_matched(u) { 0 } else { 2 * w.get(u) });
                    if !m.is_matched(u) {
                        prop_assert_eq!(w.get(u), 0);
                    }
                }
            }
            Certificate::Counterexample(n) => {
                prop_assert!(!v.popular);
                prop_assert!(wt_total(&g, &m, &n) > 0);
            }
        }
    }

    #[test]
    fn posts_are_well_formed(g in instance(5)) {
        let p = compute_posts(&g);
        prop_assert_eq!(&p, &compute_posts(&g));
        for a in g.agents() {
            prop_assert_eq!(p.f[a], g.prefs(a)[0]);
            let s = p.s[a];
            prop_assert!(s == a || (g.rank(a, s).is_some() && !p.is_top[s]));
            // nothing non-top is skipped on the way down to s
            let cut = if s == a { g.degree(a) } else { g.rank(a, s).unwrap() };
            prop_assert!(g.prefs(a)[..cut].iter().all(|&b| p.is_top[b]));
        }
    }

    #[test]
    fn engine_output_is_stable_and_deterministic(g in instance(6), side in prop::bool::ANY) {
        let sys = g_system(&g, if side { Side::Agent } else { Side::Job });
        let mut first = Engine::new(&sys);
        prop_assert_eq!(first.run(), Status::Stable);
        let m = first.matching();
        prop_assert!(sys.blocking_edges(&m).is_empty());
        let mut again = Engine::new(&sys);
        again.run();
        prop_assert_eq!(again.matching(), m);
        prop_assert_eq!((again.proposals(), again.rejections()), (first.proposals(), first.rejections()));
    }

    #[test]
    fn resuming_equals_restarting(g in instance(6), order in prop::collection::vec(any::<Index>(), 1..8)) {
        let sys = g_system(&g, Side::Agent);
        let mut engine = Engine::new(&sys);
        engine.run();
        let mut fresh = sys.clone();
        for idx in order {
            let e = idx.index(sys.num_edges());
            fresh.forbid(e);
            let status = engine.resume_after_forbid(&[e]);
            let expected = propose_dispose(&fresh);
            prop_assert_eq!(status == Status::Stable, expected.matching().is_some());
            if let Some(m) = expected.matching() {
                prop_assert_eq!(&engine.matching(), m);
                prop_assert!(fresh.blocking_edges(m).is_empty());
                prop_assert!(m.edges().all(|e| !fresh.is_forbidden(e)));
            } else {
                break;
            }
            prop_assert!(engine.proposals() <= sys.num_edges() as u64);
        }
    }

    #[test]
    fn mirror_stable_size_ignores_proposal_order(g in instance(4), perm_seed in any::<u64>()) {
        let h = build_mirror(&g, &classify_with(&g, PopularBackend::Fast));
        let sys = h.system();
        let mut perm: Vec<usize> = (0..sys.n_left()).collect();
        let mut x = perm_seed;
        for k in (1..perm.len()).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(k, (x >> 33) as usize % (k + 1));
        }
        let base = propose_dispose(sys);
        let permuted = propose_dispose(&relabel_left(sys, &perm));
        prop_assert_eq!(base.matching().map(|m| m.size()), permuted.matching().map(|m| m.size()));
        if let Some(m) = base.matching() {
            prop_assert!(h.is_perfect(m));
        }
    }

    #[test]
    fn realizations_round_trip(g in instance(3), i in any::<Index>()) {
        let truth = ground_truth(&g, &OracleConfig::default()).unwrap();
        let popular: Vec<&Matching> = truth.popular_matchings().collect();
        let n = popular[i.index(popular.len())];
        let h = build_mirror(&g, &classify_with(&g, PopularBackend::Fast));
        for w in all_witnesses(&g, n).unwrap() {
            let r = realize_witnessed(&h, &g, n, &w).unwrap();
            prop_assert!(h.is_stable(&r));
            for u in g.vertices() {
                prop_assert_eq!(tag_sum(&h, &r, u), 2 * w.get(u));
            }
            prop_assert_eq!(&project(&h, &g, &r, Half::Upper), n);
            prop_assert_eq!(&project(&h, &g, &r, Half::Lower), n);
        }
    }

    #[test]
    fn stable_matchings_embed_and_are_popular(g in instance(5)) {
        let h = build_mirror(&g, &classify_with(&g, PopularBackend::Fast));
        for s in [agent_optimal(&g), job_optimal(&g)] {
            prop_assert!(verify_popular(&g, &s).popular);
            let e = embed_stable(&h, &g, &s).unwrap();
            prop_assert!(h.is_stable(&e));
            prop_assert_eq!(&project(&h, &g, &e, Half::Upper), &s);
        }
        prop_assert_eq!(agent_optimal(&g).size(), job_optimal(&g).size());
    }

    #[test]
    fn components_partition_the_vertices(g in instance(6)) {
        let c = classify_with(&g, PopularBackend::Fast);
        let mut seen = vec![0; g.n()];
        for (k, members) in c.members.iter().enumerate() {
            prop_assert!(members.windows(2).all(|w| w[0] < w[1]));
            for &u in members {
                prop_assert_eq!(c.component[u], k);
                seen[u] += 1;
            }
        }
        prop_assert!(seen.iter().all(|&x| x == 1));
        for e in (0..g.m()).filter(|&e| c.popular.edges[e]) {
            let (a, b) = g.edge(e);
            prop_assert_eq!(c.component[a], c.component[b]);
        }
    }

    #[test]
    fn solver_output_is_certified(g in instance(6)) {
        let report = solve(&g);
        match &report.outcome {
            SolveOutcome::Found(state) => {
                prop_assert!(check_a_popular(&g, &compute_posts(&g), &state.matching));
                prop_assert!(check_witness(&g, &state.matching, &state.witness));
                prop_assert_eq!(state.size, state.matching.size());
            }
            SolveOutcome::NoneExists { .. } => prop_assert_eq!(&solve(&g).outcome, &report.outcome),
        }
        prop_assert!(report.trace.len() <= g.n());
        prop_assert!(report.stats.proposals <= report.stats.mirror_edges as u64);
    }

    #[test]
    fn generator_is_reproducible(p in params(8)) {
        let g = generate(&p).unwrap();
        prop_assert_eq!(g.to_text(), generate(&p).unwrap().to_text());
        prop_assert!(g.agents().all(|a| g.degree(a) > 0));
        let back = parse_instance(&g.to_text()).unwrap();
        prop_assert_eq!(back.to_text(), g.to_text());
    }

    #[test]
    fn matchings_round_trip_through_text(g in instance(4), i in any::<Index>()) {
        let m = pick(&g, &i);
        prop_assert_eq!(parse_matching(&g, &m.to_text(&g)).unwrap(), m);
    }
}
