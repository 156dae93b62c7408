use garbage_game::eigen::symmetric_eigenvalues;
use garbage_game::graph::erdos_renyi;
use garbage_game::{
    audit_step, cheeger_check, effective_edges, generate, is_trivial, isoperimetric_number,
    lambda2, lyapunov_record, parse_edge_list, run, step, step_via_laplacian, step_via_matrix,
    transition_matrix, GarbageState, Graph, GraphKind, Stream, Threshold,
};
use nalgebra::DVector;
use proptest::prelude::*;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, any::<u64>(), 0.0..=1.0f64).prop_map(|(n, seed, p)| {
        erdos_renyi(n, p, &mut Stream::new(seed)).expect("valid parameters")
    })
}

fn graph_and_state(max_n: usize) -> impl Strategy<Value = (Graph, GarbageState)> {
    graph(max_n).prop_flat_map(|g| {
        let n = g.order();
        (Just(g), prop::collection::vec(0.0..10.0f64, n))
            .prop_map(|(g, v)| (g, GarbageState::new(v).unwrap()))
    })
}

fn threshold() -> impl Strategy<Value = Threshold> {
    prop_oneof![
        Just(Threshold::Infinite),
        (0.05..12.0f64).prop_map(Threshold::Finite),
    ]
}

fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n, any::<u64>()).prop_map(|(n, seed)| {
        garbage_game::random_connected(n, 0.4, true, &mut Stream::new(seed)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn laplacian_annihilates_ones(g in graph(12)) {
        let l = g.laplacian();
        let ones = DVector::from_element(g.order(), 1.0);
        prop_assert!((l.clone() * &ones).iter().all(|&v| v == 0.0));
        prop_assert!((l.transpose() * ones).iter().all(|&v| v == 0.0));
        let degree_sum: usize = (1..=g.order()).map(|v| g.degree(v)).sum();
        prop_assert_eq!(degree_sum, 2 * g.edge_count());
    }

    #[test]
    fn star_implies_connected(g in graph(8)) {
        prop_assert!(!g.is_star() || g.is_connected());
    }

    #[test]
    fn render_round_trips(g in graph(15)) {
        prop_assert_eq!(parse_edge_list(&g.render()).unwrap(), g);
    }

    #[test]
    fn generation_is_deterministic(n in 1usize..15, p in 0.0..=1.0f64, seed: u64) {
        let kind = GraphKind::ErdosRenyi { order: n, p };
        prop_assert_eq!(generate(kind, seed).unwrap(), generate(kind, seed).unwrap());
    }

    #[test]
    fn step_conserves_and_contracts((g, s) in graph_and_state(12), eps in threshold()) {
        let (next, audit) = audit_step(&g, &s, eps).unwrap();
        prop_assert!(audit.conservation_error <= 1e-12 * s.len() as f64 * s.max(),
            "conservation error {}", audit.conservation_error);
        prop_assert!(next.values().iter().all(|&v| v >= 0.0));
        prop_assert!(next.min() >= s.min() && next.max() <= s.max());
        prop_assert_eq!(next.time(), s.time() + 1);
    }

    #[test]
    fn triviality_is_preserved((g, s) in graph_and_state(12), eps in threshold(), frac in 0.0..1.5f64) {
        let delta = (frac * s.spread()).max(1e-300);
        let all: Vec<usize> = (1..=g.order()).collect();
        if is_trivial(&s, &all, delta).unwrap() {
            let next = step(&g, &s, eps).unwrap();
            prop_assert!(is_trivial(&next, &all, delta).unwrap());
        }
    }

    #[test]
    fn three_step_forms_agree((g, s) in graph_and_state(12), eps in threshold()) {
        let direct = step(&g, &s, eps).unwrap();
        let a = step_via_matrix(&g, &s, eps).unwrap();
        let l = step_via_laplacian(&g, &s, eps).unwrap();
        for i in 0..g.order() {
            prop_assert!((direct.values()[i] - a[i]).abs() <= 1e-12);
            prop_assert!((direct.values()[i] - l[i]).abs() <= 1e-12);
        }
    }

    #[test]
    fn transition_matrix_is_symmetric_column_stochastic((g, s) in graph_and_state(12), eps in threshold()) {
        let a = transition_matrix(&g, &s, eps).unwrap();
        for j in 0..g.order() {
            let sum: f64 = a.column(j).iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-12);
            for i in 0..g.order() {
                prop_assert!((0.0..=1.0).contains(&a[(i, j)]));
                // active pairs dump the same share onto each other
                prop_assert_eq!(a[(i, j)], a[(j, i)]);
            }
        }
    }

    #[test]
    fn active_topology_is_consistent((g, s) in graph_and_state(12), eps in threshold()) {
        let t = effective_edges(&g, &s, eps).unwrap();
        let mut degree_sum = 0;
        for v in 1..=g.order() {
            degree_sum += t.neighbors(v).len();
            for &w in t.neighbors(v) {
                prop_assert!(g.has_edge(v, w));
                prop_assert!(t.neighbors(w).contains(&v));
            }
        }
        prop_assert_eq!(degree_sum, 2 * t.edge_count());
        for &(u, v) in t.active_edges() {
            prop_assert!(eps.admits(s.get(u) - s.get(v)));
        }
    }

    #[test]
    fn lyapunov_decrement_bound((g, s) in graph_and_state(10), eps in threshold()) {
        let rec = lyapunov_record(&g, &s, eps).unwrap();
        prop_assert!(rec.bound >= 0.0);
        prop_assert!(rec.decrement >= rec.bound - 1e-9, "{:?}", rec);
    }

    #[test]
    fn lyapunov_nonincreasing_along_runs((g, s) in graph_and_state(8), eps in threshold()) {
        let traj = run(&g, &s, eps, 60, 1e-12).unwrap();
        for w in traj.diagnostics().windows(2) {
            prop_assert!(w[1].z <= w[0].z + 1e-9);
        }
    }

    #[test]
    fn epsilon_trivial_regime_is_absorbing((g, s) in graph_and_state(10), slack in 1.0..3.0f64) {
        let eps = Threshold::Finite(s.spread().max(1e-6) * slack);
        let traj = run(&g, &s, eps, 40, 1e-12).unwrap();
        for d in traj.diagnostics() {
            prop_assert_eq!(d.active_edges, g.edge_count());
        }
    }

    #[test]
    fn large_epsilon_matches_no_threshold((g, s) in graph_and_state(10), slack in 1.0001..4.0f64) {
        let eps = Threshold::Finite(s.spread() * slack + 1e-9);
        let finite = run(&g, &s, eps, 40, 1e-12).unwrap();
        let infinite = run(&g, &s, Threshold::Infinite, 40, 1e-12).unwrap();
        prop_assert_eq!(finite.states(), infinite.states());
    }

    #[test]
    fn eigenvalue_trace_identity(g in graph(14)) {
        let values = symmetric_eigenvalues(&g.laplacian()).unwrap();
        let trace: f64 = values.iter().sum();
        prop_assert!((trace - 2.0 * g.edge_count() as f64).abs() <= 1e-8);
        prop_assert!(values[0].abs() <= 1e-10);
    }

    #[test]
    fn lambda2_of_square(g in connected_graph(10)) {
        let l = g.laplacian();
        let squared = symmetric_eigenvalues(&(&l * &l)).unwrap();
        let l2 = lambda2(&g).unwrap();
        prop_assert!((l2 * l2 - squared[1]).abs() <= 1e-8, "{} vs {}", l2 * l2, squared[1]);
    }

    #[test]
    fn cheeger_sandwich(g in connected_graph(8)) {
        let r = cheeger_check(&g).unwrap();
        prop_assert!(r.all_ok(), "{:?}", r);
        prop_assert!(r.isoperimetric >= 2.0 / g.order() as f64);
    }

    #[test]
    fn disconnected_graphs_have_zero_connectivity(g in graph(10)) {
        if g.order() >= 2 && !g.is_connected() {
            prop_assert_eq!(lambda2(&g).unwrap(), 0.0);
            prop_assert_eq!(isoperimetric_number(&g).unwrap(), 0.0);
        }
    }

    #[test]
    fn orthogonal_split_of_state(values in prop::collection::vec(0.0..10.0f64, 2..12)) {
        // x = c·1 + ĉ·u with u a unit vector orthogonal to 1
        let x = DVector::from_vec(values.clone());
        let n = values.len() as f64;
        let c = x.sum() / n;
        let residual = &x - DVector::from_element(values.len(), c);
        let c_hat = residual.norm();
        let centered: f64 = values.iter().map(|v| (v - c).powi(2)).sum();
        prop_assert!((c_hat * c_hat - centered).abs() <= 1e-10);
        if c_hat > 0.0 {
            let u = residual / c_hat;
            prop_assert!(u.sum().abs() <= 1e-10);
            prop_assert!((u.norm() - 1.0).abs() <= 1e-12);
        }
    }
}
