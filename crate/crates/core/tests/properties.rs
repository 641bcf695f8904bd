//! Structural invariants over randomly generated graphs and inputs.

mod common;

use common::*;
use ndarray::{Array1, Array2};
use paire::eval::{roc_auc, split_indices};
use paire::model::{backward, forward_batch, kl_loss, softmax_rows, total_loss, TaskWeights};
use paire::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn pair_count_follows_edge_count(raw in raw_graph(20, 3)) {
        let g = raw.build();
        let ps = enumerate_pairs(&g);
        let loops = g.edges().iter().filter(|(u, v)| u == v).count();
        let per_edge = if g.is_directed() { 1 } else { 2 };
        prop_assert_eq!(ps.len(), per_edge * (g.n_edges() - loops));
        for (id, &(u, v)) in ps.pairs().iter().enumerate() {
            prop_assert!(g.neighbors(u).unwrap().contains(&v));
            prop_assert_eq!(ps.id_of(u, v), Some(id));
        }
    }

    #[test]
    fn pair_neighborhood_excludes_itself(raw in raw_graph(20, 2)) {
        let g = raw.build();
        let ps = enumerate_pairs(&g);
        for &(u, v) in ps.pairs() {
            let nb = pair_neighborhood(&g, &ps, (u, v)).unwrap();
            for id in nb {
                let q = ps.get(id);
                prop_assert!(q != (u, v) && q != (v, u));
                prop_assert!(q.0 == u || q.0 == v);
            }
        }
    }

    #[test]
    fn pair_rows_are_distributions(raw in raw_graph(20, 2)) {
        let g = raw.build();
        let ps = enumerate_pairs(&g);
        let t = build_dataset(&g, &ps).unwrap();
        prop_assert_eq!(t.width(), 2 * g.feature_dim());
        for m in [&t.ego, &t.agg] {
            for row in m.rows() {
                prop_assert!((row.sum() - 1.0).abs() < 1e-9);
                prop_assert!(row.iter().all(|&x| x > 0.0));
            }
        }
    }

    #[test]
    fn reversed_pair_swaps_ego_halves(raw in raw_graph(20, 2)) {
        let mut raw = raw;
        raw.directed = false;
        let g = raw.build();
        let d = g.feature_dim();
        for &(u, v) in g.edges() {
            if u == v {
                continue;
            }
            let a = ego_features(&g, (u, v));
            let b = ego_features(&g, (v, u));
            for j in 0..d {
                prop_assert_eq!(a[j], b[d + j]);
                prop_assert_eq!(a[d + j], b[j]);
            }
        }
    }

    #[test]
    fn softmax_rows_sum_to_one(vals in prop::collection::vec(-50.0f64..50.0, 1..40)) {
        let n = vals.len();
        let q = softmax_rows(Array2::from_shape_vec((1, n), vals).unwrap());
        prop_assert!((q.sum() - 1.0).abs() < 1e-12);
        prop_assert!(q.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn kl_is_nonnegative(
        p in prop::collection::vec(0.0f64..1.0, 2..20),
        seed in any::<u64>(),
    ) {
        let total: f64 = p.iter().sum();
        prop_assume!(total > 1e-6);
        let p: Array1<f64> = p.iter().map(|x| x / total).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_distribution(&mut rng, p.len());
        prop_assert!(kl_loss(p.view(), q.view()) >= -1e-12);
        prop_assert!(kl_loss(p.view(), p.view()).abs() < 1e-12);
    }

    #[test]
    fn gradients_agree_with_finite_differences(
        f in 2usize..=8,
        h1 in 1usize..=4,
        h2 in 1usize..=4,
        w in 0.0f64..=1.0,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = ModelParams::init(f, h1, h2, seed);
        let xe = (0..2).flat_map(|_| random_distribution(&mut rng, f).to_vec()).collect::<Vec<_>>();
        let xa = (0..2).flat_map(|_| random_distribution(&mut rng, f).to_vec()).collect::<Vec<_>>();
        let xe = Array2::from_shape_vec((2, f), xe).unwrap();
        let xa = Array2::from_shape_vec((2, f), xa).unwrap();
        let tw = TaskWeights::from_ego(w);
        let cache = forward_batch(&p, xe.view(), xa.view()).unwrap();
        let g = backward(&p, &cache, xe.view(), xa.view(), tw);
        let step = 1e-5;
        for t in 0..p.tensors().len() {
            for k in 0..p.tensors()[t].len() {
                let mut hi = p.clone();
                hi.tensors_mut()[t][k] += step;
                let mut lo = p.clone();
                lo.tensors_mut()[t][k] -= step;
                let num = (total_loss(&hi, xe.view(), xa.view(), tw).unwrap()
                    - total_loss(&lo, xe.view(), xa.view(), tw).unwrap()) / (2.0 * step);
                let ana = g.tensors()[t][k];
                let rel = (ana - num).abs() / ana.abs().max(num.abs()).max(1e-6);
                prop_assert!(rel < 1e-4, "tensor {} entry {}: {} vs {}", t, k, ana, num);
            }
        }
    }

    #[test]
    fn translators_ignore_pair_order(raw in raw_graph(15, 2), seed in any::<u64>()) {
        let g = raw.build();
        let ps = enumerate_pairs(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pe = Array2::from_shape_fn((ps.len(), 3), |_| rng.random_range(-2.0..2.0));
        // rebuild the pair set from shuffled edges and carry each row along
        let mut order: Vec<usize> = (0..g.n_edges()).collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        let shuffled_edges: Vec<(usize, usize)> = order.iter().map(|&i| g.edges()[i]).collect();
        let g2 = Graph::new(g.n_nodes(), shuffled_edges, g.features().clone(), None, None, g.is_directed()).unwrap();
        let ps2 = enumerate_pairs(&g2);
        let pe2 = Array2::from_shape_fn((ps2.len(), 3), |(i, j)| {
            let (u, v) = ps2.get(i);
            pe[[ps.id_of(u, v).unwrap(), j]]
        });
        for t in [Translator::Sum, Translator::Mean, Translator::Max, Translator::Min] {
            let a = pairs_to_nodes(pe.view(), &ps, t).unwrap();
            let b = pairs_to_nodes(pe2.view(), &ps2, t).unwrap();
            for (x, y) in a.iter().zip(b.iter()) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }
        let sum = pairs_to_nodes(pe.view(), &ps, Translator::Sum).unwrap();
        let mean = pairs_to_nodes(pe.view(), &ps, Translator::Mean).unwrap();
        for u in 0..g.n_nodes() {
            let deg = ps.out_pairs(u).len() as f64;
            for j in 0..3 {
                prop_assert!((sum[[u, j]] - deg * mean[[u, j]]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn assortativity_ignores_relabeling(raw in raw_graph(20, 4), shift in 1usize..4) {
        let g = raw.build();
        let col = &label_columns(g.node_labels().unwrap())[0];
        let k = col.n_classes;
        let relabeled = LabelColumn {
            name: col.name.clone(),
            values: col.values.iter().map(|&c| (c + shift) % k).collect(),
            n_classes: k,
        };
        let (Ok(m1), Ok(m2)) = (
            mixing_matrix(&g, col, Scope::Node, None),
            mixing_matrix(&g, &relabeled, Scope::Node, None),
        ) else {
            return Ok(());
        };
        prop_assert!((m1.e.sum() - 1.0).abs() < 1e-12);
        match (global_assortativity(&m1), global_assortativity(&m2)) {
            (Ok(a), Ok(b)) => {
                prop_assert!((a - b).abs() < 1e-12);
                prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&a));
            }
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "defined for one labeling only"),
        }
        for u in 0..g.n_nodes() {
            if let Ok(v) = local_node_assortativity(&g, col, u) {
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }
    }

    #[test]
    fn auc_ignores_monotone_transforms(
        scores in prop::collection::vec(-5.0f64..5.0, 4..60),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut labels: Vec<bool> = scores.iter().map(|_| rng.random()).collect();
        labels[0] = true;
        labels[1] = false;
        let a = roc_auc(&scores, &labels).unwrap();
        let warped: Vec<f64> = scores.iter().map(|s| (0.7 * s).exp() + 3.0).collect();
        let b = roc_auc(&warped, &labels).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn splits_are_disjoint_and_cover(n in 2usize..300, ratio in 0.05f64..0.95, seed in any::<u64>(), rep in 0usize..5) {
        let (train, test) = split_indices(n, ratio, seed, rep);
        let mut all: Vec<usize> = train.iter().chain(&test).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        prop_assert_eq!(split_indices(n, ratio, seed, rep), (train, test));
    }
}
