//! End-to-end training behavior on small graphs.

use paire::model::{forward, Trainer};
use paire::synthetic::random_graph;
use paire::*;

#[test]
fn loss_decreases_on_small_graph() {
    // roughly the size of the smallest web-page benchmarks
    let g = random_graph(183, 295, 40, 5, 3);
    let ps = enumerate_pairs(&g);
    let data = build_dataset(&g, &ps).unwrap();
    let cfg = TrainConfig { epochs: 30, batch_size: 64, ..TrainConfig::default() };
    let (_, log) = train(&data, &cfg).unwrap();
    let first = log.epochs.first().unwrap().loss_total;
    let last = log.epochs.last().unwrap().loss_total;
    assert!(last < first, "loss went from {first} to {last}");
    assert!(log.epochs.iter().all(|e| e.loss_total.is_finite()));
}

#[test]
fn same_seed_same_embeddings() {
    let g = random_graph(60, 150, 8, 3, 4);
    let cfg = TrainConfig { epochs: 3, batch_size: 32, ..TrainConfig::default() };
    let a = embed_graph(&g, &cfg).unwrap();
    let b = embed_graph(&g, &cfg).unwrap();
    assert_eq!(a.pair_emb, b.pair_emb);
    assert_eq!(a.params, b.params);
    let c = embed_graph(&g, &TrainConfig { seed: 1, ..cfg }).unwrap();
    assert_ne!(a.pair_emb, c.pair_emb);
}

#[test]
fn ego_only_weight_leaves_agg_decoder_untouched() {
    let g = random_graph(40, 80, 5, 2, 5);
    let ps = enumerate_pairs(&g);
    let data = build_dataset(&g, &ps).unwrap();
    let cfg = TrainConfig { epochs: 2, batch_size: 16, weight_ego: 1.0, ..TrainConfig::default() };
    let mut t = Trainer::new(&data, cfg).unwrap();
    let before = t.params().dec_agg.clone();
    t.run_epoch().unwrap();
    assert_eq!(t.params().dec_agg, before);
}

#[test]
fn embedding_width_is_twice_the_hidden_sum() {
    let g = random_graph(30, 50, 4, 2, 6);
    let cfg = TrainConfig { epochs: 1, ..TrainConfig::default() };
    let e = embed_graph(&g, &cfg).unwrap();
    assert_eq!(e.pair_emb.ncols(), 128);
    let data = build_dataset(&g, &e.pairs).unwrap();
    let (emb, qe, qa, _) = forward(&e.params, data.ego.row(0), data.agg.row(0)).unwrap();
    assert_eq!(emb, e.pair_emb.row(0));
    assert!((qe.sum() - 1.0).abs() < 1e-12 && (qa.sum() - 1.0).abs() < 1e-12);
}
