mod common;

use graphon::builtin;
use graphon::connectivity::{
    block_distance_matrix, connectivity_report, support_graph, STEP_EPSILON,
};
use graphon::{
    diameter, is_connected, laplacian_kernel_dim, Graphon, Hops, KernelDim, StepGraphon,
};
use nalgebra::DMatrix;
use std::collections::VecDeque;

// Queue-based BFS on a dense 0/1 pattern.
fn bfs_oracle(pattern: &DMatrix<bool>, s: usize) -> Vec<Option<u32>> {
    let n = pattern.nrows();
    let mut dist = vec![None; n];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for v in 0..n {
            if pattern[(u, v)] && dist[v].is_none() {
                dist[v] = Some(dist[u].unwrap() + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

// Every pair of blocks (including a block with itself) joined by a walk of
// length between 1 and n.
fn bounded_reachability(w: &StepGraphon) -> bool {
    let n = w.len();
    let mut reach = DMatrix::<f64>::zeros(n, n);
    for m in 1..=n.max(2) {
        reach += w.comp_power(m).unwrap().blocks();
    }
    reach.iter().all(|v| *v > 0.0)
}

#[test]
fn examples() {
    let b: Graphon = builtin::bipartite().into();
    let report = connectivity_report(&b, STEP_EPSILON);
    assert!(report.connected);
    assert_eq!(report.diameter, Hops::Finite(2));
    assert!(!report.approximate);

    let er: Graphon = builtin::erdos_renyi(0.5).unwrap().into();
    assert_eq!(diameter(&er), Hops::Finite(1));

    let split: Graphon = StepGraphon::from_rows(
        vec![1.0 / 3.0, 2.0 / 3.0],
        &[vec![1.0, 0.0], vec![0.0, 1.0]],
    )
    .unwrap()
    .into();
    assert!(!is_connected(&split));

    let c6: Graphon = builtin::cycle(6).unwrap().into();
    assert_eq!(diameter(&c6), Hops::Finite(3));
}

#[test]
fn square_of_bipartite_is_disconnected() {
    let b = builtin::bipartite();
    assert!(is_connected(&b.clone().into()));
    let b2: Graphon = b.comp_power(2).unwrap().into();
    assert!(!is_connected(&b2));
    let b3: Graphon = b.comp_power(3).unwrap().into();
    assert!(is_connected(&b3));
}

#[test]
fn odd_cycle_powers_stay_connected() {
    let c5 = builtin::cycle(5).unwrap();
    for m in 1..=6 {
        assert!(is_connected(&c5.comp_power(m).unwrap().into()), "m = {m}");
    }
}

#[test]
fn walk_distances_match_queue_bfs() {
    let mut rng = common::rng(21);
    for _ in 0..100 {
        let n = rand::Rng::random_range(&mut rng, 1..=12);
        let w = common::random_step(&mut rng, n, 0.6);
        let pattern = w.blocks().map(|v| v > STEP_EPSILON);
        let d = block_distance_matrix(&support_graph(&w.clone().into(), STEP_EPSILON));
        for i in 0..n {
            let oracle = bfs_oracle(&pattern, i);
            for (j, hops) in oracle.iter().enumerate() {
                if i != j {
                    assert_eq!(d.get(i, j), Hops::from(*hops));
                }
            }
            let expected = if pattern[(i, i)] {
                Hops::Finite(1)
            } else if (0..n).any(|k| k != i && pattern[(i, k)]) {
                Hops::Finite(2)
            } else {
                Hops::Unreachable
            };
            assert_eq!(d.get(i, i), expected);
        }
    }
}

#[test]
fn characterizations_agree() {
    let mut rng = common::rng(22);
    let mut seen = [0usize; 2];
    for _ in 0..200 {
        let n = rand::Rng::random_range(&mut rng, 1..=12);
        let w = common::random_step(&mut rng, n, 0.75);
        let support = is_connected(&w.clone().into());
        let reach = bounded_reachability(&w);
        let kernel = laplacian_kernel_dim(&w, 1e-9) == KernelDim::Finite(1);
        assert_eq!(support, reach, "{w:?}");
        assert_eq!(support, kernel, "{w:?}");
        seen[support as usize] += 1;
    }
    assert!(seen[0] > 10 && seen[1] > 10, "{seen:?}");
}

#[test]
fn circular_band_grid() {
    for (tau, expected) in [(1.0 / 7.0, 4), (0.25, 2), (0.1, 5)] {
        let w: Graphon = builtin::circular_band(tau, 700).unwrap().into();
        assert!(is_connected(&w));
        assert_eq!(diameter(&w), Hops::Finite(expected), "tau = {tau}");
    }
}
