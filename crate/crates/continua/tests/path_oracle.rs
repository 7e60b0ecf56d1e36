//! ε-path search cross-checked against an independent reachability oracle.
//!
//! The oracle builds the boolean adjacency relation (d < ε on allowed points)
//! and closes it with Warshall's algorithm — no shared code with the BFS in
//! `continua::path`. Presence/absence of a path must agree on every tested
//! pair, and every returned witness must re-verify.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use continua::path::{eps_path, Region};
use continua::rat::{rat, Rat};
use continua::{FiniteNet, Presentation, SparsePoint};

/// A random net of 2..=30 distinct sparse points with coordinates k/16,
/// k ∈ −16..=16, over at most five axes. Distances come from the ambient sup
/// metric, so the triangle inequality holds by construction.
fn random_net(rng: &mut ChaCha8Rng) -> FiniteNet {
    let n = rng.gen_range(2..=30usize);
    let mut points: Vec<SparsePoint> = Vec::new();
    while points.len() < n {
        let mut coords: Vec<(u32, Rat)> = Vec::new();
        for axis in 0..5u32 {
            if rng.gen_bool(0.6) {
                coords.push((axis, rat(rng.gen_range(-16..=16i64), 16)));
            }
        }
        let p = SparsePoint::from_pairs(coords);
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let pres = Presentation::new("random net", points).unwrap();
    FiniteNet::from_presentation(&pres, n, 0).unwrap()
}

/// Warshall transitive closure of the ε-adjacency restricted to `allowed`.
/// Allowed points reach themselves; forbidden points reach nothing.
fn closure_oracle(net: &FiniteNet, eps: &Rat, allowed: &[bool]) -> Vec<Vec<bool>> {
    let n = net.len();
    let mut reach = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            if allowed[i] && allowed[j] && (i == j || net.dist(i, j) < *eps) {
                reach[i][j] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    reach
}

#[test]
fn eps_path_matches_transitive_closure_on_100_random_nets() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0c71);
    let mut mismatches = 0usize;
    let mut pairs_checked = 0usize;
    for _ in 0..100 {
        let net = random_net(&mut rng);
        let n = net.len();
        let eps = rat(rng.gen_range(1..=8i64), 4);

        // Unobstructed: every ordered pair.
        let open = Region::empty();
        let reach = closure_oracle(&net, &eps, &vec![true; n]);
        for x in 0..n {
            for y in 0..n {
                let found = eps_path(&net, x, y, &eps, &open).unwrap();
                if found.is_some() != reach[x][y] {
                    mismatches += 1;
                }
                if let Some(w) = found {
                    assert!(w.verify(&net, x, y, &open), "witness fails its own check");
                }
                pairs_checked += 1;
            }
        }

        // One random forbidden ball: the oracle sees the restricted adjacency.
        let region = Region::single(
            rng.gen_range(0..n),
            rat(rng.gen_range(1..=4i64), 4),
            rng.gen_bool(0.5),
        );
        let allowed: Vec<bool> = (0..n).map(|v| !region.contains(&net, v)).collect();
        let reach = closure_oracle(&net, &eps, &allowed);
        for _ in 0..20 {
            let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let found = eps_path(&net, x, y, &eps, &region).unwrap();
            if found.is_some() != reach[x][y] {
                mismatches += 1;
            }
            if let Some(w) = found {
                assert!(w.verify(&net, x, y, &region), "witness fails its own check");
            }
            pairs_checked += 1;
        }
    }
    assert_eq!(mismatches, 0, "oracle disagreement on {mismatches} of {pairs_checked} pairs");
    assert!(pairs_checked > 10_000, "sampled only {pairs_checked} pairs");
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 10, "oracle comparison took {elapsed:?}");
}

#[test]
fn witnesses_are_shortest_paths() {
    // Independent length oracle: BFS level count on the boolean adjacency.
    let mut rng = ChaCha8Rng::seed_from_u64(0x0c72);
    for _ in 0..20 {
        let net = random_net(&mut rng);
        let n = net.len();
        let eps = rat(rng.gen_range(1..=8i64), 4);
        let adj: Vec<Vec<bool>> = (0..n)
            .map(|i| (0..n).map(|j| i != j && net.dist(i, j) < eps).collect())
            .collect();
        for x in 0..n {
            // Hop counts by hand-rolled level BFS.
            let mut level = vec![usize::MAX; n];
            level[x] = 0;
            let mut frontier = vec![x];
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for &u in &frontier {
                    for v in 0..n {
                        if adj[u][v] && level[v] == usize::MAX {
                            level[v] = level[u] + 1;
                            next.push(v);
                        }
                    }
                }
                frontier = next;
            }
            for y in 0..n {
                if let Some(w) = eps_path(&net, x, y, &eps, &Region::empty()).unwrap() {
                    assert_eq!(w.points.len(), level[y] + 1, "non-shortest witness {x}→{y}");
                }
            }
        }
    }
}
