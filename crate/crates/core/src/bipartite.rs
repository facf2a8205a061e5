//! Bipartite matching kernels: Hopcroft–Karp, alternating-forest
//! reachability (for Hall violators and König certificates), and
//! minimum-cost matchings saturating one side (for edge-reuse
//! maximization).

/// Bipartite graph on `nl` left and `nr` right vertices; `adj[l]` lists
/// right neighbors of left vertex `l`, sorted.
#[derive(Clone, Debug)]
pub struct Bipartite {
    pub nl: usize,
    pub nr: usize,
    pub adj: Vec<Vec<usize>>,
}

impl Bipartite {
    pub fn new(nl: usize, nr: usize, mut adj: Vec<Vec<usize>>) -> Bipartite {
        assert_eq!(adj.len(), nl);
        for list in &mut adj {
            list.sort_unstable();
            debug_assert!(list.iter().all(|&r| r < nr));
        }
        Bipartite { nl, nr, adj }
    }
}

/// A bipartite matching as partner arrays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipMatching {
    pub left: Vec<Option<usize>>,
    pub right: Vec<Option<usize>>,
}

impl BipMatching {
    pub fn size(&self) -> usize {
        self.left.iter().filter(|p| p.is_some()).count()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.left
            .iter()
            .enumerate()
            .filter_map(|(l, p)| p.map(|r| (l, r)))
            .collect()
    }
}

/// Maximum bipartite matching via Hopcroft–Karp. Deterministic: phases
/// scan left vertices in index order over sorted adjacency.
pub fn hopcroft_karp(g: &Bipartite) -> BipMatching {
    const INF: usize = usize::MAX;
    let mut match_l = vec![None; g.nl];
    let mut match_r = vec![None; g.nr];
    let mut dist = vec![INF; g.nl];

    loop {
        // BFS layering from free left vertices.
        let mut queue = std::collections::VecDeque::new();
        for l in 0..g.nl {
            if match_l[l].is_none() {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = INF;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &g.adj[l] {
                match match_r[r] {
                    None => found = true,
                    Some(l2) if dist[l2] == INF => {
                        dist[l2] = dist[l] + 1;
                        queue.push_back(l2);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }
        // DFS augmentation along the layering.
        fn try_augment(
            l: usize,
            g: &Bipartite,
            dist: &mut [usize],
            match_l: &mut [Option<usize>],
            match_r: &mut [Option<usize>],
        ) -> bool {
            for &r in &g.adj[l] {
                let ok = match match_r[r] {
                    None => true,
                    Some(l2) => {
                        dist[l2] == dist[l] + 1 && try_augment(l2, g, dist, match_l, match_r)
                    }
                };
                if ok {
                    match_l[l] = Some(r);
                    match_r[r] = Some(l);
                    return true;
                }
            }
            dist[l] = usize::MAX;
            false
        }
        for l in 0..g.nl {
            if match_l[l].is_none() {
                try_augment(l, g, &mut dist, &mut match_l, &mut match_r);
            }
        }
    }
    BipMatching { left: match_l, right: match_r }
}

/// Left vertices reachable from `roots` by alternating paths that leave
/// the left side on non-matching edges and return on matching edges.
/// With `roots` = the unmatched left vertices of a maximum matching,
/// the result U satisfies |N(U)| = |U| - #roots < |U| (a Hall violator)
/// and N(U) is exactly the set of matched partners inside U.
pub fn alternating_reachable_left(g: &Bipartite, m: &BipMatching, roots: &[usize]) -> Vec<usize> {
    let mut seen_l = vec![false; g.nl];
    let mut seen_r = vec![false; g.nr];
    let mut stack: Vec<usize> = roots.to_vec();
    for &l in roots {
        seen_l[l] = true;
    }
    while let Some(l) = stack.pop() {
        for &r in &g.adj[l] {
            if seen_r[r] {
                continue;
            }
            seen_r[r] = true;
            if let Some(l2) = m.right[r] {
                if !seen_l[l2] {
                    seen_l[l2] = true;
                    stack.push(l2);
                }
            }
        }
    }
    (0..g.nl).filter(|&l| seen_l[l]).collect()
}

/// Minimum-cost matching saturating every left vertex, by successive
/// shortest augmenting paths (Bellman–Ford on the residual costs).
/// Returns `None` if no saturating matching exists. Ties broken
/// deterministically by vertex order.
pub fn min_cost_saturating(g: &Bipartite, cost: &dyn Fn(usize, usize) -> u64) -> Option<BipMatching> {
    const INF: u64 = u64::MAX / 4;
    let mut match_l: Vec<Option<usize>> = vec![None; g.nl];
    let mut match_r: Vec<Option<usize>> = vec![None; g.nr];

    for start in 0..g.nl {
        // Shortest alternating path from `start` to any free right vertex.
        // dist over right vertices; parent pointers to rebuild the path.
        let mut dist_r = vec![INF; g.nr];
        let mut par_r: Vec<Option<(usize, usize)>> = vec![None; g.nr]; // (left, right-pred or self marker)
        let mut dist_l = vec![INF; g.nl];
        dist_l[start] = 0;
        // Bellman-Ford style relaxation; graph is tiny.
        loop {
            let mut changed = false;
            for l in 0..g.nl {
                if dist_l[l] == INF {
                    continue;
                }
                for &r in &g.adj[l] {
                    if match_l[l] == Some(r) {
                        continue;
                    }
                    let nd = dist_l[l] + cost(l, r);
                    if nd < dist_r[r] {
                        dist_r[r] = nd;
                        par_r[r] = Some((l, r));
                        if let Some(l2) = match_r[r] {
                            // Traverse the matching edge back to the left side for free.
                            if nd < dist_l[l2] {
                                dist_l[l2] = nd;
                            }
                        }
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        // Pick the cheapest free right endpoint (lowest index on ties).
        let target = (0..g.nr)
            .filter(|&r| match_r[r].is_none() && dist_r[r] < INF)
            .min_by_key(|&r| (dist_r[r], r))?;
        // Rebuild and flip the augmenting path.
        let mut r = target;
        loop {
            let (l, _) = par_r[r].expect("path parent");
            let prev = match_l[l];
            match_l[l] = Some(r);
            match_r[r] = Some(l);
            match prev {
                Some(pr) => r = pr,
                None => break,
            }
        }
    }
    Some(BipMatching { left: match_l, right: match_r })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(nl: usize, nr: usize) -> Bipartite {
        Bipartite::new(nl, nr, vec![(0..nr).collect(); nl])
    }

    #[test]
    fn hk_complete_and_sparse() {
        let m = hopcroft_karp(&complete(3, 3));
        assert_eq!(m.size(), 3);
        let g = Bipartite::new(3, 3, vec![vec![0], vec![0], vec![1, 2]]);
        assert_eq!(hopcroft_karp(&g).size(), 2);
    }

    #[test]
    fn hk_matches_brute_force_on_small_graphs() {
        // All bipartite graphs with 3+3 vertices, compared against
        // exhaustive search over edge subsets.
        let pairs: Vec<(usize, usize)> = (0..3).flat_map(|l| (0..3).map(move |r| (l, r))).collect();
        for mask in 0u32..(1 << pairs.len()) {
            let mut adj = vec![vec![]; 3];
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            for &(l, r) in &edges {
                adj[l].push(r);
            }
            let g = Bipartite::new(3, 3, adj);
            let best = brute_force_max(&edges);
            assert_eq!(hopcroft_karp(&g).size(), best, "mask {mask}");
        }
    }

    fn brute_force_max(edges: &[(usize, usize)]) -> usize {
        let mut best = 0;
        for mask in 0u32..(1 << edges.len()) {
            let chosen: Vec<(usize, usize)> = edges
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let mut used_l = [false; 3];
            let mut used_r = [false; 3];
            let mut ok = true;
            for &(l, r) in &chosen {
                if used_l[l] || used_r[r] {
                    ok = false;
                    break;
                }
                used_l[l] = true;
                used_r[r] = true;
            }
            if ok {
                best = best.max(chosen.len());
            }
        }
        best
    }

    #[test]
    fn violator_from_unmatched_roots() {
        // Two left vertices share the single right vertex.
        let g = Bipartite::new(2, 1, vec![vec![0], vec![0]]);
        let m = hopcroft_karp(&g);
        assert_eq!(m.size(), 1);
        let free: Vec<usize> = (0..2).filter(|&l| m.left[l].is_none()).collect();
        let u = alternating_reachable_left(&g, &m, &free);
        assert_eq!(u, vec![0, 1]);
    }

    #[test]
    fn min_cost_prefers_marked_edges() {
        // Left 0 can take right 0 (cost 0) or right 1 (cost 1); left 1
        // only right 0. Saturating both forces 0->1, 1->0, total cost 1.
        let g = Bipartite::new(2, 2, vec![vec![0, 1], vec![0]]);
        let cost = |l: usize, r: usize| u64::from(!(l == 0 && r == 0)) + u64::from(l == 1 && r == 1);
        let m = min_cost_saturating(&g, &cost).unwrap();
        assert_eq!(m.left[0], Some(1));
        assert_eq!(m.left[1], Some(0));
    }

    #[test]
    fn min_cost_reports_infeasible() {
        let g = Bipartite::new(2, 1, vec![vec![0], vec![0]]);
        assert!(min_cost_saturating(&g, &|_, _| 0).is_none());
    }
}
