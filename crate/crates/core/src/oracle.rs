//! Exact small-instance oracles: minimum-branch-vertex spanning trees
//! (exhaustive enumeration and branch-and-bound over degree budgets),
//! exhaustive star-2-matching enumeration, the matrix-tree spanning
//! tree count, and the degree-condition sweep.

use thiserror::Error;

use crate::enumerate::connected_graphs_up_to_iso;
use crate::generators::gen_random_mindeg;
use crate::graph::Graph;
use crate::stars::{Star, StarTwoMatching};
use crate::tree::SpanningTree;

pub const EXHAUSTIVE_MAX_N: usize = 10;
pub const BRANCH_AND_BOUND_MAX_N: usize = 40;
pub const STAR_ENUM_MAX_N: usize = 10;
pub const SWEEP_MAX_N: usize = 9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("n = {n} exceeds the {what} cap of {cap}")]
    TooLarge { n: usize, cap: usize, what: &'static str },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Exact minimum number of branch vertices.
    Exact(usize),
    /// Every spanning tree has more than this many branch vertices
    /// (early exit under a limit).
    GreaterThan(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exhaustive,
    BranchAndBound,
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub outcome: Outcome,
    pub witness: Option<SpanningTree>,
    pub explored: u64,
    pub method: Method,
}

/// Exact minimum branch count. With `limit = Some(k)` the search may
/// stop at `GreaterThan(k)`; an `Exact` answer is always the true
/// minimum. Dispatches to branch-and-bound; the exhaustive enumerator
/// is exposed separately for cross-checks.
pub fn min_branch_tree(g: &Graph, limit: Option<usize>) -> Result<OracleResult, OracleError> {
    min_branch_tree_bb(g, limit)
}

// ---------------------------------------------------------------------------
// Exhaustive spanning tree enumeration
// ---------------------------------------------------------------------------

/// Visits every spanning tree exactly once (include/exclude recursion
/// over the lexicographic edge order with a connectivity prune).
pub fn for_each_spanning_tree<F: FnMut(&[(usize, usize)])>(g: &Graph, mut f: F) -> u64 {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    if n == 1 {
        f(&[]);
        return 1;
    }
    if !g.is_connected() {
        return 0;
    }
    let edges = g.edges();
    let mut chosen: Vec<(usize, usize)> = Vec::with_capacity(n - 1);
    let mut parent: Vec<usize> = (0..n).collect();
    let mut count = 0u64;
    rec_trees(&edges, 0, n, &mut chosen, &mut parent, &mut f, &mut count);
    count
}

fn find_root(parent: &[usize], mut v: usize) -> usize {
    while parent[v] != v {
        v = parent[v];
    }
    v
}

fn connects(edges: &[(usize, usize)], from: usize, chosen: &[(usize, usize)], n: usize) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    let mut comps = n;
    let union = |parent: &mut Vec<usize>, u: usize, v: usize, comps: &mut usize| {
        let (ru, rv) = (find_root(parent, u), find_root(parent, v));
        if ru != rv {
            parent[ru] = rv;
            *comps -= 1;
        }
    };
    for &(u, v) in chosen {
        union(&mut parent, u, v, &mut comps);
    }
    for &(u, v) in &edges[from..] {
        union(&mut parent, u, v, &mut comps);
    }
    comps == 1
}

fn rec_trees<F: FnMut(&[(usize, usize)])>(
    edges: &[(usize, usize)],
    i: usize,
    n: usize,
    chosen: &mut Vec<(usize, usize)>,
    parent: &mut Vec<usize>,
    f: &mut F,
    count: &mut u64,
) {
    if chosen.len() == n - 1 {
        *count += 1;
        f(chosen);
        return;
    }
    if i == edges.len() {
        return;
    }
    let (u, v) = edges[i];
    let (ru, rv) = (find_root(parent, u), find_root(parent, v));
    if ru != rv {
        // Include.
        parent[ru] = rv;
        chosen.push((u, v));
        rec_trees(edges, i + 1, n, chosen, parent, f, count);
        chosen.pop();
        parent[ru] = ru;
    }
    // Exclude, if the remainder can still connect everything.
    if connects(edges, i + 1, chosen, n) {
        rec_trees(edges, i + 1, n, chosen, parent, f, count);
    }
}

/// Exhaustive minimum: enumerates all spanning trees (n <= 10) and
/// keeps the lexicographically least optimal witness.
pub fn min_branch_tree_exhaustive(g: &Graph) -> Result<OracleResult, OracleError> {
    let n = g.n();
    if n > EXHAUSTIVE_MAX_N {
        return Err(OracleError::TooLarge { n, cap: EXHAUSTIVE_MAX_N, what: "exhaustive" });
    }
    if !g.is_connected() {
        return Err(OracleError::Disconnected);
    }
    let mut best: Option<(usize, Vec<(usize, usize)>)> = None;
    let explored = for_each_spanning_tree(g, |edges| {
        let mut deg = vec![0usize; n];
        for &(u, v) in edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        let branches = deg.iter().filter(|&&d| d >= 3).count();
        let key = (branches, edges.to_vec());
        if best.as_ref().map_or(true, |b| key < *b) {
            best = Some(key);
        }
    });
    let (min, edges) = best.expect("connected graph has a spanning tree");
    let witness = SpanningTree::new(g, edges).expect("enumerated tree is valid");
    debug_assert_eq!(witness.branch_count(), min);
    Ok(OracleResult {
        outcome: Outcome::Exact(min),
        witness: Some(witness),
        explored,
        method: Method::Exhaustive,
    })
}

/// Spanning tree count by the matrix-tree theorem: integer determinant
/// of the reduced Laplacian via fraction-free (Bareiss) elimination.
pub fn spanning_tree_count(g: &Graph) -> i128 {
    let n = g.n();
    if n <= 1 {
        return 1;
    }
    let k = n - 1;
    let mut m = vec![vec![0i128; k]; k];
    for v in 1..n {
        m[v - 1][v - 1] = g.degree(v) as i128;
    }
    for (u, v) in g.edges() {
        if u >= 1 && v >= 1 {
            m[u - 1][v - 1] -= 1;
            m[v - 1][u - 1] -= 1;
        }
    }
    // Bareiss elimination.
    let mut sign = 1i128;
    let mut prev = 1i128;
    for col in 0..k {
        if m[col][col] == 0 {
            let swap = (col + 1..k).find(|&r| m[r][col] != 0);
            match swap {
                Some(r) => {
                    m.swap(col, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for r in col + 1..k {
            for c in col + 1..k {
                m[r][c] = (m[r][c] * m[col][col] - m[r][col] * m[col][c]) / prev;
            }
            m[r][col] = 0;
        }
        prev = m[col][col];
    }
    sign * m[k - 1][k - 1]
}

// ---------------------------------------------------------------------------
// Branch and bound over degree budgets
// ---------------------------------------------------------------------------

/// Branch-and-bound minimum: for increasing budgets b, pick b vertices
/// allowed unbounded tree-degree (only vertices of graph degree >= 3
/// can ever be branch vertices) and search for a spanning tree in which
/// every other vertex has tree-degree at most 2.
pub fn min_branch_tree_bb(g: &Graph, limit: Option<usize>) -> Result<OracleResult, OracleError> {
    let n = g.n();
    if n > BRANCH_AND_BOUND_MAX_N {
        return Err(OracleError::TooLarge { n, cap: BRANCH_AND_BOUND_MAX_N, what: "branch-and-bound" });
    }
    if !g.is_connected() {
        return Err(OracleError::Disconnected);
    }
    let candidates: Vec<usize> = (0..n).filter(|&v| g.degree(v) >= 3).collect();
    let mut explored = 0u64;
    let top = limit.map_or(candidates.len(), |k| k.min(candidates.len()));
    for b in 0..=top {
        let mut subset: Vec<usize> = Vec::with_capacity(b);
        if let Some(edges) = try_budgets(g, &candidates, b, 0, &mut subset, &mut explored) {
            let witness = SpanningTree::new(g, edges).expect("search returns a valid tree");
            // A tree with fewer branch vertices would have been found at
            // a smaller budget, so the first success is the minimum.
            debug_assert_eq!(witness.branch_count(), b);
            return Ok(OracleResult {
                outcome: Outcome::Exact(b),
                witness: Some(witness),
                explored,
                method: Method::BranchAndBound,
            });
        }
    }
    match limit {
        Some(k) if k < candidates.len() => Ok(OracleResult {
            outcome: Outcome::GreaterThan(k),
            witness: None,
            explored,
            method: Method::BranchAndBound,
        }),
        _ => unreachable!("a connected graph has a spanning tree once all high-degree vertices are unbounded"),
    }
}

fn try_budgets(
    g: &Graph,
    candidates: &[usize],
    b: usize,
    from: usize,
    subset: &mut Vec<usize>,
    explored: &mut u64,
) -> Option<Vec<(usize, usize)>> {
    if subset.len() == b {
        let mut caps = vec![2usize; g.n()];
        for &v in subset.iter() {
            caps[v] = g.n();
        }
        return degree_capped_spanning_tree(g, &caps, explored);
    }
    for idx in from..candidates.len() {
        subset.push(candidates[idx]);
        if let Some(t) = try_budgets(g, candidates, b, idx + 1, subset, explored) {
            subset.pop();
            return Some(t);
        }
        subset.pop();
    }
    None
}

/// Spanning tree with per-vertex degree caps, by include/exclude search
/// on the lexicographically least available edge out of the most
/// constrained component. Returns the tree edges if one exists.
pub fn degree_capped_spanning_tree(
    g: &Graph,
    caps: &[usize],
    explored: &mut u64,
) -> Option<Vec<(usize, usize)>> {
    let n = g.n();
    if n <= 1 {
        return Some(vec![]);
    }
    let edges = g.edges();
    let mut state = CapSearch {
        n,
        edges,
        caps: caps.to_vec(),
        deg: vec![0; n],
        parent: (0..n).collect(),
        excluded: vec![],
        chosen: vec![],
    };
    state.excluded = vec![false; state.edges.len()];
    if search_capped(&mut state, explored) {
        Some(state.chosen)
    } else {
        None
    }
}

struct CapSearch {
    n: usize,
    edges: Vec<(usize, usize)>,
    caps: Vec<usize>,
    deg: Vec<usize>,
    parent: Vec<usize>,
    excluded: Vec<bool>,
    chosen: Vec<(usize, usize)>,
}

impl CapSearch {
    fn root(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    fn available(&self, i: usize) -> bool {
        let (u, v) = self.edges[i];
        !self.excluded[i]
            && self.deg[u] < self.caps[u]
            && self.deg[v] < self.caps[v]
            && self.root(u) != self.root(v)
    }
}

fn search_capped(st: &mut CapSearch, explored: &mut u64) -> bool {
    *explored += 1;
    if st.chosen.len() == st.n - 1 {
        return true;
    }
    // Connectivity over available edges, and per-component available
    // edge counts.
    let mut comp_root = vec![usize::MAX; st.n];
    let mut parent2: Vec<usize> = (0..st.n).map(|v| st.root(v)).collect();
    let find2 = |parent2: &mut Vec<usize>, mut v: usize| {
        while parent2[v] != v {
            v = parent2[v];
        }
        v
    };
    let avail: Vec<usize> = (0..st.edges.len()).filter(|&i| st.available(i)).collect();
    for &i in &avail {
        let (u, v) = st.edges[i];
        let (ru, rv) = (find2(&mut parent2, u), find2(&mut parent2, v));
        if ru != rv {
            parent2[ru] = rv;
        }
    }
    let r0 = find2(&mut parent2, 0);
    for v in 0..st.n {
        comp_root[v] = find2(&mut parent2, v);
        if comp_root[v] != r0 {
            return false; // some vertex cannot be reached any more
        }
    }
    // Most constrained current component: fewest available outgoing edges.
    let mut per_comp: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for &i in &avail {
        let (u, v) = st.edges[i];
        let (ru, rv) = (st.root(u), st.root(v));
        per_comp.entry(ru).or_default().push(i);
        per_comp.entry(rv).or_default().push(i);
    }
    // Every unfinished component must have an available outgoing edge;
    // roots not in per_comp have none.
    let comp_count = {
        let mut roots = std::collections::BTreeSet::new();
        for v in 0..st.n {
            roots.insert(st.root(v));
        }
        if roots.iter().any(|r| !per_comp.contains_key(r)) {
            return false;
        }
        roots.len()
    };
    debug_assert!(comp_count > 1);
    let (_, edge_list) = per_comp
        .iter()
        .min_by_key(|(root, list)| (list.len(), **root))
        .expect("at least one component");
    let branch_edge = *edge_list.iter().min().expect("nonempty");

    // Include.
    {
        let (u, v) = st.edges[branch_edge];
        let (ru, rv) = (st.root(u), st.root(v));
        st.parent[ru] = rv;
        st.deg[u] += 1;
        st.deg[v] += 1;
        st.chosen.push((u, v));
        if search_capped(st, explored) {
            return true;
        }
        st.chosen.pop();
        st.deg[u] -= 1;
        st.deg[v] -= 1;
        st.parent[ru] = ru;
    }
    // Exclude.
    st.excluded[branch_edge] = true;
    let ok = search_capped(st, explored);
    st.excluded[branch_edge] = false;
    ok
}

// ---------------------------------------------------------------------------
// Exhaustive star-2-matching enumeration
// ---------------------------------------------------------------------------

/// All (spanning) t-star-2-matchings with t <= s, canonically ordered.
/// Components are enumerated at their minimum vertex, so each structure
/// appears exactly once. Capped at n <= 10.
pub fn enumerate_star_two_matchings(
    g: &Graph,
    s: usize,
    spanning: bool,
) -> Result<Vec<StarTwoMatching>, OracleError> {
    if g.n() > STAR_ENUM_MAX_N {
        return Err(OracleError::TooLarge { n: g.n(), cap: STAR_ENUM_MAX_N, what: "star enumeration" });
    }
    let mut out = Vec::new();
    let mut decided = vec![false; g.n()];
    let mut current = StarTwoMatching::default();
    enum_rec(g, s, spanning, &mut decided, &mut current, &mut |sm| {
        out.push(sm.clone());
        true
    });
    out.sort_by_key(|sm| sm.canonical_key());
    Ok(out)
}

/// Early-exit existence test for a spanning t-star-2-matching with
/// t <= s: the same recursion as the enumerator, stopped at the first
/// hit.
pub fn has_spanning_star_two_matching(g: &Graph, s: usize) -> Result<bool, OracleError> {
    if g.n() > STAR_ENUM_MAX_N {
        return Err(OracleError::TooLarge { n: g.n(), cap: STAR_ENUM_MAX_N, what: "star enumeration" });
    }
    let mut decided = vec![false; g.n()];
    let mut current = StarTwoMatching::default();
    let mut found = false;
    enum_rec(g, s, true, &mut decided, &mut current, &mut |_| {
        found = true;
        false
    });
    Ok(found)
}

/// Recursive component enumeration; `visit` returns false to stop.
/// The return value is false once the search should unwind.
fn enum_rec(
    g: &Graph,
    s: usize,
    spanning: bool,
    decided: &mut Vec<bool>,
    current: &mut StarTwoMatching,
    visit: &mut dyn FnMut(&StarTwoMatching) -> bool,
) -> bool {
    let v = match (0..g.n()).find(|&v| !decided[v]) {
        Some(v) => v,
        None => return visit(current),
    };
    decided[v] = true;
    let mut go = true;

    // Leave v uncovered (only when not required to span).
    if !spanning {
        go = enum_rec(g, s, spanning, decided, current, visit);
    }

    let free_nbrs: Vec<usize> = g.neighbors(v).iter().copied().filter(|&u| !decided[u]).collect();

    // A single edge (v, u).
    for &u in &free_nbrs {
        if !go {
            break;
        }
        decided[u] = true;
        current.pairs.push((v, u));
        go = enum_rec(g, s, spanning, decided, current, visit);
        current.pairs.pop();
        decided[u] = false;
    }

    // An odd cycle with minimum vertex v; direction fixed by
    // second < last.
    if go {
        let mut path = vec![v];
        go = enum_cycles(g, s, spanning, decided, current, visit, &mut path);
    }

    // A star centered at v: any >= 2 free neighbors as leaves.
    if go && current.stars.len() < s && free_nbrs.len() >= 2 {
        for mask in 1u32..(1 << free_nbrs.len()) {
            if mask.count_ones() < 2 {
                continue;
            }
            if !go {
                break;
            }
            let leaves: Vec<usize> = free_nbrs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &u)| u)
                .collect();
            for &l in &leaves {
                decided[l] = true;
            }
            current.stars.push(Star { center: v, leaves: leaves.clone() });
            go = enum_rec(g, s, spanning, decided, current, visit);
            current.stars.pop();
            for &l in &leaves {
                decided[l] = false;
            }
        }
    }

    // A star in which v is a leaf: center u, extra leaves from N(u).
    if go && current.stars.len() < s {
        for &u in &free_nbrs {
            if !go {
                break;
            }
            decided[u] = true;
            let extra: Vec<usize> =
                g.neighbors(u).iter().copied().filter(|&w| !decided[w]).collect();
            for mask in 1u32..(1 << extra.len()) {
                if !go {
                    break;
                }
                let others: Vec<usize> = extra
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &w)| w)
                    .collect();
                let mut leaves = vec![v];
                leaves.extend(others.iter().copied());
                for &w in &others {
                    decided[w] = true;
                }
                current.stars.push(Star { center: u, leaves });
                go = enum_rec(g, s, spanning, decided, current, visit);
                current.stars.pop();
                for &w in &others {
                    decided[w] = false;
                }
            }
            decided[u] = false;
        }
    }

    decided[v] = false;
    go
}

fn enum_cycles(
    g: &Graph,
    s: usize,
    spanning: bool,
    decided: &mut Vec<bool>,
    current: &mut StarTwoMatching,
    visit: &mut dyn FnMut(&StarTwoMatching) -> bool,
    path: &mut Vec<usize>,
) -> bool {
    let last = *path.last().unwrap();
    let v0 = path[0];
    let mut go = true;
    // Close the cycle: odd length >= 3, canonical direction.
    if path.len() >= 3 && path.len() % 2 == 1 && g.has_edge(last, v0) && path[1] < last {
        current.odd_cycles.push(path.clone());
        go = enum_rec(g, s, spanning, decided, current, visit);
        current.odd_cycles.pop();
    }
    if path.len() >= g.n() {
        return go;
    }
    for &u in g.neighbors(last) {
        if !go {
            break;
        }
        if !decided[u] {
            decided[u] = true;
            path.push(u);
            go = enum_cycles(g, s, spanning, decided, current, visit, path);
            path.pop();
            decided[u] = false;
        }
    }
    go
}

// ---------------------------------------------------------------------------
// Conjecture sweep
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sample {
    Exhaustive,
    Random { count: u32, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureReport {
    pub s: usize,
    pub n_max: usize,
    pub sample: String,
    /// (n, number of hypothesis-satisfying graphs checked).
    pub per_n: Vec<(usize, u64)>,
    pub checked: u64,
    /// Canonical edge lists of violating graphs (expected empty).
    pub counterexamples: Vec<String>,
}

/// Minimum degree demanded by the conjecture hypothesis.
pub fn conjecture_min_degree(n: usize, s: usize) -> usize {
    if n <= s {
        0
    } else {
        (n - s).div_ceil(s + 3)
    }
}

/// Checks that every sampled connected graph with
/// delta(G) >= ceil((n-s)/(s+3)) has a spanning tree with at most s
/// branch vertices. Exhaustive mode runs over all connected graphs up
/// to isomorphism for each n <= n_max (n_max <= 9); random mode draws
/// `count` seeded instances per n.
pub fn check_conjecture(n_max: usize, s: usize, sample: Sample) -> Result<ConjectureReport, OracleError> {
    let mut report = ConjectureReport {
        s,
        n_max,
        sample: match sample {
            Sample::Exhaustive => "exhaustive".into(),
            Sample::Random { count, seed } => format!("random(count={count}, seed={seed})"),
        },
        per_n: Vec::new(),
        checked: 0,
        counterexamples: Vec::new(),
    };
    match sample {
        Sample::Exhaustive => {
            if n_max > SWEEP_MAX_N {
                return Err(OracleError::TooLarge { n: n_max, cap: SWEEP_MAX_N, what: "exhaustive sweep" });
            }
            for n in 1..=n_max {
                let need = conjecture_min_degree(n, s);
                let mut count = 0u64;
                for g in connected_graphs_up_to_iso(n) {
                    if g.min_degree() < need {
                        continue;
                    }
                    count += 1;
                    check_single(&g, s, &mut report)?;
                }
                report.per_n.push((n, count));
                report.checked += count;
            }
        }
        Sample::Random { count, seed } => {
            for n in 2..=n_max {
                let need = conjecture_min_degree(n, s);
                let mut done = 0u64;
                for i in 0..count {
                    let instance_seed = seed
                        .wrapping_mul(0x9e3779b97f4a7c15)
                        .wrapping_add((n as u64) << 32)
                        .wrapping_add(i as u64);
                    let g = gen_random_mindeg(n, need, instance_seed)
                        .expect("hypothesis degree is feasible");
                    done += 1;
                    check_single(&g, s, &mut report)?;
                }
                report.per_n.push((n, done));
                report.checked += done;
            }
        }
    }
    Ok(report)
}

fn check_single(g: &Graph, s: usize, report: &mut ConjectureReport) -> Result<(), OracleError> {
    let res = min_branch_tree_bb(g, Some(s))?;
    match res.outcome {
        Outcome::Exact(b) if b <= s => Ok(()),
        _ => {
            report.counterexamples.push(g.to_edge_list());
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_extremal, EndGadget};
    use crate::stars::validate_star_two_matching;

    #[test]
    fn exhaustive_p6_and_star() {
        let r = min_branch_tree_exhaustive(&Graph::path(6)).unwrap();
        assert_eq!(r.outcome, Outcome::Exact(0));
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let r = min_branch_tree_exhaustive(&star).unwrap();
        assert_eq!(r.outcome, Outcome::Exact(1));
        assert_eq!(r.explored, 1, "K_{{1,4}} has a unique spanning tree");
    }

    #[test]
    fn exhaustive_extremal_s1_m3_is_two() {
        let g = gen_extremal(1, 3, (EndGadget::H1, EndGadget::H1)).unwrap();
        let r = min_branch_tree_exhaustive(&g).unwrap();
        assert_eq!(r.outcome, Outcome::Exact(2));
    }

    #[test]
    fn tree_count_matches_matrix_tree() {
        // Cayley: K_n has n^(n-2) spanning trees.
        for n in 2..7 {
            let g = Graph::complete(n);
            let count = for_each_spanning_tree(&g, |_| {});
            assert_eq!(count as i128, (n as i128).pow(n as u32 - 2));
            assert_eq!(spanning_tree_count(&g), count as i128);
        }
        let pet = crate::graph::petersen();
        assert_eq!(spanning_tree_count(&pet), 2000);
        assert_eq!(for_each_spanning_tree(&pet, |_| {}), 2000);
    }

    /// The enumerator and the matrix-tree determinant must agree on
    /// random graphs with n <= 8 (the determinant uses fraction-free
    /// integer elimination).
    #[test]
    fn tree_count_matches_matrix_tree_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let n = rng.gen_range(2..=8);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let enumerated = for_each_spanning_tree(&g, |_| {});
            assert_eq!(spanning_tree_count(&g), enumerated as i128);
        }
    }

    #[test]
    fn bb_agrees_with_exhaustive_small() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut tested = 0;
        while tested < 120 {
            let n = rng.gen_range(2..9);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            if !g.is_connected() {
                continue;
            }
            tested += 1;
            let a = min_branch_tree_exhaustive(&g).unwrap();
            let b = min_branch_tree_bb(&g, None).unwrap();
            assert_eq!(a.outcome, b.outcome);
            let w = b.witness.unwrap();
            if let Outcome::Exact(min) = a.outcome {
                assert_eq!(w.branch_count(), min);
            }
        }
    }

    #[test]
    fn bb_limit_mode_proves_lower_bounds() {
        let g = gen_extremal(1, 3, (EndGadget::H1, EndGadget::H1)).unwrap();
        let r = min_branch_tree_bb(&g, Some(1)).unwrap();
        assert_eq!(r.outcome, Outcome::GreaterThan(1));
        assert!(r.witness.is_none());
        let r = min_branch_tree_bb(&g, Some(2)).unwrap();
        assert_eq!(r.outcome, Outcome::Exact(2));
    }

    #[test]
    fn monotone_under_edge_addition() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut tested = 0;
        while tested < 40 {
            let n = rng.gen_range(3..8);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            if !g.is_connected() || edges.len() == n * (n - 1) / 2 {
                continue;
            }
            tested += 1;
            let before = match min_branch_tree_bb(&g, None).unwrap().outcome {
                Outcome::Exact(b) => b,
                _ => unreachable!(),
            };
            // Add the first missing pair.
            let missing = (0..n)
                .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
                .find(|&(u, v)| !g.has_edge(u, v))
                .unwrap();
            let mut e2 = edges.clone();
            e2.push(missing);
            let g2 = Graph::from_edges(n, &e2).unwrap();
            let after = match min_branch_tree_bb(&g2, None).unwrap().outcome {
                Outcome::Exact(b) => b,
                _ => unreachable!(),
            };
            assert!(after <= before);
        }
    }

    #[test]
    fn enumerate_c5_spanning() {
        let g = Graph::cycle(5);
        let list = enumerate_star_two_matchings(&g, 0, true).unwrap();
        assert_eq!(list.len(), 1);
        assert_eq!(list[0].odd_cycles.len(), 1);
        assert_eq!(list[0].odd_cycles[0].len(), 5);
    }

    #[test]
    fn enumerate_k2_and_k13() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let list = enumerate_star_two_matchings(&k2, 0, true).unwrap();
        assert_eq!(list.len(), 1);
        assert_eq!(list[0].pairs, vec![(0, 1)]);

        let k13 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let list = enumerate_star_two_matchings(&k13, 0, true).unwrap();
        assert!(list.is_empty());
        let list = enumerate_star_two_matchings(&k13, 1, true).unwrap();
        assert_eq!(list.len(), 1);
        assert_eq!(list[0].stars.len(), 1);
    }

    #[test]
    fn enumerate_results_validate() {
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (3, 4), (1, 2)]).unwrap();
        let list = enumerate_star_two_matchings(&g, 1, true).unwrap();
        assert!(!list.is_empty());
        for sm in &list {
            let v = validate_star_two_matching(&g, sm, true, 1);
            assert!(v.is_valid(), "{:?}", v.violations);
        }
        // The triangle + edge certificate (t=0) must be among them.
        assert!(list
            .iter()
            .any(|sm| sm.t() == 0 && sm.odd_cycles.len() == 1 && sm.pairs == vec![(3, 4)]));
        // So must the resolved star certificate: edge x-y, star c -> {l1, l2}.
        assert!(list.iter().any(|sm| {
            sm.t() == 1
                && sm.pairs == vec![(3, 4)]
                && sm.odd_cycles.is_empty()
                && sm.stars[0].center == 0
                && sm.stars[0].leaves == vec![1, 2]
        }));
    }

    #[test]
    fn enumerate_counts_all_two_matchings_of_triangle() {
        // Triangle: 2-matchings are the empty set, three single edges,
        // and the triangle itself.
        let g = Graph::complete(3);
        let list = enumerate_star_two_matchings(&g, 0, false).unwrap();
        assert_eq!(list.len(), 5);
    }

    #[test]
    fn conjecture_small_exhaustive_holds() {
        let report = check_conjecture(6, 1, Sample::Exhaustive).unwrap();
        assert_eq!(report.counterexamples.len(), 0);
        assert!(report.checked > 0);
        let report = check_conjecture(6, 2, Sample::Exhaustive).unwrap();
        assert_eq!(report.counterexamples.len(), 0);
    }

    #[test]
    fn conjecture_random_sample_holds() {
        let report = check_conjecture(10, 1, Sample::Random { count: 25, seed: 3 }).unwrap();
        assert_eq!(report.counterexamples.len(), 0);
        assert_eq!(report.checked, 25 * 9);
    }

    #[test]
    fn degenerate_small_n_trivial() {
        // Any connected graph on <= 4 vertices has a spanning tree with
        // <= 1 branch vertex.
        let report = check_conjecture(4, 1, Sample::Exhaustive).unwrap();
        assert!(report.counterexamples.is_empty());
    }
}
