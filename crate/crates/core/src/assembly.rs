//! Star-cycles, their conversion to low-branch trees, stitching across
//! partition parts, and the end-to-end solver.
//!
//! A t-star-cycle is a cycle plus t vertex-disjoint stars whose centers
//! lie on the cycle and leaves off it; deleting one cycle edge at a
//! star center turns it into a tree with at most t branch vertices.
//! Stitching joins the per-part star-cycles along connecting edges,
//! deleting from each newly attached cycle an edge at the link endpoint
//! whenever that endpoint lies on the cycle, for a total of at most
//! (k-2) + sum t_j branch vertices.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::Graph;
use crate::oracle::{min_branch_tree_bb, Outcome};
use crate::partition::{robust_partition, CutMode, PartitionParams};
use crate::ratio::Rat;
use crate::stars::{star_two_matching, Star};
use crate::tree::{SpanningTree, Tree};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AssemblyError {
    #[error("invalid star-cycle: {0}")]
    BadStarCycle(String),
    #[error("invalid stitch plan: {0}")]
    BadPlan(String),
    #[error("part sizes sum to {got}, expected {want}")]
    SizeMismatch { got: usize, want: usize },
}

// ---------------------------------------------------------------------------
// Star-cycles
// ---------------------------------------------------------------------------

/// A cycle plus vertex-disjoint stars with centers on the cycle and
/// leaves off it. Stars here may have a single leaf (unlike
/// star-matchings, where a 1-leaf star is just an edge).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarCycle {
    pub cycle: Vec<usize>,
    pub stars: Vec<Star>,
}

impl StarCycle {
    pub fn plain(cycle: Vec<usize>) -> StarCycle {
        StarCycle { cycle, stars: vec![] }
    }

    pub fn t(&self) -> usize {
        self.stars.len()
    }

    pub fn covered(&self) -> BTreeSet<usize> {
        let mut s: BTreeSet<usize> = self.cycle.iter().copied().collect();
        for star in &self.stars {
            s.extend(star.leaves.iter().copied());
        }
        s
    }

    pub fn validate(&self, g: &Graph) -> Result<(), AssemblyError> {
        let bad = |msg: String| Err(AssemblyError::BadStarCycle(msg));
        if self.cycle.len() < 3 {
            return bad(format!("cycle length {} < 3", self.cycle.len()));
        }
        let on_cycle: BTreeSet<usize> = self.cycle.iter().copied().collect();
        if on_cycle.len() != self.cycle.len() {
            return bad("repeated cycle vertex".into());
        }
        for i in 0..self.cycle.len() {
            let (u, v) = (self.cycle[i], self.cycle[(i + 1) % self.cycle.len()]);
            if !g.has_edge(u, v) {
                return bad(format!("cycle edge {u}-{v} missing from graph"));
            }
        }
        let mut used_leaves: BTreeSet<usize> = BTreeSet::new();
        let mut centers: BTreeSet<usize> = BTreeSet::new();
        for star in &self.stars {
            if !on_cycle.contains(&star.center) {
                return bad(format!("center {} not on cycle", star.center));
            }
            if !centers.insert(star.center) {
                return bad(format!("center {} used twice", star.center));
            }
            if star.leaves.is_empty() {
                return bad(format!("star at {} has no leaves", star.center));
            }
            for &leaf in &star.leaves {
                if on_cycle.contains(&leaf) {
                    return bad(format!("leaf {leaf} lies on the cycle"));
                }
                if !used_leaves.insert(leaf) {
                    return bad(format!("leaf {leaf} used twice"));
                }
                if !g.has_edge(star.center, leaf) {
                    return bad(format!("star edge {}-{leaf} missing", star.center));
                }
            }
        }
        Ok(())
    }

    /// Cycle edge to delete: at the center with fewest leaves when
    /// stars exist (ties to the lowest center), else after the cycle's
    /// first vertex. Returns (position, edge).
    fn deletion_edge(&self, prefer: Option<usize>) -> (usize, (usize, usize)) {
        let anchor = prefer.or_else(|| {
            self.stars
                .iter()
                .map(|s| (s.leaves.len(), s.center))
                .min()
                .map(|(_, c)| c)
        });
        let pos = match anchor {
            Some(v) => self.cycle.iter().position(|&c| c == v).unwrap_or(0),
            None => 0,
        };
        let next = (pos + 1) % self.cycle.len();
        (pos, (self.cycle[pos], self.cycle[next]))
    }

    fn edges_without(&self, deleted: (usize, usize)) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.cycle.len() {
            let (u, v) = (self.cycle[i], self.cycle[(i + 1) % self.cycle.len()]);
            if (u, v) != deleted && (v, u) != deleted {
                out.push((u, v));
            }
        }
        for star in &self.stars {
            for &leaf in &star.leaves {
                out.push((star.center, leaf));
            }
        }
        out
    }
}

/// Converts a star-cycle into a tree on its covered vertices by
/// deleting one cycle edge, chosen at a star center when stars exist.
/// The resulting tree has at most t branch vertices, all star centers.
pub fn star_cycle_to_tree(sc: &StarCycle) -> Tree {
    let (_, deleted) = sc.deletion_edge(None);
    let tree = Tree::new(sc.edges_without(deleted), &[]).expect("cycle minus an edge is a tree");
    debug_assert!(tree.branch_count() <= sc.t());
    debug_assert!(tree.branch_vertices().iter().all(|v| sc.stars.iter().any(|s| s.center == *v)));
    tree
}

// ---------------------------------------------------------------------------
// Stitching
// ---------------------------------------------------------------------------

/// Star-cycles joined by k-1 link edges; link i must touch the vertex
/// set of component i+1 and the union of components 0..=i.
#[derive(Clone, Debug)]
pub struct StitchPlan {
    pub components: Vec<StarCycle>,
    pub links: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JoinOutcome {
    /// The link endpoint lies on the cycle; the deleted cycle edge is
    /// incident to it.
    CycleEdgeAtLink,
    /// The link endpoint is a star leaf; no deletion needed there.
    LeafEndpoint,
}

#[derive(Clone, Debug)]
pub struct StitchReport {
    pub k: usize,
    pub star_sum: usize,
    /// (k-2) + sum of t_j for k >= 2; t_1 for k = 1.
    pub bound: usize,
    pub branch_count: usize,
    pub joins: Vec<JoinOutcome>,
}

impl StitchPlan {
    pub fn validate(&self) -> Result<(), AssemblyError> {
        let k = self.components.len();
        if k == 0 {
            return Err(AssemblyError::BadPlan("no components".into()));
        }
        if self.links.len() + 1 != k {
            return Err(AssemblyError::BadPlan(format!(
                "{} links for {k} components",
                self.links.len()
            )));
        }
        let covers: Vec<BTreeSet<usize>> = self.components.iter().map(|c| c.covered()).collect();
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        for (i, c) in covers.iter().enumerate() {
            if !seen.is_disjoint(c) {
                return Err(AssemblyError::BadPlan(format!("component {i} overlaps earlier ones")));
            }
            seen.extend(c.iter().copied());
        }
        let mut earlier = covers[0].clone();
        for (i, &(x, y)) in self.links.iter().enumerate() {
            let next = &covers[i + 1];
            let touches_next = next.contains(&x) || next.contains(&y);
            let touches_earlier = earlier.contains(&x) || earlier.contains(&y);
            if !(touches_next && touches_earlier) {
                return Err(AssemblyError::BadPlan(format!(
                    "link {i} = ({x},{y}) must join component {} to the earlier union",
                    i + 1
                )));
            }
            earlier.extend(next.iter().copied());
        }
        Ok(())
    }
}

/// Stitches the components along the links into a single tree spanning
/// their union, with at most (k-2) + sum t_j branch vertices.
pub fn stitch(plan: &StitchPlan) -> Result<(Tree, StitchReport), AssemblyError> {
    plan.validate()?;
    let k = plan.components.len();
    let covers: Vec<BTreeSet<usize>> = plan.components.iter().map(|c| c.covered()).collect();

    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut joins = Vec::new();

    // Deletion target per component: the link endpoint landing in it.
    // Component 0 uses link 0's other endpoint (when k >= 2).
    let mut target: Vec<Option<usize>> = vec![None; k];
    for (i, &(x, y)) in plan.links.iter().enumerate() {
        let in_next = if covers[i + 1].contains(&x) { x } else { y };
        let other = if in_next == x { y } else { x };
        if target[i + 1].is_none() {
            target[i + 1] = Some(in_next);
        }
        if i == 0 && covers[0].contains(&other) {
            target[0] = Some(other);
        }
        edges.push((x, y));
    }

    for (j, comp) in plan.components.iter().enumerate() {
        let on_cycle = target[j].filter(|v| comp.cycle.contains(v));
        if j > 0 || k >= 2 {
            joins.push(match (target[j], on_cycle) {
                (_, Some(_)) => JoinOutcome::CycleEdgeAtLink,
                _ => JoinOutcome::LeafEndpoint,
            });
        }
        let (_, deleted) = comp.deletion_edge(on_cycle);
        edges.extend(comp.edges_without(deleted));
    }

    let tree = Tree::new(edges, &[]).map_err(|e| AssemblyError::BadPlan(e.to_string()))?;
    let star_sum: usize = plan.components.iter().map(|c| c.t()).sum();
    let bound = if k == 1 { star_sum } else { k - 2 + star_sum };
    let report = StitchReport {
        k,
        star_sum,
        bound,
        branch_count: tree.branch_count(),
        joins,
    };
    Ok((tree, report))
}

// ---------------------------------------------------------------------------
// Per-part budgets
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartBudget {
    /// s_j = floor((s+3) |V_j| / (n+1)).
    pub s_j: usize,
    /// Star budget: 0 for s_j <= 1, max(1, s_j - 2) otherwise.
    pub t_max: usize,
}

/// Per-part budgets. The sum of the s_j is at most s+2 for any sizes
/// summing to n; parts of size at most n/(s+3) get s_j = 0 (flagged by
/// the caller as a hypothesis warning).
pub fn part_budget(part_sizes: &[usize], n: usize, s: usize) -> Result<Vec<PartBudget>, AssemblyError> {
    let got: usize = part_sizes.iter().sum();
    if got != n {
        return Err(AssemblyError::SizeMismatch { got, want: n });
    }
    let budgets: Vec<PartBudget> = part_sizes
        .iter()
        .map(|&size| {
            let s_j = (s + 3) * size / (n + 1);
            let t_max = match s_j {
                0 | 1 => 0,
                v => 1.max(v - 2),
            };
            PartBudget { s_j, t_max }
        })
        .collect();
    let total: usize = budgets.iter().map(|b| b.s_j).sum();
    debug_assert!(total <= s + 2, "sum of part budgets exceeds s+2");
    debug_assert!(budgets.iter().all(|b| b.t_max <= b.s_j.saturating_sub(1).max(0) || b.s_j == 0));
    Ok(budgets)
}

// ---------------------------------------------------------------------------
// Star-cycle construction heuristics
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildFailure {
    /// Stages attempted, with the reason each gave up.
    pub stages: Vec<String>,
    /// Size of the best partial cover reached.
    pub best_cover: usize,
}

/// Spanning star-cycle with at most `t_max` stars, by staged heuristics:
/// (1) rotation-extension Hamiltonian cycle search, (2) longest cycle
/// plus greedy leaf attachment, (3) star-2-matching components chained
/// into one cycle. The output is validated; failure is a value.
pub fn build_star_cycle(g: &Graph, t_max: usize, seed: u64) -> Result<StarCycle, BuildFailure> {
    let n = g.n();
    let mut stages = Vec::new();
    if n < 3 {
        return Err(BuildFailure { stages: vec!["graph too small for a cycle".into()], best_cover: n });
    }

    // Stage 1: Hamiltonian cycle by rotation-extension.
    let (ham, best_cycle) = rotation_extension(g, seed, 32);
    if let Some(cycle) = ham {
        let sc = StarCycle::plain(cycle);
        debug_assert!(sc.validate(g).is_ok());
        return Ok(sc);
    }
    stages.push("hamiltonian rotation-extension exhausted restarts".into());

    // Stage 2: longest found cycle + greedy leaf attachment.
    let mut best_cover = best_cycle.as_ref().map_or(0, |c| c.len());
    if let Some(cycle) = best_cycle {
        match attach_leaves(g, &cycle, t_max) {
            Ok(sc) => {
                debug_assert!(sc.validate(g).is_ok());
                return Ok(sc);
            }
            Err((reason, covered)) => {
                best_cover = best_cover.max(covered);
                stages.push(format!("leaf attachment: {reason}"));
            }
        }
    } else {
        stages.push("no cycle found to extend".into());
    }

    // Stage 3: chain star-2-matching components into one cycle.
    match star_two_matching(g, t_max) {
        Err(e) => stages.push(format!("star-2-matching seed: {e}")),
        Ok(run) => match chain_components(g, &run.result, seed) {
            Ok(sc) if sc.t() <= t_max => {
                debug_assert!(sc.validate(g).is_ok());
                return Ok(sc);
            }
            Ok(sc) => stages.push(format!("chained cycle uses {} stars > budget {t_max}", sc.t())),
            Err(reason) => stages.push(format!("component chaining: {reason}")),
        },
    }

    Err(BuildFailure { stages, best_cover })
}

/// Rotation-extension search. Returns a Hamiltonian cycle if found,
/// else the longest cycle encountered across restarts.
fn rotation_extension(g: &Graph, seed: u64, restarts: u32) -> (Option<Vec<usize>>, Option<Vec<usize>>) {
    let n = g.n();
    let anchor = (0..n).max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v))).unwrap_or(0);
    let mut best_cycle: Option<Vec<usize>> = None;

    for restart in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart as u64));
        let start = if restart == 0 { anchor } else { rng.gen_range(0..n) };
        let mut path = vec![start];
        let mut on_path = vec![false; n];
        on_path[start] = true;
        let budget = 4 * n * n + 64;
        let mut steps = 0usize;

        while steps < budget {
            steps += 1;
            let head = *path.last().unwrap();
            // Extension first.
            let fresh: Vec<usize> =
                g.neighbors(head).iter().copied().filter(|&w| !on_path[w]).collect();
            if !fresh.is_empty() {
                let w = fresh[rng.gen_range(0..fresh.len())];
                on_path[w] = true;
                path.push(w);
                continue;
            }
            if path.len() == n && g.has_edge(head, path[0]) {
                return (Some(path), best_cycle);
            }
            // Rotation: edge from the head back into the path pivots the tail.
            let pivots: Vec<usize> = g
                .neighbors(head)
                .iter()
                .copied()
                .filter(|&w| on_path[w] && path.len() >= 3 && w != path[path.len() - 2])
                .collect();
            if pivots.is_empty() {
                break;
            }
            let w = pivots[rng.gen_range(0..pivots.len())];
            let i = path.iter().position(|&v| v == w).expect("pivot on path");
            path[i + 1..].reverse();
        }
        // Record the longest closable prefix as a cycle.
        if path.len() >= 3 {
            if let Some(j) = (2..path.len()).rev().find(|&j| g.has_edge(path[0], path[j])) {
                let cycle = path[..=j].to_vec();
                if best_cycle.as_ref().map_or(true, |b| cycle.len() > b.len()) {
                    best_cycle = Some(cycle);
                }
            }
        }
    }
    (None, best_cycle)
}

/// Attaches every off-cycle vertex as a star leaf, choosing at most
/// `t_max` centers greedily by coverage of the uncovered neighborhoods.
fn attach_leaves(
    g: &Graph,
    cycle: &[usize],
    t_max: usize,
) -> Result<StarCycle, (String, usize)> {
    let on_cycle: BTreeSet<usize> = cycle.iter().copied().collect();
    let mut uncovered: BTreeSet<usize> =
        (0..g.n()).filter(|v| !on_cycle.contains(v)).collect();
    let mut stars: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    while !uncovered.is_empty() {
        if stars.len() == t_max {
            return Err((
                format!("budget {t_max} exhausted with {} uncovered", uncovered.len()),
                g.n() - uncovered.len(),
            ));
        }
        // Greedy: the cycle vertex covering most uncovered vertices.
        let best = cycle
            .iter()
            .copied()
            .filter(|c| !stars.contains_key(c))
            .map(|c| {
                let cover = g.neighbors(c).iter().filter(|w| uncovered.contains(w)).count();
                (cover, std::cmp::Reverse(c))
            })
            .max();
        match best {
            Some((cover, std::cmp::Reverse(c))) if cover > 0 => {
                let leaves: Vec<usize> =
                    g.neighbors(c).iter().copied().filter(|w| uncovered.contains(w)).collect();
                for &l in &leaves {
                    uncovered.remove(&l);
                }
                stars.insert(c, leaves);
            }
            _ => {
                return Err((
                    format!("{} vertices have no available cycle neighbor", uncovered.len()),
                    g.n() - uncovered.len(),
                ));
            }
        }
    }
    Ok(StarCycle {
        cycle: cycle.to_vec(),
        stars: stars.into_iter().map(|(center, leaves)| Star { center, leaves }).collect(),
    })
}

/// Chains the components of a star-2-matching into a single cycle:
/// edges and broken odd cycles become path segments, stars become
/// single-vertex segments keeping their leaves, and consecutive
/// segments are joined by graph edges found greedily with seeded
/// restarts.
fn chain_components(
    g: &Graph,
    sm: &crate::stars::StarTwoMatching,
    seed: u64,
) -> Result<StarCycle, String> {
    // A segment traverses vertices in order; stars ride on their center.
    #[derive(Clone)]
    struct Segment {
        verts: Vec<usize>,
        cyclic: bool, // odd cycle: may enter at any position, either direction
    }
    let mut segments: Vec<Segment> = Vec::new();
    let mut stars: Vec<Star> = Vec::new();
    for &(u, v) in &sm.pairs {
        segments.push(Segment { verts: vec![u, v], cyclic: false });
    }
    for cyc in &sm.odd_cycles {
        segments.push(Segment { verts: cyc.clone(), cyclic: true });
    }
    for star in &sm.stars {
        segments.push(Segment { verts: vec![star.center], cyclic: false });
        stars.push(star.clone());
    }
    if segments.is_empty() {
        return Err("empty structure".into());
    }
    if segments.len() == 1 && segments[0].cyclic {
        return Ok(StarCycle { cycle: segments[0].verts.clone(), stars });
    }

    // Orientations of a segment: (entry, exit, traversal).
    let traversals = |seg: &Segment| -> Vec<Vec<usize>> {
        if !seg.cyclic {
            let fwd = seg.verts.clone();
            let mut bwd = seg.verts.clone();
            bwd.reverse();
            if fwd.len() == 1 {
                vec![fwd]
            } else {
                vec![fwd, bwd]
            }
        } else {
            // Break the cycle at any edge, both directions.
            let k = seg.verts.len();
            let mut out = Vec::with_capacity(2 * k);
            for start in 0..k {
                let fwd: Vec<usize> = (0..k).map(|i| seg.verts[(start + i) % k]).collect();
                let bwd: Vec<usize> = (0..k).map(|i| seg.verts[(start + k - i) % k]).collect();
                out.push(fwd);
                out.push(bwd);
            }
            out
        }
    };

    let attempts = 24u64;
    for attempt in 0..attempts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(31).wrapping_add(attempt));
        let mut order: Vec<usize> = (0..segments.len()).collect();
        if attempt > 0 {
            for i in (1..order.len()).rev() {
                let j = rng.gen_range(0..=i);
                order.swap(i, j);
            }
        }
        // Greedy chain in the chosen order with per-step orientation
        // search, trying every orientation of the first segment.
        let first = order[0];
        for first_tr in traversals(&segments[first]) {
            let mut used = vec![false; segments.len()];
            used[first] = true;
            let mut chain: Vec<usize> = first_tr;
            let mut placed = 1;
            'grow: while placed < segments.len() {
                let tail = *chain.last().unwrap();
                for &cand in &order {
                    if used[cand] {
                        continue;
                    }
                    for tr in traversals(&segments[cand]) {
                        if g.has_edge(tail, tr[0]) {
                            chain.extend(tr);
                            used[cand] = true;
                            placed += 1;
                            continue 'grow;
                        }
                    }
                }
                break;
            }
            if placed == segments.len() && g.has_edge(*chain.last().unwrap(), chain[0]) {
                return Ok(StarCycle { cycle: chain, stars });
            }
        }
    }
    Err(format!("could not close a cycle over {} segments", segments.len()))
}

// ---------------------------------------------------------------------------
// End-to-end solver
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub seed: u64,
    /// Degree slack for the partition schedule; derived from the input
    /// when absent.
    pub gamma: Option<Rat>,
    /// Run the partition/stitch pipeline (and the direct star-cycle
    /// fallback).
    pub use_pipeline: bool,
    /// Fall back to the exact oracle on small graphs.
    pub oracle_fallback: bool,
    pub oracle_max_n: usize,
    pub threads: usize,
}

impl Default for SolveConfig {
    fn default() -> SolveConfig {
        SolveConfig {
            seed: 0,
            gamma: None,
            use_pipeline: true,
            oracle_fallback: true,
            oracle_max_n: 32,
            threads: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveRoute {
    Pipeline,
    DirectStarCycle,
    Oracle,
}

#[derive(Clone, Debug)]
pub struct SolveSuccess {
    pub tree: SpanningTree,
    pub route: SolveRoute,
    /// Number of partition parts when the pipeline route succeeded.
    pub parts: usize,
    pub stitch: Option<StitchReport>,
}

#[derive(Clone, Debug)]
pub struct SolveFailure {
    pub stages: Vec<String>,
    /// Oracle-proven minimum exceeding s (when the oracle ran and the
    /// instance is infeasible).
    pub proven_infeasible: bool,
    pub proven_minimum: Option<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("input graph is disconnected")]
    Disconnected,
}

/// Spanning tree with at most s branch vertices: robust partition with
/// per-part star budgets, per-part star-cycles, link edges from a BFS
/// of the part-contraction graph, and stitching; falls back to a direct
/// spanning star-cycle on the whole graph and, on small instances, to
/// the exact oracle. Every returned tree is revalidated.
pub fn solve(g: &Graph, s: usize, config: &SolveConfig) -> Result<Result<SolveSuccess, SolveFailure>, SolveError> {
    let n = g.n();
    if !g.is_connected() {
        return Err(SolveError::Disconnected);
    }
    let mut stages: Vec<String> = Vec::new();

    if n <= 2 {
        let edges: Vec<(usize, usize)> = if n == 2 { vec![(0, 1)] } else { vec![] };
        let tree = SpanningTree::new(g, edges).expect("trivial tree");
        return Ok(Ok(SolveSuccess { tree, route: SolveRoute::Oracle, parts: 1, stitch: None }));
    }

    if config.use_pipeline {
        match pipeline(g, s, config, &mut stages) {
            Some(success) => return Ok(Ok(success)),
            None => stages.push("pipeline did not produce a tree within budget".into()),
        }

        // Direct star-cycle on the whole graph.
        match build_star_cycle(g, s, config.seed) {
            Ok(sc) if sc.covered().len() == n => {
                let tree = star_cycle_to_tree(&sc);
                if tree.branch_count() <= s {
                    if let Ok(tree) = SpanningTree::new(g, tree.edges().to_vec()) {
                        return Ok(Ok(SolveSuccess {
                            tree,
                            route: SolveRoute::DirectStarCycle,
                            parts: 1,
                            stitch: None,
                        }));
                    }
                }
                stages.push("direct star-cycle produced an invalid tree".into());
            }
            Ok(_) => stages.push("direct star-cycle did not span".into()),
            Err(f) => stages.push(format!(
                "direct star-cycle failed (best cover {}): {}",
                f.best_cover,
                f.stages.join("; ")
            )),
        }
    }

    if config.oracle_fallback && n <= config.oracle_max_n {
        match min_branch_tree_bb(g, Some(s)) {
            Ok(res) => match res.outcome {
                Outcome::Exact(b) => {
                    debug_assert!(b <= s);
                    let tree = res.witness.expect("exact outcome carries a witness");
                    return Ok(Ok(SolveSuccess {
                        tree,
                        route: SolveRoute::Oracle,
                        parts: 1,
                        stitch: None,
                    }));
                }
                Outcome::GreaterThan(k) => {
                    return Ok(Err(SolveFailure {
                        stages,
                        proven_infeasible: true,
                        proven_minimum: Some(k + 1),
                    }));
                }
            },
            Err(e) => stages.push(format!("oracle fallback unavailable: {e}")),
        }
    }
    Ok(Err(SolveFailure { stages, proven_infeasible: false, proven_minimum: None }))
}

fn pipeline(g: &Graph, s: usize, config: &SolveConfig, stages: &mut Vec<String>) -> Option<SolveSuccess> {
    let n = g.n();
    let r = s + 3;
    let gamma = config.gamma.unwrap_or_else(|| {
        let derived = Rat::new(g.min_degree() as i128, n as i128) - Rat::new(1, r as i128);
        if derived > Rat::from_integer(0) {
            derived
        } else {
            Rat::new(1, 2 * r as i128)
        }
    });
    let mode = if n <= crate::partition::EXACT_CUT_MAX_N {
        CutMode::Exact { threads: config.threads }
    } else {
        CutMode::Heuristic { seed: config.seed, restarts: 8 }
    };
    let mut params = PartitionParams::new(r, gamma, mode);
    // Desk-scale schedule: permissive enough to see real cluster cuts
    // (top alpha 1/4, shrinking by 4 per level).
    params.sigma_top = Some(Rat::new(1, 2));
    params.sigma_ratio = Rat::new(1, 2);
    let partition = match robust_partition(g, &params) {
        Ok(p) => p,
        Err(e) => {
            stages.push(format!("robust partition failed: {e}"));
            return None;
        }
    };
    let sizes: Vec<usize> = partition.parts.iter().map(|p| p.vertices.len()).collect();
    let budgets = match part_budget(&sizes, n, s) {
        Ok(b) => b,
        Err(e) => {
            stages.push(format!("part budgets: {e}"));
            return None;
        }
    };
    if budgets.iter().any(|b| b.s_j == 0) {
        stages.push("a part is smaller than n/(s+3); its star budget is zero".into());
    }

    // Per-part star-cycles on the induced subgraphs.
    let mut comps: Vec<StarCycle> = Vec::new();
    for (i, part) in partition.parts.iter().enumerate() {
        let (sub, map) = g.induced(&part.vertices);
        if sub.n() < 3 {
            stages.push(format!("part {i} too small for a cycle"));
            return None;
        }
        let sc = match build_star_cycle(&sub, budgets[i].t_max, config.seed.wrapping_add(i as u64)) {
            Ok(sc) => sc,
            Err(f) => {
                stages.push(format!("part {i}: {}", f.stages.join("; ")));
                return None;
            }
        };
        comps.push(StarCycle {
            cycle: sc.cycle.iter().map(|&v| map[v]).collect(),
            stars: sc
                .stars
                .iter()
                .map(|st| Star {
                    center: map[st.center],
                    leaves: st.leaves.iter().map(|&l| map[l]).collect(),
                })
                .collect(),
        });
    }

    // Link edges: BFS over the part-contraction graph, lexicographically
    // least edge per part pair.
    let k = comps.len();
    if k > 1 {
        let mut part_of = vec![usize::MAX; n];
        for (i, p) in partition.parts.iter().enumerate() {
            for &v in &p.vertices {
                part_of[v] = i;
            }
        }
        let mut between: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
        for (u, v) in g.edges() {
            let (a, b) = (part_of[u], part_of[v]);
            if a != b {
                let key = (a.min(b), a.max(b));
                between.entry(key).or_insert((u, v));
            }
        }
        // BFS over parts from part 0.
        let mut order = vec![0usize];
        let mut parent_edge: Vec<Option<(usize, usize)>> = vec![None; k];
        let mut seen = vec![false; k];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for b in 0..k {
                if !seen[b] {
                    if let Some(&e) = between.get(&(a.min(b), a.max(b))) {
                        seen[b] = true;
                        parent_edge[b] = Some(e);
                        order.push(b);
                        queue.push_back(b);
                    }
                }
            }
        }
        if order.len() < k {
            stages.push("part-contraction graph is disconnected".into());
            return None;
        }
        let components: Vec<StarCycle> = order.iter().map(|&i| comps[i].clone()).collect();
        let links: Vec<(usize, usize)> =
            order[1..].iter().map(|&i| parent_edge[i].expect("non-root has a parent edge")).collect();
        let plan = StitchPlan { components, links };
        match stitch(&plan) {
            Ok((tree, report)) => {
                if tree.branch_count() <= s {
                    match SpanningTree::new(g, tree.edges().to_vec()) {
                        Ok(tree) => {
                            return Some(SolveSuccess {
                                tree,
                                route: SolveRoute::Pipeline,
                                parts: k,
                                stitch: Some(report),
                            })
                        }
                        Err(e) => stages.push(format!("stitched tree invalid: {e}")),
                    }
                } else {
                    stages.push(format!(
                        "stitched tree has {} branches > {s}",
                        tree.branch_count()
                    ));
                }
            }
            Err(e) => stages.push(format!("stitch: {e}")),
        }
        None
    } else {
        // Single part: direct star-cycle with the full budget.
        let sc = &comps[0];
        let tree = star_cycle_to_tree(sc);
        if sc.covered().len() == n && tree.branch_count() <= s {
            if let Ok(tree) = SpanningTree::new(g, tree.edges().to_vec()) {
                return Some(SolveSuccess {
                    tree,
                    route: SolveRoute::Pipeline,
                    parts: 1,
                    stitch: None,
                });
            }
        }
        stages.push("single-part star-cycle did not yield a valid tree".into());
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_extremal, EndGadget};

    fn cyc(vs: &[usize]) -> StarCycle {
        StarCycle::plain(vs.to_vec())
    }

    #[test]
    fn plain_cycle_to_path() {
        let sc = cyc(&[0, 1, 2, 3, 4, 5, 6]);
        let t = star_cycle_to_tree(&sc);
        assert_eq!(t.branch_count(), 0);
        assert_eq!(t.leaf_count(), 2);
    }

    #[test]
    fn one_leaf_star_still_yields_a_path() {
        // C5 with a single-leaf star at 0: deleting a cycle edge at 0
        // leaves every degree at 2.
        let sc = StarCycle {
            cycle: vec![0, 1, 2, 3, 4],
            stars: vec![Star { center: 0, leaves: vec![5] }],
        };
        let t = star_cycle_to_tree(&sc);
        assert_eq!(t.branch_count(), 0);
    }

    #[test]
    fn three_leaf_star_yields_one_branch() {
        let sc = StarCycle {
            cycle: vec![0, 1, 2, 3, 4],
            stars: vec![Star { center: 2, leaves: vec![5, 6, 7] }],
        };
        let t = star_cycle_to_tree(&sc);
        assert_eq!(t.branch_count(), 1);
        assert_eq!(t.branch_vertices(), vec![2]);
    }

    #[test]
    fn star_cycle_validation() {
        let g = Graph::cycle(5);
        assert!(cyc(&[0, 1, 2, 3, 4]).validate(&g).is_ok());
        assert!(cyc(&[0, 1, 3]).validate(&g).is_err()); // 1-3 not an edge
        let mut edges = vec![(0, 1), (1, 2), (2, 0), (2, 3)];
        edges.push((3, 4));
        let h = Graph::from_edges(5, &edges).unwrap();
        let sc = StarCycle {
            cycle: vec![0, 1, 2],
            stars: vec![Star { center: 2, leaves: vec![3] }],
        };
        assert!(sc.validate(&h).is_ok());
        let bad = StarCycle {
            cycle: vec![0, 1, 2],
            stars: vec![Star { center: 3, leaves: vec![4] }],
        };
        assert!(bad.validate(&h).is_err()); // center off cycle
    }

    #[test]
    fn stitch_two_plain_cycles_no_branches() {
        // Both deletions land on the link endpoints.
        let plan = StitchPlan {
            components: vec![cyc(&[0, 1, 2, 3, 4]), cyc(&[5, 6, 7, 8, 9])],
            links: vec![(0, 5)],
        };
        let (tree, report) = stitch(&plan).unwrap();
        assert_eq!(report.bound, 0);
        assert_eq!(tree.branch_count(), 0);
        assert_eq!(
            report.joins,
            vec![JoinOutcome::CycleEdgeAtLink, JoinOutcome::CycleEdgeAtLink]
        );
    }

    #[test]
    fn stitch_three_cycles_within_bound() {
        let plan = StitchPlan {
            components: vec![cyc(&[0, 1, 2, 3, 4]), cyc(&[5, 6, 7, 8, 9]), cyc(&[10, 11, 12, 13, 14])],
            links: vec![(0, 5), (6, 10)],
        };
        let (tree, report) = stitch(&plan).unwrap();
        assert_eq!(report.bound, 1);
        assert!(tree.branch_count() <= report.bound);
        // Deleting (5,6) for the middle cycle frees vertex 6 as well, so
        // this particular plan stitches into a Hamiltonian path.
        assert_eq!(tree.branch_count(), 0);
    }

    #[test]
    fn stitch_rejects_bad_plans() {
        let plan = StitchPlan {
            components: vec![cyc(&[0, 1, 2]), cyc(&[3, 4, 5])],
            links: vec![(0, 7)],
        };
        assert!(stitch(&plan).is_err());
        let overlapping = StitchPlan {
            components: vec![cyc(&[0, 1, 2]), cyc(&[2, 3, 4])],
            links: vec![(0, 2)],
        };
        assert!(stitch(&overlapping).is_err());
    }

    #[test]
    fn budgets_match_the_floor_formula() {
        let b = part_budget(&[50, 49], 99, 1).unwrap();
        assert_eq!(b[0], PartBudget { s_j: 2, t_max: 1 });
        assert_eq!(b[1], PartBudget { s_j: 1, t_max: 0 });
        let b = part_budget(&[100], 100, 2).unwrap();
        assert_eq!(b[0], PartBudget { s_j: 4, t_max: 2 });
        assert!(part_budget(&[5, 5], 11, 1).is_err());
    }

    #[test]
    fn budget_sum_is_bounded() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let s = rng.gen_range(1..5usize);
            let parts = rng.gen_range(1..6usize);
            let mut sizes = vec![1usize; parts];
            let mut n: usize = parts;
            for _ in 0..rng.gen_range(0..40) {
                sizes[rng.gen_range(0..parts)] += 1;
                n += 1;
            }
            let budgets = part_budget(&sizes, n, s).unwrap();
            let total: usize = budgets.iter().map(|b| b.s_j).sum();
            assert!(total <= s + 2, "sizes {sizes:?} n {n} s {s}");
            for b in budgets {
                assert!(b.t_max <= b.s_j.saturating_sub(1) || b.s_j == 0);
            }
        }
    }

    #[test]
    fn build_star_cycle_on_c8_is_the_cycle() {
        let g = Graph::cycle(8);
        let sc = build_star_cycle(&g, 0, 1).unwrap();
        assert_eq!(sc.t(), 0);
        assert_eq!(sc.cycle.len(), 8);
    }

    #[test]
    fn build_star_cycle_k5_plus_degree_two_pendant() {
        // K5 plus a vertex adjacent to two clique vertices: Hamiltonian.
        let mut edges = Vec::new();
        for u in 0..5 {
            for v in u + 1..5 {
                edges.push((u, v));
            }
        }
        edges.push((0, 5));
        edges.push((1, 5));
        let g = Graph::from_edges(6, &edges).unwrap();
        let sc = build_star_cycle(&g, 1, 3).unwrap();
        assert_eq!(sc.t(), 0);
        assert_eq!(sc.cycle.len(), 6);
    }

    #[test]
    fn build_star_cycle_forced_star() {
        // K4 plus three pendant leaves on vertex 0: the leaves cannot
        // lie on any cycle, so they must hang off a star at 0.
        let mut edges = Vec::new();
        for u in 0..4 {
            for v in u + 1..4 {
                edges.push((u, v));
            }
        }
        edges.extend([(0, 4), (0, 5), (0, 6)]);
        let g = Graph::from_edges(7, &edges).unwrap();
        let sc = build_star_cycle(&g, 1, 0).unwrap();
        assert_eq!(sc.t(), 1);
        assert_eq!(sc.stars[0].center, 0);
        let mut leaves = sc.stars[0].leaves.clone();
        leaves.sort_unstable();
        assert_eq!(leaves, vec![4, 5, 6]);
        assert!(sc.validate(&g).is_ok());
    }

    #[test]
    fn solve_cycle_gives_path() {
        let g = Graph::cycle(9);
        let success = solve(&g, 1, &SolveConfig::default()).unwrap().unwrap();
        assert_eq!(success.tree.branch_count(), 0);
    }

    #[test]
    fn solve_extremal_with_slack_succeeds() {
        let g = gen_extremal(1, 3, (EndGadget::H1, EndGadget::H1)).unwrap();
        let success = solve(&g, 2, &SolveConfig::default()).unwrap().unwrap();
        assert!(success.tree.branch_count() <= 2);
    }

    #[test]
    fn solve_extremal_at_s_is_proven_infeasible() {
        let g = gen_extremal(1, 3, (EndGadget::H1, EndGadget::H1)).unwrap();
        let failure = solve(&g, 1, &SolveConfig::default()).unwrap().unwrap_err();
        assert!(failure.proven_infeasible);
        assert_eq!(failure.proven_minimum, Some(2));
    }

    #[test]
    fn solve_rejects_disconnected() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(solve(&g, 1, &SolveConfig::default()).unwrap_err(), SolveError::Disconnected);
    }

    #[test]
    fn solve_star_needs_one_branch() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let failure = solve(&g, 0, &SolveConfig::default()).unwrap().unwrap_err();
        assert!(failure.proven_infeasible);
        let success = solve(&g, 1, &SolveConfig::default()).unwrap().unwrap();
        assert_eq!(success.tree.branch_count(), 1);
    }
}
