//! Sparse-cut discovery, cut refinement, robust partitions, and
//! near-bipartiteness detection.
//!
//! A cut {X, V\X} is alpha-sparse when e(X, V\X) < alpha |X| |V\X|. A
//! graph is (eta, alpha)-robust when its minimum degree is at least
//! eta*n and no alpha-sparse cut exists. Exact mode enumerates all cuts
//! (n <= 24) and its verdicts are certificates; heuristic mode runs a
//! spectral sweep plus local search, whose returned cuts are verified
//! but whose "none" answers certify nothing.
//!
//! Alpha thresholds throughout this module are handled via their square
//! roots: the refinement schedule stores sigma = sqrt(alpha) as an
//! exact rational, so sqrt(alpha) degree comparisons stay rational and
//! alpha^(1/4) sparsity comparisons reduce to squaring.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Cut, Graph};
use crate::ratio::Rat;

pub const EXACT_CUT_MAX_N: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("exact cut enumeration requires n <= {cap}, got {n}")]
    ExactTooLarge { n: usize, cap: usize },
    #[error("input cut has sparsity {sparsity} and is not {alpha}-sparse")]
    NotSparse { sparsity: Rat, alpha: Rat },
    #[error("graph is empty")]
    Empty,
    #[error("partition loop exceeded {max_parts} parts; degree hypothesis violated")]
    HypothesisViolation { max_parts: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutMode {
    /// Full enumeration over all 2^(n-1) cuts; verdicts are certificates.
    Exact { threads: usize },
    /// Spectral sweep + hill climbing with seeded restarts. Returned
    /// cuts are true sparse cuts; a none-result is not a certificate.
    Heuristic { seed: u64, restarts: u32 },
}

impl CutMode {
    pub fn exact() -> CutMode {
        CutMode::Exact { threads: 1 }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CutMode::Exact { .. })
    }
}

// ---------------------------------------------------------------------------
// Exact enumeration kernels
// ---------------------------------------------------------------------------

/// Best-cut candidate with exact comparison: sparsity first (by cross
/// multiplication), then side size, then side mask.
#[derive(Clone, Copy, Debug)]
struct CutCand {
    crossing: u64,
    pairs: u64,
    size: u32,
    mask: u64,
}

impl CutCand {
    fn better_than(&self, other: &CutCand) -> bool {
        let lhs = self.crossing as u128 * other.pairs as u128;
        let rhs = other.crossing as u128 * self.pairs as u128;
        (lhs, self.size, self.mask) < (rhs, other.size, other.mask)
    }
}

fn scan_cuts_range(adj: &[u64], n: usize, lo: u64, hi: u64) -> Option<CutCand> {
    let mut best: Option<CutCand> = None;
    for bits in lo..hi {
        let mask = (bits << 1) | 1; // vertex 0 always on side X
        if mask.count_ones() as usize == n {
            continue;
        }
        let mut crossing = 0u64;
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            crossing += (adj[v] & !mask).count_ones() as u64;
        }
        let size = mask.count_ones();
        let cand = CutCand {
            crossing,
            pairs: size as u64 * (n as u64 - size as u64),
            size,
            mask,
        };
        if best.as_ref().map_or(true, |b| cand.better_than(b)) {
            best = Some(cand);
        }
    }
    best
}

/// The minimum-sparsity cut, by exact enumeration (n <= 24). With
/// `threads > 1` the mask range is split; the merge is by the exact
/// comparator, so the result is schedule-independent.
pub fn min_sparsity_cut_exact(g: &Graph, threads: usize) -> Result<Cut, PartitionError> {
    let n = g.n();
    if n < 2 {
        return Err(PartitionError::Empty);
    }
    if n > EXACT_CUT_MAX_N {
        return Err(PartitionError::ExactTooLarge { n, cap: EXACT_CUT_MAX_N });
    }
    let adj = g.adjacency_masks();
    let total: u64 = 1u64 << (n - 1);
    let threads = threads.max(1).min(64);
    let best = if threads == 1 || total < 1 << 12 {
        scan_cuts_range(&adj, n, 0, total)
    } else {
        let chunk = total.div_ceil(threads as u64);
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for t in 0..threads as u64 {
                let lo = t * chunk;
                let hi = ((t + 1) * chunk).min(total);
                let adj_ref = &adj;
                handles.push(scope.spawn(move || scan_cuts_range(adj_ref, n, lo, hi)));
            }
            let mut best: Option<CutCand> = None;
            for h in handles {
                if let Some(cand) = h.join().expect("scan thread") {
                    if best.as_ref().map_or(true, |b| cand.better_than(b)) {
                        best = Some(cand);
                    }
                }
            }
            best
        })
    };
    let cand = best.expect("n >= 2 has at least one cut");
    let side: Vec<usize> = (0..n).filter(|&v| cand.mask >> v & 1 == 1).collect();
    Ok(g.cut_edges(&side).expect("proper side"))
}

/// An alpha-sparse cut, if one exists (exact mode: certified; heuristic
/// mode: best effort, but any returned cut is verified sparse).
pub fn find_sparse_cut(g: &Graph, alpha: Rat, mode: CutMode) -> Result<Option<Cut>, PartitionError> {
    if g.n() < 2 {
        return Ok(None);
    }
    let best = match mode {
        CutMode::Exact { threads } => min_sparsity_cut_exact(g, threads)?,
        CutMode::Heuristic { seed, restarts } => heuristic_min_cut(g, seed, restarts),
    };
    Ok(if best.sparsity < alpha { Some(best) } else { None })
}

// ---------------------------------------------------------------------------
// Heuristic search: spectral sweep + hill climbing
// ---------------------------------------------------------------------------

fn heuristic_min_cut(g: &Graph, seed: u64, restarts: u32) -> Cut {
    let n = g.n();
    let mut best: Option<Cut> = None;
    let consider = |cut: Cut, best: &mut Option<Cut>| {
        let better = match best {
            None => true,
            Some(b) => {
                cut.sparsity < b.sparsity
                    || (cut.sparsity == b.sparsity && cut.side.len() < b.side.len())
            }
        };
        if better {
            *best = Some(cut);
        }
    };

    // Spectral sweep over the Fiedler ordering.
    let order = fiedler_order(g, seed);
    let mut marked = vec![false; n];
    for (prefix, &v) in order.iter().enumerate().take(n - 1) {
        marked[v] = true;
        let side: Vec<usize> = (0..n).filter(|&u| marked[u]).collect();
        let _ = prefix;
        let cut = g.cut_edges(&side).expect("proper prefix");
        let improved = hill_climb(g, cut);
        consider(improved, &mut best);
    }

    // Seeded random restarts.
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_cafe);
    for _ in 0..restarts {
        let mut side: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if side.is_empty() {
            side.push(rng.gen_range(0..n));
        }
        if side.len() == n {
            side.pop();
        }
        let cut = g.cut_edges(&side).expect("proper side");
        consider(hill_climb(g, cut), &mut best);
    }
    best.expect("at least one sweep cut")
}

/// Single-vertex moves that strictly decrease sparsity, first
/// improvement in index order, until a fixed point.
fn hill_climb(g: &Graph, cut: Cut) -> Cut {
    let n = g.n();
    let mut marked = g.mark(&cut.side);
    let mut best = cut;
    loop {
        let mut improved = false;
        for v in 0..n {
            let size = best.side.len();
            // Keep both sides nonempty.
            if (marked[v] && size == 1) || (!marked[v] && size == n - 1) {
                continue;
            }
            marked[v] = !marked[v];
            let side: Vec<usize> = (0..n).filter(|&u| marked[u]).collect();
            let cand = g.cut_edges(&side).expect("proper side");
            if cand.sparsity < best.sparsity {
                best = cand;
                improved = true;
            } else {
                marked[v] = !marked[v];
            }
        }
        if !improved {
            return best;
        }
    }
}

/// Vertex ordering by the second eigenvector of the normalized
/// Laplacian, computed by deflated power iteration on 2I - L.
/// Deterministic for a fixed seed.
fn fiedler_order(g: &Graph, seed: u64) -> Vec<usize> {
    let n = g.n();
    let deg: Vec<f64> = (0..n).map(|v| g.degree(v).max(1) as f64).collect();
    let sqrt_deg: Vec<f64> = deg.iter().map(|d| d.sqrt()).collect();
    // Top eigenvector of 2I - L_norm is D^(1/2) 1, normalized.
    let norm: f64 = deg.iter().sum::<f64>().sqrt();
    let top: Vec<f64> = sqrt_deg.iter().map(|s| s / norm).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xf1ed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    for _ in 0..400 {
        // y = (2I - L) x = x + D^(-1/2) A D^(-1/2) x
        let mut y = x.clone();
        for v in 0..n {
            let mut acc = 0.0;
            for &w in g.neighbors(v) {
                acc += x[w] / sqrt_deg[w];
            }
            y[v] += acc / sqrt_deg[v];
        }
        // Deflate the top eigenvector and renormalize.
        let dot: f64 = y.iter().zip(&top).map(|(a, b)| a * b).sum();
        for v in 0..n {
            y[v] -= dot * top[v];
        }
        let len: f64 = y.iter().map(|a| a * a).sum::<f64>().sqrt();
        if len < 1e-12 {
            break;
        }
        for v in 0..n {
            y[v] /= len;
        }
        x = y;
    }
    // Fiedler vector of L is D^(-1/2) times the eigenvector of L_norm.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let fa = x[a] / sqrt_deg[a];
        let fb = x[b] / sqrt_deg[b];
        fa.partial_cmp(&fb).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
    });
    order
}

// ---------------------------------------------------------------------------
// Cut refinement
// ---------------------------------------------------------------------------

/// Certificate that the refined cut satisfies the size and degree
/// conclusions of the refinement step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefineCertificate {
    /// |V'_i| >= (delta - 3 sqrt(alpha)) n for both sides.
    pub sides_large: bool,
    /// min degree of both induced sides >= delta(G)/2.
    pub min_degree_halved: bool,
    /// at most 3 sqrt(alpha) n vertices per side miss the
    /// (delta - 3 sqrt(alpha)) n internal degree bound.
    pub few_exceptional: bool,
}

#[derive(Clone, Debug)]
pub struct RefinedCut {
    pub cut: Cut,
    /// Vertices stripped (low degree or high cross degree) and
    /// reassigned greedily.
    pub stripped: Vec<usize>,
    /// `None` when the lemma hypotheses failed; the cut is still a
    /// valid refinement but carries no certificate.
    pub certificate: Option<RefineCertificate>,
    /// Output sparsity passes the alpha^(1/4) bound.
    pub quarter_sparse: bool,
}

/// Refines an alpha-sparse cut into an alpha^(1/4)-sparse cut with
/// large, internally dense sides: strip the low-degree set (degree
/// below delta*n) and the high-cross-degree sets (cross degree at least
/// sqrt(alpha)*n), then reassign stripped vertices to the side holding
/// more of their neighbors (index order, ties to the smaller side,
/// iterated to a fixed point so no stripped vertex ends on the side
/// with strictly fewer of its neighbors).
///
/// `sqrt_alpha` is sqrt(alpha) as an exact rational; alpha =
/// sqrt_alpha^2.
pub fn refine_sparse_cut(
    g: &Graph,
    cut: &Cut,
    sqrt_alpha: Rat,
    delta: Rat,
) -> Result<RefinedCut, PartitionError> {
    let n = g.n() as i128;
    let alpha = sqrt_alpha * sqrt_alpha;
    if cut.sparsity >= alpha {
        return Err(PartitionError::NotSparse { sparsity: cut.sparsity, alpha });
    }
    let in_x = g.mark(&cut.side);

    // V0: degree below delta * n.
    let low_degree = |v: usize| Rat::from_integer(g.degree(v) as i128) < delta * Rat::from_integer(n);
    // U_i: cross degree at least sqrt(alpha) * n.
    let out_x: Vec<bool> = in_x.iter().map(|&b| !b).collect();
    let high_cross = |v: usize| {
        let cross = if in_x[v] { g.degree_in(v, &out_x) } else { g.degree_in(v, &in_x) };
        Rat::from_integer(cross as i128) >= sqrt_alpha * Rat::from_integer(n)
    };

    let mut side1: Vec<usize> = Vec::new();
    let mut side2: Vec<usize> = Vec::new();
    let mut stripped: Vec<usize> = Vec::new();
    for v in 0..g.n() {
        if low_degree(v) || high_cross(v) {
            stripped.push(v);
        } else if in_x[v] {
            side1.push(v);
        } else {
            side2.push(v);
        }
    }

    // Greedy pass in index order.
    let mut in_side1 = vec![false; g.n()];
    let mut assigned = vec![false; g.n()];
    for &v in &side1 {
        in_side1[v] = true;
        assigned[v] = true;
    }
    for &v in &side2 {
        assigned[v] = true;
    }
    let mut n1 = side1.len();
    let mut n2 = side2.len();
    for &v in &stripped {
        let to1 = g.neighbors(v).iter().filter(|&&w| assigned[w] && in_side1[w]).count();
        let to2 = g.neighbors(v).iter().filter(|&&w| assigned[w] && !in_side1[w]).count();
        let go1 = if to1 != to2 { to1 > to2 } else { n1 <= n2 };
        assigned[v] = true;
        if go1 {
            in_side1[v] = true;
            n1 += 1;
        } else {
            n2 += 1;
        }
    }
    // Fixed point: move any stripped vertex sitting on the side with
    // strictly fewer of its neighbors. Each move drops the crossing
    // count, so this terminates.
    loop {
        let mut moved = false;
        for &v in &stripped {
            let here = g.neighbors(v).iter().filter(|&&w| in_side1[w] == in_side1[v]).count();
            let there = g.degree(v) - here;
            let (sz_here, _sz_there) = if in_side1[v] { (n1, n2) } else { (n2, n1) };
            if there > here && sz_here > 1 {
                in_side1[v] = !in_side1[v];
                if in_side1[v] {
                    n1 += 1;
                    n2 -= 1;
                } else {
                    n2 += 1;
                    n1 -= 1;
                }
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }

    let new_side: Vec<usize> = (0..g.n()).filter(|&v| in_side1[v]).collect();
    let refined = g.cut_edges(&new_side).expect("both refined sides stay nonempty");
    // alpha^(1/4)-sparse <=> sparsity^2 < sqrt_alpha.
    let quarter_sparse = refined.sparsity * refined.sparsity < sqrt_alpha;

    // Certificate of the size/degree conclusions.
    let low_bound = (delta - Rat::from_integer(3) * sqrt_alpha) * Rat::from_integer(n);
    let budget = Rat::from_integer(3) * sqrt_alpha * Rat::from_integer(n);
    let mut sides_large = true;
    let mut min_degree_halved = true;
    let mut few_exceptional = true;
    for marked in [&in_side1, &in_side1.iter().map(|&b| !b).collect::<Vec<bool>>()] {
        let members: Vec<usize> = (0..g.n()).filter(|&v| marked[v]).collect();
        if Rat::from_integer(members.len() as i128) < low_bound {
            sides_large = false;
        }
        let mut exceptional = 0i128;
        for &v in &members {
            let internal = g.degree_in(v, marked);
            if 2 * internal < g.min_degree() {
                min_degree_halved = false;
            }
            if Rat::from_integer(internal as i128) < low_bound {
                exceptional += 1;
            }
        }
        if Rat::from_integer(exceptional) > budget {
            few_exceptional = false;
        }
    }
    let certificate = if sides_large && min_degree_halved && few_exceptional && quarter_sparse {
        Some(RefineCertificate { sides_large, min_degree_halved, few_exceptional })
    } else {
        None
    };
    Ok(RefinedCut { cut: refined, stripped, certificate, quarter_sparse })
}

// ---------------------------------------------------------------------------
// Robust partition
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct PartitionParams {
    pub r: usize,
    pub gamma: Rat,
    pub mode: CutMode,
    /// sqrt of the top alpha threshold; default gamma^2 / 16 (so the
    /// top alpha is gamma^4 / 256).
    pub sigma_top: Option<Rat>,
    /// per-level ratio on sigma; default 1/4 (so alphas shrink by 16).
    pub sigma_ratio: Rat,
}

impl PartitionParams {
    pub fn new(r: usize, gamma: Rat, mode: CutMode) -> PartitionParams {
        PartitionParams { r, gamma, mode, sigma_top: None, sigma_ratio: Rat::new(1, 4) }
    }

    /// sigma_1 ... sigma_r, ascending; alpha_j = sigma_j^2.
    pub fn sigma_schedule(&self) -> Vec<Rat> {
        let top = self
            .sigma_top
            .unwrap_or_else(|| self.gamma * self.gamma / Rat::from_integer(16));
        let mut levels = vec![top; self.r];
        for j in (0..self.r.saturating_sub(1)).rev() {
            levels[j] = levels[j + 1] * self.sigma_ratio;
        }
        levels
    }
}

#[derive(Clone, Debug)]
pub struct PartStats {
    pub vertices: Vec<usize>,
    pub min_degree_in_part: usize,
    /// vertices with internal degree below (1/r + gamma/2) n.
    pub exceptional: usize,
    /// exact-mode certificate that the part has no alpha-sparse cut.
    pub alpha_certified: bool,
}

#[derive(Clone, Debug)]
pub struct RobustPartition {
    pub parts: Vec<PartStats>,
    /// terminating threshold: no part has an alpha-sparse cut
    /// (certified in exact mode).
    pub alpha: Rat,
    /// exceptional-count threshold 3 sqrt(alpha_j) at the terminating
    /// step, as an exact rational.
    pub alpha_prime: Rat,
    /// delta(G) >= (1/r + gamma) n held at entry.
    pub hypothesis_met: bool,
    pub splits: usize,
}

/// Iteratively splits parts that admit a sparse cut at the current
/// schedule level, via [`refine_sparse_cut`] on the induced subgraph.
/// With j parts the threshold is alpha_{j+1}; the loop performs at most
/// r-1 splits and errors if a part is still splittable after that.
pub fn robust_partition(g: &Graph, params: &PartitionParams) -> Result<RobustPartition, PartitionError> {
    let n = g.n();
    if n == 0 {
        return Err(PartitionError::Empty);
    }
    let r = params.r.max(2);
    let sigma = params.sigma_schedule();
    let hypothesis_met = Rat::from_integer(g.min_degree() as i128)
        >= (Rat::new(1, r as i128) + params.gamma) * Rat::from_integer(n as i128);

    let mut parts: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut splits = 0usize;
    let (alpha, alpha_prime) = loop {
        let level = parts.len().min(r - 1); // threshold index j+1, 0-based
        let sig = sigma[level];
        let alpha = sig * sig;
        // Scan parts largest-first (ties by index) so splits tend to
        // shrink the maximum part size.
        let mut scan_order: Vec<usize> = (0..parts.len()).collect();
        scan_order.sort_by_key(|&i| (std::cmp::Reverse(parts[i].len()), i));
        let mut split_at: Option<(usize, Cut)> = None;
        for i in scan_order {
            if parts[i].len() < 2 {
                continue;
            }
            let (sub, _) = g.induced(&parts[i]);
            if let Some(cut) = find_sparse_cut(&sub, alpha, params.mode)? {
                split_at = Some((i, cut));
                break;
            }
        }
        match split_at {
            None => {
                let prev = sigma[parts.len().saturating_sub(1).min(r - 1)];
                break (alpha, Rat::from_integer(3) * prev);
            }
            Some((i, cut)) => {
                if splits == r - 1 {
                    return Err(PartitionError::HypothesisViolation { max_parts: r });
                }
                let part = parts[i].clone();
                let (sub, map) = g.induced(&part);
                let delta = Rat::new(1, r as i128) + params.gamma / Rat::from_integer(2);
                let refined = refine_sparse_cut(&sub, &cut, sig, delta)?;
                let side: Vec<usize> = refined.cut.side.iter().map(|&l| map[l]).collect();
                let other: Vec<usize> =
                    part.iter().copied().filter(|v| !side.contains(v)).collect();
                parts[i] = side;
                parts.insert(i + 1, other);
                splits += 1;
            }
        }
    };

    // Per-part statistics, recomputable from g.
    let degree_floor = (Rat::new(1, r as i128) + params.gamma / Rat::from_integer(2))
        * Rat::from_integer(n as i128);
    let part_stats = parts
        .iter()
        .map(|part| {
            let marked = g.mark(part);
            let min_degree_in_part =
                part.iter().map(|&v| g.degree_in(v, &marked)).min().unwrap_or(0);
            let exceptional = part
                .iter()
                .filter(|&&v| Rat::from_integer(g.degree_in(v, &marked) as i128) < degree_floor)
                .count();
            PartStats {
                vertices: part.clone(),
                min_degree_in_part,
                exceptional,
                alpha_certified: params.mode.is_exact(),
            }
        })
        .collect();
    Ok(RobustPartition { parts: part_stats, alpha, alpha_prime, hypothesis_met, splits })
}

// ---------------------------------------------------------------------------
// Robustness checks and near-bipartiteness
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RobustVerdict {
    Robust,
    DegreeTooLow { vertex: usize, degree: usize },
    SparseCut { witness: Cut },
}

#[derive(Clone, Debug)]
pub struct RobustnessClaim {
    pub eta: Rat,
    pub alpha: Rat,
    pub exact: bool,
    pub verdict: RobustVerdict,
}

impl RobustnessClaim {
    pub fn is_robust(&self) -> bool {
        matches!(self.verdict, RobustVerdict::Robust)
    }
}

/// (eta, alpha)-robustness: minimum degree at least eta*n and no
/// alpha-sparse cut. Exact-mode verdicts are certificates; a heuristic
/// "robust" verdict only reports that the search found no cut.
pub fn check_robust(g: &Graph, eta: Rat, alpha: Rat, mode: CutMode) -> Result<RobustnessClaim, PartitionError> {
    let n = Rat::from_integer(g.n() as i128);
    for v in 0..g.n() {
        if Rat::from_integer(g.degree(v) as i128) < eta * n {
            return Ok(RobustnessClaim {
                eta,
                alpha,
                exact: mode.is_exact(),
                verdict: RobustVerdict::DegreeTooLow { vertex: v, degree: g.degree(v) },
            });
        }
    }
    let verdict = match find_sparse_cut(g, alpha, mode)? {
        Some(cut) => {
            debug_assert!(cut.sparsity < alpha);
            RobustVerdict::SparseCut { witness: cut }
        }
        None => RobustVerdict::Robust,
    };
    Ok(RobustnessClaim { eta, alpha, exact: mode.is_exact(), verdict })
}

/// A set X with e(X) < beta n^2 and e(V\X) < beta n^2, if one exists.
/// Exact mode (n <= 24) minimizes max(e(X), e(X_complement)) over all
/// 2^(n-1) splits, so a none-result is a certificate; heuristic mode
/// runs max-cut local search with seeded restarts.
pub fn near_bipartite(g: &Graph, beta: Rat, mode: CutMode) -> Result<Option<Vec<usize>>, PartitionError> {
    let n = g.n();
    if n == 0 {
        return Err(PartitionError::Empty);
    }
    if n == 1 {
        return Ok(Some(vec![]));
    }
    let bound = beta * Rat::from_integer((n * n) as i128);
    let qualifies = |inside: u64, outside: u64| {
        Rat::from_integer(inside as i128) < bound && Rat::from_integer(outside as i128) < bound
    };
    match mode {
        CutMode::Exact { .. } => {
            if n > EXACT_CUT_MAX_N {
                return Err(PartitionError::ExactTooLarge { n, cap: EXACT_CUT_MAX_N });
            }
            let adj = g.adjacency_masks();
            let m = g.m() as u64;
            let mut best: Option<(u64, u64, u64)> = None; // (max_side, mask, e_in)
            for bits in 0..(1u64 << (n - 1)) {
                let mask = bits << 1; // vertex 0 always outside X
                let mut e_in = 0u64;
                let mut crossing = 0u64;
                let mut mm = mask;
                while mm != 0 {
                    let v = mm.trailing_zeros() as usize;
                    mm &= mm - 1;
                    e_in += (adj[v] & mask).count_ones() as u64;
                    crossing += (adj[v] & !mask).count_ones() as u64;
                }
                e_in /= 2;
                let e_out = m - e_in - crossing;
                let key = (e_in.max(e_out), mask, e_in);
                if best.map_or(true, |b| key < b) {
                    best = Some(key);
                }
            }
            let (_, mask, e_in) = best.expect("nonempty scan");
            let e_out = {
                let side: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
                let inv: Vec<bool> = g.mark(&side).iter().map(|&b| !b).collect();
                g.edges_within(&inv) as u64
            };
            if qualifies(e_in, e_out) {
                Ok(Some((0..n).filter(|&v| mask >> v & 1 == 1).collect()))
            } else {
                Ok(None)
            }
        }
        CutMode::Heuristic { seed, restarts } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb1_5bce);
            let mut best: Option<(u64, Vec<usize>, u64, u64)> = None;
            for restart in 0..=restarts {
                let mut marked: Vec<bool> = if restart == 0 {
                    // Greedy 2-coloring start: BFS layers.
                    let mut color = vec![false; n];
                    let mut seen = vec![false; n];
                    for s in 0..n {
                        if seen[s] {
                            continue;
                        }
                        seen[s] = true;
                        let mut queue = std::collections::VecDeque::from([s]);
                        while let Some(v) = queue.pop_front() {
                            for &w in g.neighbors(v) {
                                if !seen[w] {
                                    seen[w] = true;
                                    color[w] = !color[v];
                                    queue.push_back(w);
                                }
                            }
                        }
                    }
                    color
                } else {
                    (0..n).map(|_| rng.gen_bool(0.5)).collect()
                };
                // Local search maximizing the cut (minimizing internal edges).
                loop {
                    let mut moved = false;
                    for v in 0..n {
                        let same =
                            g.neighbors(v).iter().filter(|&&w| marked[w] == marked[v]).count();
                        let diff = g.degree(v) - same;
                        if same > diff {
                            marked[v] = !marked[v];
                            moved = true;
                        }
                    }
                    if !moved {
                        break;
                    }
                }
                let side: Vec<usize> = (0..n).filter(|&v| marked[v]).collect();
                let inv: Vec<bool> = marked.iter().map(|&b| !b).collect();
                let e_in = g.edges_within(&marked) as u64;
                let e_out = g.edges_within(&inv) as u64;
                let key = e_in.max(e_out);
                if best.as_ref().map_or(true, |b| key < b.0) {
                    best = Some((key, side, e_in, e_out));
                }
            }
            let (_, side, e_in, e_out) = best.expect("at least one restart");
            Ok(if qualifies(e_in, e_out) { Some(side) } else { None })
        }
    }
}
