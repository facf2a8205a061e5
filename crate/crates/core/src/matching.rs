//! Maximum matchings (blossom augmentation), Gallai–Edmonds sets,
//! fractional matchings, and maximum 2-matchings carrying the two
//! structural guarantees used downstream: the unsaturated set lies
//! inside A1, and the 2-matching edges meeting A1 form a matching that
//! saturates N(A1).

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::bipartite::{hopcroft_karp, Bipartite};
use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatchingError {
    #[error("edge {u}-{v} not in host graph")]
    PhantomEdge { u: usize, v: usize },
    #[error("vertex {v} exceeds weight 1")]
    Overloaded { v: usize },
    #[error("not basic: half-weight component at vertex {v} is {kind}")]
    NotBasic { v: usize, kind: &'static str },
}

// ---------------------------------------------------------------------------
// Matchings
// ---------------------------------------------------------------------------

/// A matching: pairwise vertex-disjoint edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn from_partner_array(partner: &[Option<usize>]) -> Matching {
        let mut pairs = Vec::new();
        for (v, p) in partner.iter().enumerate() {
            if let Some(w) = *p {
                if v < w {
                    pairs.push((v, w));
                }
            }
        }
        Matching { pairs }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn size(&self) -> usize {
        self.pairs.len()
    }

    pub fn saturated(&self) -> BTreeSet<usize> {
        self.pairs.iter().flat_map(|&(u, v)| [u, v]).collect()
    }

    pub fn partner(&self, v: usize) -> Option<usize> {
        self.pairs.iter().find_map(|&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }
}

/// Maximum-cardinality matching in a general graph: greedy seed in
/// lexicographic edge order, then blossom augmentation from each
/// remaining free vertex in index order.
pub fn max_matching(g: &Graph) -> Matching {
    Matching::from_partner_array(&max_matching_partners(g))
}

fn max_matching_partners(g: &Graph) -> Vec<Option<usize>> {
    let n = g.n();
    let mut partner: Vec<Option<usize>> = vec![None; n];
    for (u, v) in g.edges() {
        if partner[u].is_none() && partner[v].is_none() {
            partner[u] = Some(v);
            partner[v] = Some(u);
        }
    }
    for root in 0..n {
        if partner[root].is_none() {
            augment_from(g, &mut partner, root);
        }
    }
    partner
}

/// One phase of blossom search: BFS the alternating tree from `root`,
/// contracting blossoms via the `base` array; on reaching a free vertex
/// flip the path. Returns whether an augmentation happened.
fn augment_from(g: &Graph, partner: &mut [Option<usize>], root: usize) -> bool {
    let n = g.n();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut base: Vec<usize> = (0..n).collect();
    let mut in_tree = vec![false; n]; // "even" vertices of the tree
    let mut queue = VecDeque::new();
    in_tree[root] = true;
    queue.push_back(root);

    let lca = |base: &[usize], parent: &[Option<usize>], partner: &[Option<usize>], a: usize, b: usize| {
        let mut seen = vec![false; n];
        let mut v = a;
        loop {
            v = base[v];
            seen[v] = true;
            match partner[v] {
                None => break, // reached the (free) root
                Some(m) => v = parent[m].expect("even vertex partner has a parent"),
            }
        }
        let mut v = b;
        loop {
            v = base[v];
            if seen[v] {
                return v;
            }
            v = parent[partner[v].expect("matched on tree path")].expect("parent on tree path");
        }
    };

    let mark_path = |blossom: &mut [bool],
                     parent: &mut [Option<usize>],
                     base: &[usize],
                     partner: &[Option<usize>],
                     mut v: usize,
                     b: usize,
                     mut child: usize| {
        while base[v] != b {
            let m = partner[v].expect("blossom path is matched");
            blossom[base[v]] = true;
            blossom[base[m]] = true;
            parent[v] = Some(child);
            child = m;
            v = parent[m].expect("blossom path has parents");
        }
    };

    while let Some(v) = queue.pop_front() {
        for &to in g.neighbors(v) {
            if base[v] == base[to] || partner[v] == Some(to) {
                continue;
            }
            let to_is_even = to == root || partner[to].map_or(false, |m| parent[m].is_some());
            if to_is_even {
                // Odd cycle: contract the blossom.
                let cur_base = lca(&base, &parent, partner, v, to);
                let mut blossom = vec![false; n];
                mark_path(&mut blossom, &mut parent, &base, partner, v, cur_base, to);
                mark_path(&mut blossom, &mut parent, &base, partner, to, cur_base, v);
                for i in 0..n {
                    if blossom[base[i]] {
                        base[i] = cur_base;
                        if !in_tree[i] {
                            in_tree[i] = true;
                            queue.push_back(i);
                        }
                    }
                }
            } else if parent[to].is_none() {
                parent[to] = Some(v);
                match partner[to] {
                    None => {
                        // Augmenting path found; flip it.
                        let mut u = to;
                        loop {
                            let pv = parent[u].expect("augmenting path parent");
                            let next = partner[pv];
                            partner[u] = Some(pv);
                            partner[pv] = Some(u);
                            match next {
                                Some(nu) => u = nu,
                                None => break,
                            }
                        }
                        return true;
                    }
                    Some(m) => {
                        if !in_tree[m] {
                            in_tree[m] = true;
                            queue.push_back(m);
                        }
                    }
                }
            }
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Gallai–Edmonds sets
// ---------------------------------------------------------------------------

/// The sets of the Gallai–Edmonds-type structure: `a` is the set of
/// vertices unsaturated in some maximum matching, and `a1` the
/// singleton components of the subgraph induced on `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GallaiEdmonds {
    pub a: Vec<usize>,
    pub a1: Vec<usize>,
    pub nu: usize,
}

/// Computes A by the deletion test (v is in A iff deleting v does not
/// reduce the maximum matching size) and A1 as the isolated vertices of
/// the induced subgraph on A.
pub fn gallai_edmonds_sets(g: &Graph) -> GallaiEdmonds {
    let nu = max_matching(g).size();
    let mut a = Vec::new();
    for v in 0..g.n() {
        let keep: Vec<usize> = (0..g.n()).filter(|&w| w != v).collect();
        let (h, _) = g.induced(&keep);
        if max_matching(&h).size() == nu {
            a.push(v);
        }
    }
    let in_a = g.mark(&a);
    let a1 = a
        .iter()
        .copied()
        .filter(|&v| g.degree_in(v, &in_a) == 0)
        .collect();
    GallaiEdmonds { a, a1, nu }
}

// ---------------------------------------------------------------------------
// Fractional matchings
// ---------------------------------------------------------------------------

/// Edge weights in {0, 1/2, 1} stored in half-units (1 or 2; absent
/// edges carry 0), with per-vertex incident weight at most 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FractionalMatching {
    halves: BTreeMap<(usize, usize), u8>,
}

impl FractionalMatching {
    pub fn new() -> FractionalMatching {
        FractionalMatching { halves: BTreeMap::new() }
    }

    /// Sets the weight of an edge in half-units (1 = weight 1/2,
    /// 2 = weight 1). Endpoint order is normalized.
    pub fn set(&mut self, u: usize, v: usize, halves: u8) {
        assert!(halves == 1 || halves == 2);
        assert_ne!(u, v);
        self.halves.insert((u.min(v), u.max(v)), halves);
    }

    pub fn weight_halves(&self, u: usize, v: usize) -> u8 {
        *self.halves.get(&(u.min(v), u.max(v))).unwrap_or(&0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u8)> + '_ {
        self.halves.iter().map(|(&(u, v), &h)| (u, v, h))
    }

    pub fn vertex_weight_halves(&self, v: usize) -> u8 {
        self.halves
            .iter()
            .filter(|(&(a, b), _)| a == v || b == v)
            .map(|(_, &h)| h)
            .sum()
    }

    /// Total weight in half-units.
    pub fn total_halves(&self) -> u64 {
        self.halves.values().map(|&h| h as u64).sum()
    }

    /// Checks edges exist in `g` and every vertex weight is at most 1.
    pub fn validate(&self, g: &Graph) -> Result<(), MatchingError> {
        let mut load = vec![0u8; g.n()];
        for (&(u, v), &h) in &self.halves {
            if u >= g.n() || v >= g.n() || !g.has_edge(u, v) {
                return Err(MatchingError::PhantomEdge { u, v });
            }
            load[u] += h;
            load[v] += h;
        }
        for v in 0..g.n() {
            if load[v] > 2 {
                return Err(MatchingError::Overloaded { v });
            }
        }
        Ok(())
    }

    fn half_adjacency(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (&(u, v), &h) in &self.halves {
            if h == 1 {
                adj.entry(u).or_default().push(v);
                adj.entry(v).or_default().push(u);
            }
        }
        adj
    }

    /// Basic form: no vertex of weight exactly 1/2 and no even cycle of
    /// half-weight edges; equivalently the half-weight edges form
    /// vertex-disjoint odd cycles.
    pub fn is_basic(&self) -> bool {
        self.half_components().iter().all(|c| matches!(c, HalfComponent::OddCycle(_)))
    }

    /// Connected components of the half-weight subgraph, each a path or
    /// a cycle (vertex weights at most 1 force half-degree at most 2).
    fn half_components(&self) -> Vec<HalfComponent> {
        let adj = self.half_adjacency();
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        let mut out = Vec::new();
        let verts: Vec<usize> = adj.keys().copied().collect();
        for &start in &verts {
            if seen.contains(&start) {
                continue;
            }
            // Walk to an endpoint if the component is a path.
            let comp = trace_component(&adj, start, &mut seen);
            out.push(comp);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum HalfComponent {
    /// Vertex sequence of a path (at least one edge).
    Path(Vec<usize>),
    OddCycle(Vec<usize>),
    EvenCycle(Vec<usize>),
}

fn trace_component(
    adj: &BTreeMap<usize, Vec<usize>>,
    start: usize,
    seen: &mut BTreeSet<usize>,
) -> HalfComponent {
    // Find an endpoint (degree 1) if one exists, else it is a cycle.
    let mut endpoint = None;
    {
        let mut stack = vec![start];
        let mut local: BTreeSet<usize> = BTreeSet::new();
        local.insert(start);
        while let Some(v) = stack.pop() {
            if adj[&v].len() == 1 {
                endpoint = Some(endpoint.map_or(v, |e: usize| e.min(v)));
            }
            for &w in &adj[&v] {
                if local.insert(w) {
                    stack.push(w);
                }
            }
        }
    }
    let first = endpoint.unwrap_or(start);
    let mut order = vec![first];
    seen.insert(first);
    let mut prev = None;
    let mut cur = first;
    loop {
        let next = adj[&cur].iter().copied().find(|&w| Some(w) != prev && !order.contains(&w));
        match next {
            Some(w) => {
                order.push(w);
                seen.insert(w);
                prev = Some(cur);
                cur = w;
            }
            None => break,
        }
    }
    let closes = adj[&cur].contains(&first) && order.len() >= 3 && endpoint.is_none();
    if closes {
        if order.len() % 2 == 1 {
            HalfComponent::OddCycle(order)
        } else {
            HalfComponent::EvenCycle(order)
        }
    } else {
        HalfComponent::Path(order)
    }
}

/// Rounds a fractional matching to basic form without decreasing total
/// weight: half-weight paths are re-weighted to alternating 1/0
/// starting at the lower-indexed endpoint, even half-cycles to
/// alternating 1/0 starting at the minimum vertex, odd half-cycles and
/// weight-1 edges kept.
pub fn basify(f: &FractionalMatching, g: &Graph) -> Result<FractionalMatching, MatchingError> {
    f.validate(g)?;
    let mut out = FractionalMatching::new();
    for (u, v, h) in f.edges() {
        if h == 2 {
            out.set(u, v, 2);
        }
    }
    for comp in f.half_components() {
        match comp {
            HalfComponent::OddCycle(order) => {
                for i in 0..order.len() {
                    out.set(order[i], order[(i + 1) % order.len()], 1);
                }
            }
            HalfComponent::Path(order) => {
                // Edges e_1..e_k along the path; full weight on e_1, e_3, ...
                for i in (0..order.len() - 1).step_by(2) {
                    out.set(order[i], order[i + 1], 2);
                }
            }
            HalfComponent::EvenCycle(order) => {
                let k = order.len();
                let start = order.iter().cloned().enumerate().min_by_key(|&(_, v)| v).unwrap().0;
                for step in (0..k).step_by(2) {
                    let a = order[(start + step) % k];
                    let b = order[(start + step + 1) % k];
                    out.set(a, b, 2);
                }
            }
        }
    }
    debug_assert!(out.total_halves() >= f.total_halves());
    debug_assert!(out.is_basic());
    Ok(out)
}

// ---------------------------------------------------------------------------
// 2-matchings
// ---------------------------------------------------------------------------

/// A 2-matching: vertex-disjoint single edges and odd cycles.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwoMatching {
    pub edges: Vec<(usize, usize)>,
    pub odd_cycles: Vec<Vec<usize>>,
}

impl TwoMatching {
    pub fn saturated(&self) -> BTreeSet<usize> {
        let mut s: BTreeSet<usize> = self.edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        s.extend(self.odd_cycles.iter().flatten().copied());
        s
    }

    pub fn saturated_count(&self) -> usize {
        self.saturated().len()
    }

    /// Total weight in half-units: 2 per edge plus cycle lengths.
    pub fn total_halves(&self) -> u64 {
        2 * self.edges.len() as u64 + self.odd_cycles.iter().map(|c| c.len() as u64).sum::<u64>()
    }

    pub fn validate(&self, g: &Graph) -> Result<(), MatchingError> {
        let mut used = vec![false; g.n()];
        let mut take = |v: usize| -> Result<(), MatchingError> {
            if used[v] {
                return Err(MatchingError::Overloaded { v });
            }
            used[v] = true;
            Ok(())
        };
        for &(u, v) in &self.edges {
            if !g.has_edge(u, v) {
                return Err(MatchingError::PhantomEdge { u, v });
            }
            take(u)?;
            take(v)?;
        }
        for cyc in &self.odd_cycles {
            assert!(cyc.len() >= 3 && cyc.len() % 2 == 1, "cycle must be odd, length >= 3");
            for i in 0..cyc.len() {
                let (u, v) = (cyc[i], cyc[(i + 1) % cyc.len()]);
                if !g.has_edge(u, v) {
                    return Err(MatchingError::PhantomEdge { u, v });
                }
            }
            for &v in cyc {
                take(v)?;
            }
        }
        Ok(())
    }

    pub fn to_fractional(&self) -> FractionalMatching {
        let mut f = FractionalMatching::new();
        for &(u, v) in &self.edges {
            f.set(u, v, 2);
        }
        for cyc in &self.odd_cycles {
            for i in 0..cyc.len() {
                f.set(cyc[i], cyc[(i + 1) % cyc.len()], 1);
            }
        }
        f
    }
}

/// Converts a basic fractional matching: weight-1 edges become matching
/// edges, half-weight odd cycles become cycle components. Errors on
/// non-basic input (half-weight path or even half-cycle).
pub fn fractional_to_two_matching(f: &FractionalMatching) -> Result<TwoMatching, MatchingError> {
    let mut out = TwoMatching::default();
    for (u, v, h) in f.edges() {
        if h == 2 {
            out.edges.push((u, v));
        }
    }
    for comp in f.half_components() {
        match comp {
            HalfComponent::OddCycle(order) => out.odd_cycles.push(order),
            HalfComponent::Path(order) => {
                return Err(MatchingError::NotBasic { v: order[0], kind: "path" })
            }
            HalfComponent::EvenCycle(order) => {
                return Err(MatchingError::NotBasic { v: order[0], kind: "even cycle" })
            }
        }
    }
    debug_assert_eq!(out.total_halves(), f.total_halves());
    Ok(out)
}

/// Maximum fractional matching via the bipartite double cover: each
/// edge uv becomes u_L v_R and v_L u_R; a maximum matching there has
/// size equal to the maximum fractional weight in half-units.
pub fn max_fractional_matching(g: &Graph) -> FractionalMatching {
    let n = g.n();
    let mut adj = vec![Vec::new(); n];
    for (u, v) in g.edges() {
        adj[u].push(v);
        adj[v].push(u);
    }
    let bg = Bipartite::new(n, n, adj);
    let m = hopcroft_karp(&bg);
    let mut halves: BTreeMap<(usize, usize), u8> = BTreeMap::new();
    for (l, r) in m.pairs() {
        *halves.entry((l.min(r), l.max(r))).or_insert(0) += 1;
    }
    let mut f = FractionalMatching::new();
    for ((u, v), h) in halves {
        f.set(u, v, h);
    }
    f
}

/// Result of [`max_two_matching`]: the 2-matching together with the
/// Gallai–Edmonds sets and the saturating sub-matching on (A1, N(A1)).
#[derive(Clone, Debug)]
pub struct TwoMatchingResult {
    pub two_matching: TwoMatching,
    pub ge: GallaiEdmonds,
    /// The 2-matching edges incident with A1: a matching saturating N(A1).
    pub a1_edges: Vec<(usize, usize)>,
}

/// Maximum 2-matching with the two structural guarantees: the
/// unsaturated vertices form a subset of A1, and the edges meeting A1
/// form a matching saturating N(A1). Built directly from the
/// Gallai–Edmonds structure: a perfect matching outside A and N(A),
/// vertices of N(A) not adjacent to A1 matched into distinct
/// non-singleton components of G[A], a maximum (A1, N(A1)) matching,
/// and each remaining non-singleton component covered by a spanning
/// union of one odd cycle and a matching (components of G[A] are
/// factor-critical). Cycle vertices are locally minimized by preferring
/// the shortest odd cycle whose complement has a perfect matching.
pub fn max_two_matching(g: &Graph) -> TwoMatchingResult {
    let n = g.n();
    let partner = max_matching_partners(g);
    let ge = gallai_edmonds_sets(g);
    let in_a = g.mark(&ge.a);
    let in_a1 = g.mark(&ge.a1);

    // N(A) \ A, and its split by adjacency to A1.
    let c_set: Vec<usize> = (0..n)
        .filter(|&v| !in_a[v] && g.neighbors(v).iter().any(|&w| in_a[w]))
        .collect();
    let in_c = g.mark(&c_set);
    let b_set: Vec<usize> = c_set
        .iter()
        .copied()
        .filter(|&v| g.neighbors(v).iter().any(|&w| in_a1[w]))
        .collect();
    let in_b = g.mark(&b_set);

    let mut out = TwoMatching::default();

    // Vertices outside A and N(A) are perfectly matched among themselves
    // by every maximum matching.
    for v in 0..n {
        if in_a[v] || in_c[v] {
            continue;
        }
        let w = partner[v].expect("vertex outside A and N(A) is saturated");
        assert!(!in_a[w] && !in_c[w], "matching leaves the outer set");
        if v < w {
            out.edges.push((v, w));
        }
    }

    // Non-singleton components of G[A], with the component id per vertex.
    let (ga, a_map) = g.induced(&ge.a);
    let comps = ga.components();
    let mut comp_of = vec![usize::MAX; n];
    for (ci, comp) in comps.iter().enumerate() {
        for &local in comp {
            comp_of[a_map[local]] = ci;
        }
    }

    // N(A)-vertices not adjacent to A1 keep their matched edge into a
    // component of G[A]; distinct vertices use distinct components.
    let mut comp_entry: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for &c in &c_set {
        if in_b[c] {
            continue;
        }
        let x = partner[c].expect("N(A) vertices are saturated in a maximum matching");
        assert!(in_a[x], "N(A) is matched into A");
        let ci = comp_of[x];
        assert!(comps[ci].len() > 1, "vertex outside N(A1) matched to a singleton of G[A]");
        let dup = comp_entry.insert(ci, (c, x));
        assert!(dup.is_none(), "two N(A) vertices matched into one component");
        out.edges.push((c.min(x), c.max(x)));
    }

    // Maximum matching between A1 and B = N(A1); it must saturate B.
    let b_index: BTreeMap<usize, usize> = b_set.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut h_adj: Vec<Vec<usize>> = vec![Vec::new(); ge.a1.len()];
    for (i, &a) in ge.a1.iter().enumerate() {
        for &w in g.neighbors(a) {
            if let Some(&bi) = b_index.get(&w) {
                h_adj[i].push(bi);
            }
        }
    }
    let h = Bipartite::new(ge.a1.len(), b_set.len(), h_adj);
    let hm = hopcroft_karp(&h);
    assert_eq!(hm.size(), b_set.len(), "no (A1, N(A1)) matching saturates N(A1)");
    let mut a1_edges = Vec::new();
    for (l, r) in hm.pairs() {
        let (u, v) = (ge.a1[l], b_set[r]);
        a1_edges.push((u.min(v), u.max(v)));
        out.edges.push((u.min(v), u.max(v)));
    }

    // Cover each remaining non-singleton component entirely: near-perfect
    // matching around the N(A)-entry point if one exists, else one odd
    // cycle plus a perfect matching on the rest.
    for (ci, comp) in comps.iter().enumerate() {
        if comp.len() == 1 {
            continue;
        }
        let global: Vec<usize> = comp.iter().map(|&l| a_map[l]).collect();
        if let Some(&(_, x)) = comp_entry.get(&ci) {
            // The maximum matching restricted to this component misses
            // exactly x; reuse it.
            let mut covered = 1usize;
            for &v in &global {
                if v == x {
                    continue;
                }
                let w = partner[v].expect("near-perfect matching inside component");
                assert!(comp_of[w] == ci, "component matching stays inside");
                if v < w {
                    out.edges.push((v, w));
                    covered += 2;
                }
            }
            assert_eq!(covered, global.len());
        } else {
            let (sub, sub_map) = g.induced(&global);
            let cover = odd_cycle_cover(&sub);
            for (u, v) in cover.edges {
                out.edges.push(order(sub_map[u], sub_map[v]));
            }
            for cyc in cover.odd_cycles {
                out.odd_cycles.push(cyc.into_iter().map(|v| sub_map[v]).collect());
            }
        }
    }

    // The two structural guarantees, asserted on output.
    let saturated = out.saturated();
    for v in 0..n {
        if !saturated.contains(&v) {
            assert!(in_a1[v], "unsaturated vertex {v} outside A1");
        }
    }
    let mut seen_b = BTreeSet::new();
    let mut touched = BTreeSet::new();
    for &(u, v) in &out.edges {
        for (x, y) in [(u, v), (v, u)] {
            if in_a1[x] {
                assert!(!touched.contains(&x), "A1 vertex {x} on two edges");
                touched.insert(x);
                assert!(in_b[y]);
                seen_b.insert(y);
            }
        }
    }
    for cyc in &out.odd_cycles {
        for &v in cyc {
            assert!(!in_a1[v], "A1 vertex {v} on an odd cycle");
        }
    }
    assert_eq!(seen_b.len(), b_set.len(), "A1-incident edges must saturate N(A1)");

    out.edges.sort_unstable();
    a1_edges.sort_unstable();
    debug_assert!(out.validate(g).is_ok());
    TwoMatchingResult { two_matching: out, ge, a1_edges }
}

fn order(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// Spanning union of odd cycles and a matching on a factor-critical
/// graph. Tries BFS-tree fundamental odd cycles in increasing length,
/// keeping the first whose complement has a perfect matching; falls
/// back to rounding a perfect fractional matching (which may use
/// several cycles).
fn odd_cycle_cover(g: &Graph) -> TwoMatching {
    let n = g.n();
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    for root in 0..n {
        let mut depth = vec![usize::MAX; n];
        let mut par = vec![usize::MAX; n];
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    par[w] = v;
                    queue.push_back(w);
                }
            }
        }
        for (u, v) in g.edges() {
            if depth[u] == usize::MAX || depth[v] == usize::MAX {
                continue;
            }
            // Fundamental cycle through the BFS tree.
            let (mut x, mut y) = (u, v);
            let mut left = vec![x];
            let mut right = vec![y];
            while depth[x] > depth[y] {
                x = par[x];
                left.push(x);
            }
            while depth[y] > depth[x] {
                y = par[y];
                right.push(y);
            }
            while x != y {
                x = par[x];
                y = par[y];
                left.push(x);
                right.push(y);
            }
            right.pop();
            right.reverse();
            left.extend(right);
            if left.len() >= 3 && left.len() % 2 == 1 {
                candidates.push(left);
            }
        }
    }
    candidates.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    candidates.dedup();
    for cyc in &candidates {
        let rest: Vec<usize> = {
            let on: BTreeSet<usize> = cyc.iter().copied().collect();
            (0..n).filter(|v| !on.contains(v)).collect()
        };
        let (sub, sub_map) = g.induced(&rest);
        let m = max_matching(&sub);
        if 2 * m.size() == rest.len() {
            return TwoMatching {
                edges: m.pairs().iter().map(|&(u, v)| order(sub_map[u], sub_map[v])).collect(),
                odd_cycles: vec![cyc.clone()],
            };
        }
    }
    // Fallback: perfect fractional matching rounded to basic form.
    let f = max_fractional_matching(g);
    assert_eq!(f.total_halves() as usize, n, "factor-critical graph lacks perfect fractional matching");
    let basic = basify(&f, g).expect("valid by construction");
    fractional_to_two_matching(&basic).expect("basic by construction")
}
