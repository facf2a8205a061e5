//! Immutable simple undirected graphs with dense 0-indexed vertices,
//! file I/O (edge list, DIMACS), and the elementary queries used by
//! every other module: degrees, neighborhoods, cut edge counts,
//! connectivity, induced subgraphs.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::BufRead;

use thiserror::Error;

use crate::ratio::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: parse error: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: self-loop at vertex {v}")]
    SelfLoop { line: usize, v: usize },
    #[error("line {line}: duplicate edge {u}-{v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: vertex {v} out of range (n = {n})")]
    VertexRange { line: usize, v: usize, n: usize },
    #[error("header declares m = {declared} edges but {found} were found")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("cut side must be a nonempty proper vertex subset")]
    BadCutSide,
}

/// Simple undirected graph. Vertices are `0..n`; neighbor lists are
/// sorted and symmetric; no loops or parallel edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    m: usize,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, duplicates
    /// (in either orientation) and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut adj = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for (idx, &(u, v)) in edges.iter().enumerate() {
            let line = idx + 1;
            if u == v {
                return Err(GraphError::SelfLoop { line, v: u });
            }
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexRange { line, v: w, n });
                }
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge { line, u: key.0, v: key.1 });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, m: seen.len(), adj })
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Graph {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Graph::from_edges(n, &edges).expect("complete graph is simple")
    }

    /// Cycle 0-1-...-(n-1)-0; requires n >= 3.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).expect("cycle is simple")
    }

    /// Path 0-1-...-(n-1).
    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("path is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// All edges with endpoints ascending, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Number of neighbors of `v` inside the marked set.
    pub fn degree_in(&self, v: usize, marked: &[bool]) -> usize {
        self.adj[v].iter().filter(|&&w| marked[w]).count()
    }

    /// Number of edges with both endpoints in the marked set.
    pub fn edges_within(&self, marked: &[bool]) -> usize {
        let mut twice = 0;
        for v in 0..self.n {
            if marked[v] {
                twice += self.degree_in(v, marked);
            }
        }
        twice / 2
    }

    /// Converts a vertex list to a membership array, checking range and
    /// rejecting duplicates.
    pub fn mark(&self, vs: &[usize]) -> Vec<bool> {
        let mut marked = vec![false; self.n];
        for &v in vs {
            assert!(v < self.n, "vertex {v} out of range");
            assert!(!marked[v], "duplicate vertex {v}");
            marked[v] = true;
        }
        marked
    }

    /// Exact crossing count and sparsity of the cut {x, V \ x}.
    pub fn cut_edges(&self, x: &[usize]) -> Result<Cut, GraphError> {
        let marked = self.mark(x);
        let size = x.len();
        if size == 0 || size == self.n {
            return Err(GraphError::BadCutSide);
        }
        let mut crossing: u64 = 0;
        for v in 0..self.n {
            if marked[v] {
                crossing += self.adj[v].iter().filter(|&&w| !marked[w]).count() as u64;
            }
        }
        let mut side: Vec<usize> = x.to_vec();
        side.sort_unstable();
        let pairs = (size as i128) * ((self.n - size) as i128);
        Ok(Cut {
            side,
            crossing,
            sparsity: Rat::new(crossing as i128, pairs),
        })
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Connected components as sorted vertex lists, ordered by minimum vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            comp[s] = id;
            let mut members = vec![s];
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Induced subgraph on `vs` (sorted internally). Returns the subgraph
    /// and the map from new indices to original vertices.
    pub fn induced(&self, vs: &[usize]) -> (Graph, Vec<usize>) {
        let mut keep: Vec<usize> = vs.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let mut edges = Vec::new();
        for &v in &keep {
            for &w in &self.adj[v] {
                if v < w && index[w] != usize::MAX {
                    edges.push((index[v], index[w]));
                }
            }
        }
        let g = Graph::from_edges(keep.len(), &edges).expect("induced subgraph is simple");
        (g, keep)
    }

    /// Per-vertex adjacency bitmasks; requires n <= 64.
    pub fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.n <= 64, "bitmask kernels require n <= 64");
        let mut masks = vec![0u64; self.n];
        for v in 0..self.n {
            for &w in &self.adj[v] {
                masks[v] |= 1u64 << w;
            }
        }
        masks
    }

    // ---- I/O ----

    /// Parses the edge-list format: first line "n m", then m lines "u v"
    /// with 0 <= u < v < n.
    pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Graph, GraphError> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        let mut lineno = 0usize;
        for line in reader.lines() {
            lineno += 1;
            let line = line.map_err(|e| GraphError::Parse { line: lineno, msg: e.to_string() })?;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let mut it = text.split_whitespace();
            let a: usize = parse_field(&mut it, lineno, "first field")?;
            let b: usize = parse_field(&mut it, lineno, "second field")?;
            if it.next().is_some() {
                return Err(GraphError::Parse { line: lineno, msg: "trailing fields".into() });
            }
            if header.is_none() {
                header = Some((a, b));
            } else {
                edges.push(((a, b), lineno));
            }
        }
        let (n, m) = header.ok_or(GraphError::Parse { line: 0, msg: "empty input".into() })?;
        if edges.len() != m {
            return Err(GraphError::EdgeCountMismatch { declared: m, found: edges.len() });
        }
        build_with_lines(n, &edges)
    }

    /// Parses DIMACS: "p edge n m" header, "e u v" lines, 1-indexed.
    pub fn read_dimacs<R: BufRead>(reader: R) -> Result<Graph, GraphError> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        let mut lineno = 0usize;
        for line in reader.lines() {
            lineno += 1;
            let line = line.map_err(|e| GraphError::Parse { line: lineno, msg: e.to_string() })?;
            let text = line.trim();
            if text.is_empty() || text.starts_with('c') {
                continue;
            }
            if let Some(rest) = text.strip_prefix('p') {
                if header.is_some() {
                    return Err(GraphError::Parse { line: lineno, msg: "duplicate p line".into() });
                }
                let mut it = rest.split_whitespace();
                match it.next() {
                    Some("edge") | Some("col") => {}
                    other => {
                        return Err(GraphError::Parse {
                            line: lineno,
                            msg: format!("expected 'p edge', got {other:?}"),
                        })
                    }
                }
                let n: usize = parse_field(&mut it, lineno, "vertex count")?;
                let m: usize = parse_field(&mut it, lineno, "edge count")?;
                header = Some((n, m));
            } else if let Some(rest) = text.strip_prefix('e') {
                let (n, _) = header.ok_or(GraphError::Parse {
                    line: lineno,
                    msg: "edge before p line".into(),
                })?;
                let mut it = rest.split_whitespace();
                let u: usize = parse_field(&mut it, lineno, "edge endpoint")?;
                let v: usize = parse_field(&mut it, lineno, "edge endpoint")?;
                if u == 0 || v == 0 || u > n || v > n {
                    let bad = if u == 0 || u > n { u } else { v };
                    return Err(GraphError::VertexRange { line: lineno, v: bad, n });
                }
                edges.push(((u - 1, v - 1), lineno));
            } else {
                return Err(GraphError::Parse {
                    line: lineno,
                    msg: format!("unrecognized line {text:?}"),
                });
            }
        }
        let (n, m) = header.ok_or(GraphError::Parse { line: 0, msg: "missing p line".into() })?;
        if edges.len() != m {
            return Err(GraphError::EdgeCountMismatch { declared: m, found: edges.len() });
        }
        build_with_lines(n, &edges)
    }

    /// Canonical edge-list output: "n m" then edges sorted
    /// lexicographically with ascending endpoints, LF line endings.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, self.m);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// DOT export; vertices in `emphasize` (e.g. branch vertices) are
    /// drawn filled.
    pub fn to_dot(&self, emphasize: &[usize]) -> String {
        let strong = self.mark(emphasize);
        let mut out = String::from("graph g {\n");
        for v in 0..self.n {
            if strong[v] {
                let _ = writeln!(out, "  {v} [style=filled, shape=doublecircle];");
            } else {
                let _ = writeln!(out, "  {v};");
            }
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }
}

fn parse_field<'a, I: Iterator<Item = &'a str>>(
    it: &mut I,
    line: usize,
    what: &str,
) -> Result<usize, GraphError> {
    let tok = it.next().ok_or(GraphError::Parse { line, msg: format!("missing {what}") })?;
    tok.parse().map_err(|_| GraphError::Parse { line, msg: format!("bad {what}: {tok:?}") })
}

fn build_with_lines(n: usize, edges: &[((usize, usize), usize)]) -> Result<Graph, GraphError> {
    // Re-run the simplicity checks with the original line numbers.
    let mut seen = BTreeSet::new();
    for &((u, v), line) in edges {
        if u == v {
            return Err(GraphError::SelfLoop { line, v: u });
        }
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::VertexRange { line, v: w, n });
            }
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(GraphError::DuplicateEdge { line, u: u.min(v), v: u.max(v) });
        }
    }
    let plain: Vec<(usize, usize)> = edges.iter().map(|&(e, _)| e).collect();
    Graph::from_edges(n, &plain)
}

/// One side of a cut together with its exact crossing count and sparsity
/// e(X, V\X) / (|X| |V\X|).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    pub side: Vec<usize>,
    pub crossing: u64,
    pub sparsity: Rat,
}

impl Cut {
    /// True when this cut is alpha-sparse: crossing < alpha |X| |V\X|.
    pub fn is_sparse(&self, alpha: Rat) -> bool {
        self.sparsity < alpha
    }
}

/// Two disjoint cliques of size `k` joined by the single edge (0, k).
pub fn two_cliques_bridge(k: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..k {
        for v in u + 1..k {
            edges.push((u, v));
            edges.push((k + u, k + v));
        }
    }
    edges.push((0, k));
    Graph::from_edges(2 * k, &edges).expect("simple by construction")
}

/// The Petersen graph: outer 5-cycle, inner 5-cycle with step 2, spokes.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, 5 + i));
    }
    Graph::from_edges(10, &edges).expect("simple by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::rat;
    use proptest::prelude::*;

    #[test]
    fn load_path_p3() {
        let g = Graph::read_edge_list("3 2\n0 1\n1 2".as_bytes()).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 2);
        assert_eq!(
            (0..3).map(|v| g.degree(v)).collect::<Vec<_>>(),
            vec![1, 2, 1]
        );
    }

    #[test]
    fn load_rejects_self_loop() {
        let err = Graph::read_edge_list("2 1\n0 0".as_bytes()).unwrap_err();
        assert_eq!(err, GraphError::SelfLoop { line: 2, v: 0 });
    }

    #[test]
    fn load_k4() {
        let g = Graph::read_edge_list("4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3".as_bytes()).unwrap();
        assert_eq!(g.m(), 6);
        assert_eq!(g.min_degree(), 3);
    }

    #[test]
    fn load_rejects_duplicates_and_mismatch() {
        assert_eq!(
            Graph::read_edge_list("3 2\n0 1\n1 0".as_bytes()).unwrap_err(),
            GraphError::DuplicateEdge { line: 3, u: 0, v: 1 }
        );
        assert_eq!(
            Graph::read_edge_list("3 3\n0 1\n1 2".as_bytes()).unwrap_err(),
            GraphError::EdgeCountMismatch { declared: 3, found: 2 }
        );
    }

    #[test]
    fn dimacs_is_one_indexed() {
        let g = Graph::read_dimacs("c a comment\np edge 3 2\ne 1 2\ne 2 3".as_bytes()).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
        assert!(Graph::read_dimacs("p edge 3 1\ne 0 1".as_bytes()).is_err());
        assert!(Graph::read_dimacs("p edge 3 1\ne 1 4".as_bytes()).is_err());
    }

    #[test]
    fn cut_k4_pair() {
        let g = Graph::complete(4);
        let cut = g.cut_edges(&[0, 1]).unwrap();
        assert_eq!(cut.crossing, 4);
        assert_eq!(cut.sparsity, rat(1, 1));
    }

    #[test]
    fn cut_two_k5_bridge() {
        let g = two_cliques_bridge(5);
        let cut = g.cut_edges(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(cut.crossing, 1);
        assert_eq!(cut.sparsity, rat(1, 25));
    }

    #[test]
    fn cut_c6_alternating() {
        let g = Graph::cycle(6);
        let cut = g.cut_edges(&[0, 2, 4]).unwrap();
        assert_eq!(cut.crossing, 6);
        assert_eq!(cut.sparsity, rat(6, 9));
        assert_eq!(cut.sparsity, rat(2, 3));
    }

    #[test]
    fn cut_rejects_trivial_sides() {
        let g = Graph::complete(3);
        assert_eq!(g.cut_edges(&[]).unwrap_err(), GraphError::BadCutSide);
        assert_eq!(g.cut_edges(&[0, 1, 2]).unwrap_err(), GraphError::BadCutSide);
    }

    #[test]
    fn connectivity() {
        assert!(Graph::complete(4).is_connected());
        assert!(Graph::from_edges(1, &[]).unwrap().is_connected());
        let two_edges = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(!two_edges.is_connected());
        assert_eq!(two_edges.components(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn induced_relabels() {
        let g = two_cliques_bridge(3);
        let (h, map) = g.induced(&[3, 4, 5]);
        assert_eq!(h.n(), 3);
        assert_eq!(h.m(), 3);
        assert_eq!(map, vec![3, 4, 5]);
    }

    fn arbitrary_graph() -> impl Strategy<Value = Graph> {
        (2usize..9).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            proptest::collection::vec(proptest::bool::ANY, pairs.len()).prop_map(move |mask| {
                let edges: Vec<_> = pairs
                    .iter()
                    .zip(&mask)
                    .filter(|(_, &keep)| keep)
                    .map(|(&e, _)| e)
                    .collect();
                Graph::from_edges(n, &edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(g in arbitrary_graph()) {
            let text = g.to_edge_list();
            let back = Graph::read_edge_list(text.as_bytes()).unwrap();
            prop_assert_eq!(back.to_edge_list(), text);
            prop_assert_eq!(back, g);
        }

        /// Every edge is inside X, inside the complement, or crossing:
        /// crossing + e(X) + e(complement) = m.
        #[test]
        fn cut_identity(g in arbitrary_graph(), mask in proptest::collection::vec(proptest::bool::ANY, 2..9)) {
            let side: Vec<usize> = (0..g.n()).filter(|&v| *mask.get(v).unwrap_or(&false)).collect();
            prop_assume!(!side.is_empty() && side.len() < g.n());
            let cut = g.cut_edges(&side).unwrap();
            let marked = g.mark(&side);
            let inv: Vec<bool> = marked.iter().map(|&b| !b).collect();
            let inside = g.edges_within(&marked) as u64;
            let outside = g.edges_within(&inv) as u64;
            prop_assert_eq!(cut.crossing + inside + outside, g.m() as u64);
        }

        #[test]
        fn degree_sum_is_twice_m(g in arbitrary_graph()) {
            let total: usize = (0..g.n()).map(|v| g.degree(v)).sum();
            prop_assert_eq!(total, 2 * g.m());
        }
    }
}
