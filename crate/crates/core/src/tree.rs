//! Trees and spanning trees with their branch-vertex census.
//!
//! A branch vertex is a vertex of tree-degree at least three. `Tree`
//! covers an arbitrary vertex subset of a host graph; `SpanningTree`
//! additionally spans all of `0..n`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("edge count {edges} does not match vertex count {vertices} (want vertices - 1)")]
    EdgeCount { edges: usize, vertices: usize },
    #[error("edge {u}-{v} closes a cycle")]
    Cycle { u: usize, v: usize },
    #[error("edge {u}-{v} is not present in the host graph")]
    PhantomEdge { u: usize, v: usize },
    #[error("tree does not span all {n} vertices (covers {covered})")]
    NotSpanning { n: usize, covered: usize },
}

/// A tree on an arbitrary vertex set, stored as an edge list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    edges: Vec<(usize, usize)>,
    degree: BTreeMap<usize, usize>,
}

impl Tree {
    /// Validates acyclicity and connectivity over the endpoint set.
    /// `isolated` lists covered vertices with no incident edge (only
    /// meaningful for single-vertex trees).
    pub fn new(edges: Vec<(usize, usize)>, isolated: &[usize]) -> Result<Tree, TreeError> {
        let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
        for &v in isolated {
            degree.insert(v, 0);
        }
        let mut dsu = Dsu::new();
        for &(u, v) in &edges {
            if dsu.union(u, v).is_err() {
                return Err(TreeError::Cycle { u, v });
            }
            *degree.entry(u).or_insert(0) += 1;
            *degree.entry(v).or_insert(0) += 1;
        }
        let vertices = degree.len();
        if vertices > 0 && edges.len() + 1 != vertices {
            return Err(TreeError::EdgeCount { edges: edges.len(), vertices });
        }
        Ok(Tree { edges, degree })
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.degree.keys().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.degree.len()
    }

    pub fn covers(&self, v: usize) -> bool {
        self.degree.contains_key(&v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degree.get(&v).copied().unwrap_or(0)
    }

    /// Vertices of tree-degree >= 3, ascending.
    pub fn branch_vertices(&self) -> Vec<usize> {
        self.degree
            .iter()
            .filter(|&(_, &d)| d >= 3)
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn branch_count(&self) -> usize {
        self.degree.values().filter(|&&d| d >= 3).count()
    }

    pub fn leaf_count(&self) -> usize {
        self.degree.values().filter(|&&d| d == 1).count()
    }

    /// Checks every edge exists in `g`.
    pub fn check_edges_in(&self, g: &Graph) -> Result<(), TreeError> {
        for &(u, v) in &self.edges {
            if u >= g.n() || v >= g.n() || !g.has_edge(u, v) {
                return Err(TreeError::PhantomEdge { u, v });
            }
        }
        Ok(())
    }
}

/// A spanning tree of a host graph on `n` vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    n: usize,
    tree: Tree,
}

impl SpanningTree {
    /// Validates: every edge in `g`, acyclic, connected, spans `0..n`.
    pub fn new(g: &Graph, edges: Vec<(usize, usize)>) -> Result<SpanningTree, TreeError> {
        let isolated: Vec<usize> = if g.n() == 1 { vec![0] } else { vec![] };
        let tree = Tree::new(edges, &isolated)?;
        tree.check_edges_in(g)?;
        if tree.vertex_count() != g.n() {
            return Err(TreeError::NotSpanning { n: g.n(), covered: tree.vertex_count() });
        }
        Ok(SpanningTree { n: g.n(), tree })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        self.tree.edges()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.tree.degree(v)
    }

    pub fn branch_vertices(&self) -> Vec<usize> {
        self.tree.branch_vertices()
    }

    pub fn branch_count(&self) -> usize {
        self.tree.branch_count()
    }

    pub fn leaf_count(&self) -> usize {
        self.tree.leaf_count()
    }

    pub fn as_tree(&self) -> &Tree {
        &self.tree
    }

    /// Rooted parent array: parent_of[root] = root, every other vertex
    /// points toward the root along tree edges.
    pub fn parent_of(&self, root: usize) -> Vec<usize> {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for &(u, v) in self.tree.edges() {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut parent = vec![usize::MAX; self.n];
        parent[root] = root;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    stack.push(w);
                }
            }
        }
        parent
    }

    /// Canonical textual form: edge list sorted lexicographically with
    /// ascending endpoints, then a summary line.
    pub fn render(&self) -> String {
        let mut edges: Vec<(usize, usize)> =
            self.edges().iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        edges.sort_unstable();
        let mut out = String::new();
        for (u, v) in edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        let branches = self.branch_vertices();
        let list = branches
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",");
        out.push_str(&format!("branches={} vertices=[{}]\n", branches.len(), list));
        out
    }
}

/// Union-find over sparse vertex ids.
struct Dsu {
    parent: BTreeMap<usize, usize>,
}

impl Dsu {
    fn new() -> Dsu {
        Dsu { parent: BTreeMap::new() }
    }

    fn find(&mut self, v: usize) -> usize {
        let p = *self.parent.entry(v).or_insert(v);
        if p == v {
            return v;
        }
        let root = self.find(p);
        self.parent.insert(v, root);
        root
    }

    fn union(&mut self, u: usize, v: usize) -> Result<(), ()> {
        let (ru, rv) = (self.find(u), self.find(v));
        if ru == rv {
            return Err(());
        }
        self.parent.insert(ru, rv);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_has_no_branches() {
        let g = Graph::path(5);
        let t = SpanningTree::new(&g, g.edges()).unwrap();
        assert_eq!(t.branch_count(), 0);
        assert_eq!(t.leaf_count(), 2);
    }

    #[test]
    fn star_k13_has_one_branch() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let t = SpanningTree::new(&g, g.edges()).unwrap();
        assert_eq!(t.branch_count(), 1);
        assert_eq!(t.branch_vertices(), vec![0]);
    }

    #[test]
    fn spider_has_one_branch() {
        // One center with three legs of length 2.
        let edges = vec![(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)];
        let g = Graph::from_edges(7, &edges).unwrap();
        let t = SpanningTree::new(&g, g.edges()).unwrap();
        assert_eq!(t.branch_count(), 1);
        assert_eq!(t.branch_vertices(), vec![0]);
    }

    #[test]
    fn rejects_cycles_and_disconnection() {
        let g = Graph::cycle(4);
        // edges() is lexicographic: (0,1), (0,3), (1,2), (2,3); the last
        // one closes the cycle.
        assert_eq!(
            SpanningTree::new(&g, g.edges()).unwrap_err(),
            TreeError::Cycle { u: 2, v: 3 }
        );
        assert!(matches!(
            SpanningTree::new(&g, vec![(0, 1)]),
            Err(TreeError::NotSpanning { .. })
        ));
        assert_eq!(
            SpanningTree::new(&g, vec![(0, 1), (1, 2), (0, 2)]).unwrap_err(),
            TreeError::Cycle { u: 0, v: 2 }
        );
    }

    #[test]
    fn rejects_phantom_edges() {
        let g = Graph::path(4);
        assert_eq!(
            SpanningTree::new(&g, vec![(0, 1), (1, 2), (0, 3)]).unwrap_err(),
            TreeError::PhantomEdge { u: 0, v: 3 }
        );
    }

    #[test]
    fn parent_array_points_to_root() {
        let g = Graph::path(4);
        let t = SpanningTree::new(&g, g.edges()).unwrap();
        assert_eq!(t.parent_of(0), vec![0, 0, 1, 2]);
        assert_eq!(t.parent_of(3), vec![1, 2, 3, 3]);
    }

    /// Sum over vertices of max(deg - 2, 0) equals leaves - 2 on any
    /// tree with n >= 2, hence branch_count <= leaves - 2.
    #[test]
    fn branch_leaf_identity() {
        let cases: Vec<Vec<(usize, usize)>> = vec![
            vec![(0, 1), (1, 2), (2, 3)],
            vec![(0, 1), (0, 2), (0, 3)],
            vec![(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)],
            vec![(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)],
        ];
        for edges in cases {
            let n = edges.iter().map(|&(u, v)| u.max(v)).max().unwrap() + 1;
            let g = Graph::from_edges(n, &edges).unwrap();
            let t = SpanningTree::new(&g, edges).unwrap();
            let excess: usize = (0..n).map(|v| t.degree(v).saturating_sub(2)).sum();
            assert_eq!(excess, t.leaf_count() - 2);
            assert!(t.branch_count() <= t.leaf_count() - 2);
        }
    }
}
