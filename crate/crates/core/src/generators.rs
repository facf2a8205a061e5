//! Deterministic, seeded instance generators: the extremal family whose
//! spanning trees all have more than `s` branch vertices, the
//! path-of-cliques family, the disjoint-complete-bipartite lower-bound
//! witness for star-matchings, and random graphs with prescribed
//! minimum degree.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("parameter violation: {0}")]
    Parameter(String),
    #[error("infeasible: min_degree {min_degree} >= n {n}")]
    Infeasible { n: usize, min_degree: usize },
}

/// End gadget for the extremal family.
///
/// `H1` is two copies of K_m identified at a cut vertex; the path
/// attaches at the cut vertex. `H2` is the join of an independent set
/// of size m with a K_{m-1}; the path attaches by an edge into the
/// smaller (clique) side. Either way the gadget forces one branch
/// vertex in every spanning tree: for H1 the cut vertex needs an edge
/// into each clique, and for H2 a spanning tree of the gadget with all
/// degrees at most 2 would be a Hamiltonian path whose m independent
/// vertices must occupy both endpoints, leaving the attachment vertex
/// in the interior.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndGadget {
    H1,
    H2,
}

impl std::str::FromStr for EndGadget {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "h1" => Ok(EndGadget::H1),
            "h2" => Ok(EndGadget::H2),
            other => Err(format!("unknown end gadget {other:?} (want h1 or h2)")),
        }
    }
}

/// Emits the gadget's edges on vertices `[base, base + 2m - 1)` and
/// returns the attachment vertex.
fn end_gadget_edges(gadget: EndGadget, base: usize, m: usize, edges: &mut Vec<(usize, usize)>) -> usize {
    match gadget {
        EndGadget::H1 => {
            // Cliques {base..base+m-1} + cut and {cut..base+2m-2}, cut = base+m-1.
            let cut = base + m - 1;
            clique(&(base..=cut).collect::<Vec<_>>(), edges);
            clique(&(cut..base + 2 * m - 1).collect::<Vec<_>>(), edges);
            cut
        }
        EndGadget::H2 => {
            // Independent set {base..base+m}, clique {base+m..base+2m-1},
            // full join between them. Attachment: lowest clique vertex.
            let indep: Vec<usize> = (base..base + m).collect();
            let cliq: Vec<usize> = (base + m..base + 2 * m - 1).collect();
            clique(&cliq, edges);
            for &a in &indep {
                for &b in &cliq {
                    edges.push((a, b));
                }
            }
            base + m
        }
    }
}

fn clique(vs: &[usize], edges: &mut Vec<(usize, usize)>) {
    for (i, &u) in vs.iter().enumerate() {
        for &v in &vs[i + 1..] {
            edges.push((u, v));
        }
    }
}

/// The extremal family: a path b_1 ... b_{s+1} whose internal vertices
/// are identified with a K_m each and whose ends carry an `EndGadget`.
/// Connected, n = (s+3)m - 2, and minimum degree exactly
/// m - 1 = (n - s - 1)/(s + 3); every spanning tree has more than `s`
/// branch vertices.
///
/// Layout: left gadget on [0, 2m-1), then the s-1 internal cliques of m
/// vertices each (b_i is the first vertex of its block), then the right
/// gadget. Path edges join consecutive attachment vertices.
pub fn gen_extremal(s: usize, m: usize, ends: (EndGadget, EndGadget)) -> Result<Graph, GenError> {
    if s < 1 {
        return Err(GenError::Parameter("extremal family needs s >= 1".into()));
    }
    if m < 2 {
        return Err(GenError::Parameter("extremal family needs m >= 2".into()));
    }
    let n = (s + 3) * m - 2;
    let mut edges = Vec::new();
    let mut attach = Vec::with_capacity(s + 1);

    let left = end_gadget_edges(ends.0, 0, m, &mut edges);
    attach.push(left);
    let mut base = 2 * m - 1;
    for _ in 0..s.saturating_sub(1) {
        let block: Vec<usize> = (base..base + m).collect();
        clique(&block, &mut edges);
        attach.push(base);
        base += m;
    }
    let right = end_gadget_edges(ends.1, base, m, &mut edges);
    attach.push(right);
    debug_assert_eq!(base + 2 * m - 1, n);

    for w in attach.windows(2) {
        edges.push((w[0], w[1]));
    }
    Ok(Graph::from_edges(n, &edges).expect("extremal construction is simple"))
}

/// A path on s+3 vertices with each vertex identified with a K_m:
/// n = (s+3)m, minimum degree m - 1 = n/(s+3) - 1, and the s+1 internal
/// path vertices are cut vertices. Block i is [i*m, (i+1)*m) with path
/// vertex i*m.
pub fn gen_path_of_cliques(s: usize, m: usize) -> Result<Graph, GenError> {
    if s < 1 || m < 2 {
        return Err(GenError::Parameter("path of cliques needs s >= 1, m >= 2".into()));
    }
    let blocks = s + 3;
    let n = blocks * m;
    let mut edges = Vec::new();
    for i in 0..blocks {
        let block: Vec<usize> = (i * m..(i + 1) * m).collect();
        clique(&block, &mut edges);
        if i + 1 < blocks {
            edges.push((i * m, (i + 1) * m));
        }
    }
    Ok(Graph::from_edges(n, &edges).expect("path of cliques is simple"))
}

/// s+1 disjoint nearly balanced complete bipartite graphs on `part`
/// vertices each (sides of ceil(part/2) and floor(part/2)); the
/// lower-bound witness showing the star-matching degree bound cannot
/// drop to n/(2s+2). Block j is [j*part, (j+1)*part) with the larger
/// side first.
pub fn gen_bipartite_lower(s: usize, part: usize) -> Result<Graph, GenError> {
    if s < 1 || part < 2 {
        return Err(GenError::Parameter("bipartite witness needs s >= 1, part >= 2".into()));
    }
    let n = (s + 1) * part;
    let big = part.div_ceil(2);
    let mut edges = Vec::new();
    for j in 0..=s {
        let base = j * part;
        for a in base..base + big {
            for b in base + big..base + part {
                edges.push((a, b));
            }
        }
    }
    Ok(Graph::from_edges(n, &edges).expect("bipartite witness is simple"))
}

/// Seeded connected random graph with minimum degree at least
/// `min_degree`: uniform edge sampling at rate min_degree/(n-1), then
/// degree repair (deficient vertices gain edges to uniformly chosen
/// non-neighbors) and connectivity repair (uniformly chosen bridging
/// edges between the first two components). ChaCha8 keyed by `seed`;
/// identical parameters give identical output.
pub fn gen_random_mindeg(n: usize, min_degree: usize, seed: u64) -> Result<Graph, GenError> {
    if n == 0 {
        return Err(GenError::Parameter("need n >= 1".into()));
    }
    if min_degree >= n {
        return Err(GenError::Infeasible { n, min_degree });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj = vec![vec![false; n]; n];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let add = |u: usize, v: usize, adj: &mut Vec<Vec<bool>>, edges: &mut Vec<(usize, usize)>| {
        debug_assert!(!adj[u][v]);
        adj[u][v] = true;
        adj[v][u] = true;
        edges.push((u.min(v), u.max(v)));
    };

    if n > 1 {
        let p = (min_degree as f64 / (n - 1) as f64).min(1.0);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    add(u, v, &mut adj, &mut edges);
                }
            }
        }
    }

    // Degree repair.
    for v in 0..n {
        loop {
            let deg = adj[v].iter().filter(|&&b| b).count();
            if deg >= min_degree {
                break;
            }
            let candidates: Vec<usize> = (0..n).filter(|&w| w != v && !adj[v][w]).collect();
            let w = candidates[rng.gen_range(0..candidates.len())];
            add(v, w, &mut adj, &mut edges);
        }
    }

    // Connectivity repair.
    loop {
        let g = Graph::from_edges(n, &edges).expect("simple by construction");
        let comps = g.components();
        if comps.len() <= 1 {
            return Ok(g);
        }
        let a = &comps[0];
        let b = &comps[1];
        let u = a[rng.gen_range(0..a.len())];
        let v = b[rng.gen_range(0..b.len())];
        add(u, v, &mut adj, &mut edges);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremal_counts_and_min_degree() {
        for (s, m) in [(1, 3), (1, 4), (2, 3), (3, 2), (3, 5)] {
            for ends in [
                (EndGadget::H1, EndGadget::H1),
                (EndGadget::H1, EndGadget::H2),
                (EndGadget::H2, EndGadget::H1),
                (EndGadget::H2, EndGadget::H2),
            ] {
                let g = gen_extremal(s, m, ends).unwrap();
                let n = (s + 3) * m - 2;
                assert_eq!(g.n(), n, "s={s} m={m}");
                assert!(g.is_connected());
                assert_eq!(g.min_degree(), m - 1);
                assert_eq!(g.min_degree(), (n - s - 1) / (s + 3));
                assert_eq!((n - s - 1) % (s + 3), 0);
            }
        }
    }

    #[test]
    fn extremal_s1_m3_has_ten_vertices_degree_two() {
        let g = gen_extremal(1, 3, (EndGadget::H1, EndGadget::H1)).unwrap();
        assert_eq!(g.n(), 10);
        assert_eq!(g.min_degree(), 2);
    }

    #[test]
    fn extremal_s3_any_m_has_6m_minus_2() {
        for m in 2..6 {
            let g = gen_extremal(3, m, (EndGadget::H1, EndGadget::H2)).unwrap();
            assert_eq!(g.n(), 6 * m - 2);
        }
    }

    #[test]
    fn extremal_rejects_bad_parameters() {
        assert!(gen_extremal(0, 3, (EndGadget::H1, EndGadget::H1)).is_err());
        assert!(gen_extremal(1, 1, (EndGadget::H1, EndGadget::H1)).is_err());
    }

    #[test]
    fn path_of_cliques_shape() {
        let g = gen_path_of_cliques(1, 3).unwrap();
        assert_eq!(g.n(), 12);
        assert_eq!(g.min_degree(), 2);
        let g = gen_path_of_cliques(2, 2).unwrap();
        assert_eq!(g.n(), 10);
        assert_eq!(g.min_degree(), 1);
        assert!(g.is_connected());
    }

    #[test]
    fn path_of_cliques_internal_vertices_are_cut_vertices() {
        let m = 3;
        let s = 2;
        let g = gen_path_of_cliques(s, m).unwrap();
        for i in 1..=s + 1 {
            let b = i * m;
            let rest: Vec<usize> = (0..g.n()).filter(|&v| v != b).collect();
            let (h, _) = g.induced(&rest);
            assert!(!h.is_connected(), "b_{i} should be a cut vertex");
        }
    }

    #[test]
    fn bipartite_lower_shapes() {
        let g = gen_bipartite_lower(1, 6).unwrap();
        assert_eq!(g.n(), 12);
        assert_eq!(g.m(), 18); // two K_{3,3}
        assert_eq!(g.components().len(), 2);

        let g = gen_bipartite_lower(1, 5).unwrap();
        assert_eq!(g.n(), 10);
        assert_eq!(g.m(), 12); // two K_{3,2}
        assert_eq!(g.components().len(), 2);
    }

    #[test]
    fn random_mindeg_is_deterministic_and_valid() {
        let a = gen_random_mindeg(12, 4, 7).unwrap();
        let b = gen_random_mindeg(12, 4, 7).unwrap();
        assert_eq!(a.to_edge_list(), b.to_edge_list());
        assert!(a.min_degree() >= 4);
        assert!(a.is_connected());
        let c = gen_random_mindeg(12, 4, 8).unwrap();
        // Overwhelmingly likely to differ for a different seed.
        assert_ne!(a.to_edge_list(), c.to_edge_list());
    }

    #[test]
    fn random_mindeg_full_degree_forces_complete() {
        for seed in [0, 1, 99] {
            let g = gen_random_mindeg(5, 4, seed).unwrap();
            assert_eq!(g.m(), 10);
        }
    }

    #[test]
    fn random_mindeg_conjecture_hypothesis_instances() {
        // delta >= ceil((n-s)/(s+3)) for s=1, n=12 is 3.
        for seed in 0..20 {
            let g = gen_random_mindeg(12, 3, seed).unwrap();
            assert!(g.min_degree() >= 3);
            assert!(g.is_connected());
        }
    }

    #[test]
    fn random_mindeg_rejects_infeasible() {
        assert_eq!(
            gen_random_mindeg(5, 5, 0).unwrap_err(),
            GenError::Infeasible { n: 5, min_degree: 5 }
        );
    }
}
