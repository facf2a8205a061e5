use branchtree::graph::Graph;
use branchtree::matching::{max_two_matching, gallai_edmonds_sets, max_matching};

fn main() {
    let edges = vec![(0,1),(0,2),(1,7),(2,8),(3,5),(3,7),(4,6),(4,8),(5,7),(6,8)];
    let g = Graph::from_edges(9, &edges).unwrap();
    let ge = gallai_edmonds_sets(&g);
    println!("nu = {}", ge.nu);
    println!("A  = {:?}", ge.a);
    println!("A1 = {:?}", ge.a1);
    let m = max_matching(&g);
    println!("max matching: {:?}", m.pairs());
    let r = max_two_matching(&g);
    println!("ok: {:?}", r.two_matching);
}
