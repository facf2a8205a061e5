//! Debugging helper: find the smallest connected graph on which the
//! 2-matching construction panics.

use branchtree::enumerate::connected_graphs_up_to_iso;
use branchtree::matching::max_two_matching;

fn main() {
    for n in 1..=9usize {
        for g in connected_graphs_up_to_iso(n) {
            let edges = g.to_edge_list();
            let result = std::panic::catch_unwind(|| {
                let _ = max_two_matching(&g);
            });
            if let Err(e) = result {
                println!("FAILED on n={n}:");
                print!("{edges}");
                if let Some(msg) = e.downcast_ref::<String>() {
                    println!("panic: {msg}");
                } else if let Some(msg) = e.downcast_ref::<&str>() {
                    println!("panic: {msg}");
                }
                return;
            }
        }
        println!("n={n}: all ok");
    }
}
