//! Shortest-path distance on the complete bipartite graphon: one hop across
//! the halves, two hops within a half.

use graphon::{builtin, distance_field, varadhan_distance, Graphon};

fn main() -> graphon::Result<()> {
    let w: Graphon = builtin::bipartite().into();
    for (x, y) in [(0.1, 0.9), (0.1, 0.4), (0.7, 0.6), (0.3, 0.3)] {
        println!("d_W({x}, {y}) = {}", varadhan_distance(&w, x, y)?);
    }
    let field = distance_field(&w);
    println!("diameter {}", field.layer_count());
    println!("layer measures {:?}", field.layer_measures());
    Ok(())
}
