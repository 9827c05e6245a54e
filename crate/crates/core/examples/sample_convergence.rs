//! Shortest paths in W-random graphs approach d_W as the graph grows.

use graphon::{builtin, compare_with_varadhan, empirical_distance_profile, sample_graph, Graphon};

fn main() -> graphon::Result<()> {
    let band: Graphon = builtin::circular_band(1.0 / 7.0, 700)?.into();
    for n in [100, 300, 1000, 2000] {
        let c = compare_with_varadhan(&band, n, 1, 0)?;
        println!(
            "n = {n:>4}: exact {:.3}, within +1 {:.3}, deviations {:?}",
            c.agreement, c.agreement_within_one, c.deviation
        );
    }

    let g = sample_graph(&builtin::erdos_renyi(0.5)?.into(), 500, 1)?;
    let profile = empirical_distance_profile(&g);
    println!(
        "ER(1/2), n = 500: {} edges, hop histogram {:?}",
        g.edge_count(),
        profile.histogram
    );
    Ok(())
}
