//! Neighbourhood, similarity and cut metrics.

use graphon::metrics::TWIN_TOLERANCE;
use graphon::{
    builtin, cut_distance_homogeneous, cut_norm, merge_twins, neighbourhood_distance,
    similarity_distance, Graphon, StepGraphon,
};

fn main() -> graphon::Result<()> {
    let b: Graphon = builtin::bipartite().into();
    println!("r(0.2, 0.7) = {}", neighbourhood_distance(&b, 0.2, 0.7)?);
    println!("r̄(0.2, 0.7) = {}", similarity_distance(&b, 0.2, 0.7)?);

    let band: Graphon = builtin::circular_band(0.25, 512)?.into();
    println!(
        "circular band r(0.1, 0.3) = {:.4}",
        neighbourhood_distance(&band, 0.1, 0.3)?
    );

    // blocks 1 and 2 are twins
    let w = StepGraphon::from_rows(
        vec![0.5, 0.2, 0.3],
        &[
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
        ],
    )?;
    let merged = merge_twins(&w, TWIN_TOLERANCE)?;
    println!("merged measures {:?}", merged.partition().measures());

    for p in [0.2, 0.8] {
        println!("‖ER({p})‖_□ = {}", cut_norm(&builtin::erdos_renyi(p)?)?);
    }
    let c5 = builtin::cycle(5)?;
    let shuffled = c5.permute_blocks(&[2, 4, 1, 0, 3])?;
    let d = cut_distance_homogeneous(&c5, &shuffled)?;
    println!(
        "δ_□(C5, shuffled C5) ≤ {:.3e} via {:?}",
        d.value, d.permutation
    );
    Ok(())
}
