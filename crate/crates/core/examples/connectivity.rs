//! Three equivalent views of connectivity: the support graph, bounded walks
//! and the kernel of the block Laplacian.

use graphon::connectivity::{connectivity_report, STEP_EPSILON};
use graphon::{builtin, laplacian_kernel_dim, Graphon, StepGraphon};

fn main() -> graphon::Result<()> {
    let cases = [
        ("bipartite", builtin::bipartite()),
        ("bipartite∘2", builtin::bipartite().comp_power(2)?),
        ("C5", builtin::cycle(5)?),
        (
            "two cliques",
            StepGraphon::from_rows(vec![0.4, 0.6], &[vec![1.0, 0.0], vec![0.0, 1.0]])?,
        ),
    ];
    for (name, w) in cases {
        let kernel = laplacian_kernel_dim(&w, 1e-9);
        let g: Graphon = w.into();
        let r = connectivity_report(&g, STEP_EPSILON);
        println!(
            "{name:>12}: connected {}, diameter {}, components {}, kernel {kernel:?}",
            r.connected, r.diameter, r.components
        );
    }
    Ok(())
}
