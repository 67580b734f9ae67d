//! Integer labels from improvement vectors and completely labeled cells.

use subgrid::domain::{Candidate, Cell, GridPoint, LabeledVertex};
use subgrid::labeling::{find_complete_cells, is_complete, label_from_delta};
use subgrid::LabelRule;

fn vertex(k: [u64; 2], label: usize) -> LabeledVertex {
    LabeledVertex {
        candidate: Candidate {
            point: GridPoint::new(k.to_vec(), 1),
            x: k.iter().map(|&v| v as f64).collect(),
            f: 0.0,
        },
        label,
        delta: Vec::new(),
    }
}

fn main() -> subgrid::Result<()> {
    let rule = LabelRule::default();
    for d in [[100.0, 100.0], [-2.0, 0.0], [100.0, -100.0], [-50.0, 25.0], [0.0, 0.0]] {
        println!("d = {d:?}  ->  label {}", label_from_delta(&d, &rule)?);
    }
    println!("{{0,2,2,1}} complete in 2-D: {}", is_complete(&[0, 2, 2, 1], 2));
    println!("{{0,0,2,2}} complete in 2-D: {}", is_complete(&[0, 0, 2, 2], 2));

    // The four box corners of the first Easom level and their labels.
    let corners = [vertex([0, 0], 0), vertex([0, 1], 2), vertex([1, 0], 1), vertex([1, 1], 2)];
    let cells = find_complete_cells(&corners, 1);
    println!("complete cells: {cells:?}");
    assert_eq!(cells, vec![Cell::root(2)]);
    Ok(())
}
