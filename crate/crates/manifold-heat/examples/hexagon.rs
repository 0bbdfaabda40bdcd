//! Six points on the unit circle, end to end: neighborhood graph,
//! Gaussian weights, random-walk spectrum, two-coordinate eigenmap, and
//! the comparison against the closed-form answer.

use manifold_heat::eigenmaps::{eigenmap, orthogonal_align};
use manifold_heat::graph::{build_adjacency, rw_spectrum, weight_matrix, AdjacencyRule};
use manifold_heat::linalg::Matrix;
use manifold_heat::samplers::{sample, ShapeSpec};
use std::f64::consts::PI;

fn main() -> Result<(), manifold_heat::Error> {
    let cloud = sample(&ShapeSpec::Circle { radius: 1.0, count: 6 })?;
    let adjacency = build_adjacency(&cloud, AdjacencyRule::Epsilon(1.01))?;
    let weights = weight_matrix(&adjacency, &cloud, 1.0)?;
    let dec = rw_spectrum(&weights)?;

    let closed_form = (2.0 * (-1.0_f64).exp() / (1.0 + 2.0 * (-1.0_f64).exp())) * 0.5;
    println!("second eigenvalue: {:.12} (closed form {closed_form:.12})", dec.eigenvalues[1]);

    let map = eigenmap(&dec, 2)?;
    println!("eigenmap image:");
    for i in 0..map.n_rows() {
        println!("  point {i}: ({:+.6}, {:+.6})", map.get(i, 0), map.get(i, 1));
    }

    // The image is a rotated, rescaled copy of the original hexagon.
    let mut expected = Matrix::zeros(6, 2);
    for i in 0..6 {
        let angle = 2.0 * PI * i as f64 / 6.0;
        expected.set(i, 0, angle.cos() / 3.0_f64.sqrt());
        expected.set(i, 1, angle.sin() / 3.0_f64.sqrt());
    }
    let alignment =
        orthogonal_align(&expected, &map, true, &dec.blocks_for_columns(1, 2))?;
    println!("alignment residual after rotation and scale: {:.3e}", alignment.residual);
    Ok(())
}
