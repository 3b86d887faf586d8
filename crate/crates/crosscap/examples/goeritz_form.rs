//! Build Goeritz matrices from checkerboard incidence data and from
//! weighted graphs, and inspect their determinants and definiteness.
//!
//! ```bash
//! cargo run -p crosscap --example goeritz_form
//! ```

use crosscap::forms::{
    form_from_weighted_graph, goeritz_from_incidence, CheckerboardIncidence, WeightedGraphForm,
};

fn main() {
    // A trefoil-style coloring: two white regions, three crossings between
    // them, all of weight +1.
    let trefoil = CheckerboardIncidence::new(2, vec![(0, 1, 1), (0, 1, 1), (0, 1, 1)]).unwrap();
    let g = goeritz_from_incidence(&trefoil).unwrap();
    println!("trefoil coloring:\n{g}");
    println!("  det = {}, {}", g.determinant(), g.definiteness());

    // The same form presented as a weighted graph: a single vertex of
    // weight 3 and no edges.
    let graph = WeightedGraphForm::new(vec![3], vec![]).unwrap();
    println!("as a graph: {}", form_from_weighted_graph(&graph).unwrap());

    // A chain of six -2 vertices and one -3 vertex. Its determinant is -15,
    // matching the determinant of the knot it came from.
    let chain = WeightedGraphForm::new(
        vec![-2, -2, -2, -2, -2, -2, -3],
        (0..6).map(|i| (i, i + 1)).collect(),
    )
    .unwrap();
    let g = form_from_weighted_graph(&chain).unwrap();
    println!("chain form:\n{g}");
    println!("  det = {}, {}", g.determinant(), g.definiteness());

    // Direct sums and negation.
    let extended = g.direct_sum(&[-15]);
    println!("chain + [-15]: rank {}, det = {}", extended.rank(), extended.determinant());
    println!("negated chain: {}", g.negated().definiteness());
}
