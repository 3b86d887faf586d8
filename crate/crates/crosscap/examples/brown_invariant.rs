//! Brown invariants of Z/4-valued quadratic refinements: the standard
//! generators, additivity, and normal forms.
//!
//! ```bash
//! cargo run -p crosscap --example brown_invariant
//! ```

use crosscap::brown::{
    brown_invariant, decompose, is_even, normal_form, standard, SpaceKind, Z2InnerSpace,
};

fn main() {
    // The two refinements of the odd one-dimensional space P.
    for value in [1u8, 3] {
        let q = standard::p_form(value);
        println!(
            "q_{}: dim 1, beta = {}, normal form: {}",
            if value == 1 { "1" } else { "-1" },
            brown_invariant(&q).unwrap(),
            normal_form(&q).unwrap()
        );
    }

    // The four refinements of the hyperbolic plane T; three are isomorphic.
    for (i, j) in [(0u8, 0u8), (0, 2), (2, 0), (2, 2)] {
        let q = standard::t_form(i, j);
        println!(
            "q_({i},{j}): beta = {}, normal form: {}",
            brown_invariant(&q).unwrap(),
            normal_form(&q).unwrap()
        );
    }

    // Additivity: beta(q' + q'') = beta(q') + beta(q'').
    let q = standard::sum(&[standard::p_form(3), standard::t_form(2, 2)]);
    println!(
        "q_-1 + q_(2,2): beta = {} (= -1 + 4), normal form: {}",
        brown_invariant(&q).unwrap(),
        normal_form(&q).unwrap()
    );

    // Decomposing a mixed space: P + T is isomorphic to 3P.
    let space = Z2InnerSpace::new(&[
        vec![1, 0, 0],
        vec![0, 0, 1],
        vec![0, 1, 0],
    ])
    .unwrap();
    println!("P + T is even? {}", is_even(&space).unwrap());
    match decompose(&space).unwrap().kind {
        SpaceKind::Odd { p_copies } => println!("P + T decomposes as {p_copies}P"),
        SpaceKind::Even { t_copies } => println!("P + T decomposes as {t_copies}T"),
    }
}
