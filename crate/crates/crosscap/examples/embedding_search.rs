//! Run the lattice embedding engine on a positive and a negative instance.
//!
//! The negative instance is the rank-4 form that pins down the hardest knot
//! in the table: a 4-cycle of vertices of square -3 admits no isometric
//! embedding into (Z^6, -Id), and the search proves that exhaustively in a
//! few hundred steps.
//!
//! ```bash
//! cargo run -p crosscap --example embedding_search
//! ```

use crosscap::embed::{
    brute_force_embedding, find_embedding, EmbeddingProblem, NormVectors, SearchBudget,
    SearchOutcome, vectors_of_norm,
};
use crosscap::forms::{form_from_weighted_graph, WeightedGraphForm};

fn main() {
    // Norm enumeration: the building block of the search.
    println!(
        "canonical vectors of norm 3 in Z^6: {:?}",
        vectors_of_norm(6, 3, NormVectors::Canonical)
    );

    // A chain of seven -2s embeds into (Z^8, -Id) as differences of basis
    // vectors.
    let chain = WeightedGraphForm::new(vec![-2; 7], (0..6).map(|i| (i, i + 1)).collect()).unwrap();
    let chain = form_from_weighted_graph(&chain).unwrap();
    let problem = EmbeddingProblem::new(chain, 8).unwrap();
    match find_embedding(&problem, SearchBudget::default()) {
        SearchOutcome::Embeds(cert, stats) => {
            println!("chain of -2s embeds in rank 8 ({} nodes):", stats.nodes_explored);
            for (i, col) in cert.columns.iter().enumerate() {
                println!("  e{} -> {:?}", i + 1, col);
            }
        }
        other => println!("unexpected outcome: {other:?}"),
    }

    // The 4-cycle of -3s does not embed in rank 6.
    let cycle = WeightedGraphForm::new(vec![-3; 4], vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    let cycle = form_from_weighted_graph(&cycle).unwrap();
    let problem = EmbeddingProblem::new(cycle.clone(), 6).unwrap();
    match find_embedding(&problem, SearchBudget::default()) {
        SearchOutcome::NoEmbedding(stats) => println!(
            "4-cycle of -3s into rank 6: no embedding ({} nodes, {} candidates, {} steps)",
            stats.nodes_explored, stats.candidates_enumerated, stats.steps
        ),
        other => println!("unexpected outcome: {other:?}"),
    }

    // On small instances the pruned search agrees with an unpruned oracle.
    let small = EmbeddingProblem::new(cycle, 6).unwrap();
    let fast = find_embedding(&small, SearchBudget::default()).exists();
    let slow = brute_force_embedding(&small).unwrap().exists();
    println!("pruned search vs brute force on the 4-cycle: {fast:?} vs {slow:?}");
}
