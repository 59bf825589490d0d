//! The Kontsevich-Zorich cocycle along the orbit: elementary homology
//! maps of T, S and -Id in the adapted bases, and the monodromy
//! matrices of the Veech generators a and b with their tautological /
//! non-tautological split.
//!
//! Run with: `cargo run --example kz_monodromy`

use origami_kz::fixtures;
use origami_kz::kz::{elementary_map, express_in_bases, monodromy, AffineWord};
use origami_kz::orbit::OrbitGraph;
use origami_kz::origami::Generator;

fn main() {
    let graph = OrbitGraph::new(&fixtures::o1());
    let bases = fixtures::adapted_bases_on(&graph).unwrap();

    for node in 0..graph.len() {
        for g in Generator::ALL {
            let map = elementary_map(g, node, &graph);
            let m = express_in_bases(&map, &graph, &bases).unwrap();
            println!("{} at node {} (to node {}):\n{:?}", g.letter(), node, map.target, m);
        }
    }

    for word in [fixtures::word_a(), fixtures::word_b()] {
        let mono = monodromy(&AffineWord::at(word.clone(), graph.base), &graph, &bases).unwrap();
        println!("word {word}");
        println!("  tautological block {:?}", mono.taut);
        println!("  non-tautological block rho:\n{:?}", mono.zero_part);
        println!("  rho^3 = identity: {}", mono.zero_part.pow(3).is_identity());
    }
}
