//! Compute the Veech group of the shipped origami: its index in
//! SL(2,Z), Schreier generators with replayable witness words, and the
//! order-3 generators a, b with their T/S/-Id factorizations.
//!
//! Run with: `cargo run --example veech_group`

use origami_kz::fixtures;
use origami_kz::orbit::OrbitGraph;

fn main() {
    let graph = OrbitGraph::new(&fixtures::o1());
    let vg = graph.veech_group();
    println!("index in SL(2,Z): {}", vg.index);
    println!("cusps: {}", vg.cusp_count);
    println!("Schreier generators:");
    for g in &vg.schreier_generators {
        println!("  {:?}   from word {}", g.matrix, g.word);
    }

    let a = fixtures::word_a();
    let b = fixtures::word_b();
    println!("a = {:?} = {a}, closed at base: {}", a.mat2(), graph.is_closed_at(&a, graph.base));
    println!("b = {:?} = {b}, closed at base: {}", b.mat2(), graph.is_closed_at(&b, graph.base));
    println!("a^3 = identity: {}", a.mat2().pow(3).is_identity());
    println!("b^3 = identity: {}", b.mat2().pow(3).is_identity());
}
