//! Enumerate the SL(2,Z)-orbit of an origami, list the cusps and print
//! the orbit graph in DOT format (pipe into `dot -Tsvg` for a picture).
//!
//! Run with: `cargo run --example orbit_graph`

use origami_kz::fixtures;
use origami_kz::orbit::OrbitGraph;
use origami_kz::origami::Generator;

fn main() {
    let o = fixtures::o1();
    let graph = OrbitGraph::new(&o);
    println!("orbit of {o}");
    println!("{} node(s):", graph.len());
    for (i, node) in graph.nodes.iter().enumerate() {
        println!("  node {i}: {node}");
    }
    for (u, edges) in graph.edges.iter().enumerate() {
        for (gen, edge) in Generator::ALL.iter().zip(edges) {
            println!(
                "  {} --{}--> {}   relabelling {}",
                u,
                gen.letter(),
                edge.target,
                edge.relabel
            );
        }
    }
    let cusps = graph.cusps();
    println!("{} cusp(s): {:?}", cusps.len(), cusps);
    println!("\nDOT:\n{}", graph.to_dot());
}
