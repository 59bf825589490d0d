//! Stratum, commutator and horizontal cylinder decomposition for a few
//! origamis, plus the per-direction waist-span rank (homological
//! dimension of the orbit).
//!
//! Run with: `cargo run --example stratum_and_cylinders`

use origami_kz::fixtures;
use origami_kz::homology::homological_dimension;
use origami_kz::orbit::OrbitGraph;
use origami_kz::origami::Origami;

fn describe(label: &str, o: &Origami) {
    println!("{label}: {o}");
    println!("  commutator [h,v] = {}", o.commutator());
    println!("  stratum {}", o.stratum());
    for c in o.horizontal_cylinders() {
        println!(
            "  horizontal cylinder width {} height {} squares {:?}",
            c.width,
            c.height,
            c.squares()
        );
    }
    let graph = OrbitGraph::new(o);
    println!("  homological dimension of the orbit: {}", homological_dimension(&graph));
    println!();
}

fn main() {
    describe("nine-square origami", &fixtures::o1());
    describe("torus", &Origami::parse("h=(1); v=(1); n=1").unwrap());
    describe(
        "L-shaped three squares",
        &Origami::parse("h=(1,2)(3); v=(1,3)(2); n=3").unwrap(),
    );
    describe(
        "stacked two squares",
        &Origami::parse("h=(1)(2); v=(1,2); n=2").unwrap(),
    );
}
