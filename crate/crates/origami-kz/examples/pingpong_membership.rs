//! Free-product certificate for the Veech group via exact cone
//! ping-pong, and constructive membership: every Schreier generator is
//! rewritten as a word in the order-3 generators a and b.
//!
//! Run with: `cargo run --example pingpong_membership`

use origami_kz::fixtures;
use origami_kz::orbit::OrbitGraph;
use origami_kz::pingpong::{membership_normal_form, verify_pingpong, Membership};

fn main() {
    let ct = fixtures::pingpong_table();
    let table = ct.table().unwrap();
    let cert = verify_pingpong(ct.a, ct.b, &table).unwrap();
    println!("{}", cert.statement);
    println!("verified inclusions:");
    for inc in &cert.inclusions {
        println!(
            "  {}^{} maps {:?} into {:?} (piece {:?})",
            inc.gen, inc.power, inc.source, inc.target, inc.piece
        );
    }

    let graph = OrbitGraph::new(&fixtures::o1());
    println!("\nSchreier generators as words in a, b:");
    for gen in &graph.veech_group().schreier_generators {
        match membership_normal_form(gen.matrix, &cert, 64) {
            Membership::Member(word) => println!("  {:?} = {word}", gen.matrix),
            Membership::NotMember { syllable_bound } => {
                println!("  {:?}: not certified within {syllable_bound} syllables", gen.matrix)
            }
        }
    }

    // T moves the base origami along the cusp, so it cannot lie in the
    // Veech group
    let t = origami_kz::linalg::Mat2([[1, 1], [0, 1]]);
    println!("\nT in <a, b>? {:?}", membership_normal_form(t, &cert, 24));
}
