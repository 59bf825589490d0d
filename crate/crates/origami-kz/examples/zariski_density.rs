//! Zariski density of the non-tautological monodromy: characteristic
//! polynomials and discriminants of the two pinching words, the
//! Galois-pinching certificates and the density verdict.
//!
//! Run with: `cargo run --example zariski_density`

use origami_kz::arithmeticity::{
    char_poly, density_certificate, discriminants, DensityOutcome,
};
use origami_kz::fixtures;
use origami_kz::homology::intersection_form;
use origami_kz::kz::{monodromy, AffineWord};
use origami_kz::orbit::OrbitGraph;

fn main() {
    let graph = OrbitGraph::new(&fixtures::o1());
    let bases = fixtures::adapted_bases_on(&graph).unwrap();

    for word in [fixtures::word_p1(), fixtures::word_p2()] {
        let mono = monodromy(&AffineWord::at(word.clone(), graph.base), &graph, &bases).unwrap();
        let chi = char_poly(&mono.zero_part).unwrap();
        let (d1, d2) = discriminants(&chi);
        println!("word {word}: sl2 {:?}", word.mat2());
        println!("  rho = {:?}", mono.zero_part);
        println!("  characteristic polynomial {chi}");
        println!("  discriminants d1 = {d1}, d2 = {d2}");
    }

    let candidates = vec![
        AffineWord::at(fixtures::word_p1(), graph.base),
        AffineWord::at(fixtures::word_p2(), graph.base),
    ];
    match density_certificate(&graph, &bases, &candidates).unwrap() {
        DensityOutcome::Dense(cert) => {
            println!("{}", cert.verdict);
            for c in [&cert.first, &cert.second] {
                println!("  {}: {:?}", c.word.as_deref().unwrap_or("?"), c.checked_conditions);
            }
        }
        DensityOutcome::NotCertified { reason, .. } => println!("not certified: {reason}"),
    }

    let omega = intersection_form(&graph.nodes[graph.base], bases[graph.base].zero_part())
        .unwrap()
        .matrix;
    println!("omega (preserved exactly by every monodromy): {omega:?}");
}
