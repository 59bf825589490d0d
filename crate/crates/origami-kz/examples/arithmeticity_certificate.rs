//! The full arithmeticity argument: conjugate the monodromy generators
//! by Θ, search words fixing the first basis vector, build the four
//! root-group unipotents, and exhibit the kernel witness showing the
//! representation is not faithful.
//!
//! Run with: `cargo run --example arithmeticity_certificate`

use origami_kz::arithmeticity::{
    kernel_relation_check, root_group_certificate, unipotent_search,
};
use origami_kz::fixtures;
use origami_kz::kz::{change_basis, monodromy, AffineWord};
use origami_kz::orbit::OrbitGraph;

fn main() {
    let graph = OrbitGraph::new(&fixtures::o1());
    let bases = fixtures::adapted_bases_on(&graph).unwrap();
    let rho = |w| {
        monodromy(&AffineWord::at(w, graph.base), &graph, &bases)
            .unwrap()
            .zero_part
    };
    let rho_a = rho(fixtures::word_a());
    let rho_b = rho(fixtures::word_b());

    let theta = fixtures::theta();
    let big_a = change_basis(&rho_a, &theta).unwrap();
    let big_b = change_basis(&rho_b, &theta).unwrap();
    println!("A = theta^-1 rho(a) theta = {big_a:?}");
    println!("B = theta^-1 rho(b) theta = {big_b:?}");

    let p = fixtures::conjugator_p();
    let hits = unipotent_search(&big_a, &big_b, &p, 10).unwrap();
    println!("{} words of <= 10 syllables fix e1 after conjugation by P", hits.len());

    let (x, y, z) = fixtures::unipotent_words();
    println!("x = {x}\ny = {y}\nz = {z}");
    let cert = root_group_certificate(&p, &big_a, &big_b, &x, &y, &z).unwrap();
    for ((label, u), cov) in cert.unipotents.iter().zip(&cert.coverage) {
        println!("{label} covers root {} with parameter {}:\n{u:?}", cov.root, cov.parameter);
    }
    println!("verdict: {}", cert.verdict);

    let witness = kernel_relation_check(
        &fixtures::kernel_word_exponents(),
        &rho_a,
        &rho_b,
        fixtures::word_a().mat2(),
        fixtures::word_b().mat2(),
    );
    println!("kernel word: ({})", witness.word);
    println!("  rho image is the identity: {}", witness.rho_image.is_identity());
    println!("  sl2 image: {:?} (nontrivial)", witness.sl2_image);
    println!("  witness of non-faithfulness: {}", witness.is_witness);
}
