//! Relative and absolute homology of an origami: face relations, the
//! shipped adapted basis, a computed adapted basis, and the
//! intersection form on the non-tautological part.
//!
//! Run with: `cargo run --example homology_basis`

use origami_kz::fixtures;
use origami_kz::homology::{absolute_basis, face_relations, intersection_form, pairing};

fn main() {
    let o = fixtures::o1();
    let faces = face_relations(&o);
    println!("face relations: {} rows, rank {}", faces.matrix.nrows(), faces.rank());

    let basis = fixtures::adapted_basis(1);
    println!("adapted basis of H_1 (rank {}):", basis.rank());
    for (name, chain) in ["S0", "Z0", "S1", "S2", "Z1", "Z2"].iter().zip(&basis.chains) {
        println!("  {name} = {chain}");
    }
    println!("<S0, Z0> = {}", pairing(&o, &basis.chains[0], &basis.chains[1]));
    let omega = intersection_form(&o, basis.zero_part()).unwrap();
    println!("intersection form on the non-tautological part:\n{:?}", omega.matrix);

    // the general-purpose basis computed from scratch spans the same
    // space and satisfies the same invariants
    let computed = absolute_basis(&o);
    println!("computed basis (rank {}):", computed.rank());
    for chain in &computed.chains {
        println!("  {chain}");
    }
}
