//! Shipped data for the flagship example: the nine-square origami in
//! H(1,1,1,1) whose SL(2,Z)-orbit has four elements and a single cusp.
//!
//! Everything here is input data (the origami, the adapted homology
//! bases of the four orbit nodes, distinguished words in the Veech
//! group, the change-of-basis matrix Θ and the conjugating permutation
//! matrix P for the unipotent search, and the ping-pong cone table);
//! all derived matrices are recomputed by the engine and only pinned in
//! tests.

use crate::homology::{total_sigma, total_zeta, HomologyBasis, RelChain};
use crate::linalg::IMat;
use crate::orbit::{OrbitGraph, Word};
use crate::origami::Origami;
use crate::pingpong::{AbGen, ConeTable, RationalCone, Syllable, TwoGenWord};

/// The base origami `O1`: `h = (1)(2,3,4,5)(6,7,8,9)`,
/// `v = (1,2,3,6)(4,7,9,8)(5)`.
pub fn o1() -> Origami {
    orbit_representative(1)
}

/// The four tabulated orbit representatives `(h, v_k)`, `k = 1..=4`,
/// with `v_{k+1} = v_k ∘ h⁻¹` (the T-orbit of `o1`).
pub fn orbit_representative(k: usize) -> Origami {
    assert!((1..=4).contains(&k), "k out of range 1..=4");
    let vs = [
        "(1,2,3,6)(4,7,9,8)(5)",
        "(1,2,5,7)(3)(4,6,8,9)",
        "(1,2,7,8)(3,5,6,4)(9)",
        "(1,2,6,9)(3,7,4,5)(8)",
    ];
    Origami::parse(&format!("h=(1)(2,3,4,5)(6,7,8,9); v={}; n=9", vs[k - 1]))
        .expect("fixture parses")
}

/// Adapted homology basis `B_k = {Σ₀, Z₀, Σ₁, Σ₂, Z₁, Z₂}` of the orbit
/// representative `k`:
///
/// * `Σ_i = Σ_j σ_{h^j(start)} - 4σ₁` over the `h`-cycle of 2 resp. 6;
/// * `Z_i = Σ_j ζ_{v_k^j(start)} - 4ζ_f` over the `v_k`-cycle of 1
///   resp. 4, where `f` is the square fixed by `v_k` (5, 3, 9, 8 for
///   `k = 1, 2, 3, 4`).
///
/// `ζ_f` is itself a closed loop since `v_k(f) = f`, which makes every
/// entry an absolute cycle.
///
/// The four bases also ship serialized in
/// `fixtures/adapted_bases_o1.json`; a test pins the construction to
/// that file.
pub fn adapted_basis(k: usize) -> HomologyBasis {
    let o = orbit_representative(k);
    let n = o.n();
    let fixed = (1..=n)
        .find(|&g| o.v().apply(g) == g)
        .expect("each v_k fixes exactly one square");
    let sigma_class = |start: usize| {
        let mut c = RelChain::zero(n);
        let mut x = start;
        loop {
            c.add_sigma(x, 1);
            x = o.h().apply(x);
            if x == start {
                break;
            }
        }
        c.add_sigma(1, -4);
        c
    };
    let zeta_class = |start: usize| {
        let mut c = RelChain::zero(n);
        let mut x = start;
        loop {
            c.add_zeta(x, 1);
            x = o.v().apply(x);
            if x == start {
                break;
            }
        }
        c.add_zeta(fixed, -4);
        c
    };
    HomologyBasis {
        chains: vec![
            total_sigma(n),
            total_zeta(n),
            sigma_class(2),
            sigma_class(6),
            zeta_class(1),
            zeta_class(4),
        ],
    }
}

/// The bases of [`adapted_basis`] transported onto the canonical nodes of
/// an orbit graph, indexed like `graph.nodes`. Returns `None` when the
/// graph is not the orbit of [`o1`].
pub fn adapted_bases_on(graph: &OrbitGraph) -> Option<Vec<HomologyBasis>> {
    if graph.len() != 4 {
        return None;
    }
    let mut out = vec![None; 4];
    for k in 1..=4 {
        let rep = orbit_representative(k);
        let node = graph.find_node(&rep)?;
        let relabel = crate::orbit::relabel_between(&rep, &graph.nodes[node])?;
        out[node] = Some(adapted_basis(k).relabel(&relabel));
    }
    out.into_iter().collect()
}

/// `a = (-Id)·T·S⁻¹ = [[0,-1],[1,-1]]`, an order-3 stabilizer of `o1`.
pub fn word_a() -> Word {
    Word::parse("N T S^-1").expect("fixture word")
}

/// `b = S·T⁻³ = [[1,-3],[1,-2]]`, an order-3 stabilizer of `o1`.
pub fn word_b() -> Word {
    Word::parse("S T^-3").expect("fixture word")
}

/// `p₁ = S T⁻⁴ S⁻¹ T⁴`, the first pinching candidate.
pub fn word_p1() -> Word {
    Word::parse("S T^-4 S^-1 T^4").expect("fixture word")
}

/// `p₂ = S T⁻⁴ S T⁶`, the second pinching candidate.
pub fn word_p2() -> Word {
    Word::parse("S T^-4 S T^6").expect("fixture word")
}

/// Change of basis on the non-tautological part used before the
/// unipotent search.
pub fn theta() -> IMat {
    IMat::from_rows(&[
        vec![1, 1, 1, -1],
        vec![-1, 0, 0, 1],
        vec![-1, -1, 0, -1],
        vec![0, 1, -1, 1],
    ])
}

/// Permutation matrix exchanging the second and fourth basis vectors;
/// conjugating by it puts the searched unipotents in upper-triangular
/// root position.
pub fn conjugator_p() -> IMat {
    IMat::from_rows(&[
        vec![1, 0, 0, 0],
        vec![0, 0, 0, 1],
        vec![0, 0, 1, 0],
        vec![0, 1, 0, 0],
    ])
}

/// The three words over `{A, A², B, B²}` whose conjugates by
/// [`conjugator_p`] produce the root-group unipotents, in free-product
/// normal form: `x = (a²b)²(ab²)²`, `y = a b a² b a² b² a b²`
/// (the merge of `aba²ba(ab²)²`), `z = a²ba²(b²a)²b`.
pub fn unipotent_words() -> (TwoGenWord, TwoGenWord, TwoGenWord) {
    let word = |pattern: &[(AbGen, u32)]| {
        TwoGenWord(pattern.iter().map(|&(gen, exp)| Syllable { gen, exp }).collect())
    };
    use AbGen::{A, B};
    let x = word(&[(A, 2), (B, 1), (A, 2), (B, 1), (A, 1), (B, 2), (A, 1), (B, 2)]);
    let y = word(&[(A, 1), (B, 1), (A, 2), (B, 1), (A, 2), (B, 2), (A, 1), (B, 2)]);
    let z = word(&[(A, 2), (B, 1), (A, 2), (B, 2), (A, 1), (B, 2), (A, 1), (B, 1)]);
    (x, y, z)
}

/// The exponent pattern of the non-faithfulness witness
/// `(a b a⁻¹ b a⁻¹ b a b⁻¹)³` as exponents of alternating `a, b`
/// letters.
pub fn kernel_word_exponents() -> Vec<(char, i64)> {
    let block = [
        ('a', 1),
        ('b', 1),
        ('a', -1),
        ('b', 1),
        ('a', -1),
        ('b', 1),
        ('a', 1),
        ('b', -1),
    ];
    let mut out = Vec::new();
    for _ in 0..3 {
        out.extend_from_slice(&block);
    }
    out
}

/// The twelve-cone ping-pong table for the Veech group `⟨a, b⟩`,
/// loaded from the JSON fixture shipped with the crate.
pub fn pingpong_table() -> ConeTable {
    serde_json::from_str(include_str!("../fixtures/pingpong_sl_o1.json"))
        .expect("shipped fixture is valid")
}

/// Convenience accessor for the fixture cones `C₁..C₁₂` (1-based).
pub fn cone(table: &ConeTable, index: usize) -> RationalCone {
    table.cones[index - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{intersection_form, pairing};
    use crate::linalg::QMat;

    #[test]
    fn fixture_bases_satisfy_all_invariants() {
        for k in 1..=4 {
            let o = orbit_representative(k);
            let b = adapted_basis(k);
            b.validate(&o).unwrap_or_else(|e| panic!("basis {k}: {e}"));
        }
    }

    #[test]
    fn v_k_fixed_squares_follow_the_tabulated_pattern() {
        let expected = [5, 3, 9, 8];
        for k in 1..=4 {
            let o = orbit_representative(k);
            let fixed: Vec<usize> = (1..=9).filter(|&g| o.v().apply(g) == g).collect();
            assert_eq!(fixed, vec![expected[k - 1]]);
        }
    }

    #[test]
    fn printed_omega_on_the_zero_part_of_b1() {
        let o = o1();
        let basis = adapted_basis(1);
        let form = intersection_form(&o, basis.zero_part()).unwrap();
        let expected = IMat::from_rows(&[
            vec![0, 0, -6, -3],
            vec![0, 0, -3, 3],
            vec![6, 3, 0, 0],
            vec![3, -3, 0, 0],
        ]);
        assert_eq!(form.matrix, expected);
        assert_eq!(pairing(&o, &basis.chains[0], &basis.chains[1]), 9);
    }

    #[test]
    fn adapted_basis_is_a_rational_basis_of_the_computed_absolute_space() {
        // expressing B₁ in the computed basis gives an invertible 6x6
        let o = o1();
        let computed = crate::homology::absolute_basis(&o);
        let faces = crate::homology::face_relations(&o);
        let mut cols: Vec<Vec<i64>> = computed.chains.iter().map(|c| c.coeffs().to_vec()).collect();
        cols.extend(faces.matrix.rows());
        let system = QMat::from_int(&IMat::from_rows(&cols)).transposed();
        let mut coords = Vec::new();
        for chain in &adapted_basis(1).chains {
            let b: Vec<_> = chain.coeffs().iter().map(|&x| crate::linalg::q(x)).collect();
            let x = system.solve(&b).expect("fixture chain lies in the space");
            coords.push(x[..6].to_vec());
        }
        let m = QMat::from_rows(&coords);
        assert_eq!(m.rank(), 6);
    }

    #[test]
    fn transported_bases_exist_and_validate() {
        let graph = OrbitGraph::new(&o1());
        let bases = adapted_bases_on(&graph).unwrap();
        for (node, basis) in graph.nodes.iter().zip(&bases) {
            basis.validate(node).unwrap();
        }
        let torus = Origami::parse("h=(1); v=(1); n=1").unwrap();
        assert!(adapted_bases_on(&OrbitGraph::new(&torus)).is_none());
    }

    #[test]
    fn shipped_basis_file_matches_the_construction() {
        let shipped: Vec<HomologyBasis> =
            serde_json::from_str(include_str!("../fixtures/adapted_bases_o1.json")).unwrap();
        let constructed: Vec<HomologyBasis> = (1..=4).map(adapted_basis).collect();
        assert_eq!(shipped, constructed);
    }

    #[test]
    fn adapted_basis_splits_into_tautological_and_zero_parts() {
        let o = o1();
        let basis = adapted_basis(1);
        let (taut, zero) = crate::homology::split_tautological(&o, &basis).unwrap();
        assert_eq!(taut, vec![crate::homology::total_sigma(9), crate::homology::total_zeta(9)]);
        assert_eq!(zero.len(), 4);
        for z in &zero {
            for t in &taut {
                assert_eq!(pairing(&o, z, t), 0);
            }
        }
    }

    #[test]
    fn theta_is_invertible_and_p_is_an_involution() {
        assert_eq!(theta().det(), num_bigint::BigInt::from(-3));
        let p = conjugator_p();
        assert!(p.mul(&p).is_identity());
    }
}
