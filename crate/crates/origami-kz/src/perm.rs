//! Exact permutation arithmetic on `{1..n}` with cycle-notation I/O.
//!
//! Conventions, fixed once and used by every other module:
//!
//! * `compose(p, q)` applies `q` first: `compose(p, q)(x) = p(q(x))`.
//! * `conjugate(p, c) = c ∘ p ∘ c⁻¹`, i.e. relabelling point `x` as
//!   `c(x)` turns `p` into `conjugate(p, c)`.
//! * `commutator(h, v) = v ∘ h ∘ v⁻¹ ∘ h⁻¹`.
//! * Points are 1-based in all I/O and public accessors; storage is
//!   0-based. The formatter prints every cycle, fixed points included,
//!   so the printed form determines `n`.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("permutation sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("images do not form a bijection of 1..={0}")]
    NotBijective(usize),
    #[error("cycle parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

fn parse_err(pos: usize, msg: impl Into<String>) -> PermError {
    PermError::Parse { pos, msg: msg.into() }
}

/// A permutation of `{1..n}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    /// images[i] is the 0-based image of point i+1.
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n as u32).collect() }
    }

    /// Build from the 1-based image table `images[i] = p(i+1)`.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut raw = Vec::with_capacity(n);
        for &im in images {
            if im == 0 || im > n || seen[im - 1] {
                return Err(PermError::NotBijective(n));
            }
            seen[im - 1] = true;
            raw.push((im - 1) as u32);
        }
        Ok(Permutation { images: raw })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1] as usize + 1
    }

    /// Image of the 0-based point `i`.
    pub fn apply0(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| i as u32 == im)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.n()];
        for (i, &im) in self.images.iter().enumerate() {
            inv[im as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self, PermError> {
        if self.n() != other.n() {
            return Err(PermError::SizeMismatch(self.n(), other.n()));
        }
        let images = other.images.iter().map(|&i| self.images[i as usize]).collect();
        Ok(Permutation { images })
    }

    /// `c ∘ self ∘ c⁻¹`: the result of relabelling every point `x` as `c(x)`.
    pub fn conjugate(&self, c: &Self) -> Result<Self, PermError> {
        if self.n() != c.n() {
            return Err(PermError::SizeMismatch(self.n(), c.n()));
        }
        let mut images = vec![0u32; self.n()];
        for i in 0..self.n() {
            // image of c(i) is c(self(i))
            images[c.images[i] as usize] = c.images[self.images[i] as usize];
        }
        Ok(Permutation { images })
    }

    /// `v ∘ h ∘ v⁻¹ ∘ h⁻¹` (apply `h⁻¹` first).
    pub fn commutator(h: &Self, v: &Self) -> Result<Self, PermError> {
        if h.n() != v.n() {
            return Err(PermError::SizeMismatch(h.n(), v.n()));
        }
        let hi = h.inverse();
        let vi = v.inverse();
        v.compose(h)?.compose(&vi)?.compose(&hi)
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Permutation::identity(self.n());
        for _ in 0..k.unsigned_abs() {
            out = base.compose(&out).expect("same n");
        }
        out
    }

    /// Disjoint cycles, fixed points included, each cycle starting at its
    /// smallest point, cycles sorted by smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            loop {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x] as usize;
                if x == start {
                    break;
                }
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let mut parts: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType(parts)
    }

    /// Parse a product of disjoint cycles over `{1..n}`; omitted points are
    /// fixed. Whitespace-insensitive. `""` is the identity.
    pub fn parse_cycles(text: &str, n: usize) -> Result<Self, PermError> {
        let mut images: Vec<Option<u32>> = vec![None; n];
        let bytes = text.as_bytes();
        let mut pos = 0;
        let mut assign = |from: usize, to: usize, pos: usize| -> Result<(), PermError> {
            if images[from - 1].is_some() {
                return Err(parse_err(pos, format!("point {from} appears twice")));
            }
            images[from - 1] = Some((to - 1) as u32);
            Ok(())
        };
        while pos < bytes.len() {
            if bytes[pos].is_ascii_whitespace() {
                pos += 1;
                continue;
            }
            if bytes[pos] != b'(' {
                return Err(parse_err(pos, "expected '('"));
            }
            pos += 1;
            let mut cycle: Vec<usize> = Vec::new();
            loop {
                while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                    pos += 1;
                }
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos == start {
                    return Err(parse_err(pos, "expected a point"));
                }
                let point: usize = text[start..pos]
                    .parse()
                    .map_err(|_| parse_err(start, "point out of range"))?;
                if point == 0 || point > n {
                    return Err(parse_err(start, format!("point {point} outside 1..={n}")));
                }
                cycle.push(point);
                while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                    pos += 1;
                }
                match bytes.get(pos) {
                    Some(b',') => pos += 1,
                    Some(b')') => {
                        pos += 1;
                        break;
                    }
                    _ => return Err(parse_err(pos, "expected ',' or ')'")),
                }
            }
            for w in cycle.windows(2) {
                assign(w[0], w[1], pos)?;
            }
            assign(*cycle.last().unwrap(), cycle[0], pos)?;
        }
        let images: Vec<u32> = images
            .into_iter()
            .enumerate()
            .map(|(i, im)| im.unwrap_or(i as u32))
            .collect();
        // disjointness of parsed cycles was enforced per point; the result
        // can still fail to be a bijection if two points share an image
        let p = Permutation { images };
        let mut seen = vec![false; n];
        for &im in &p.images {
            if seen[im as usize] {
                return Err(PermError::NotBijective(n));
            }
            seen[im as usize] = true;
        }
        Ok(p)
    }

    /// Parse a cycle string in which every point of the domain appears
    /// (the output format of [`Display`][fmt::Display]); `n` is inferred.
    pub fn from_full_cycles(text: &str) -> Result<Self, PermError> {
        let mut n = 0usize;
        for tok in text.split(|c: char| !c.is_ascii_digit()) {
            if !tok.is_empty() {
                n += 1;
            }
        }
        Self::parse_cycles(text, n)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in self.cycles() {
            write!(f, "(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Permutation::from_full_cycles(&text).map_err(D::Error::custom)
    }
}

/// Multiset of cycle lengths, fixed points included, sorted descending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleType(pub Vec<usize>);

impl CycleType {
    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h_o1() -> Permutation {
        Permutation::parse_cycles("(1)(2,3,4,5)(6,7,8,9)", 9).unwrap()
    }

    fn v_o1() -> Permutation {
        Permutation::parse_cycles("(1,2,3,6)(4,7,9,8)(5)", 9).unwrap()
    }

    fn v_o3() -> Permutation {
        Permutation::parse_cycles("(1,2,7,8)(3,5,6,4)(9)", 9).unwrap()
    }

    #[test]
    fn parse_golden_h() {
        let h = h_o1();
        let expect = [1usize, 3, 4, 5, 2, 7, 8, 9, 6];
        for (i, &im) in expect.iter().enumerate() {
            assert_eq!(h.apply(i + 1), im);
        }
    }

    #[test]
    fn compose_identity_and_inverse() {
        let h = h_o1();
        let id = Permutation::identity(9);
        assert_eq!(id.compose(&h).unwrap(), h);
        assert_eq!(h.compose(&h.inverse()).unwrap(), id);
    }

    #[test]
    fn commutator_matches_printed_cycles() {
        let c = Permutation::commutator(&h_o1(), &v_o1()).unwrap();
        assert_eq!(c.to_string(), "(1,9)(2,3)(4,6)(5,8)(7)");
        assert_eq!(c.cycle_type(), CycleType(vec![2, 2, 2, 2, 1]));
    }

    #[test]
    fn commutator_of_equal_is_identity() {
        let v = v_o1();
        assert!(Permutation::commutator(&v, &v).unwrap().is_identity());
    }

    #[test]
    fn commutator_pointwise_oracle() {
        // independent oracle: evaluate v(h(v⁻¹(h⁻¹(x)))) point by point
        let h = h_o1();
        let v = v_o3();
        let c = Permutation::commutator(&h, &v).unwrap();
        let (hi, vi) = (h.inverse(), v.inverse());
        for x in 1..=9 {
            assert_eq!(c.apply(x), v.apply(h.apply(vi.apply(hi.apply(x)))));
        }
    }

    #[test]
    fn conjugate_identity_fixes() {
        let h = h_o1();
        assert_eq!(h.conjugate(&Permutation::identity(9)).unwrap(), h);
    }

    #[test]
    fn conjugation_convention_matches_orbit_identifications() {
        // the horizontal permutation of the vertically sheared origami,
        // h∘v⁻¹, relabelled by φ₄, must recover h itself
        let h = h_o1();
        let v = v_o1();
        let phi4 = Permutation::parse_cycles("(1,6,2,9,4,3)(5,8)(7)", 9).unwrap();
        let sheared_h = h.compose(&v.inverse()).unwrap();
        assert_eq!(sheared_h.conjugate(&phi4).unwrap(), h);
    }

    #[test]
    fn conjugate_by_psi3_inverts_v() {
        // direct multiplication oracle for the -Id identification
        let psi3 = Permutation::parse_cycles("(1)(2,8,4,6)(3,7,5,9)", 9).unwrap();
        assert_eq!(v_o1().conjugate(&psi3).unwrap(), v_o3().inverse());
    }

    #[test]
    fn cycle_type_goldens() {
        assert_eq!(Permutation::identity(9).cycle_type(), CycleType(vec![1; 9]));
        assert_eq!(h_o1().cycle_type(), CycleType(vec![4, 4, 1]));
    }

    #[test]
    fn parse_empty_is_identity() {
        assert!(Permutation::parse_cycles("", 5).unwrap().is_identity());
    }

    #[test]
    fn parse_rejects_repeated_point() {
        let err = Permutation::parse_cycles("(1,2)(2,3)", 3).unwrap_err();
        assert!(matches!(err, PermError::Parse { .. }), "{err}");
    }

    #[test]
    fn parse_rejects_out_of_range_and_malformed() {
        assert!(Permutation::parse_cycles("(1,4)", 3).is_err());
        assert!(Permutation::parse_cycles("(1,2", 3).is_err());
        assert!(Permutation::parse_cycles("1,2)", 3).is_err());
        assert!(Permutation::parse_cycles("(0)", 3).is_err());
    }

    #[test]
    fn size_mismatch_errors() {
        let p = Permutation::identity(3);
        let q = Permutation::identity(4);
        assert_eq!(p.compose(&q).unwrap_err(), PermError::SizeMismatch(3, 4));
        assert!(p.conjugate(&q).is_err());
        assert!(Permutation::commutator(&p, &q).is_err());
    }

    #[test]
    fn pow_and_order() {
        let h = h_o1();
        assert!(h.pow(4).is_identity());
        assert_eq!(h.pow(-1), h.inverse());
        assert_eq!(h.pow(3).compose(&h).unwrap(), h.pow(4));
    }

    #[test]
    fn serde_round_trip() {
        let v = v_o1();
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, "\"(1,2,3,6)(4,7,9,8)(5)\"");
        let back: Permutation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_perm(max_n: usize) -> impl Strategy<Value = Permutation> {
            (1..=max_n).prop_flat_map(|n| {
                Just((1..=n).collect::<Vec<_>>()).prop_shuffle().prop_map(
                    move |images| Permutation::from_images(&images).unwrap(),
                )
            })
        }

        proptest! {
            #[test]
            fn compose_with_inverse_is_identity(p in arb_perm(12)) {
                prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
            }

            #[test]
            fn cycle_type_conjugation_invariant(
                (p, c) in (1usize..=12).prop_flat_map(|n| {
                    let perm = Just((1..=n).collect::<Vec<_>>())
                        .prop_shuffle()
                        .prop_map(move |im| Permutation::from_images(&im).unwrap());
                    (perm.clone(), perm)
                })
            ) {
                prop_assert_eq!(p.conjugate(&c).unwrap().cycle_type(), p.cycle_type());
            }

            #[test]
            fn parse_format_round_trip(p in arb_perm(12)) {
                let text = p.to_string();
                prop_assert_eq!(Permutation::parse_cycles(&text, p.n()).unwrap(), p.clone());
                prop_assert_eq!(Permutation::from_full_cycles(&text).unwrap(), p);
            }
        }
    }
}
