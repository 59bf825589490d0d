//! Origamis (square-tiled surfaces) as transitive permutation pairs.
//!
//! An origami on `n` unit squares is a pair `(h, v)` of permutations of
//! `{1..n}`: `h(i)` is the square to the right of `i` and `v(i)` the
//! square above it. The pair must act transitively (connected surface).
//! Simultaneously conjugate pairs give the same surface, so equality of
//! surfaces is equality of canonical forms.
//!
//! The cone points of the flat metric sit at the bottom-left corners of
//! the squares; rotating once around the corner of square `g` visits the
//! squares of the `[h, v] = v∘h∘v⁻¹∘h⁻¹` cycle of `g`, so a cycle of
//! length `ℓ` is a zero of order `ℓ - 1` and the cycle type of the
//! commutator determines the stratum.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Mat2;
use crate::perm::{PermError, Permutation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrigamiError {
    #[error("h and v have different sizes: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("the pair does not act transitively on the {0} squares")]
    NotTransitive(usize),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("invalid origami text: {0}")]
    Format(String),
}

/// The generators of SL(2,Z) acting on origamis, plus `-Id`.
///
/// `T = [[1,1],[0,1]]` acts by `(h, v) -> (h, v∘h⁻¹)`,
/// `S = [[1,0],[1,1]]` by `(h, v) -> (h∘v⁻¹, v)`, and
/// `-Id` by `(h, v) -> (h⁻¹, v⁻¹)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    T,
    S,
    NegId,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::T, Generator::S, Generator::NegId];

    pub fn mat2(self) -> Mat2 {
        match self {
            Generator::T => Mat2([[1, 1], [0, 1]]),
            Generator::S => Mat2([[1, 0], [1, 1]]),
            Generator::NegId => Mat2([[-1, 0], [0, -1]]),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Generator::T => 'T',
            Generator::S => 'S',
            Generator::NegId => 'N',
        }
    }

    pub fn from_letter(c: char) -> Option<Generator> {
        match c {
            'T' => Some(Generator::T),
            'S' => Some(Generator::S),
            'N' => Some(Generator::NegId),
            _ => None,
        }
    }
}

/// A transitive pair of permutations; the surface is connected by
/// construction.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Origami {
    h: Permutation,
    v: Permutation,
}

impl Origami {
    pub fn new(h: Permutation, v: Permutation) -> Result<Self, OrigamiError> {
        if h.n() != v.n() {
            return Err(OrigamiError::SizeMismatch(h.n(), v.n()));
        }
        let o = Origami { h, v };
        if !o.is_transitive() {
            return Err(OrigamiError::NotTransitive(o.n()));
        }
        Ok(o)
    }

    /// Parse the text form `h=<cycles>; v=<cycles>; n=<int>`.
    pub fn parse(text: &str) -> Result<Self, OrigamiError> {
        let mut h_text = None;
        let mut v_text = None;
        let mut n = None;
        for part in text.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| OrigamiError::Format(format!("expected key=value, got `{part}`")))?;
            match key.trim() {
                "h" => h_text = Some(value.trim().to_string()),
                "v" => v_text = Some(value.trim().to_string()),
                "n" => {
                    n = Some(value.trim().parse::<usize>().map_err(|_| {
                        OrigamiError::Format(format!("invalid square count `{}`", value.trim()))
                    })?)
                }
                other => return Err(OrigamiError::Format(format!("unknown key `{other}`"))),
            }
        }
        let n = n.ok_or_else(|| OrigamiError::Format("missing n=<int>".into()))?;
        let h = Permutation::parse_cycles(
            &h_text.ok_or_else(|| OrigamiError::Format("missing h=<cycles>".into()))?,
            n,
        )?;
        let v = Permutation::parse_cycles(
            &v_text.ok_or_else(|| OrigamiError::Format("missing v=<cycles>".into()))?,
            n,
        )?;
        Origami::new(h, v)
    }

    pub fn h(&self) -> &Permutation {
        &self.h
    }

    pub fn v(&self) -> &Permutation {
        &self.v
    }

    pub fn n(&self) -> usize {
        self.h.n()
    }

    fn is_transitive(&self) -> bool {
        let n = self.n();
        let hi = self.h.inverse();
        let vi = self.v.inverse();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for y in [
                self.h.apply0(x),
                self.v.apply0(x),
                hi.apply0(x),
                vi.apply0(x),
            ] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == n
    }

    /// `v∘h∘v⁻¹∘h⁻¹`; its cycles are the vertices of the square complex.
    pub fn commutator(&self) -> Permutation {
        Permutation::commutator(&self.h, &self.v).expect("same n")
    }

    /// Simultaneous conjugation: relabel square `x` as `c(x)`.
    pub fn relabel(&self, c: &Permutation) -> Result<Self, OrigamiError> {
        Ok(Origami {
            h: self.h.conjugate(c)?,
            v: self.v.conjugate(c)?,
        })
    }

    /// Swap horizontal and vertical directions (reflect along the
    /// diagonal); vertical cylinders of `self` are horizontal cylinders
    /// of the transpose.
    pub fn transposed(&self) -> Self {
        Origami { h: self.v.clone(), v: self.h.clone() }
    }

    /// Apply a generator; the result is not canonicalized.
    pub fn apply_generator(&self, g: Generator) -> Self {
        let (h, v) = match g {
            Generator::T => (self.h.clone(), self.v.compose(&self.h.inverse()).expect("same n")),
            Generator::S => (self.h.compose(&self.v.inverse()).expect("same n"), self.v.clone()),
            Generator::NegId => (self.h.inverse(), self.v.inverse()),
        };
        Origami { h, v }
    }

    /// Apply the inverse of a generator.
    pub fn apply_generator_inv(&self, g: Generator) -> Self {
        let (h, v) = match g {
            Generator::T => (self.h.clone(), self.v.compose(&self.h).expect("same n")),
            Generator::S => (self.h.compose(&self.v).expect("same n"), self.v.clone()),
            Generator::NegId => (self.h.inverse(), self.v.inverse()),
        };
        Origami { h, v }
    }

    pub fn stratum(&self) -> Stratum {
        let c = self.commutator();
        let cycles = c.cycles();
        let mut zero_orders: Vec<usize> =
            cycles.iter().filter(|cy| cy.len() >= 2).map(|cy| cy.len() - 1).collect();
        zero_orders.sort_unstable_by(|a, b| b.cmp(a));
        let total: usize = zero_orders.iter().sum();
        assert!(total.is_multiple_of(2), "zero orders must sum to 2g-2");
        let genus = total / 2 + 1;
        // Euler characteristic cross-check: V - E + F = #cycles - 2n + n
        let euler = cycles.len() as i64 - self.n() as i64;
        assert_eq!(euler, 2 - 2 * genus as i64, "Euler characteristic disagrees");
        Stratum { zero_orders, genus }
    }

    /// Canonical representative of the simultaneous-conjugacy class and
    /// the relabelling `mu` with `self.relabel(mu) = canonical`.
    ///
    /// For each start square, squares are renumbered in first-seen order
    /// of the traversal that repeatedly applies `h` then `v` to the
    /// frontier; the lexicographically least relabelled pair wins.
    pub fn canonical_form(&self) -> (Origami, Permutation) {
        let n = self.n();
        let mut best: Option<(Origami, Permutation)> = None;
        for start in 0..n {
            let mut order = Vec::with_capacity(n);
            let mut seen = vec![false; n];
            order.push(start);
            seen[start] = true;
            let mut pos = 0;
            while pos < order.len() {
                let x = order[pos];
                for y in [self.h.apply0(x), self.v.apply0(x)] {
                    if !seen[y] {
                        seen[y] = true;
                        order.push(y);
                    }
                }
                pos += 1;
            }
            assert_eq!(order.len(), n, "transitive traversal covers all squares");
            let mut new_label = vec![0usize; n];
            for (idx, &old) in order.iter().enumerate() {
                new_label[old] = idx + 1;
            }
            let mu = Permutation::from_images(&new_label).expect("bijective relabelling");
            let candidate = self.relabel(&mu).expect("same n");
            if best.as_ref().is_none_or(|(b, _)| (&candidate.h, &candidate.v) < (&b.h, &b.v)) {
                best = Some((candidate, mu));
            }
        }
        best.expect("n >= 1")
    }

    /// All permutations commuting with both `h` and `v` (the automorphism
    /// group of the origami). For a transitive pair there are at most `n`.
    pub fn automorphisms(&self) -> Vec<Permutation> {
        let n = self.n();
        let mut out = Vec::new();
        'candidates: for target in 0..n {
            // an automorphism is determined by the image of square 1
            let mut image: Vec<Option<u32>> = vec![None; n];
            image[0] = Some(target as u32);
            let mut stack = vec![0usize];
            while let Some(x) = stack.pop() {
                let fx = image[x].unwrap() as usize;
                for (px, pfx) in [
                    (self.h.apply0(x), self.h.apply0(fx)),
                    (self.v.apply0(x), self.v.apply0(fx)),
                ] {
                    match image[px] {
                        None => {
                            image[px] = Some(pfx as u32);
                            stack.push(px);
                        }
                        Some(y) if y as usize != pfx => continue 'candidates,
                        Some(_) => {}
                    }
                }
            }
            let Some(images) = image
                .iter()
                .map(|o| o.map(|x| x as usize + 1))
                .collect::<Option<Vec<_>>>()
            else {
                continue;
            };
            let Ok(phi) = Permutation::from_images(&images) else { continue };
            if phi.compose(&self.h).expect("n") == self.h.compose(&phi).expect("n")
                && phi.compose(&self.v).expect("n") == self.v.compose(&phi).expect("n")
            {
                out.push(phi);
            }
        }
        out
    }

    /// Maximal horizontal cylinders.
    ///
    /// Rows are `h`-cycles; the circle between a row and the row above it
    /// carries a cone point iff some square in `v(row)` has a singular
    /// bottom-left corner. Rows stack into one cylinder while the circles
    /// between them are regular.
    pub fn horizontal_cylinders(&self) -> Vec<Cylinder> {
        let n = self.n();
        let c = self.commutator();
        let mut singular = vec![false; n];
        for cycle in c.cycles() {
            if cycle.len() >= 2 {
                for x in cycle {
                    singular[x - 1] = true;
                }
            }
        }
        let rows: Vec<Vec<usize>> = self.h.cycles();
        let mut row_of = vec![0usize; n];
        for (ri, row) in rows.iter().enumerate() {
            for &x in row {
                row_of[x - 1] = ri;
            }
        }
        let top_singular = |row: &[usize]| row.iter().any(|&x| singular[self.v.apply(x) - 1]);
        let bottom_singular = |row: &[usize]| row.iter().any(|&x| singular[x - 1]);
        let row_above = |row: &[usize]| -> usize {
            let target = row_of[self.v.apply(row[0]) - 1];
            debug_assert!(
                row.iter().all(|&x| row_of[self.v.apply(x) - 1] == target)
                    && rows[target].len() == row.len(),
                "regular circle must glue the row bijectively onto the next"
            );
            target
        };

        let mut visited = vec![false; rows.len()];
        let mut cylinders = Vec::new();
        // cylinders whose bottom circle is singular
        for (ri, row) in rows.iter().enumerate() {
            if visited[ri] || !bottom_singular(row) {
                continue;
            }
            let mut stack = vec![ri];
            visited[ri] = true;
            let mut current = ri;
            while !top_singular(&rows[current]) {
                current = row_above(&rows[current]);
                assert!(!visited[current], "row stacked twice");
                visited[current] = true;
                stack.push(current);
            }
            cylinders.push(Cylinder::from_rows(stack.iter().map(|&i| rows[i].clone()).collect()));
        }
        // a surface with no cone point is a torus cover: the remaining
        // rows close up into cyclic stacks
        for ri in 0..rows.len() {
            if visited[ri] {
                continue;
            }
            let mut stack = vec![ri];
            visited[ri] = true;
            let mut current = row_above(&rows[ri]);
            while current != ri {
                assert!(!visited[current], "row stacked twice");
                visited[current] = true;
                stack.push(current);
                current = row_above(&rows[current]);
            }
            cylinders.push(Cylinder::from_rows(stack.iter().map(|&i| rows[i].clone()).collect()));
        }
        cylinders.sort_by_key(|c| c.rows[0][0]);
        cylinders
    }
}

impl fmt::Display for Origami {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h={}; v={}; n={}", self.h, self.v, self.n())
    }
}

impl fmt::Debug for Origami {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Origami({self})")
    }
}

impl<'de> Deserialize<'de> for Origami {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Raw {
            h: Permutation,
            v: Permutation,
        }
        let raw = Raw::deserialize(d)?;
        Origami::new(raw.h, raw.v).map_err(D::Error::custom)
    }
}

/// Connected component data of the ambient stratum: orders of the zeros
/// of the abelian differential and the genus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    /// Zero orders `k ≥ 1` (cone angles `2π(k+1)`), sorted descending;
    /// empty for torus covers.
    pub zero_orders: Vec<usize>,
    pub genus: usize,
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H(")?;
        for (i, k) in self.zero_orders.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ") genus {}", self.genus)
    }
}

/// A maximal horizontal cylinder: stacked rows of squares, bottom first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cylinder {
    /// Rows bottom to top, each an `h`-cycle in `h`-orbit order.
    pub rows: Vec<Vec<usize>>,
    pub width: usize,
    pub height: usize,
}

impl Cylinder {
    fn from_rows(rows: Vec<Vec<usize>>) -> Self {
        let width = rows[0].len();
        let height = rows.len();
        Cylinder { rows, width, height }
    }

    /// Squares of the core row used for the waist curve.
    pub fn waist_row(&self) -> &[usize] {
        &self.rows[0]
    }

    pub fn squares(&self) -> Vec<usize> {
        self.rows.concat()
    }
}
