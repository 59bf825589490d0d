//! Exact rational-cone ping-pong certificates for 2x2 integer matrix
//! groups generated by two finite-order elements.
//!
//! A table is a pair of unions of closed planar cones `X`, `Y` with
//! disjoint interiors. If every nontrivial power of `a` maps `X` into
//! the closure of `Y` and every nontrivial power of `b` maps `Y` into
//! the closure of `X`, the ping-pong lemma gives
//! `⟨a, b⟩ = ⟨a⟩ ∗ ⟨b⟩`; this module checks exactly those hypotheses
//! with integer cross products (no floating point) and emits a
//! certificate listing every verified inclusion. The certificate also
//! supports constructive membership: the image regions
//! `a(X), a²(X), b(Y), b²(Y)` have pairwise disjoint interiors, so the
//! location of a transported probe vector identifies the leading
//! syllable of a normal form, which is then stripped recursively.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{gcd_i64, Mat2};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PingPongError {
    #[error("zero vector has no cone position")]
    ZeroVector,
    #[error("cone generators are collinear")]
    DegenerateCone,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("generator `{0}` does not have finite order ≤ {1}")]
    NotFiniteOrder(char, u32),
    #[error("generator `{0}` is trivial")]
    TrivialGenerator(char),
    #[error("tables overlap: X cone {x:?} meets Y cone {y:?} in the interior")]
    TablesOverlap { x: RationalCone, y: RationalCone },
    #[error("inclusion fails: {gen}^{power} maps {cone:?} to a piece {piece:?} outside the opposite table")]
    FailedInclusion { gen: char, power: u32, cone: RationalCone, piece: RationalCone },
    #[error("invalid table: {0}")]
    BadTable(String),
}

fn cross(u: [i64; 2], w: [i64; 2]) -> i64 {
    u[0] * w[1] - u[1] * w[0]
}

fn primitive(v: [i64; 2]) -> Result<[i64; 2], PingPongError> {
    if v == [0, 0] {
        return Err(PingPongError::ZeroVector);
    }
    let g = gcd_i64(v[0], v[1]);
    Ok([v[0] / g, v[1] / g])
}

/// Where a vector sits relative to a closed cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Interior,
    Boundary,
    Outside,
}

/// Closed planar cone of angle `< π` spanned by two primitive integer
/// vectors, counterclockwise from `u` to `w`.
#[derive(Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalCone {
    pub u: [i64; 2],
    pub w: [i64; 2],
}

impl RationalCone {
    pub fn new(u: [i64; 2], w: [i64; 2]) -> Result<Self, PingPongError> {
        let (u, w) = (primitive(u)?, primitive(w)?);
        if cross(u, w) <= 0 {
            return Err(PingPongError::DegenerateCone);
        }
        Ok(RationalCone { u, w })
    }

    /// Cone spanned by two vectors in either order.
    pub fn spanned_by(a: [i64; 2], b: [i64; 2]) -> Result<Self, PingPongError> {
        if cross(a, b) >= 0 {
            Self::new(a, b)
        } else {
            Self::new(b, a)
        }
    }

    pub fn neg(&self) -> Self {
        RationalCone { u: [-self.u[0], -self.u[1]], w: [-self.w[0], -self.w[1]] }
    }

    /// Exact classification of a nonzero vector by cross-product signs.
    pub fn contains(&self, vec: [i64; 2]) -> Result<Region, PingPongError> {
        if vec == [0, 0] {
            return Err(PingPongError::ZeroVector);
        }
        let c1 = cross(self.u, vec);
        let c2 = cross(vec, self.w);
        Ok(if c1 > 0 && c2 > 0 {
            Region::Interior
        } else if c1 >= 0 && c2 >= 0 {
            Region::Boundary
        } else {
            Region::Outside
        })
    }

    /// True if this cone lies in the closure of `other` (cones of angle
    /// `< π` are convex, so checking the generators suffices).
    pub fn inside_closure_of(&self, other: &RationalCone) -> bool {
        other.contains(self.u).unwrap() != Region::Outside
            && other.contains(self.w).unwrap() != Region::Outside
    }

    /// True if the open cones share a ray.
    pub fn interiors_intersect(&self, other: &RationalCone) -> bool {
        self == other
            || other.contains(self.u).unwrap() == Region::Interior
            || other.contains(self.w).unwrap() == Region::Interior
            || self.contains(other.u).unwrap() == Region::Interior
            || self.contains(other.w).unwrap() == Region::Interior
    }
}

impl fmt::Debug for RationalCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cone(({},{}), ({},{}))",
            self.u[0], self.u[1], self.w[0], self.w[1]
        )
    }
}

/// Image of a cone under an invertible integer matrix, reordered and
/// primitivized; errors when the image is flat.
pub fn image_cone(m: Mat2, c: &RationalCone) -> Result<RationalCone, PingPongError> {
    if m.det() == 0 {
        return Err(PingPongError::SingularMatrix);
    }
    let apply = |v: [i64; 2]| [m.0[0][0] * v[0] + m.0[0][1] * v[1], m.0[1][0] * v[0] + m.0[1][1] * v[1]];
    RationalCone::spanned_by(apply(c.u), apply(c.w))
}

/// A ping-pong table: two unions of cones with disjoint interiors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PingPongTable {
    pub x: Vec<RationalCone>,
    pub y: Vec<RationalCone>,
}

/// Fixture form of a table: generators, the full cone list and the two
/// tables as 1-based indices into it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeTable {
    pub a: Mat2,
    pub b: Mat2,
    pub cones: Vec<RationalCone>,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

impl ConeTable {
    pub fn table(&self) -> Result<PingPongTable, PingPongError> {
        let pick = |idx: &[usize]| -> Result<Vec<RationalCone>, PingPongError> {
            idx.iter()
                .map(|&i| {
                    self.cones
                        .get(i.wrapping_sub(1))
                        .copied()
                        .ok_or_else(|| PingPongError::BadTable(format!("cone index {i} out of range")))
                })
                .collect()
        };
        Ok(PingPongTable { x: pick(&self.x)?, y: pick(&self.y)? })
    }
}

/// One verified inclusion: a generator power maps `source` (or the
/// listed `piece` of its image) into the closure of `target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifiedInclusion {
    pub gen: char,
    pub power: u32,
    pub source: RationalCone,
    pub piece: RationalCone,
    pub target: RationalCone,
}

/// A re-checkable free-product certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeProductCertificate {
    pub a: Mat2,
    pub b: Mat2,
    pub order_a: u32,
    pub order_b: u32,
    pub table: PingPongTable,
    pub inclusions: Vec<VerifiedInclusion>,
    pub statement: String,
}

fn order_of(m: Mat2, label: char, bound: u32) -> Result<u32, PingPongError> {
    if m.is_identity() {
        return Err(PingPongError::TrivialGenerator(label));
    }
    // at the top of iteration k the accumulator holds m^k
    let mut p = m;
    for k in 1..=bound {
        if p.is_identity() {
            return Ok(k);
        }
        p = p * m;
    }
    Err(PingPongError::NotFiniteOrder(label, bound))
}

/// Split an image cone at the rays of the target cones that cross its
/// interior, so each piece can be tested against a single target cone.
fn split_at_targets(image: &RationalCone, targets: &[RationalCone]) -> Vec<RationalCone> {
    let mut rays: Vec<[i64; 2]> = Vec::new();
    for t in targets {
        for r in [t.u, t.w] {
            if image.contains(r).unwrap() == Region::Interior && !rays.contains(&r) {
                rays.push(r);
            }
        }
    }
    // counterclockwise order inside a salient cone is a total order
    rays.sort_by(|r1, r2| cross(*r2, *r1).cmp(&0));
    let mut pieces = Vec::new();
    let mut last = image.u;
    for r in rays {
        pieces.push(RationalCone::new(last, r).expect("interior ray splits the cone"));
        last = r;
    }
    pieces.push(RationalCone::new(last, image.w).expect("interior ray splits the cone"));
    pieces
}

/// Check the ping-pong hypotheses for `⟨a⟩` and `⟨b⟩` against the
/// table: interiors of `X` and `Y` are disjoint, nontrivial powers of
/// `a` map `X` into the closure of `Y`, and nontrivial powers of `b`
/// map `Y` into the closure of `X`. On success the certificate lists
/// one inclusion per (generator power, source cone, image piece).
pub fn verify_pingpong(
    a: Mat2,
    b: Mat2,
    table: &PingPongTable,
) -> Result<FreeProductCertificate, PingPongError> {
    let order_a = order_of(a, 'a', 12)?;
    let order_b = order_of(b, 'b', 12)?;
    if table.x.is_empty() || table.y.is_empty() {
        return Err(PingPongError::BadTable("a table side is empty".into()));
    }
    for cx in &table.x {
        for cy in &table.y {
            if cx.interiors_intersect(cy) {
                return Err(PingPongError::TablesOverlap { x: *cx, y: *cy });
            }
        }
    }
    let mut inclusions = Vec::new();
    let mut check = |gen: char, m: Mat2, order: u32, sources: &[RationalCone], targets: &[RationalCone]|
     -> Result<(), PingPongError> {
        for power in 1..order {
            let mp = m.pow(power as i64);
            for source in sources {
                let image = image_cone(mp, source)?;
                for piece in split_at_targets(&image, targets) {
                    let target = targets
                        .iter()
                        .find(|t| piece.inside_closure_of(t))
                        .copied()
                        .ok_or(PingPongError::FailedInclusion {
                            gen,
                            power,
                            cone: *source,
                            piece,
                        })?;
                    inclusions.push(VerifiedInclusion { gen, power, source: *source, piece, target });
                }
            }
        }
        Ok(())
    };
    check('a', a, order_a, &table.x, &table.y)?;
    check('b', b, order_b, &table.y, &table.x)?;
    Ok(FreeProductCertificate {
        a,
        b,
        order_a,
        order_b,
        table: table.clone(),
        inclusions,
        statement: format!(
            "<a> * <b> = Z/{}Z * Z/{}Z (ping-pong hypotheses verified)",
            order_a, order_b
        ),
    })
}

/// Which of the two free factors a syllable powers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AbGen {
    A,
    B,
}

/// One syllable `a^exp` or `b^exp` with `1 ≤ exp < order`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Syllable {
    pub gen: AbGen,
    pub exp: u32,
}

/// Alternating word in the two generators; the rightmost syllable acts
/// first (matching matrix product order).
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TwoGenWord(pub Vec<Syllable>);

impl TwoGenWord {
    pub fn eval_mat2(&self, a: Mat2, b: Mat2) -> Mat2 {
        let mut m = Mat2::IDENTITY;
        for s in &self.0 {
            let base = match s.gen {
                AbGen::A => a,
                AbGen::B => b,
            };
            m = m * base.pow(s.exp as i64);
        }
        m
    }

    pub fn is_alternating(&self) -> bool {
        self.0.windows(2).all(|w| w[0].gen != w[1].gen)
    }
}

impl fmt::Display for TwoGenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let name = match s.gen {
                AbGen::A => 'a',
                AbGen::B => 'b',
            };
            if s.exp == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{}", s.exp)?;
            }
        }
        Ok(())
    }
}

/// Result of a constructive membership test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    Member(TwoGenWord),
    NotMember { syllable_bound: usize },
}

/// Constructive membership in `⟨a⟩ ∗ ⟨b⟩` via normal-form stripping.
///
/// The image regions `a^j(X)` and `b^j(Y)` recorded in the certificate
/// have pairwise disjoint interiors, so for any nonidentity member the
/// position of at least one transported probe determines the leading
/// syllable; probes on region boundaries make both readings candidates
/// and the search backtracks. Found words are verified by exact matrix
/// reconstruction before being returned.
pub fn membership_normal_form(
    m: Mat2,
    cert: &FreeProductCertificate,
    max_syllables: usize,
) -> Membership {
    if m.det() != 1 {
        return Membership::NotMember { syllable_bound: max_syllables };
    }
    // image region of each leading syllable, from the certificate
    let mut regions: Vec<(Syllable, Vec<RationalCone>)> = Vec::new();
    for (gen, label, order) in [(AbGen::A, 'a', cert.order_a), (AbGen::B, 'b', cert.order_b)] {
        for power in 1..order {
            let cones: Vec<RationalCone> = cert
                .inclusions
                .iter()
                .filter(|inc| inc.gen == label && inc.power == power)
                .map(|inc| inc.piece)
                .collect();
            regions.push((Syllable { gen, exp: power }, cones));
        }
    }
    let probes: Vec<[i64; 2]> = {
        let cx = cert.table.x[0];
        let cy = cert.table.y[0];
        let mix = |c: &RationalCone, s: i64, t: i64| {
            [s * c.u[0] + t * c.w[0], s * c.u[1] + t * c.w[1]]
        };
        vec![mix(&cx, 1, 1), mix(&cy, 1, 1), mix(&cx, 2, 1), mix(&cy, 1, 2)]
    };
    let apply = |m: Mat2, v: [i64; 2]| {
        [m.0[0][0] * v[0] + m.0[0][1] * v[1], m.0[1][0] * v[0] + m.0[1][1] * v[1]]
    };
    let inv_power = |s: Syllable| -> Mat2 {
        let (base, order) = match s.gen {
            AbGen::A => (cert.a, cert.order_a),
            AbGen::B => (cert.b, cert.order_b),
        };
        base.pow((order - s.exp) as i64)
    };

    let mut budget: usize = 64 * (max_syllables + 1) * (max_syllables + 1);
    #[allow(clippy::too_many_arguments)]
    fn strip(
        m: Mat2,
        prev: Option<AbGen>,
        depth: usize,
        budget: &mut usize,
        regions: &[(Syllable, Vec<RationalCone>)],
        probes: &[[i64; 2]],
        apply: &impl Fn(Mat2, [i64; 2]) -> [i64; 2],
        inv_power: &impl Fn(Syllable) -> Mat2,
    ) -> Option<Vec<Syllable>> {
        if m.is_identity() {
            return Some(Vec::new());
        }
        if depth == 0 || *budget == 0 {
            return None;
        }
        *budget -= 1;
        // normal forms alternate, so the syllable after `prev` must use
        // the other generator
        let mut candidates: Vec<Syllable> = Vec::new();
        for p in probes {
            let q = apply(m, *p);
            for (syl, cones) in regions {
                if Some(syl.gen) == prev || candidates.contains(syl) {
                    continue;
                }
                if cones.iter().any(|c| c.contains(q).unwrap() != Region::Outside) {
                    candidates.push(*syl);
                }
            }
        }
        for syl in candidates {
            let next = inv_power(syl) * m;
            if let Some(mut word) =
                strip(next, Some(syl.gen), depth - 1, budget, regions, probes, apply, inv_power)
            {
                word.insert(0, syl);
                return Some(word);
            }
        }
        None
    }

    match strip(m, None, max_syllables, &mut budget, &regions, &probes, &apply, &inv_power) {
        Some(sylls) => {
            let word = TwoGenWord(sylls);
            if word.eval_mat2(cert.a, cert.b) == m {
                Membership::Member(word)
            } else {
                Membership::NotMember { syllable_bound: max_syllables }
            }
        }
        None => Membership::NotMember { syllable_bound: max_syllables },
    }
}
