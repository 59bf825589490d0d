//! SL(2,Z)-orbit graphs of origamis, cusps and Veech groups.
//!
//! Nodes are canonical forms; for each node and each generator in
//! `{T, S, -Id}` the graph stores the target node together with the
//! relabelling that conjugates the raw image pair onto the target's
//! canonical pair. Node order is discovery order of a breadth-first
//! closure from the canonical base, so graphs are deterministic.
//!
//! Words over the generators act on the left: the rightmost letter is
//! applied first, and the 2x2 matrix of a word is the product of the
//! letter matrices in written order. The Veech group of the base node is
//! the stabilizer; its index is the node count and Schreier's lemma on a
//! spanning tree yields generators with replayable witness words.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Mat2;
use crate::origami::{Generator, Origami, OrigamiError};
use crate::perm::Permutation;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrbitError {
    #[error(transparent)]
    Origami(#[from] OrigamiError),
    #[error("word parse error: {0}")]
    WordParse(String),
    #[error("word does not close: starts at node {start}, ends at node {end}")]
    NotClosed { start: usize, end: usize },
}

/// One letter of a word over the origami action generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Letter {
    pub gen: Generator,
    pub exp: i64,
}

/// A word over `{T, S, N}` with integer exponents; the rightmost letter
/// acts first. Printed as e.g. `N T S^-1`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn parse(text: &str) -> Result<Self, OrbitError> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let mut chars = tok.chars();
            let c = chars.next().ok_or_else(|| OrbitError::WordParse(tok.into()))?;
            let gen = Generator::from_letter(c)
                .ok_or_else(|| OrbitError::WordParse(format!("unknown generator `{c}`")))?;
            let rest = chars.as_str();
            let exp = if rest.is_empty() {
                1
            } else {
                let e = rest
                    .strip_prefix('^')
                    .ok_or_else(|| OrbitError::WordParse(format!("expected ^ in `{tok}`")))?;
                e.parse::<i64>()
                    .map_err(|_| OrbitError::WordParse(format!("bad exponent in `{tok}`")))?
            };
            letters.push(Letter { gen, exp });
        }
        Ok(Word(letters))
    }

    /// Merge adjacent letters with the same generator, drop zero
    /// exponents, and reduce `-Id` exponents modulo 2.
    pub fn simplified(&self) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for &l in &self.0 {
            let mut l = l;
            if l.gen == Generator::NegId {
                l.exp = l.exp.rem_euclid(2);
            }
            if l.exp == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.gen == l.gen => {
                    last.exp += l.exp;
                    if last.gen == Generator::NegId {
                        last.exp = last.exp.rem_euclid(2);
                    }
                    if last.exp == 0 {
                        out.pop();
                    }
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(
            self.0
                .iter()
                .rev()
                .map(|l| Letter { gen: l.gen, exp: -l.exp })
                .collect(),
        )
    }

    /// `self · other`: apply `other` first.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Product of the letter matrices in written order.
    pub fn mat2(&self) -> Mat2 {
        let mut m = Mat2::IDENTITY;
        for l in &self.0 {
            m = m * l.gen.mat2().pow(l.exp);
        }
        m
    }

    /// Letters expanded to single applications, in application order
    /// (rightmost first), each as `(generator, inverted?)`.
    pub fn steps(&self) -> Vec<(Generator, bool)> {
        let mut steps = Vec::new();
        for l in self.0.iter().rev() {
            for _ in 0..l.exp.unsigned_abs() {
                steps.push((l.gen, l.exp < 0));
            }
        }
        steps
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if l.exp == 1 {
                write!(f, "{}", l.gen.letter())?;
            } else {
                write!(f, "{}^{}", l.gen.letter(), l.exp)?;
            }
        }
        Ok(())
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for Word {
    type Error = OrbitError;
    fn try_from(s: String) -> Result<Self, OrbitError> {
        if s == "1" {
            return Ok(Word::identity());
        }
        Word::parse(&s)
    }
}

/// Edge of the orbit graph: target node plus the relabelling taking the
/// raw generator image onto the target's canonical pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitEdge {
    pub target: usize,
    pub relabel: Permutation,
}

/// Breadth-first closure of an origami under `{T, S, -Id}` up to
/// simultaneous conjugation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitGraph {
    pub nodes: Vec<Origami>,
    /// `edges[node][g]` for `g` in the order T, S, -Id.
    pub edges: Vec<[OrbitEdge; 3]>,
    pub base: usize,
}

fn gen_index(g: Generator) -> usize {
    match g {
        Generator::T => 0,
        Generator::S => 1,
        Generator::NegId => 2,
    }
}

impl OrbitGraph {
    pub fn new(o: &Origami) -> Self {
        let (base_canon, _) = o.canonical_form();
        let mut nodes = vec![base_canon];
        let mut edges: Vec<[OrbitEdge; 3]> = Vec::new();
        let mut pos = 0;
        while pos < nodes.len() {
            let node = nodes[pos].clone();
            let node_edges = Generator::ALL.map(|g| {
                let raw = node.apply_generator(g);
                let (canon, mu) = raw.canonical_form();
                let target = match nodes.iter().position(|n| *n == canon) {
                    Some(i) => i,
                    None => {
                        nodes.push(canon.clone());
                        nodes.len() - 1
                    }
                };
                debug_assert_eq!(raw.relabel(&mu).unwrap(), nodes[target]);
                OrbitEdge { target, relabel: mu }
            });
            edges.push(node_edges);
            pos += 1;
        }
        OrbitGraph { nodes, edges, base: 0 }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge(&self, node: usize, g: Generator) -> &OrbitEdge {
        &self.edges[node][gen_index(g)]
    }

    /// Node reached from `node` by `g`.
    pub fn step(&self, node: usize, g: Generator) -> usize {
        self.edge(node, g).target
    }

    /// Node `u` with `step(u, g) = node`; generator edges permute nodes.
    pub fn step_back(&self, node: usize, g: Generator) -> usize {
        (0..self.len())
            .find(|&u| self.step(u, g) == node)
            .expect("generator edges permute the nodes")
    }

    /// Node index of an origami, if it lies on this orbit.
    pub fn find_node(&self, o: &Origami) -> Option<usize> {
        let canon = o.canonical_form().0;
        self.nodes.iter().position(|n| *n == canon)
    }

    /// Replay a word from `start`; rightmost letter first.
    pub fn replay(&self, word: &Word, start: usize) -> usize {
        let mut node = start;
        for (g, inv) in word.steps() {
            node = if inv { self.step_back(node, g) } else { self.step(node, g) };
        }
        node
    }

    pub fn is_closed_at(&self, word: &Word, start: usize) -> bool {
        self.replay(word, start) == start
    }

    /// T-cycles of the orbit (one per cusp), each listed from its
    /// smallest node index; sorted by that index.
    pub fn cusps(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut u = start;
            loop {
                seen[u] = true;
                cycle.push(u);
                u = self.step(u, Generator::T);
                if u == start {
                    break;
                }
            }
            out.push(cycle);
        }
        out
    }

    /// Stabilizer data for the base node.
    pub fn veech_group(&self) -> VeechGroupData {
        let n = self.len();
        // breadth-first spanning tree over forward edges, generator order
        // T, S, -Id; transversal[u] maps base to u
        let mut transversal: Vec<Option<Word>> = vec![None; n];
        transversal[self.base] = Some(Word::identity());
        let mut tree_edge: Vec<Vec<(usize, Generator)>> = vec![Vec::new(); n];
        let mut queue = std::collections::VecDeque::from([self.base]);
        while let Some(u) = queue.pop_front() {
            for g in Generator::ALL {
                let v = self.step(u, g);
                if transversal[v].is_none() {
                    let w = Word(vec![Letter { gen: g, exp: 1 }])
                        .concat(transversal[u].as_ref().unwrap());
                    transversal[v] = Some(w);
                    tree_edge[u].push((v, g));
                    queue.push_back(v);
                }
            }
        }
        let transversal: Vec<Word> = transversal.into_iter().map(|t| t.unwrap()).collect();

        let mut generators: Vec<SchreierGenerator> = Vec::new();
        for u in 0..n {
            for g in Generator::ALL {
                let v = self.step(u, g);
                if tree_edge[u].contains(&(v, g)) {
                    continue;
                }
                let word = transversal[v]
                    .inverse()
                    .concat(&Word(vec![Letter { gen: g, exp: 1 }]))
                    .concat(&transversal[u])
                    .simplified();
                let matrix = word.mat2();
                assert!(self.is_closed_at(&word, self.base), "Schreier word must stabilize");
                assert_eq!(matrix.det(), 1);
                if matrix.is_identity() {
                    continue;
                }
                if generators.iter().all(|s| s.matrix != matrix) {
                    generators.push(SchreierGenerator { matrix, word });
                }
            }
        }
        VeechGroupData {
            index: n,
            cusp_count: self.cusps().len(),
            schreier_generators: generators,
        }
    }

    /// GraphViz rendering with one edge per generator application.
    pub fn to_dot(&self) -> String {
        use std::fmt::Write as _;
        let mut s = String::from("digraph orbit {\n  rankdir=LR;\n");
        for (i, node) in self.nodes.iter().enumerate() {
            let shape = if i == self.base { "doublecircle" } else { "circle" };
            let _ = writeln!(s, "  n{i} [shape={shape}, label=\"{i}\", tooltip=\"{node}\"];");
        }
        let styles = [("T", "solid"), ("S", "dashed"), ("-Id", "dotted")];
        for (u, node_edges) in self.edges.iter().enumerate() {
            for (k, e) in node_edges.iter().enumerate() {
                let (label, style) = styles[k];
                let _ = writeln!(
                    s,
                    "  n{u} -> n{} [label=\"{label}\", style={style}];",
                    e.target
                );
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Veech group of the base node: index in SL(2,Z), cusp count and
/// Schreier generators with witness words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VeechGroupData {
    pub index: usize,
    pub cusp_count: usize,
    pub schreier_generators: Vec<SchreierGenerator>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchreierGenerator {
    pub matrix: Mat2,
    pub word: Word,
}

/// The unique relabelling `c` with `a.relabel(c) = b`, when `a` and `b`
/// present the same surface (unique when `Aut` is trivial).
pub fn relabel_between(a: &Origami, b: &Origami) -> Option<Permutation> {
    let (ca, mu_a) = a.canonical_form();
    let (cb, mu_b) = b.canonical_form();
    if ca != cb {
        return None;
    }
    Some(mu_b.inverse().compose(&mu_a).expect("same n"))
}
