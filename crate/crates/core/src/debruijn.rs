//! Order-`k` de Bruijn multigraphs.
//!
//! Nodes are the distinct `(k-1)`-mers; every occurrence of a `k`-mer in the
//! input collection contributes one edge from its prefix to its suffix
//! `(k-1)`-mer. Edge ids follow the order of occurrence, string by string.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, GraphBuilder, Interval, NodeIx, Orientation, TimedGraph, TrailResult};

/// Default cap on `|Σ|^k` for [`complete_dbg`].
pub const DEFAULT_EDGE_BUDGET: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<char>,
}

impl Alphabet {
    pub fn new(letters: impl IntoIterator<Item = char>) -> Result<Self> {
        let letters: Vec<char> = letters.into_iter().collect();
        if letters.len() < 2 {
            return Err(Error::InvalidAlphabet(format!(
                "need at least 2 letters, got {}",
                letters.len()
            )));
        }
        for (i, c) in letters.iter().enumerate() {
            if letters[..i].contains(c) {
                return Err(Error::InvalidAlphabet(format!("duplicate letter `{c}`")));
            }
            if c.is_whitespace() {
                return Err(Error::InvalidAlphabet("whitespace letter".into()));
            }
        }
        Ok(Alphabet { letters })
    }

    /// Sorted distinct letters of `strings`.
    pub fn infer<S: AsRef<str>>(strings: &[S]) -> Result<Self> {
        let mut letters: Vec<char> = strings.iter().flat_map(|s| s.as_ref().chars()).collect();
        letters.sort_unstable();
        letters.dedup();
        Alphabet::new(letters)
    }

    pub fn size(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn letter(&self, i: usize) -> char {
        self.letters[i]
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.letters.iter().position(|&x| x == c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeBruijnGraph {
    k: usize,
    alphabet: Alphabet,
    base: TimedGraph,
    /// Letter index of the last letter of each edge's k-mer, by edge index.
    edge_letter: Vec<u8>,
    /// Node labels as letter indices.
    labels: Vec<Vec<u8>>,
}

impl DeBruijnGraph {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn base(&self) -> &TimedGraph {
        &self.base
    }

    pub fn into_base(self) -> TimedGraph {
        self.base
    }

    pub fn label(&self, v: NodeIx) -> &str {
        self.base.node_token(v)
    }

    pub fn label_letters(&self, v: NodeIx) -> &[u8] {
        &self.labels[v]
    }

    pub fn edge_letter(&self, id: EdgeId) -> usize {
        self.edge_letter[id.index()] as usize
    }

    pub fn kmer(&self, id: EdgeId) -> String {
        let e = self.base.edge(id);
        let mut s = self.label(e.tail).to_string();
        s.push(self.alphabet.letter(self.edge_letter(id)));
        s
    }

    /// Copies of the k-mer `label(v)·x`, ascending by id.
    pub fn copies(&self, v: NodeIx, letter: usize) -> Vec<EdgeId> {
        self.base
            .adjacent(v)
            .iter()
            .copied()
            .filter(|&id| self.edge_letter(id) == letter)
            .collect()
    }

    /// Edge ids grouped by k-mer, keyed by the k-mer string.
    pub fn kmer_groups(&self) -> HashMap<String, Vec<EdgeId>> {
        let mut groups: HashMap<String, Vec<EdgeId>> = HashMap::new();
        for e in self.base.edges() {
            groups.entry(self.kmer(e.id)).or_default().push(e.id);
        }
        groups
    }

    /// Interprets a directed graph whose node tokens are equal-length strings
    /// as a de Bruijn graph, inferring `k` and the alphabet.
    pub fn from_graph(base: TimedGraph, alphabet: Option<Alphabet>) -> Result<Self> {
        if !base.is_directed() {
            return Err(Error::NotDeBruijn("graph is undirected".into()));
        }
        let Some(first) = base.nodes().first() else {
            return Err(Error::NotDeBruijn("graph has no nodes".into()));
        };
        let len = first.chars().count();
        if len == 0 {
            return Err(Error::NotDeBruijn("empty node label".into()));
        }
        if let Some(bad) = base.nodes().iter().find(|s| s.chars().count() != len) {
            return Err(Error::NotDeBruijn(format!(
                "node `{bad}` differs in length from `{first}`"
            )));
        }
        let alphabet = match alphabet {
            Some(a) => a,
            None => infer_padded(base.nodes())?,
        };
        let labels = encode_labels(&alphabet, base.nodes())?;
        let mut edge_letter = Vec::with_capacity(base.m());
        for e in base.edges() {
            let (t, h) = (&labels[e.tail], &labels[e.head]);
            if t[1..] != h[..len - 1] {
                return Err(Error::NotDeBruijn(format!(
                    "edge {} from `{}` to `{}` does not overlap",
                    e.id,
                    base.node_token(e.tail),
                    base.node_token(e.head)
                )));
            }
            edge_letter.push(h[len - 1]);
        }
        Ok(DeBruijnGraph {
            k: len + 1,
            alphabet,
            base,
            edge_letter,
            labels,
        })
    }

    /// Concatenates the start label and the letters of the trail's edges.
    pub fn spell(&self, trail: &TrailResult) -> Result<String> {
        if !trail.valid {
            return Err(Error::InvalidTrail);
        }
        self.spell_edges(&trail.edges)
    }

    /// Spells an edge sequence that chains as a walk (validity not required).
    pub fn spell_edges(&self, edges: &[EdgeId]) -> Result<String> {
        let walk = self.base.chain(edges).ok_or(Error::InvalidTrail)?;
        let Some(&start) = walk.first() else {
            return Err(Error::InvalidTrail);
        };
        let mut s = self.label(start).to_string();
        for &id in edges {
            s.push(self.alphabet.letter(self.edge_letter(id)));
        }
        Ok(s)
    }

    /// Assigns each listed k-mer's interval to all of its copies; other
    /// edges keep their current interval.
    pub fn knowledge_to_intervals(&self, know: &[(String, Interval)]) -> Result<DeBruijnGraph> {
        let m = self.base.m();
        let groups = self.kmer_groups();
        let mut intervals: Vec<Option<Interval>> =
            self.base.edges().iter().map(|e| e.interval).collect();
        for (kmer, iv) in know {
            if iv.lo < 1 || iv.hi > m || iv.lo > iv.hi {
                return Err(Error::IntervalOutOfRange {
                    lo: iv.lo,
                    hi: iv.hi,
                    m,
                });
            }
            let ids = groups
                .get(kmer)
                .ok_or_else(|| Error::UnknownKmer(kmer.clone()))?;
            for id in ids {
                intervals[id.index()] = Some(*iv);
            }
        }
        let mut out = self.clone();
        out.base = self.base.with_intervals(&intervals);
        Ok(out)
    }

    /// Replaces the underlying timed graph (same nodes and edges).
    pub fn with_base(&self, base: TimedGraph) -> Result<DeBruijnGraph> {
        if base.n() != self.base.n()
            || base.m() != self.base.m()
            || base
                .edges()
                .iter()
                .zip(self.base.edges())
                .any(|(a, b)| a.tail != b.tail || a.head != b.head)
        {
            return Err(Error::NotDeBruijn(
                "replacement changes the topology".into(),
            ));
        }
        let mut out = self.clone();
        out.base = base;
        Ok(out)
    }
}

fn encode_labels(alphabet: &Alphabet, nodes: &[String]) -> Result<Vec<Vec<u8>>> {
    nodes
        .iter()
        .map(|s| {
            s.chars()
                .map(|c| {
                    alphabet
                        .index_of(c)
                        .map(|i| i as u8)
                        .ok_or(Error::LetterNotInAlphabet(c))
                })
                .collect()
        })
        .collect()
}

/// Inferred alphabet; a lone letter is paired with an unused filler letter.
fn infer_padded(labels: &[String]) -> Result<Alphabet> {
    let mut letters: Vec<char> = labels.iter().flat_map(|s| s.chars()).collect();
    letters.sort_unstable();
    letters.dedup();
    if let [only] = letters[..] {
        let filler = ['0', '1', 'A', 'C', 'G', 'T']
            .into_iter()
            .find(|&c| c != only)
            .unwrap();
        letters.push(filler);
        letters.sort_unstable();
    }
    Alphabet::new(letters)
}

/// Order-`k` de Bruijn multigraph of `strings`, all intervals `[1, m]`.
pub fn build_dbg<S: AsRef<str>>(
    strings: &[S],
    k: usize,
    alphabet: Option<&Alphabet>,
) -> Result<DeBruijnGraph> {
    if k < 2 {
        return Err(Error::InvalidOrder(k));
    }
    let alphabet = match alphabet {
        Some(a) => a.clone(),
        None => Alphabet::infer(strings)?,
    };
    let mut b = GraphBuilder::new(Orientation::Directed);
    let mut edge_letter = Vec::new();
    for s in strings {
        let chars: Vec<char> = s.as_ref().chars().collect();
        if let Some(&c) = chars.iter().find(|&&c| alphabet.index_of(c).is_none()) {
            return Err(Error::LetterNotInAlphabet(c));
        }
        if chars.len() < k {
            return Err(Error::StringTooShort(s.as_ref().to_string()));
        }
        for start in 0..=chars.len() - k {
            let tail: String = chars[start..start + k - 1].iter().collect();
            let head: String = chars[start + 1..start + k].iter().collect();
            let (t, h) = (b.intern(&tail), b.intern(&head));
            b.push_edge(t, h, None, None);
            edge_letter.push(alphabet.index_of(chars[start + k - 1]).unwrap() as u8);
        }
    }
    let m = b.edge_count();
    for i in 0..m {
        b.set_interval(EdgeId::from_index(i), Some(Interval::new(1, m)));
    }
    let base = b.build()?;
    let labels = encode_labels(&alphabet, base.nodes())?;
    Ok(DeBruijnGraph {
        k,
        alphabet,
        base,
        edge_letter,
        labels,
    })
}

/// Complete de Bruijn graph: every `(k-1)`-mer a node (lexicographic in
/// alphabet order), every k-mer an edge. Edge id of the k-mer with
/// base-`σ` value `x` is `x + 1`.
pub fn complete_dbg(alphabet: &Alphabet, k: usize, edge_budget: usize) -> Result<DeBruijnGraph> {
    if k < 2 {
        return Err(Error::InvalidOrder(k));
    }
    let sigma = alphabet.size();
    let too_big = || Error::SizeBudgetExceeded(format!("{sigma}^{k} edges over {edge_budget}"));
    let m = sigma
        .checked_pow(k as u32)
        .filter(|&m| m <= edge_budget)
        .ok_or_else(too_big)?;
    let n = m / sigma;
    let mut b = GraphBuilder::new(Orientation::Directed);
    let mut labels = Vec::with_capacity(n);
    for x in 0..n {
        let mut digits = vec![0u8; k - 1];
        let mut rest = x;
        for d in digits.iter_mut().rev() {
            *d = (rest % sigma) as u8;
            rest /= sigma;
        }
        let token: String = digits
            .iter()
            .map(|&d| alphabet.letter(d as usize))
            .collect();
        b.intern(&token);
        labels.push(digits);
    }
    let mut edge_letter = Vec::with_capacity(m);
    let full = Some(Interval::new(1, m));
    for x in 0..n {
        for a in 0..sigma {
            let head = (x * sigma + a) % n;
            b.push_edge(x, head, full, None);
            edge_letter.push(a as u8);
        }
    }
    let base = b.build()?;
    Ok(DeBruijnGraph {
        k,
        alphabet: alphabet.clone(),
        base,
        edge_letter,
        labels,
    })
}
