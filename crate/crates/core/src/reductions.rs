//! Hardness instance generators.
//!
//! * Directed Hamiltonian path to interval-constrained Eulerian trail on the
//!   complete binary de Bruijn graph of order `4ℓ + 11`.
//! * Undirected Hamiltonian path to zero-cost Eulerian trail on the complete
//!   graph `K_{2n+1}` with parity costs.
//!
//! Both come with witness builders that turn a Hamiltonian path of the
//! source into a valid trail of the generated instance.

use std::collections::{HashSet, VecDeque};

use crate::debruijn::{complete_dbg, Alphabet, DeBruijnGraph};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, GraphBuilder, Interval, NodeIx, Orientation, TimedGraph, TrailResult};

/// Default cap on the number of edges of a generated directed instance.
pub const DEFAULT_REDUCTION_BUDGET: usize = 1 << 20;

/// Plain (untimed) source graph of a reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceGraph {
    pub directed: bool,
    pub nodes: Vec<String>,
    pub edges: Vec<(usize, usize)>,
}

impl SourceGraph {
    pub fn new(directed: bool, nodes: Vec<String>) -> Self {
        SourceGraph {
            directed,
            nodes,
            edges: Vec::new(),
        }
    }

    /// Nodes named `0..n`.
    pub fn with_n(directed: bool, n: usize) -> Self {
        SourceGraph::new(directed, (0..n).map(|i| i.to_string()).collect())
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.edges.push((a, b));
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges
            .iter()
            .any(|&(x, y)| (x, y) == (a, b) || (!self.directed && (y, x) == (a, b)))
    }

    pub fn is_hamiltonian_path(&self, path: &[usize]) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        path.len() == n
            && path
                .iter()
                .all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
            && path.windows(2).all(|w| self.has_edge(w[0], w[1]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReducedInstance {
    Directed(DeBruijnGraph),
    Undirected(TimedGraph),
}

impl ReducedInstance {
    pub fn graph(&self) -> &TimedGraph {
        match self {
            ReducedInstance::Directed(d) => d.base(),
            ReducedInstance::Undirected(g) => g,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionArtifacts {
    pub source: SourceGraph,
    pub instance: ReducedInstance,
    /// `ceil(log2 n)`; 0 for the undirected construction.
    pub ell: usize,
    /// Length of the forced prefix: `2n - 1 + 2(n - 1)(2ℓ + 4)` for the
    /// directed construction, `2n + 1` for the undirected one.
    pub tau: usize,
    /// Identifier of each source node over `{A, T}` (directed only).
    pub id_map: Vec<String>,
    pub witness: Option<TrailResult>,
}

impl ReductionArtifacts {
    pub fn graph(&self) -> &TimedGraph {
        self.instance.graph()
    }

    pub fn dbg(&self) -> Option<&DeBruijnGraph> {
        match &self.instance {
            ReducedInstance::Directed(d) => Some(d),
            ReducedInstance::Undirected(_) => None,
        }
    }

    /// Order of the generated de Bruijn graph, `4ℓ + 11`.
    pub fn order(&self) -> Option<usize> {
        self.dbg().map(DeBruijnGraph::k)
    }

    fn node_label(&self, kind: Label, a: usize, b: usize) -> String {
        let (ida, idb) = (&self.id_map[a], &self.id_map[b]);
        label(self.ell, kind, ida, idb)
    }

    /// `v'_1` for node `v`.
    pub fn node_first(&self, v: usize) -> String {
        self.node_label(Label::First, v, v)
    }

    /// `v'_2` for node `v`.
    pub fn node_second(&self, v: usize) -> String {
        self.node_label(Label::Second, v, v)
    }

    /// `(vu)'_1`.
    pub fn pair_first(&self, v: usize, u: usize) -> String {
        self.node_label(Label::First, v, u)
    }

    /// `(vu)'_2`.
    pub fn pair_second(&self, v: usize, u: usize) -> String {
        self.node_label(Label::Second, v, u)
    }

    /// Inner edge `(vu)'_1 -> (vu)'_2`; `v == u` gives the node's inner edge.
    pub fn inner_edge(&self, v: usize, u: usize) -> EdgeId {
        inner_edge_id(self.ell, &self.id_map[v], &self.id_map[u])
    }
}

#[derive(Clone, Copy)]
enum Label {
    First,
    Second,
}

fn a_run(i: usize) -> String {
    "A".repeat(i)
}

fn label(ell: usize, kind: Label, ida: &str, idb: &str) -> String {
    match kind {
        Label::First => format!("{}T{ida}T{}T{idb}T", a_run(ell + 3), a_run(ell + 3)),
        Label::Second => format!("{}T{ida}T{}T{idb}TA", a_run(ell + 2), a_run(ell + 3)),
    }
}

fn inner_edge_id(ell: usize, ida: &str, idb: &str) -> EdgeId {
    EdgeId::from_index(2 * label_index(&label(ell, Label::First, ida, idb)))
}

/// Node index of a label in the complete binary graph (`A = 0`, `T = 1`).
fn label_index(s: &str) -> usize {
    s.bytes()
        .fold(0, |acc, c| acc << 1 | usize::from(c == b'T'))
}

/// `A^(ℓ+2) T id(u) T`: letters spelled from `v'_2` to `(vu)'_1`, and from
/// `(vu)'_2` to `u'_1`.
fn connector(ell: usize, id: &str) -> String {
    format!("{}T{id}T", a_run(ell + 2))
}

fn ceil_log2(n: usize) -> usize {
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

pub fn binary_id(i: usize, ell: usize) -> String {
    (0..ell)
        .rev()
        .map(|b| if i >> b & 1 == 1 { 'T' } else { 'A' })
        .collect()
}

/// Directed Hamiltonian path to interval-constrained Eulerian trail.
pub fn reduce_dhp_to_diet(src: &SourceGraph, edge_budget: usize) -> Result<ReductionArtifacts> {
    let n = src.n();
    if n < 2 {
        return Err(Error::TooFewNodes(2));
    }
    let ell = ceil_log2(n);
    let k = 4 * ell + 11;
    let tau = 2 * n - 1 + 2 * (n - 1) * (2 * ell + 4);
    let alphabet = Alphabet::new(['A', 'T'])?;
    let dbg = complete_dbg(&alphabet, k, edge_budget)?;
    let m = dbg.base().m();

    let id_map: Vec<String> = (0..n).map(|i| binary_id(i, ell)).collect();
    let mut intervals = vec![Some(Interval::new(1, m)); m];
    for v in 0..n {
        for u in 0..n {
            let id = inner_edge_id(ell, &id_map[v], &id_map[u]);
            if v == u {
                intervals[id.index()] = Some(Interval::new(1, tau));
            } else if !src.has_edge(v, u) {
                intervals[id.index()] = Some(Interval::new(tau + 1, m));
            }
        }
    }
    let base = dbg.base().with_intervals(&intervals);
    Ok(ReductionArtifacts {
        source: src.clone(),
        instance: ReducedInstance::Directed(dbg.with_base(base)?),
        ell,
        tau,
        id_map,
        witness: None,
    })
}

/// Walks the complete binary graph from `start` spelling `letters`.
fn spell_path(dbg: &DeBruijnGraph, start: NodeIx, letters: &str) -> (Vec<EdgeId>, NodeIx) {
    let n = dbg.base().n();
    let mut cur = start;
    let mut edges = Vec::with_capacity(letters.len());
    for c in letters.bytes() {
        let x = 2 * cur + usize::from(c == b'T');
        edges.push(EdgeId::from_index(x));
        cur = x % n;
    }
    (edges, cur)
}

/// Letters of the forced prefix for `path`, read from `(v_1)'_1`.
fn prefix_letters(art: &ReductionArtifacts, path: &[usize]) -> String {
    let mut s = String::new();
    for i in 0..path.len() {
        s.push('A');
        if let Some(&next) = path.get(i + 1) {
            let c = connector(art.ell, &art.id_map[next]);
            s.push_str(&c);
            s.push('A');
            s.push_str(&c);
        }
    }
    s
}

/// Valid trail of the directed instance built from a Hamiltonian path.
pub fn dhp_witness(art: &ReductionArtifacts, hampath: &[usize]) -> Result<TrailResult> {
    let Some(dbg) = art.dbg() else {
        return Err(Error::NotDeBruijn("undirected reduction".into()));
    };
    if !art.source.is_hamiltonian_path(hampath) {
        return Err(Error::NotAHamiltonianPath);
    }
    let g = dbg.base();
    let start = label_index(&art.node_first(hampath[0]));
    let (mut edges, end) = spell_path(dbg, start, &prefix_letters(art, hampath));
    debug_assert_eq!(edges.len(), art.tau);
    let mut skip = vec![false; g.m()];
    for id in &edges {
        skip[id.index()] = true;
    }
    let rest = g.euler_trail_from(end, &skip).ok_or(Error::InvalidTrail)?;
    edges.extend(rest);
    g.validate_trail(&edges)
}

/// BFS from `from`: distance to `to`, number of shortest paths (capped at
/// 2) and the letters spelled by the first one found.
pub fn shortest_paths(dbg: &DeBruijnGraph, from: &str, to: &str) -> Option<(usize, u8, String)> {
    let g = dbg.base();
    let (s, z) = (g.node(from)?, g.node(to)?);
    let mut dist = vec![usize::MAX; g.n()];
    let mut ways = vec![0u8; g.n()];
    let mut parent: Vec<Option<EdgeId>> = vec![None; g.n()];
    dist[s] = 0;
    ways[s] = 1;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        if v == z {
            break;
        }
        for &id in g.adjacent(v) {
            let w = g.edge(id).head;
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                parent[w] = Some(id);
                queue.push_back(w);
            }
            if dist[w] == dist[v] + 1 {
                ways[w] = (ways[w] + ways[v]).min(2);
            }
        }
    }
    if dist[z] == usize::MAX {
        return None;
    }
    let mut letters = Vec::new();
    let mut cur = z;
    while let Some(id) = parent[cur] {
        letters.push(dbg.alphabet().letter(dbg.edge_letter(id)));
        cur = g.edge(id).tail;
    }
    letters.reverse();
    Some((dist[z], ways[z], letters.into_iter().collect()))
}

/// Structural checks on a directed instance; returns the first violation.
pub fn check_dhp_structure(art: &ReductionArtifacts) -> std::result::Result<(), String> {
    let dbg = art.dbg().ok_or("not a directed reduction")?;
    let g = dbg.base();
    let (n, ell) = (art.source.n(), art.ell);
    if dbg.k() != 4 * ell + 11 {
        return Err(format!("order {} is not 4ℓ+11", dbg.k()));
    }
    if g.n() != 1 << (dbg.k() - 1) || g.m() != 1 << dbg.k() {
        return Err("not the complete binary graph".into());
    }
    if g.n() > 2048 * n.pow(4) {
        return Err(format!("{} nodes exceed 2048·n^4", g.n()));
    }
    let mut indeg = vec![0u8; g.n()];
    let mut outdeg = vec![0u8; g.n()];
    for e in g.edges() {
        indeg[e.head] += 1;
        outdeg[e.tail] += 1;
    }
    if indeg.iter().chain(&outdeg).any(|&d| d != 2) {
        return Err("not 2-regular".into());
    }
    let ids: HashSet<&String> = art.id_map.iter().collect();
    if ids.len() != n || art.id_map.iter().any(|s| s.len() != ell) {
        return Err("identifiers are not unique strings of length ℓ".into());
    }
    if art.tau != 2 * n - 1 + 2 * (n - 1) * (2 * ell + 4) {
        return Err("τ mismatch".into());
    }
    let m = g.m();
    for v in 0..n {
        for u in 0..n {
            let want = if v == u {
                Interval::new(1, art.tau)
            } else if art.source.has_edge(v, u) {
                Interval::new(1, m)
            } else {
                Interval::new(art.tau + 1, m)
            };
            let e = g.edge(art.inner_edge(v, u));
            if e.interval != Some(want) || dbg.edge_letter(e.id) != 0 {
                return Err(format!("inner edge ({v},{u}) is wrong"));
            }
        }
    }
    let restricted = g
        .edges()
        .iter()
        .filter(|e| e.interval != Some(Interval::new(1, m)))
        .count();
    let expected = n + n * (n - 1) - art.source_non_loop_edges();
    if restricted != expected {
        return Err(format!(
            "{restricted} restricted edges, expected {expected}"
        ));
    }
    Ok(())
}

impl ReductionArtifacts {
    fn source_non_loop_edges(&self) -> usize {
        let mut pairs: Vec<(usize, usize)> = self
            .source
            .edges
            .iter()
            .copied()
            .filter(|(a, b)| a != b)
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs.len()
    }
}

fn uhp_token(src: &SourceGraph, v: usize, copy: u8) -> String {
    format!("{}'{copy}", src.nodes[v])
}

/// Token of the extra node of the undirected construction.
pub const EXTRA_NODE: &str = "x";

/// Cost of `{a, b}` at `t`, where each endpoint is `None` for the extra node
/// or `Some((source node, copy))`.
pub fn uhp_cost(
    src: &SourceGraph,
    a: Option<(usize, u8)>,
    b: Option<(usize, u8)>,
    t: usize,
) -> i64 {
    let (Some((v, _)), Some((w, _))) = (a, b) else {
        return 0;
    };
    let horizon = 2 * src.n() + 1;
    let cheap = if v == w {
        t.is_multiple_of(2) && t < horizon
    } else {
        t > horizon || (t % 2 == 1 && (3..horizon).contains(&t) && src.has_edge(v, w))
    };
    i64::from(!cheap)
}

/// Undirected Hamiltonian path to zero-cost Eulerian trail on `K_{2n+1}`.
pub fn reduce_uhp_to_uicet(src: &SourceGraph) -> Result<ReductionArtifacts> {
    let n = src.n();
    if n < 3 {
        return Err(Error::TooFewNodes(3));
    }
    let mut slots: Vec<Option<(usize, u8)>> = Vec::with_capacity(2 * n + 1);
    for v in 0..n {
        slots.push(Some((v, 1)));
        slots.push(Some((v, 2)));
    }
    slots.push(None);
    let token = |s: Option<(usize, u8)>| match s {
        Some((v, c)) => uhp_token(src, v, c),
        None => EXTRA_NODE.to_string(),
    };
    let mut b = GraphBuilder::new(Orientation::Undirected);
    for &s in &slots {
        b.add_node(&token(s))?;
    }
    let m = slots.len() * (slots.len() - 1) / 2;
    for i in 0..slots.len() {
        for j in i + 1..slots.len() {
            let costs = (1..=m)
                .map(|t| uhp_cost(src, slots[i], slots[j], t))
                .collect();
            b.push_edge(i, j, Some(Interval::new(1, m)), Some(costs));
        }
    }
    b.set_budget(Some(0));
    Ok(ReductionArtifacts {
        source: src.clone(),
        instance: ReducedInstance::Undirected(b.build()?),
        ell: 0,
        tau: 2 * n + 1,
        id_map: Vec::new(),
        witness: None,
    })
}

/// The edge between two nodes of the complete instance.
fn pair_edge(g: &TimedGraph, a: NodeIx, b: NodeIx) -> EdgeId {
    *g.adjacent(a)
        .iter()
        .find(|&&id| g.edge(id).other_end(a) == b)
        .expect("complete graph")
}

/// The closed walk `x v¹₁ v¹₂ … vⁿ₁ vⁿ₂ x` followed by an Euler tour of the
/// remaining edges from `x`.
pub fn uhp_witness(art: &ReductionArtifacts, hampath: &[usize]) -> Result<TrailResult> {
    let ReducedInstance::Undirected(g) = &art.instance else {
        return Err(Error::NotDeBruijn("directed reduction".into()));
    };
    if !art.source.is_hamiltonian_path(hampath) {
        return Err(Error::NotAHamiltonianPath);
    }
    let x = g.node(EXTRA_NODE).expect("extra node");
    let mut walk = vec![x];
    for &v in hampath {
        walk.push(g.node(&uhp_token(&art.source, v, 1)).unwrap());
        walk.push(g.node(&uhp_token(&art.source, v, 2)).unwrap());
    }
    walk.push(x);
    let mut edges: Vec<EdgeId> = walk.windows(2).map(|w| pair_edge(g, w[0], w[1])).collect();
    let mut skip = vec![false; g.m()];
    for id in &edges {
        skip[id.index()] = true;
    }
    let rest = g.euler_trail_from(x, &skip).ok_or(Error::InvalidTrail)?;
    edges.extend(rest);
    g.validate_trail(&edges)
}
