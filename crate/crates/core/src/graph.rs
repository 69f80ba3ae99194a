//! Timed multigraphs: edges carry a closed availability interval over the
//! time steps `1..=m` and, optionally, a cost for every step of that interval.
//!
//! A trail `e_1 .. e_m` respects the constraints when every `e_t` is available
//! at step `t`; its cost is the sum of the per-step costs (zero for edges in
//! pure interval form).

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// One-based edge identifier, assigned in insertion order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

impl EdgeId {
    pub fn from_index(index: usize) -> Self {
        EdgeId(index as u32 + 1)
    }

    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Index of a node inside its [`TimedGraph`].
pub type NodeIx = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Directed,
    Undirected,
}

/// Closed interval of time steps, `1 <= lo <= hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Self {
        debug_assert!(1 <= lo && lo <= hi);
        Interval { lo, hi }
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, t: usize) -> bool {
        self.lo <= t && t <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeRecord {
    pub id: EdgeId,
    pub tail: NodeIx,
    pub head: NodeIx,
    /// `None` is the empty interval: the edge is never available.
    pub interval: Option<Interval>,
    /// Cost at step `t` is `costs[t - lo]`.
    pub costs: Option<Vec<i64>>,
}

impl EdgeRecord {
    pub fn available_at(&self, t: usize) -> bool {
        self.interval.is_some_and(|iv| iv.contains(t))
    }

    /// Cost of traversing the edge at step `t`, `None` when unavailable.
    pub fn cost_at(&self, t: usize) -> Option<i64> {
        let iv = self.interval?;
        if !iv.contains(t) {
            return None;
        }
        Some(match &self.costs {
            Some(c) => c[t - iv.lo],
            None => 0,
        })
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    pub fn other_end(&self, v: NodeIx) -> NodeIx {
        if v == self.tail {
            self.head
        } else {
            self.tail
        }
    }
}

/// Maximum interval length over all edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Width(pub usize);

impl Width {
    /// Largest number of edges a YES-instance can have available at one step.
    pub fn density_bound(self) -> usize {
        2 * self.0 - 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityCheck {
    Ok,
    Violation(usize),
}

/// Result of checking a candidate trail against a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrailResult {
    pub edges: Vec<EdgeId>,
    /// Node sequence of the walk (`edges.len() + 1` entries); empty when the
    /// edges do not chain into a walk.
    pub walk: Vec<NodeIx>,
    /// `None` is INFEASIBLE.
    pub cost: Option<i64>,
    pub valid: bool,
}

impl TrailResult {
    pub fn invalid(edges: Vec<EdgeId>) -> Self {
        TrailResult {
            edges,
            walk: Vec::new(),
            cost: None,
            valid: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimedGraph {
    orientation: Orientation,
    nodes: Vec<String>,
    node_index: HashMap<String, NodeIx>,
    edges: Vec<EdgeRecord>,
    budget: Option<i64>,
    /// Outgoing (directed) or incident (undirected) edges per node; loops once.
    adjacency: Vec<Vec<EdgeId>>,
}

/// Incremental constructor for [`TimedGraph`]; intervals are checked against
/// the final edge count in [`GraphBuilder::build`].
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    orientation: Orientation,
    nodes: Vec<String>,
    node_index: HashMap<String, NodeIx>,
    edges: Vec<EdgeRecord>,
    budget: Option<i64>,
}

impl GraphBuilder {
    pub fn new(orientation: Orientation) -> Self {
        GraphBuilder {
            orientation,
            nodes: Vec::new(),
            node_index: HashMap::new(),
            edges: Vec::new(),
            budget: None,
        }
    }

    pub fn add_node(&mut self, token: &str) -> Result<NodeIx> {
        if self.node_index.contains_key(token) {
            return Err(Error::DuplicateNode(token.to_string()));
        }
        Ok(self.intern(token))
    }

    /// Returns the index of `token`, creating the node if needed.
    pub fn intern(&mut self, token: &str) -> NodeIx {
        if let Some(&ix) = self.node_index.get(token) {
            return ix;
        }
        let ix = self.nodes.len();
        self.nodes.push(token.to_string());
        self.node_index.insert(token.to_string(), ix);
        ix
    }

    pub fn node(&self, token: &str) -> Option<NodeIx> {
        self.node_index.get(token).copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Adds an edge between node indices; `costs`, when present, must have
    /// one entry per step of `interval`.
    pub fn push_edge(
        &mut self,
        tail: NodeIx,
        head: NodeIx,
        interval: Option<Interval>,
        costs: Option<Vec<i64>>,
    ) -> EdgeId {
        let id = EdgeId::from_index(self.edges.len());
        self.edges.push(EdgeRecord {
            id,
            tail,
            head,
            interval,
            costs,
        });
        id
    }

    pub fn edge(&mut self, tail: &str, head: &str, interval: Option<Interval>) -> EdgeId {
        let (t, h) = (self.intern(tail), self.intern(head));
        self.push_edge(t, h, interval, None)
    }

    pub fn cost_edge(&mut self, tail: &str, head: &str, lo: usize, costs: Vec<i64>) -> EdgeId {
        let (t, h) = (self.intern(tail), self.intern(head));
        let interval = if costs.is_empty() {
            None
        } else {
            Some(Interval::new(lo, lo + costs.len() - 1))
        };
        self.push_edge(t, h, interval, Some(costs))
    }

    pub fn set_interval(&mut self, id: EdgeId, interval: Option<Interval>) {
        self.edges[id.index()].interval = interval;
    }

    pub fn set_budget(&mut self, budget: Option<i64>) {
        self.budget = budget;
    }

    pub fn build(self) -> Result<TimedGraph> {
        let m = self.edges.len();
        let n = self.nodes.len();
        for e in &self.edges {
            if e.tail >= n || e.head >= n {
                return Err(Error::MalformedEdge {
                    edge: e.id,
                    reason: "endpoint is not a node".into(),
                });
            }
            if let Some(iv) = e.interval {
                if iv.lo < 1 || iv.lo > iv.hi || iv.hi > m {
                    return Err(Error::IntervalOutOfRange {
                        lo: iv.lo,
                        hi: iv.hi,
                        m,
                    });
                }
            }
            if let Some(c) = &e.costs {
                let expect = e.interval.map_or(0, |iv| iv.len());
                if c.len() != expect {
                    return Err(Error::MalformedEdge {
                        edge: e.id,
                        reason: format!("{} costs for an interval of length {}", c.len(), expect),
                    });
                }
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for e in &self.edges {
            adjacency[e.tail].push(e.id);
            if self.orientation == Orientation::Undirected && !e.is_loop() {
                adjacency[e.head].push(e.id);
            }
        }
        Ok(TimedGraph {
            orientation: self.orientation,
            nodes: self.nodes,
            node_index: self.node_index,
            edges: self.edges,
            budget: self.budget,
            adjacency,
        })
    }
}

impl TimedGraph {
    pub fn builder(orientation: Orientation) -> GraphBuilder {
        GraphBuilder::new(orientation)
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn is_directed(&self) -> bool {
        self.orientation == Orientation::Directed
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_token(&self, v: NodeIx) -> &str {
        &self.nodes[v]
    }

    pub fn node(&self, token: &str) -> Option<NodeIx> {
        self.node_index.get(token).copied()
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &EdgeRecord {
        &self.edges[id.index()]
    }

    pub fn get_edge(&self, id: EdgeId) -> Option<&EdgeRecord> {
        if id.0 == 0 {
            return None;
        }
        self.edges.get(id.index())
    }

    pub fn budget(&self) -> Option<i64> {
        self.budget
    }

    /// True when at least one edge carries an explicit cost vector.
    pub fn has_costs(&self) -> bool {
        self.edges.iter().any(|e| e.costs.is_some())
    }

    /// Edges leaving `v` (directed) or incident to `v` (undirected).
    pub fn adjacent(&self, v: NodeIx) -> &[EdgeId] {
        &self.adjacency[v]
    }

    /// Node reached from `v` over edge `e`, if the edge can be taken from `v`.
    pub fn step(&self, v: NodeIx, e: &EdgeRecord) -> Option<NodeIx> {
        match self.orientation {
            Orientation::Directed => (e.tail == v).then_some(e.head),
            Orientation::Undirected => {
                if e.tail == v {
                    Some(e.head)
                } else if e.head == v {
                    Some(e.tail)
                } else {
                    None
                }
            }
        }
    }

    /// True when two edges have the same endpoints (respecting orientation).
    pub fn parallel(&self, a: &EdgeRecord, b: &EdgeRecord) -> bool {
        match self.orientation {
            Orientation::Directed => a.tail == b.tail && a.head == b.head,
            Orientation::Undirected => {
                (a.tail == b.tail && a.head == b.head) || (a.tail == b.head && a.head == b.tail)
            }
        }
    }

    pub fn is_multigraph(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges.iter().any(|e| {
            let key = match self.orientation {
                Orientation::Directed => (e.tail, e.head),
                Orientation::Undirected => (e.tail.min(e.head), e.tail.max(e.head)),
            };
            !seen.insert(key)
        })
    }

    pub fn interval_width(&self) -> Result<Width> {
        self.edges
            .iter()
            .filter_map(|e| e.interval.map(|iv| iv.len()))
            .max()
            .map(Width)
            .ok_or(Error::AllEdgesEmptyInterval)
    }

    /// `E(t)`: ids of the edges available at step `t`, ascending.
    pub fn available_edges(&self, t: usize) -> Result<Vec<EdgeId>> {
        let m = self.m();
        if t < 1 || t > m {
            return Err(Error::TimeOutOfRange { t, m });
        }
        Ok(self
            .edges
            .iter()
            .filter(|e| e.available_at(t))
            .map(|e| e.id)
            .collect())
    }

    /// `E(t)` for every `t` in `0..=m`; entry 0 is empty.
    pub fn availability(&self) -> Vec<Vec<EdgeId>> {
        let m = self.m();
        let mut table = vec![Vec::new(); m + 1];
        for e in &self.edges {
            if let Some(iv) = e.interval {
                for slot in &mut table[iv.lo..=iv.hi] {
                    slot.push(e.id);
                }
            }
        }
        table
    }

    /// Finds the first step with more than `2w - 1` available edges.
    pub fn precheck_density(&self, w: Width) -> DensityCheck {
        let m = self.m();
        let bound = w.density_bound();
        let mut delta = vec![0i64; m + 2];
        for iv in self.edges.iter().filter_map(|e| e.interval) {
            delta[iv.lo] += 1;
            delta[iv.hi + 1] -= 1;
        }
        let mut running = 0i64;
        for (t, d) in delta.iter().enumerate().take(m + 1).skip(1) {
            running += d;
            if running as usize > bound {
                return DensityCheck::Violation(t);
            }
        }
        DensityCheck::Ok
    }

    /// Same as [`precheck_density`](Self::precheck_density) with the count
    /// attached, as an error.
    pub fn require_density(&self) -> Result<Width> {
        let w = self.interval_width()?;
        if let DensityCheck::Violation(t) = self.precheck_density(w) {
            let count = self.edges.iter().filter(|e| e.available_at(t)).count();
            return Err(Error::DensityViolation {
                t,
                count,
                bound: w.density_bound(),
            });
        }
        Ok(w)
    }

    /// Checks that `trail` is a constraint-respecting Eulerian trail.
    pub fn validate_trail(&self, trail: &[EdgeId]) -> Result<TrailResult> {
        for &id in trail {
            if self.get_edge(id).is_none() {
                return Err(Error::UnknownEdgeId(id.0));
            }
        }
        let m = self.m();
        let mut seen = vec![false; m];
        if trail.len() != m
            || trail
                .iter()
                .any(|id| std::mem::replace(&mut seen[id.index()], true))
        {
            return Ok(TrailResult::invalid(trail.to_vec()));
        }
        let Some(walk) = self.chain(trail) else {
            return Ok(TrailResult::invalid(trail.to_vec()));
        };
        let mut cost = 0i64;
        for (pos, &id) in trail.iter().enumerate() {
            match self.edge(id).cost_at(pos + 1) {
                Some(c) => cost = cost.checked_add(c).ok_or(Error::CostOverflow)?,
                None => return Ok(TrailResult::invalid(trail.to_vec())),
            }
        }
        Ok(TrailResult {
            edges: trail.to_vec(),
            walk,
            cost: Some(cost),
            valid: true,
        })
    }

    /// Node sequence of the walk along `trail`, if its edges chain.
    pub fn chain(&self, trail: &[EdgeId]) -> Option<Vec<NodeIx>> {
        let Some(first) = trail.first() else {
            return Some(Vec::new());
        };
        let first = self.edge(*first);
        let starts: &[NodeIx] = match self.orientation {
            Orientation::Directed => &[first.tail],
            Orientation::Undirected => &[first.tail, first.head],
        };
        'start: for &s in starts {
            let mut walk = Vec::with_capacity(trail.len() + 1);
            walk.push(s);
            let mut cur = s;
            for &id in trail {
                match self.step(cur, self.edge(id)) {
                    Some(next) => {
                        walk.push(next);
                        cur = next;
                    }
                    None => continue 'start,
                }
            }
            return Some(walk);
        }
        None
    }

    /// Cost form of an interval instance: zero cost on every available step.
    pub fn lift_interval_to_cost(&self) -> TimedGraph {
        let mut g = self.clone();
        for e in &mut g.edges {
            if e.costs.is_none() {
                e.costs = Some(vec![0; e.interval.map_or(0, |iv| iv.len())]);
            }
        }
        g
    }

    /// Classical Euler prescreen on the underlying multigraph, ignoring time.
    pub fn euler_feasible(&self) -> bool {
        let n = self.n();
        if self.m() == 0 {
            return true;
        }
        match self.orientation {
            Orientation::Directed => {
                let mut balance = vec![0i64; n];
                for e in &self.edges {
                    balance[e.tail] += 1;
                    balance[e.head] -= 1;
                }
                let plus = balance.iter().filter(|&&b| b == 1).count();
                let minus = balance.iter().filter(|&&b| b == -1).count();
                let other = balance.iter().filter(|&&b| b.abs() > 1).count();
                if other > 0 || plus > 1 || minus > 1 || plus != minus {
                    return false;
                }
            }
            Orientation::Undirected => {
                let mut degree = vec![0usize; n];
                for e in &self.edges {
                    degree[e.tail] += 1;
                    degree[e.head] += 1;
                }
                let odd = degree.iter().filter(|&&d| d % 2 == 1).count();
                if odd != 0 && odd != 2 {
                    return false;
                }
            }
        }
        self.edges_connected()
    }

    /// All edges lie in a single weakly connected component.
    fn edges_connected(&self) -> bool {
        let n = self.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.tail), find(&mut parent, e.head));
            if a != b {
                parent[a] = b;
            }
        }
        let root = find(&mut parent, self.edges[0].tail);
        self.edges.iter().all(|e| find(&mut parent, e.tail) == root)
    }

    /// Hierholzer's algorithm from `start`, ignoring time and skipping edges
    /// flagged in `skip` (by index). Neighbors are taken in id order.
    /// `None` when the remaining edges admit no trail from `start`.
    pub fn euler_trail_from(&self, start: NodeIx, skip: &[bool]) -> Option<Vec<EdgeId>> {
        let mut used = skip.to_vec();
        used.resize(self.m(), false);
        let wanted = used.iter().filter(|&&u| !u).count();
        let mut next = vec![0usize; self.n()];
        let mut stack: Vec<(NodeIx, Option<EdgeId>)> = vec![(start, None)];
        let mut circuit = Vec::with_capacity(wanted);
        while let Some(&(v, entered)) = stack.last() {
            let adj = &self.adjacency[v];
            while next[v] < adj.len() && used[adj[next[v]].index()] {
                next[v] += 1;
            }
            if let Some(&id) = adj.get(next[v]) {
                used[id.index()] = true;
                stack.push((self.edge(id).other_end(v), Some(id)));
            } else {
                stack.pop();
                circuit.extend(entered);
            }
        }
        circuit.reverse();
        (circuit.len() == wanted).then_some(circuit)
    }

    /// Copy with a different budget.
    pub fn with_budget(mut self, budget: Option<i64>) -> Self {
        self.budget = budget;
        self
    }

    /// Copy with edge intervals replaced; costs are dropped for changed edges.
    pub fn with_intervals(&self, intervals: &[Option<Interval>]) -> TimedGraph {
        let mut g = self.clone();
        for (e, iv) in g.edges.iter_mut().zip(intervals) {
            if e.interval != *iv {
                e.interval = *iv;
                e.costs = None;
            }
        }
        g
    }

    /// Rebuilds the graph with edges listed in `order` (old ids), renumbered.
    pub fn permute_edges(&self, order: &[EdgeId]) -> TimedGraph {
        let mut b = GraphBuilder::new(self.orientation);
        for v in &self.nodes {
            b.intern(v);
        }
        for &id in order {
            let e = self.edge(id);
            b.push_edge(e.tail, e.head, e.interval, e.costs.clone());
        }
        b.budget = self.budget;
        b.build().expect("permutation of a valid graph")
    }
}
