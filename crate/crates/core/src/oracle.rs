//! Exhaustive reference solver.
//!
//! Plain backtracking over positions `1..=m`, independent of the state-graph
//! engines. Used to cross-check them on small instances.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, NodeIx, TimedGraph, TrailResult};

pub const EDGE_DISTINCT_CAP: usize = 14;
pub const NODE_DISTINCT_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Trails differ when their edge-id sequences (or, undirected, their
    /// start nodes) differ.
    EdgeDistinct,
    /// Trails differ when their node sequences differ; parallel copies are
    /// assigned earliest-deadline-first.
    NodeDistinct,
}

impl Mode {
    pub fn cap(self) -> usize {
        match self {
            Mode::EdgeDistinct => EDGE_DISTINCT_CAP,
            Mode::NodeDistinct => NODE_DISTINCT_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub mode: Mode,
    pub feasible: bool,
    pub min_cost: Option<i64>,
    /// Number of min-cost trails.
    pub count: BigUint,
    /// Min-cost trails sorted by first edge, start token, remaining edges.
    pub trails: Option<Vec<TrailResult>>,
}

struct Search<'g> {
    g: &'g TimedGraph,
    mode: Mode,
    collect: bool,
    expiring: Vec<Vec<EdgeId>>,
    used: Vec<bool>,
    edges: Vec<EdgeId>,
    walk: Vec<NodeIx>,
    best: Option<i64>,
    count: BigUint,
    trails: Vec<TrailResult>,
}

impl<'g> Search<'g> {
    fn new(g: &'g TimedGraph, mode: Mode, collect: bool) -> Self {
        let mut expiring = vec![Vec::new(); g.m() + 1];
        for e in g.edges() {
            if let Some(iv) = e.interval {
                expiring[iv.hi].push(e.id);
            }
        }
        Search {
            g,
            mode,
            collect,
            expiring,
            used: vec![false; g.m()],
            edges: Vec::new(),
            walk: Vec::new(),
            best: None,
            count: BigUint::zero(),
            trails: Vec::new(),
        }
    }

    /// Candidate moves at step `t` from `u`: `(edge, next node)`.
    fn moves(&self, u: NodeIx, t: usize) -> Vec<(EdgeId, NodeIx)> {
        let mut out: Vec<(EdgeId, NodeIx)> = self
            .g
            .adjacent(u)
            .iter()
            .copied()
            .filter(|id| !self.used[id.index()] && self.g.edge(*id).available_at(t))
            .map(|id| (id, self.g.edge(id).other_end(u)))
            .collect();
        if self.mode == Mode::NodeDistinct {
            // keep the earliest-deadline copy per next node
            out.sort_by_key(|&(id, v)| {
                let iv = self.g.edge(id).interval.unwrap();
                (v, iv.hi, iv.lo, id)
            });
            out.dedup_by_key(|&mut (_, v)| v);
        }
        out.sort_by_key(|&(id, _)| id);
        out
    }

    fn run(&mut self, cost: i64) -> Result<()> {
        let t = self.edges.len();
        if t == self.g.m() {
            self.record(cost);
            return Ok(());
        }
        let u = *self.walk.last().unwrap();
        for (id, v) in self.moves(u, t + 1) {
            let c = self.g.edge(id).cost_at(t + 1).unwrap();
            let next = cost.checked_add(c).ok_or(Error::CostOverflow)?;
            self.used[id.index()] = true;
            if self.expiring[t + 1].iter().all(|d| self.used[d.index()]) {
                self.edges.push(id);
                self.walk.push(v);
                self.run(next)?;
                self.edges.pop();
                self.walk.pop();
            }
            self.used[id.index()] = false;
        }
        Ok(())
    }

    fn record(&mut self, cost: i64) {
        match self.best {
            Some(b) if cost > b => return,
            Some(b) if cost == b => self.count += 1u32,
            _ => {
                self.best = Some(cost);
                self.count = BigUint::one();
                self.trails.clear();
            }
        }
        if self.collect {
            self.trails.push(TrailResult {
                edges: self.edges.clone(),
                walk: self.walk.clone(),
                cost: Some(cost),
                valid: true,
            });
        }
    }
}

fn check_cap(g: &TimedGraph, cap: usize) -> Result<()> {
    if g.m() > cap {
        return Err(Error::CapExceeded { m: g.m(), cap });
    }
    Ok(())
}

fn sorted_nodes(g: &TimedGraph) -> Vec<NodeIx> {
    let mut nodes: Vec<NodeIx> = (0..g.n()).collect();
    nodes.sort_by(|&a, &b| g.node_token(a).cmp(g.node_token(b)));
    nodes
}

/// Exhaustive min-cost search with the mode's default cap.
pub fn brute_solve(g: &TimedGraph, mode: Mode, collect: bool) -> Result<OracleReport> {
    brute_solve_capped(g, mode, collect, mode.cap())
}

pub fn brute_solve_capped(
    g: &TimedGraph,
    mode: Mode,
    collect: bool,
    cap: usize,
) -> Result<OracleReport> {
    check_cap(g, cap)?;
    if g.m() == 0 {
        return Ok(OracleReport {
            mode,
            feasible: true,
            min_cost: Some(0),
            count: BigUint::one(),
            trails: collect.then(|| {
                vec![TrailResult {
                    edges: Vec::new(),
                    walk: Vec::new(),
                    cost: Some(0),
                    valid: true,
                }]
            }),
        });
    }
    let mut s = Search::new(g, mode, collect);
    for v in sorted_nodes(g) {
        s.walk.push(v);
        s.run(0)?;
        s.walk.pop();
    }
    let mut trails = s.trails;
    trails.sort_by(|a, b| {
        (a.edges[0], g.node_token(a.walk[0]), &a.edges[1..]).cmp(&(
            b.edges[0],
            g.node_token(b.walk[0]),
            &b.edges[1..],
        ))
    });
    Ok(OracleReport {
        mode,
        feasible: s.best.is_some(),
        min_cost: s.best,
        count: s.count,
        trails: collect.then_some(trails),
    })
}

/// Projections `(endpoint, prefix ∩ E(t))` of all length-`t` prefixes that
/// respect availability and leave no edge unused past its deadline.
pub fn brute_partial_states(g: &TimedGraph, t: usize) -> Result<BTreeSet<(NodeIx, Vec<EdgeId>)>> {
    let avail: Vec<EdgeId> = g
        .edges()
        .iter()
        .filter(|e| e.available_at(t))
        .map(|e| e.id)
        .collect();
    Ok(brute_partial_prefixes(g, t, Mode::EdgeDistinct)?
        .into_iter()
        .map(|(walk, prefix)| {
            let mut s: Vec<EdgeId> = prefix.into_iter().filter(|id| avail.contains(id)).collect();
            s.sort_unstable();
            (*walk.last().unwrap(), s)
        })
        .collect())
}

/// All length-`t` prefixes as `(walk, edges)`, under the same rules as
/// [`brute_solve`]. At `t = 0` every node is a prefix.
pub fn brute_partial_prefixes(
    g: &TimedGraph,
    t: usize,
    mode: Mode,
) -> Result<Vec<(Vec<NodeIx>, Vec<EdgeId>)>> {
    check_cap(g, mode.cap())?;
    let mut s = Search::new(g, mode, false);
    let mut out = Vec::new();
    fn go(s: &mut Search<'_>, t: usize, out: &mut Vec<(Vec<NodeIx>, Vec<EdgeId>)>) {
        let placed = s.edges.len();
        if placed == t {
            out.push((s.walk.clone(), s.edges.clone()));
            return;
        }
        let u = *s.walk.last().unwrap();
        for (id, v) in s.moves(u, placed + 1) {
            s.used[id.index()] = true;
            if s.expiring[placed + 1].iter().all(|d| s.used[d.index()]) {
                s.edges.push(id);
                s.walk.push(v);
                go(s, t, out);
                s.edges.pop();
                s.walk.pop();
            }
            s.used[id.index()] = false;
        }
    }
    for v in sorted_nodes(g) {
        s.walk.push(v);
        go(&mut s, t.min(g.m()), &mut out);
        s.walk.pop();
    }
    Ok(out)
}

/// Node-distinct count without a copy policy: enumerates node sequences and
/// accepts one when every group of parallel edges admits a matching of its
/// positions to copies available there. Ignores costs.
pub fn node_distinct_exact(g: &TimedGraph) -> Result<BigUint> {
    check_cap(g, EDGE_DISTINCT_CAP)?;
    if g.m() == 0 {
        return Ok(BigUint::one());
    }
    let mut groups: Vec<((NodeIx, NodeIx), Vec<EdgeId>)> = Vec::new();
    for e in g.edges() {
        let key = group_key(g, e.tail, e.head);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, ids)) => ids.push(e.id),
            None => groups.push((key, vec![e.id])),
        }
    }
    let mut positions: Vec<Vec<usize>> = vec![Vec::new(); groups.len()];
    let mut walk: Vec<NodeIx> = Vec::new();
    let mut count = BigUint::zero();

    fn go(
        g: &TimedGraph,
        groups: &[((NodeIx, NodeIx), Vec<EdgeId>)],
        positions: &mut Vec<Vec<usize>>,
        walk: &mut Vec<NodeIx>,
        count: &mut BigUint,
    ) {
        let t = walk.len() - 1;
        if t == g.m() {
            *count += 1u32;
            return;
        }
        let u = *walk.last().unwrap();
        let mut nexts: Vec<NodeIx> = g
            .adjacent(u)
            .iter()
            .map(|&id| g.edge(id).other_end(u))
            .collect();
        nexts.sort_unstable();
        nexts.dedup();
        for v in nexts {
            let gi = groups
                .iter()
                .position(|(k, _)| *k == group_key(g, u, v))
                .unwrap();
            let ids = &groups[gi].1;
            if positions[gi].len() == ids.len() {
                continue;
            }
            positions[gi].push(t + 1);
            if has_matching(g, ids, &positions[gi]) {
                walk.push(v);
                go(g, groups, positions, walk, count);
                walk.pop();
            }
            positions[gi].pop();
        }
    }

    for v in sorted_nodes(g) {
        walk.push(v);
        go(g, &groups, &mut positions, &mut walk, &mut count);
        walk.pop();
    }
    Ok(count)
}

fn group_key(g: &TimedGraph, a: NodeIx, b: NodeIx) -> (NodeIx, NodeIx) {
    if g.is_directed() || a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Whether every position can get a distinct copy available at it.
fn has_matching(g: &TimedGraph, copies: &[EdgeId], positions: &[usize]) -> bool {
    let mut owner: Vec<Option<usize>> = vec![None; copies.len()];
    fn augment(
        g: &TimedGraph,
        copies: &[EdgeId],
        positions: &[usize],
        p: usize,
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for (c, id) in copies.iter().enumerate() {
            if seen[c] || !g.edge(*id).available_at(positions[p]) {
                continue;
            }
            seen[c] = true;
            let free = match owner[c] {
                None => true,
                Some(q) => augment(g, copies, positions, q, seen, owner),
            };
            if free {
                owner[c] = Some(p);
                return true;
            }
        }
        false
    }
    (0..positions.len()).all(|p| {
        let mut seen = vec![false; copies.len()];
        augment(g, copies, positions, p, &mut seen, &mut owner)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Interval, Orientation};

    fn iv(lo: usize, hi: usize) -> Option<Interval> {
        Some(Interval::new(lo, hi))
    }

    #[test]
    fn forced_path() {
        let mut b = TimedGraph::builder(Orientation::Directed);
        b.edge("u", "v", iv(1, 1));
        b.edge("v", "w", iv(2, 2));
        let g = b.build().unwrap();
        let r = brute_solve(&g, Mode::EdgeDistinct, true).unwrap();
        assert!(r.feasible);
        assert_eq!(r.count, BigUint::one());
        assert_eq!(r.trails.unwrap()[0].edges, vec![EdgeId(1), EdgeId(2)]);

        let s1 = brute_partial_states(&g, 1).unwrap();
        assert_eq!(
            s1.into_iter().collect::<Vec<_>>(),
            vec![(1, vec![EdgeId(1)])]
        );
        let s0 = brute_partial_states(&g, 0).unwrap();
        assert_eq!(s0.len(), 3);
    }

    #[test]
    fn three_cycle_modes_agree() {
        let mut b = TimedGraph::builder(Orientation::Directed);
        b.edge("a", "b", iv(1, 3));
        b.edge("b", "c", iv(1, 3));
        b.edge("c", "a", iv(1, 3));
        let g = b.build().unwrap();
        let e = brute_solve(&g, Mode::EdgeDistinct, false).unwrap();
        let n = brute_solve(&g, Mode::NodeDistinct, false).unwrap();
        assert_eq!(e.count, BigUint::from(3u32));
        assert_eq!(n.count, BigUint::from(3u32));
        assert_eq!(node_distinct_exact(&g).unwrap(), BigUint::from(3u32));
    }

    #[test]
    fn parallel_copies_collapse() {
        let mut b = TimedGraph::builder(Orientation::Directed);
        b.edge("a", "b", iv(1, 3));
        b.edge("b", "a", iv(1, 3));
        b.edge("a", "b", iv(1, 3));
        let g = b.build().unwrap();
        let e = brute_solve(&g, Mode::EdgeDistinct, false).unwrap();
        let n = brute_solve(&g, Mode::NodeDistinct, false).unwrap();
        assert_eq!(e.count, BigUint::from(2u32));
        assert_eq!(n.count, BigUint::one());
    }

    #[test]
    fn cap_is_enforced() {
        let mut b = TimedGraph::builder(Orientation::Directed);
        for _ in 0..15 {
            b.edge("a", "a", iv(1, 15));
        }
        let g = b.build().unwrap();
        assert_eq!(
            brute_solve(&g, Mode::EdgeDistinct, false).unwrap_err(),
            Error::CapExceeded { m: 15, cap: 14 }
        );
        assert_eq!(
            brute_solve(&g, Mode::NodeDistinct, false).unwrap().count,
            BigUint::one()
        );
    }
}
