//! Width-parameterized engine for arbitrary timed multigraphs.
//!
//! A state `(t, v, S)` records the endpoint `v` of a partial walk of length
//! `t` and the set `S` of already used edges among `E(t)`. Edges that left
//! `E(t)` can never be taken again, and edges not yet in `E(t)` were never
//! available before, so `(v, S)` is all the future depends on. `S` is a
//! bitmask over the position of each edge in the sorted list `E(t)`; with
//! the density precheck passed `|E(t)| <= 2w - 1`.

use std::collections::hash_map::Entry;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::dag::{Optimum, StateDag, Transition};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, NodeIx, TimedGraph, TrailResult, Width};

/// Bit set over the local indices of one layer's `E(t)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct EdgeMask(SmallVec<[u64; 2]>);

impl EdgeMask {
    fn with_bits(bits: usize) -> Self {
        EdgeMask(SmallVec::from_elem(0, bits.div_ceil(64).max(1)))
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn intersection_len(&self, other: &EdgeMask) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64)
                .filter(move |b| w >> b & 1 == 1)
                .map(move |b| wi * 64 + b)
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct GeneralOptions {
    /// Abort with `SolverBudgetExceeded` once this many states exist.
    pub max_states: Option<usize>,
}

/// Key of a state within its layer.
pub type GeneralKey = (NodeIx, EdgeMask);

/// Per-instance tables shared by the streaming and retained builds.
pub struct GeneralEngine<'g> {
    g: &'g TimedGraph,
    width: Width,
    avail: Vec<Vec<EdgeId>>,
    /// `remap[t][i]`: position in `E(t)` of the `i`-th edge of `E(t-1)`.
    remap: Vec<Vec<Option<usize>>>,
    /// Positions in `E(t)` of edges still available at `t + 1`.
    alive_next: Vec<EdgeMask>,
    /// Number of edges whose deadline is at or before `t`.
    due: Vec<usize>,
    opts: GeneralOptions,
}

/// The retained layered graph together with the state keys per layer.
pub struct GeneralStateGraph {
    pub dag: StateDag,
    pub keys: Vec<Vec<GeneralKey>>,
    pub width: Width,
}

impl<'g> GeneralEngine<'g> {
    pub fn new(g: &'g TimedGraph, opts: GeneralOptions) -> Result<Self> {
        let m = g.m();
        let width = if m == 0 {
            Width(1)
        } else {
            g.require_density()?
        };
        let avail = g.availability();
        let mut remap = vec![Vec::new(); m + 1];
        for t in 1..=m {
            remap[t] = avail[t - 1]
                .iter()
                .map(|id| avail[t].binary_search(id).ok())
                .collect();
        }
        let mut alive_next = Vec::with_capacity(m + 1);
        for (t, layer) in avail.iter().enumerate() {
            let mut mask = EdgeMask::with_bits(layer.len());
            for (i, id) in layer.iter().enumerate() {
                if g.edge(*id).interval.is_some_and(|iv| iv.hi > t) {
                    mask.insert(i);
                }
            }
            alive_next.push(mask);
        }
        let mut due = vec![0usize; m + 1];
        for e in g.edges() {
            if let Some(iv) = e.interval {
                due[iv.hi] += 1;
            }
        }
        for t in 1..=m {
            due[t] += due[t - 1];
        }
        Ok(GeneralEngine {
            g,
            width,
            avail,
            remap,
            alive_next,
            due,
            opts,
        })
    }

    pub fn width(&self) -> Width {
        self.width
    }

    fn trivially_infeasible(&self) -> bool {
        self.g.edges().iter().any(|e| e.interval.is_none())
    }

    /// Layer-0 endpoints: nodes with an edge available at step 1, by token.
    fn starts(&self) -> Vec<NodeIx> {
        let mut starts: Vec<NodeIx> = (0..self.g.n())
            .filter(|&v| {
                self.g
                    .adjacent(v)
                    .iter()
                    .any(|&id| self.g.edge(id).available_at(1))
            })
            .collect();
        starts.sort_by(|&a, &b| self.g.node_token(a).cmp(self.g.node_token(b)));
        starts
    }

    /// Successors of `(t - 1, u, mask)`: `(edge, v, mask', cost)` placed at `t`.
    fn expand(
        &self,
        t: usize,
        u: NodeIx,
        mask: &EdgeMask,
        out: &mut Vec<(EdgeId, NodeIx, EdgeMask, i64)>,
    ) {
        out.clear();
        let layer = &self.avail[t];
        let mut carried = EdgeMask::with_bits(layer.len());
        for i in mask.iter() {
            if let Some(j) = self.remap[t][i] {
                carried.insert(j);
            }
        }
        for &id in self.g.adjacent(u) {
            let e = self.g.edge(id);
            let Some(cost) = e.cost_at(t) else { continue };
            let Ok(local) = layer.binary_search(&id) else {
                continue;
            };
            if carried.contains(local) {
                continue;
            }
            let mut next = carried.clone();
            next.insert(local);
            // every edge due by t must already be placed
            if t - next.intersection_len(&self.alive_next[t]) != self.due[t] {
                continue;
            }
            let v = e.other_end(u);
            if self.g.is_directed() {
                debug_assert_eq!(e.tail, u);
            }
            out.push((id, v, next, cost));
        }
    }

    fn check_budget(&self, states: usize) -> Result<()> {
        match self.opts.max_states {
            Some(cap) if states > cap => Err(Error::SolverBudgetExceeded(cap)),
            _ => Ok(()),
        }
    }

    /// Forward DP keeping only two layers: minimum cost and number of
    /// min-cost trails.
    pub fn count_min_cost(&self) -> Result<Optimum> {
        let m = self.g.m();
        if m == 0 {
            return Ok(Optimum {
                cost: Some(0),
                count: BigUint::one(),
            });
        }
        if self.trivially_infeasible() {
            return Ok(Optimum::infeasible());
        }
        let mut layer: FxHashMap<GeneralKey, (i64, BigUint)> = FxHashMap::default();
        for v in self.starts() {
            layer.insert((v, EdgeMask::with_bits(0)), (0, BigUint::one()));
        }
        let mut states = layer.len();
        let mut buf = Vec::new();
        for t in 1..=m {
            let mut next: FxHashMap<GeneralKey, (i64, BigUint)> = FxHashMap::default();
            for ((u, mask), (cost, count)) in &layer {
                self.expand(t, *u, mask, &mut buf);
                for (_, v, nmask, c) in buf.drain(..) {
                    let total = cost.checked_add(c).ok_or(Error::CostOverflow)?;
                    match next.entry((v, nmask)) {
                        Entry::Vacant(slot) => {
                            slot.insert((total, count.clone()));
                        }
                        Entry::Occupied(mut slot) => {
                            let rec = slot.get_mut();
                            if total < rec.0 {
                                *rec = (total, count.clone());
                            } else if total == rec.0 {
                                rec.1 += count;
                            }
                        }
                    }
                }
            }
            states += next.len();
            self.check_budget(states)?;
            if next.is_empty() {
                return Ok(Optimum::infeasible());
            }
            layer = next;
        }
        let mut best: Option<i64> = None;
        let mut count = BigUint::zero();
        for (cost, c) in layer.values() {
            match best {
                Some(b) if *cost > b => {}
                Some(b) if *cost == b => count += c,
                _ => {
                    best = Some(*cost);
                    count = c.clone();
                }
            }
        }
        Ok(Optimum { cost: best, count })
    }

    /// Builds every state reachable from `s`, retaining all layers.
    pub fn build_state_graph(&self) -> Result<GeneralStateGraph> {
        let m = self.g.m();
        let mut dag = StateDag::with_layers(m);
        let mut keys: Vec<Vec<GeneralKey>> = vec![Vec::new(); m + 1];
        if m == 0 || self.trivially_infeasible() {
            return Ok(GeneralStateGraph {
                dag,
                keys,
                width: self.width,
            });
        }
        for v in self.starts() {
            dag.push_state(0, v);
            keys[0].push((v, EdgeMask::with_bits(0)));
        }
        let mut states = keys[0].len();
        let mut buf = Vec::new();
        for t in 1..=m {
            let mut index: FxHashMap<GeneralKey, u32> = FxHashMap::default();
            let (prev, rest) = keys.split_at_mut(t);
            let cur = &mut rest[0];
            for (i, (u, mask)) in prev[t - 1].iter().enumerate() {
                self.expand(t, *u, mask, &mut buf);
                for (id, v, nmask, cost) in buf.drain(..) {
                    let target = match index.entry((v, nmask)) {
                        Entry::Occupied(slot) => *slot.get(),
                        Entry::Vacant(slot) => {
                            let ix = dag.push_state(t, v);
                            cur.push(slot.key().clone());
                            slot.insert(ix);
                            ix
                        }
                    };
                    dag.push_transition(
                        t - 1,
                        i as u32,
                        Transition {
                            target,
                            edge: id,
                            cost,
                        },
                    );
                }
            }
            states += cur.len();
            self.check_budget(states)?;
        }
        debug_assert!(self.check_invariants(&keys));
        Ok(GeneralStateGraph {
            dag,
            keys,
            width: self.width,
        })
    }

    fn check_invariants(&self, keys: &[Vec<GeneralKey>]) -> bool {
        let expired = |t: usize| {
            self.g
                .edges()
                .iter()
                .filter(|e| e.interval.is_some_and(|iv| iv.hi < t))
                .count()
        };
        keys.iter().enumerate().skip(1).all(|(t, layer)| {
            let a = expired(t);
            layer.iter().all(|(v, mask)| {
                mask.len() == t - a
                    && mask.iter().any(|i| {
                        let e = self.g.edge(self.avail[t][i]);
                        e.head == *v || e.tail == *v
                    })
            })
        })
    }

    /// Set of used edges (ids) encoded by a mask of layer `t`.
    pub fn mask_edges(&self, t: usize, mask: &EdgeMask) -> Vec<EdgeId> {
        mask.iter().map(|i| self.avail[t][i]).collect()
    }
}

/// `2 + n + m (2w - 1) C(2w - 1, w)`, the state bound for this engine.
pub fn general_node_bound(n: usize, m: usize, w: Width) -> f64 {
    let d = w.density_bound() as f64;
    2.0 + n as f64 + m as f64 * d * binomial(w.density_bound(), w.0)
}

/// `(2w - 1) C(2w - 1, w)`, the per-layer bound.
pub fn general_layer_bound(w: Width) -> f64 {
    w.density_bound() as f64 * binomial(w.density_bound(), w.0)
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn decide(g: &TimedGraph) -> Result<bool> {
    match GeneralEngine::new(g, GeneralOptions::default()) {
        Ok(engine) => Ok(engine.count_min_cost()?.feasible()),
        Err(Error::DensityViolation { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

pub fn count_min_cost(g: &TimedGraph) -> Result<Optimum> {
    match GeneralEngine::new(g, GeneralOptions::default()) {
        Ok(engine) => engine.count_min_cost(),
        Err(Error::DensityViolation { .. }) => Ok(Optimum::infeasible()),
        Err(e) => Err(e),
    }
}

/// Minimum-cost trail, or an invalid result with `cost: None` when none
/// exists.
pub fn solve_min_cost(g: &TimedGraph) -> Result<TrailResult> {
    let engine = match GeneralEngine::new(g, GeneralOptions::default()) {
        Ok(engine) => engine,
        Err(Error::DensityViolation { .. }) => return Ok(TrailResult::invalid(Vec::new())),
        Err(e) => return Err(e),
    };
    let h = engine.build_state_graph()?;
    Ok(h.dag
        .best_trail(g)?
        .unwrap_or_else(|| TrailResult::invalid(Vec::new())))
}

pub fn enumerate(g: &TimedGraph, limit: Option<usize>) -> Result<Vec<TrailResult>> {
    let engine = match GeneralEngine::new(g, GeneralOptions::default()) {
        Ok(engine) => engine,
        Err(Error::DensityViolation { .. }) => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    engine.build_state_graph()?.dag.enumerate(g, limit)
}
