//! Engine specialized to de Bruijn graphs.
//!
//! A state `(t, α)` remembers only the string spelled by the last `min(w, t)`
//! edges (plus the `k - 1` letters before them). Because an edge used at
//! position `p` can still be available at `t + 1` only if `p > t + 1 - w`,
//! that window decides which future edges are already used. On multigraphs
//! the copy assigned to each window k-mer is not recoverable from `α` alone,
//! so keys additionally carry the used, still-available copies of repeated
//! k-mers. Copies are assigned earliest-deadline-first, which makes every
//! path of the state graph a distinct node sequence.
//!
//! The graph is built by an iterative depth-first traversal that keeps a
//! single `m`-bit tracker of the edges in the current window.

use std::collections::hash_map::Entry;

use num_bigint::BigUint;
use num_traits::One;
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::dag::{Optimum, StateDag, Transition};
use crate::debruijn::DeBruijnGraph;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, NodeIx, TimedGraph, TrailResult, Width};

#[derive(Clone, Debug, Default)]
pub struct DbgOptions {
    /// Abort with `SolverBudgetExceeded` once this many states exist.
    pub max_states: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlphaKey {
    /// Letters packed `bits` at a time, first letter most significant.
    Packed(u64),
    Bytes(Box<[u8]>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DbgKey {
    pub alpha: AlphaKey,
    /// Used copies of repeated k-mers still available at `t + 1`, ascending.
    pub copies: SmallVec<[u32; 2]>,
}

pub struct DbgStateGraph {
    pub dag: StateDag,
    pub keys: Vec<Vec<DbgKey>>,
    pub width: Width,
}

pub struct DbgEngine<'d> {
    dbg: &'d DeBruijnGraph,
    g: &'d TimedGraph,
    width: Width,
    sigma: usize,
    letter_bits: u32,
    /// `out[u * σ + x]`: copies of the k-mer `label(u)·x`.
    out: Vec<SmallVec<[EdgeId; 1]>>,
    /// Edges whose interval ends at `t`.
    expiring: Vec<Vec<EdgeId>>,
    repeated: Vec<bool>,
    multigraph: bool,
    opts: DbgOptions,
}

struct Tracker(Vec<u64>);

impl Tracker {
    fn new(m: usize) -> Self {
        Tracker(vec![0; m.div_ceil(64)])
    }

    fn get(&self, id: EdgeId) -> bool {
        let i = id.index();
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, id: EdgeId) {
        let i = id.index();
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, id: EdgeId) {
        let i = id.index();
        self.0[i / 64] &= !(1 << (i % 64));
    }
}

struct Frame {
    t: usize,
    state: u32,
    node: NodeIx,
    next_letter: usize,
    entered: Option<EdgeId>,
    left: Option<EdgeId>,
}

/// Earliest-deadline copy: among copies available at `t` and not `used`,
/// the one with the smallest `hi`, then smallest `lo`, then smallest id.
pub fn pick_parallel_copy(
    g: &TimedGraph,
    group: &[EdgeId],
    t: usize,
    used: impl Fn(EdgeId) -> bool,
) -> Result<EdgeId> {
    group
        .iter()
        .copied()
        .filter(|&id| !used(id))
        .filter_map(|id| {
            let iv = g.edge(id).interval?;
            iv.contains(t).then_some((iv.hi, iv.lo, id))
        })
        .min()
        .map(|(_, _, id)| id)
        .ok_or(Error::NoCopyAvailable(t))
}

impl<'d> DbgEngine<'d> {
    pub fn new(dbg: &'d DeBruijnGraph, opts: DbgOptions) -> Result<Self> {
        let g = dbg.base();
        let m = g.m();
        let width = if m == 0 {
            Width(1)
        } else {
            g.require_density()?
        };
        let sigma = dbg.alphabet().size();
        let letter_bits = usize::BITS - (sigma - 1).leading_zeros();
        let mut out: Vec<SmallVec<[EdgeId; 1]>> = vec![SmallVec::new(); g.n() * sigma];
        for e in g.edges() {
            out[e.tail * sigma + dbg.edge_letter(e.id)].push(e.id);
        }
        let mut expiring = vec![Vec::new(); m + 1];
        for e in g.edges() {
            if let Some(iv) = e.interval {
                expiring[iv.hi].push(e.id);
            }
        }
        let mut repeated = vec![false; m];
        for group in &out {
            if group.len() > 1 {
                for id in group {
                    repeated[id.index()] = true;
                }
            }
        }
        let multigraph = repeated.iter().any(|&r| r);
        Ok(DbgEngine {
            dbg,
            g,
            width,
            sigma,
            letter_bits,
            out,
            expiring,
            repeated,
            multigraph,
            opts,
        })
    }

    pub fn width(&self) -> Width {
        self.width
    }

    pub fn lambda(&self) -> f64 {
        lambda(self.sigma, self.dbg.k(), self.width)
    }

    /// Fails when parallel copies disagree on cost at a shared time step.
    pub fn require_uniform_costs(&self) -> Result<()> {
        if !self.g.has_costs() {
            return Ok(());
        }
        for group in self.out.iter().filter(|g| g.len() > 1) {
            for (i, &a) in group.iter().enumerate() {
                for &b in &group[i + 1..] {
                    let (ea, eb) = (self.g.edge(a), self.g.edge(b));
                    let (Some(ia), Some(ib)) = (ea.interval, eb.interval) else {
                        continue;
                    };
                    let differs = (ia.lo.max(ib.lo)..=ia.hi.min(ib.hi))
                        .any(|t| ea.cost_at(t) != eb.cost_at(t));
                    if differs {
                        return Err(Error::UnequalParallelCosts(self.dbg.kmer(a)));
                    }
                }
            }
        }
        Ok(())
    }

    fn starts(&self) -> Vec<NodeIx> {
        // labels sort like tokens, so this is token order
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

    fn window(&self, t: usize) -> usize {
        self.width.0.min(t)
    }

    fn alpha_key(&self, alpha: &[u8]) -> AlphaKey {
        let bits = self.letter_bits as usize;
        if alpha.len() * bits <= 62 {
            let packed = alpha.iter().fold(0u64, |acc, &x| (acc << bits) | x as u64);
            AlphaKey::Packed(packed)
        } else {
            AlphaKey::Bytes(alpha.into())
        }
    }

    /// Key of the state reached by `path`; `letters` is its spelled string.
    fn key(&self, path: &[EdgeId], letters: &[u8]) -> DbgKey {
        let t = path.len();
        let win = self.window(t);
        let alpha = self.alpha_key(&letters[t - win..]);
        let mut copies = SmallVec::new();
        if self.multigraph {
            for &id in &path[t - win..] {
                let alive = self.g.edge(id).interval.is_some_and(|iv| iv.hi > t);
                if self.repeated[id.index()] && alive {
                    copies.push(id.0);
                }
            }
            copies.sort_unstable();
        }
        DbgKey { alpha, copies }
    }

    /// Key of the state reached by an arbitrary edge sequence (for checks).
    pub fn key_of_prefix(&self, path: &[EdgeId]) -> Result<DbgKey> {
        let letters = if path.is_empty() {
            return Err(Error::InvalidTrail);
        } else {
            let walk = self.g.chain(path).ok_or(Error::InvalidTrail)?;
            let mut l = self.dbg.label_letters(walk[0]).to_vec();
            l.extend(path.iter().map(|&id| self.dbg.edge_letter(id) as u8));
            l
        };
        Ok(self.key(path, &letters))
    }

    /// Key of the layer-0 state at node `v`.
    pub fn start_key(&self, v: NodeIx) -> DbgKey {
        self.key(&[], self.dbg.label_letters(v))
    }

    fn check_budget(&self, states: usize) -> Result<()> {
        match self.opts.max_states {
            Some(cap) if states > cap => Err(Error::SolverBudgetExceeded(cap)),
            _ => Ok(()),
        }
    }

    pub fn build_state_graph(&self) -> Result<DbgStateGraph> {
        let g = self.g;
        let m = g.m();
        let mut dag = StateDag::with_layers(m);
        let mut keys: Vec<Vec<DbgKey>> = vec![Vec::new(); m + 1];
        if m == 0 || g.edges().iter().any(|e| e.interval.is_none()) {
            return Ok(DbgStateGraph {
                dag,
                keys,
                width: self.width,
            });
        }
        let k1 = self.dbg.k() - 1;
        let mut memo: Vec<FxHashMap<DbgKey, u32>> = vec![FxHashMap::default(); m + 1];
        let mut tracker = Tracker::new(m);
        let mut path: Vec<EdgeId> = Vec::with_capacity(m);
        let mut letters: Vec<u8> = Vec::with_capacity(m + k1);
        let mut states = 0usize;
        let mut stack: Vec<Frame> = Vec::new();

        for v in self.starts() {
            letters.clear();
            letters.extend_from_slice(self.dbg.label_letters(v));
            let key = self.key(&[], &letters);
            let state = dag.push_state(0, v);
            keys[0].push(key.clone());
            memo[0].insert(key, state);
            states += 1;
            stack.push(Frame {
                t: 0,
                state,
                node: v,
                next_letter: 0,
                entered: None,
                left: None,
            });

            while let Some(frame) = stack.last_mut() {
                let t = frame.t;
                if t == m || frame.next_letter == self.sigma {
                    let done = stack.pop().unwrap();
                    if let Some(e) = done.entered {
                        tracker.clear(e);
                        path.pop();
                        letters.pop();
                    }
                    if let Some(e) = done.left {
                        tracker.set(e);
                    }
                    continue;
                }
                let x = frame.next_letter;
                frame.next_letter += 1;
                let (u, from) = (frame.node, frame.state);
                let group = &self.out[u * self.sigma + x];
                let Ok(id) = pick_parallel_copy(g, group, t + 1, |e| tracker.get(e)) else {
                    continue;
                };
                let e = g.edge(id);

                tracker.set(id);
                path.push(id);
                letters.push(x as u8);
                let left = (t + 1 > self.width.0).then(|| path[t - self.width.0]);
                if let Some(l) = left {
                    tracker.clear(l);
                }
                let undo =
                    |tracker: &mut Tracker, path: &mut Vec<EdgeId>, letters: &mut Vec<u8>| {
                        if let Some(l) = left {
                            tracker.set(l);
                        }
                        tracker.clear(id);
                        path.pop();
                        letters.pop();
                    };

                if !self.expiring[t + 1].iter().all(|&d| tracker.get(d)) {
                    undo(&mut tracker, &mut path, &mut letters);
                    continue;
                }
                debug_assert!(self.tracker_matches_window(&tracker, &path));

                let cost = e.cost_at(t + 1).expect("picked copy is available");
                let key = self.key(&path, &letters);
                match memo[t + 1].entry(key) {
                    Entry::Occupied(slot) => {
                        let target = *slot.get();
                        dag.push_transition(
                            t,
                            from,
                            Transition {
                                target,
                                edge: id,
                                cost,
                            },
                        );
                        undo(&mut tracker, &mut path, &mut letters);
                    }
                    Entry::Vacant(slot) => {
                        let target = dag.push_state(t + 1, e.head);
                        keys[t + 1].push(slot.key().clone());
                        slot.insert(target);
                        dag.push_transition(
                            t,
                            from,
                            Transition {
                                target,
                                edge: id,
                                cost,
                            },
                        );
                        states += 1;
                        self.check_budget(states)?;
                        stack.push(Frame {
                            t: t + 1,
                            state: target,
                            node: e.head,
                            next_letter: 0,
                            entered: Some(id),
                            left,
                        });
                    }
                }
            }
        }
        Ok(DbgStateGraph {
            dag,
            keys,
            width: self.width,
        })
    }

    /// The tracker holds exactly the edges of the current window.
    fn tracker_matches_window(&self, tracker: &Tracker, path: &[EdgeId]) -> bool {
        let t = path.len();
        let win = &path[t - self.window(t)..];
        let set_bits: usize = tracker.0.iter().map(|w| w.count_ones() as usize).sum();
        set_bits == win.len() && win.iter().all(|&id| tracker.get(id))
    }
}

/// `min(σ^(k-1), 2w - 1)`.
pub fn lambda(sigma: usize, k: usize, w: Width) -> f64 {
    let nodes = (sigma as f64).powi(k as i32 - 1);
    nodes.min(w.density_bound() as f64)
}

/// `2 + n + m λ^(w/(k-1) + 1)`, the state bound for this engine.
pub fn dbg_node_bound(n: usize, m: usize, sigma: usize, k: usize, w: Width) -> f64 {
    let exp = w.0 as f64 / (k - 1) as f64 + 1.0;
    2.0 + n as f64 + m as f64 * lambda(sigma, k, w).powf(exp)
}

/// Whether `(2w-1)^(w/(k-1)+1) <= 8 w 2^(w (log w + 1)/(k-1))`, compared in
/// log space.
pub fn lambda_bound_holds(w: usize, k: usize) -> bool {
    let (wf, kf) = (w as f64, (k - 1) as f64);
    let lhs = (wf / kf + 1.0) * (2.0 * wf - 1.0).log2();
    let rhs = 3.0 + wf.log2() + wf * (wf.log2() + 1.0) / kf;
    lhs <= rhs + 1e-9
}

fn engine_or_empty<T>(
    dbg: &DeBruijnGraph,
    on_violation: impl FnOnce() -> T,
    run: impl FnOnce(DbgEngine<'_>) -> Result<T>,
) -> Result<T> {
    match DbgEngine::new(dbg, DbgOptions::default()) {
        Ok(engine) => run(engine),
        Err(Error::DensityViolation { .. }) => Ok(on_violation()),
        Err(e) => Err(e),
    }
}

pub fn decide_dbg(dbg: &DeBruijnGraph) -> Result<bool> {
    engine_or_empty(
        dbg,
        || false,
        |e| Ok(e.build_state_graph()?.dag.optimum()?.feasible()),
    )
}

/// Minimum cost and number of node-distinct min-cost trails.
pub fn count_dbg(dbg: &DeBruijnGraph) -> Result<Optimum> {
    if dbg.base().m() == 0 {
        return Ok(Optimum {
            cost: Some(0),
            count: BigUint::one(),
        });
    }
    engine_or_empty(dbg, Optimum::infeasible, |e| {
        e.require_uniform_costs()?;
        e.build_state_graph()?.dag.optimum()
    })
}

pub fn solve_min_cost_dbg(dbg: &DeBruijnGraph) -> Result<TrailResult> {
    let none = || TrailResult::invalid(Vec::new());
    engine_or_empty(dbg, none, |e| {
        e.require_uniform_costs()?;
        Ok(e.build_state_graph()?
            .dag
            .best_trail(dbg.base())?
            .unwrap_or_else(none))
    })
}

pub fn enumerate_dbg(dbg: &DeBruijnGraph, limit: Option<usize>) -> Result<Vec<TrailResult>> {
    engine_or_empty(dbg, Vec::new, |e| {
        e.require_uniform_costs()?;
        e.build_state_graph()?.dag.enumerate(dbg.base(), limit)
    })
}
