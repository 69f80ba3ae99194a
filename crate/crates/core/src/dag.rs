//! Layered state DAG shared by both engines.
//!
//! Layer `t` holds the states reached after placing `t` edges; a transition
//! from layer `t` to `t + 1` places one edge at step `t + 1`. The source `s`
//! feeds every layer-0 state and every layer-`m` state feeds the sink `z`, so
//! `s`-to-`z` paths are exactly the constraint-respecting Eulerian trails.
//! All queries run on a suffix table of (min cost to `z`, number of min-cost
//! completions).

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, NodeIx, TimedGraph, TrailResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transition {
    /// Index of the target state in the next layer.
    pub target: u32,
    pub edge: EdgeId,
    pub cost: i64,
}

#[derive(Clone, Debug, Default)]
pub struct DagState {
    /// Current endpoint of the partial walk.
    pub node: NodeIx,
    pub out: Vec<Transition>,
}

/// Minimum total cost and number of trails attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Optimum {
    /// `None` when no trail exists.
    pub cost: Option<i64>,
    pub count: BigUint,
}

impl Optimum {
    pub fn infeasible() -> Self {
        Optimum {
            cost: None,
            count: BigUint::zero(),
        }
    }

    pub fn feasible(&self) -> bool {
        self.cost.is_some()
    }
}

#[derive(Clone, Debug, Default)]
pub struct StateDag {
    layers: Vec<Vec<DagState>>,
}

#[derive(Clone, Debug)]
struct Suffix {
    best: Vec<Vec<Option<i64>>>,
    count: Vec<Vec<BigUint>>,
}

impl StateDag {
    pub fn with_layers(m: usize) -> Self {
        StateDag {
            layers: vec![Vec::new(); m + 1],
        }
    }

    /// Number of time steps (edges of the underlying graph).
    pub fn m(&self) -> usize {
        self.layers.len().saturating_sub(1)
    }

    pub fn layer(&self, t: usize) -> &[DagState] {
        &self.layers[t]
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    pub fn push_state(&mut self, t: usize, node: NodeIx) -> u32 {
        let layer = &mut self.layers[t];
        layer.push(DagState {
            node,
            out: Vec::new(),
        });
        (layer.len() - 1) as u32
    }

    pub fn push_transition(&mut self, t: usize, from: u32, tr: Transition) {
        self.layers[t][from as usize].out.push(tr);
    }

    /// `|V(H)|` including `s` and `z`.
    pub fn node_count(&self) -> usize {
        2 + self.layers.iter().map(Vec::len).sum::<usize>()
    }

    /// `|E(H)|` including the `s` and `z` fringes.
    pub fn edge_count(&self) -> usize {
        let inner: usize = self
            .layers
            .iter()
            .flat_map(|l| l.iter().map(|s| s.out.len()))
            .sum();
        inner + self.layers.first().map_or(0, Vec::len) + self.layers.last().map_or(0, Vec::len)
    }

    fn suffix(&self) -> Result<Suffix> {
        let m = self.m();
        let mut best: Vec<Vec<Option<i64>>> =
            self.layers.iter().map(|l| vec![None; l.len()]).collect();
        let mut count: Vec<Vec<BigUint>> = self
            .layers
            .iter()
            .map(|l| vec![BigUint::zero(); l.len()])
            .collect();
        for v in best[m].iter_mut() {
            *v = Some(0);
        }
        for c in count[m].iter_mut() {
            *c = BigUint::one();
        }
        for t in (0..m).rev() {
            let (head, tail) = best.split_at_mut(t + 1);
            let (chead, ctail) = count.split_at_mut(t + 1);
            let next_best = &tail[0];
            let next_count = &ctail[0];
            for (i, st) in self.layers[t].iter().enumerate() {
                let mut b: Option<i64> = None;
                let mut c = BigUint::zero();
                for tr in &st.out {
                    let Some(nb) = next_best[tr.target as usize] else {
                        continue;
                    };
                    let total = nb.checked_add(tr.cost).ok_or(Error::CostOverflow)?;
                    match b {
                        Some(cur) if total > cur => {}
                        Some(cur) if total == cur => c += &next_count[tr.target as usize],
                        _ => {
                            b = Some(total);
                            c = next_count[tr.target as usize].clone();
                        }
                    }
                }
                head[t][i] = b;
                chead[t][i] = c;
            }
        }
        Ok(Suffix { best, count })
    }

    /// Optimal layer-0 entry points, sorted by (first edge, start node token).
    fn entries(&self, g: &TimedGraph, sfx: &Suffix, opt: i64) -> Vec<(u32, Transition)> {
        let mut entries = Vec::new();
        for (i, st) in self.layers[0].iter().enumerate() {
            for tr in &st.out {
                if sfx.best[1][tr.target as usize].map(|b| b + tr.cost) == Some(opt) {
                    entries.push((i as u32, *tr));
                }
            }
        }
        entries.sort_by(|a, b| {
            a.1.edge.cmp(&b.1.edge).then_with(|| {
                g.node_token(self.layers[0][a.0 as usize].node)
                    .cmp(g.node_token(self.layers[0][b.0 as usize].node))
            })
        });
        entries
    }

    fn optimal_out(&self, sfx: &Suffix, t: usize, i: usize) -> Vec<Transition> {
        let want = sfx.best[t][i];
        let mut out: Vec<Transition> = self.layers[t][i]
            .out
            .iter()
            .filter(|tr| sfx.best[t + 1][tr.target as usize].map(|b| b + tr.cost) == want)
            .copied()
            .collect();
        out.sort_by_key(|tr| tr.edge);
        out
    }

    pub fn optimum(&self) -> Result<Optimum> {
        if self.m() == 0 {
            return Ok(Optimum {
                cost: Some(0),
                count: BigUint::one(),
            });
        }
        let sfx = self.suffix()?;
        Ok(optimum_of(&sfx, 0))
    }

    /// The first min-cost trail in enumeration order.
    pub fn best_trail(&self, g: &TimedGraph) -> Result<Option<TrailResult>> {
        Ok(self.enumerate(g, Some(1))?.into_iter().next())
    }

    /// All min-cost trails in order, up to `limit`.
    pub fn enumerate(&self, g: &TimedGraph, limit: Option<usize>) -> Result<Vec<TrailResult>> {
        let mut out = Vec::new();
        self.for_each_trail(g, limit, |tr| out.push(tr))?;
        Ok(out)
    }

    /// Streams min-cost trails to `sink`, following only transitions on
    /// optimal paths.
    pub fn for_each_trail(
        &self,
        g: &TimedGraph,
        limit: Option<usize>,
        mut sink: impl FnMut(TrailResult),
    ) -> Result<usize> {
        let m = self.m();
        if m == 0 {
            sink(empty_trail());
            return Ok(1);
        }
        let sfx = self.suffix()?;
        let Some(opt) = optimum_of(&sfx, 0).cost else {
            return Ok(0);
        };
        let limit = limit.unwrap_or(usize::MAX);
        let mut emitted = 0usize;
        let mut edges: Vec<EdgeId> = Vec::with_capacity(m);
        let mut walk: Vec<NodeIx> = Vec::with_capacity(m + 1);
        for (start, first) in self.entries(g, &sfx, opt) {
            if emitted >= limit {
                break;
            }
            walk.clear();
            edges.clear();
            walk.push(self.layers[0][start as usize].node);
            edges.push(first.edge);
            walk.push(self.layers[1][first.target as usize].node);
            // stack of (layer, state, remaining optimal transitions)
            let mut stack: Vec<(usize, u32, std::vec::IntoIter<Transition>)> = Vec::new();
            stack.push((
                1,
                first.target,
                if m > 1 {
                    self.optimal_out(&sfx, 1, first.target as usize).into_iter()
                } else {
                    Vec::new().into_iter()
                },
            ));
            if m == 1 {
                sink(TrailResult {
                    edges: edges.clone(),
                    walk: walk.clone(),
                    cost: Some(opt),
                    valid: true,
                });
                emitted += 1;
                continue;
            }
            while let Some((t, _, iter)) = stack.last_mut() {
                let t = *t;
                match iter.next() {
                    None => {
                        stack.pop();
                        edges.pop();
                        walk.pop();
                    }
                    Some(tr) => {
                        edges.push(tr.edge);
                        walk.push(self.layers[t + 1][tr.target as usize].node);
                        if t + 1 == m {
                            sink(TrailResult {
                                edges: edges.clone(),
                                walk: walk.clone(),
                                cost: Some(opt),
                                valid: true,
                            });
                            emitted += 1;
                            edges.pop();
                            walk.pop();
                            if emitted >= limit {
                                return Ok(emitted);
                            }
                        } else {
                            let next = self.optimal_out(&sfx, t + 1, tr.target as usize);
                            stack.push((t + 1, tr.target, next.into_iter()));
                        }
                    }
                }
            }
        }
        Ok(emitted)
    }

    /// Draws one min-cost trail uniformly at random: a single uniform rank in
    /// `[0, count)` is unranked along suffix counts.
    pub fn sample<R: Rng + ?Sized>(&self, g: &TimedGraph, rng: &mut R) -> Result<TrailResult> {
        let m = self.m();
        if m == 0 {
            return Ok(empty_trail());
        }
        let sfx = self.suffix()?;
        let total = optimum_of(&sfx, 0);
        let Some(opt) = total.cost else {
            return Err(Error::Infeasible);
        };
        let mut rank = rng.gen_biguint_below(&total.count);
        let mut edges = Vec::with_capacity(m);
        let mut walk = Vec::with_capacity(m + 1);
        let mut cur: Option<(usize, u32)> = None;
        for (start, first) in self.entries(g, &sfx, opt) {
            let c = &sfx.count[1][first.target as usize];
            if rank < *c {
                walk.push(self.layers[0][start as usize].node);
                edges.push(first.edge);
                walk.push(self.layers[1][first.target as usize].node);
                cur = Some((1, first.target));
                break;
            }
            rank -= c;
        }
        let (mut t, mut i) = cur.expect("rank below total count");
        while t < m {
            let mut moved = false;
            for tr in self.optimal_out(&sfx, t, i as usize) {
                let c = &sfx.count[t + 1][tr.target as usize];
                if rank < *c {
                    edges.push(tr.edge);
                    walk.push(self.layers[t + 1][tr.target as usize].node);
                    t += 1;
                    i = tr.target;
                    moved = true;
                    break;
                }
                rank -= c;
            }
            assert!(moved, "suffix counts are consistent");
        }
        Ok(TrailResult {
            edges,
            walk,
            cost: Some(opt),
            valid: true,
        })
    }
}

fn optimum_of(sfx: &Suffix, t: usize) -> Optimum {
    let mut best: Option<i64> = None;
    let mut count = BigUint::zero();
    for (b, c) in sfx.best[t].iter().zip(&sfx.count[t]) {
        let Some(b) = *b else { continue };
        match best {
            Some(cur) if b > cur => {}
            Some(cur) if b == cur => count += c,
            _ => {
                best = Some(b);
                count = c.clone();
            }
        }
    }
    if best.is_none() {
        return Optimum::infeasible();
    }
    Optimum { cost: best, count }
}

fn empty_trail() -> TrailResult {
    TrailResult {
        edges: Vec::new(),
        walk: Vec::new(),
        cost: Some(0),
        valid: true,
    }
}
