//! Random instances with a planted valid trail.
//!
//! A random walk (or a random string, for de Bruijn instances) fixes a trail;
//! each edge then gets a random interval of length at most `w` containing its
//! planted position, so every generated instance has at least one solution.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::debruijn::{build_dbg, Alphabet, DeBruijnGraph};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, GraphBuilder, Interval, Orientation, TimedGraph};

#[derive(Clone, Debug)]
pub struct Profile {
    pub orientation: Orientation,
    /// Number of distinct node tokens available to the walk.
    pub nodes: usize,
    pub edges: usize,
    pub width: usize,
    /// Draw per-step costs uniformly from this range.
    pub costs: Option<(i64, i64)>,
    /// Reject walks that repeat a node pair.
    pub simple: bool,
    pub allow_loops: bool,
}

impl Default for Profile {
    fn default() -> Self {
        Profile {
            orientation: Orientation::Directed,
            nodes: 5,
            edges: 8,
            width: 3,
            costs: None,
            simple: false,
            allow_loops: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DbgProfile {
    pub alphabet: Alphabet,
    pub k: usize,
    /// Number of k-mers, i.e. edges.
    pub edges: usize,
    pub width: usize,
    pub costs: Option<(i64, i64)>,
    /// When set, the string is a concatenation of random picks from this
    /// many random blocks of `block` letters, which creates repeats.
    pub blocks: Option<(usize, usize)>,
    /// Give every interval length exactly `min(width, m)`.
    pub exact_width: bool,
}

#[derive(Clone, Debug)]
pub struct Planted {
    pub graph: TimedGraph,
    pub trail: Vec<EdgeId>,
}

#[derive(Clone, Debug)]
pub struct PlantedDbg {
    pub dbg: DeBruijnGraph,
    pub secret: String,
    pub trail: Vec<EdgeId>,
}

/// Random interval of length at most `w` inside `[1, m]` containing `p`.
pub fn interval_around<R: Rng + ?Sized>(rng: &mut R, p: usize, m: usize, w: usize) -> Interval {
    let len = rng.gen_range(1..=w.min(m));
    let lo_min = p.saturating_sub(len - 1).max(1);
    let lo_max = p.min(m - len + 1);
    let lo = rng.gen_range(lo_min..=lo_max);
    Interval::new(lo, lo + len - 1)
}

/// Random interval of length exactly `min(w, m)` inside `[1, m]` containing `p`.
pub fn window_around<R: Rng + ?Sized>(rng: &mut R, p: usize, m: usize, w: usize) -> Interval {
    let len = w.min(m);
    let lo = rng.gen_range(p.saturating_sub(len - 1).max(1)..=p.min(m - len + 1));
    Interval::new(lo, lo + len - 1)
}

fn random_costs<R: Rng + ?Sized>(rng: &mut R, iv: Interval, range: (i64, i64)) -> Vec<i64> {
    (0..iv.len())
        .map(|_| rng.gen_range(range.0..=range.1))
        .collect()
}

pub fn planted_instance<R: Rng + ?Sized>(profile: &Profile, rng: &mut R) -> Result<Planted> {
    let p = profile;
    if p.nodes == 0 || p.width == 0 || (p.edges > 0 && p.nodes == 1 && !p.allow_loops) {
        return Err(Error::ProfileInfeasible("no walk fits the node set".into()));
    }
    let directed = p.orientation == Orientation::Directed;
    let mut walk = Vec::new();
    'attempt: for _ in 0..1000 {
        walk.clear();
        walk.push(rng.gen_range(0..p.nodes));
        let mut pairs = std::collections::HashSet::new();
        for _ in 0..p.edges {
            let u = *walk.last().unwrap();
            let mut options: Vec<usize> = (0..p.nodes)
                .filter(|&v| p.allow_loops || v != u)
                .filter(|&v| {
                    let key = if directed || u <= v { (u, v) } else { (v, u) };
                    !p.simple || !pairs.contains(&key)
                })
                .collect();
            if options.is_empty() {
                continue 'attempt;
            }
            options.shuffle(rng);
            let v = options[0];
            pairs.insert(if directed || u <= v { (u, v) } else { (v, u) });
            walk.push(v);
        }
        return Ok(assemble(p, &walk, rng));
    }
    Err(Error::ProfileInfeasible(format!(
        "no simple walk of {} edges on {} nodes",
        p.edges, p.nodes
    )))
}

fn assemble<R: Rng + ?Sized>(p: &Profile, walk: &[usize], rng: &mut R) -> Planted {
    let m = walk.len() - 1;
    // position of the edge with id i + 1
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    let mut b = GraphBuilder::new(p.orientation);
    let mut trail = vec![EdgeId(0); m];
    for &pos in &order {
        let iv = interval_around(rng, pos + 1, m, p.width);
        let costs = p.costs.map(|r| random_costs(rng, iv, r));
        // undirected edges are stored in a random orientation
        let (mut a, mut c) = (walk[pos], walk[pos + 1]);
        if p.orientation == Orientation::Undirected && rng.gen_bool(0.5) {
            std::mem::swap(&mut a, &mut c);
        }
        let (a, c) = (b.intern(&format!("v{a}")), b.intern(&format!("v{c}")));
        trail[pos] = b.push_edge(a, c, Some(iv), costs);
    }
    if m == 0 {
        b.intern(&format!("v{}", walk[0]));
    }
    Planted {
        graph: b.build().expect("generated graph is well formed"),
        trail,
    }
}

pub fn random_string<R: Rng + ?Sized>(rng: &mut R, alphabet: &Alphabet, len: usize) -> String {
    (0..len)
        .map(|_| alphabet.letter(rng.gen_range(0..alphabet.size())))
        .collect()
}

pub fn planted_dbg<R: Rng + ?Sized>(profile: &DbgProfile, rng: &mut R) -> Result<PlantedDbg> {
    let p = profile;
    if p.edges == 0 || p.width == 0 {
        return Err(Error::ProfileInfeasible(
            "need at least one edge and w ≥ 1".into(),
        ));
    }
    let len = p.edges + p.k - 1;
    let secret = match p.blocks {
        None => random_string(rng, &p.alphabet, len),
        Some((count, block)) => {
            if count == 0 || block == 0 {
                return Err(Error::ProfileInfeasible("empty block pool".into()));
            }
            let pool: Vec<String> = (0..count)
                .map(|_| random_string(rng, &p.alphabet, block))
                .collect();
            let mut letters: Vec<char> = Vec::with_capacity(len + block);
            while letters.len() < len {
                letters.extend(pool.choose(rng).unwrap().chars());
            }
            letters.truncate(len);
            letters.into_iter().collect()
        }
    };
    let plain = build_dbg(&[&secret], p.k, Some(&p.alphabet))?;
    let m = plain.base().m();
    let mut b = GraphBuilder::new(Orientation::Directed);
    for v in plain.base().nodes() {
        b.intern(v);
    }
    for e in plain.base().edges() {
        let pos = e.id.index() + 1;
        let iv = if p.exact_width {
            window_around(rng, pos, m, p.width)
        } else {
            interval_around(rng, pos, m, p.width)
        };
        let costs = p.costs.map(|r| random_costs(rng, iv, r));
        b.push_edge(e.tail, e.head, Some(iv), costs);
    }
    let dbg = plain.with_base(b.build()?)?;
    Ok(PlantedDbg {
        dbg,
        secret,
        trail: (0..m).map(EdgeId::from_index).collect(),
    })
}

/// Copy with parallel copies of each k-mer given the cost vector of the
/// lowest-id copy where their intervals overlap.
pub fn equalize_parallel_costs(dbg: &DeBruijnGraph) -> Result<DeBruijnGraph> {
    let g = dbg.base();
    if !g.has_costs() {
        return Ok(dbg.clone());
    }
    let mut costs: Vec<Option<Vec<i64>>> = g.edges().iter().map(|e| e.costs.clone()).collect();
    for ids in dbg.kmer_groups().values() {
        let mut table = std::collections::HashMap::new();
        for id in ids {
            let e = g.edge(*id);
            let Some(iv) = e.interval else { continue };
            for t in iv.lo..=iv.hi {
                let c = *table.entry(t).or_insert_with(|| e.cost_at(t).unwrap());
                costs[id.index()].as_mut().unwrap()[t - iv.lo] = c;
            }
        }
    }
    let mut b = GraphBuilder::new(Orientation::Directed);
    for v in g.nodes() {
        b.intern(v);
    }
    for (e, c) in g.edges().iter().zip(costs) {
        b.push_edge(e.tail, e.head, e.interval, c);
    }
    b.set_budget(g.budget());
    dbg.with_base(b.build()?)
}
