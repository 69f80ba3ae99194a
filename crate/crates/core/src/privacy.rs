//! z-anonymous string release.
//!
//! For a secret string `S`, find the largest order `k` whose de Bruijn graph
//! of `{S}` has at least `z` node-distinct Eulerian trails (respecting any
//! known k-mer positions), then publish the spelling of one such trail drawn
//! uniformly at random.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dag::{Optimum, StateDag};
use crate::debruijn::{build_dbg, Alphabet, DeBruijnGraph};
use crate::error::{Error, Result};
use crate::graph::{Interval, TimedGraph, TrailResult};
use crate::oracle::{self, Mode, NODE_DISTINCT_CAP};
use crate::solve::{dbg_estimate, Engine};
use crate::solver_dbg::{DbgEngine, DbgOptions};

/// Estimated state count above which the de Bruijn engine is not attempted.
pub const DEFAULT_NODE_BUDGET: f64 = 5e6;
/// Hard cap on states actually built by the de Bruijn engine.
pub const DEFAULT_MAX_STATES: usize = 5_000_000;

#[derive(Clone, Debug)]
pub struct AnonymityQuery {
    pub secret: String,
    pub z: u64,
    /// Known positions of k-mers; entries whose length is not the order
    /// being examined are ignored at that order.
    pub knowledge: Vec<(String, Interval)>,
    /// Inclusive `(k_min, k_max)`; defaults to `(2, |S| - 1)`.
    pub k_range: Option<(usize, usize)>,
    pub seed: u64,
    pub alphabet: Option<Alphabet>,
    pub node_budget: f64,
    pub max_states: usize,
}

impl AnonymityQuery {
    pub fn new(secret: impl Into<String>, z: u64) -> Self {
        AnonymityQuery {
            secret: secret.into(),
            z,
            knowledge: Vec::new(),
            k_range: None,
            seed: 0,
            alphabet: None,
            node_budget: DEFAULT_NODE_BUDGET,
            max_states: DEFAULT_MAX_STATES,
        }
    }

    fn range(&self) -> Result<(usize, usize)> {
        let len = self.secret.chars().count();
        let (lo, hi) = self.k_range.unwrap_or((2, len.saturating_sub(1)));
        if lo < 2 {
            return Err(Error::InvalidOrder(lo));
        }
        if len < lo + 1 {
            return Err(Error::StringTooShort(self.secret.clone()));
        }
        Ok((lo, hi.min(len)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Release {
    pub k: usize,
    pub count: BigUint,
    pub released: String,
    pub engine: Engine,
}

/// Counting result at one order, with what is needed to sample from it.
pub struct Census {
    pub dbg: DeBruijnGraph,
    pub count: BigUint,
    pub engine: Engine,
    dag: Option<StateDag>,
}

impl Census {
    /// One min-cost trail, uniformly at random.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<TrailResult> {
        let g = self.dbg.base();
        match &self.dag {
            Some(dag) => dag.sample(g, rng),
            None => {
                let r = oracle::brute_solve(g, Mode::NodeDistinct, true)?;
                let trails = r.trails.unwrap_or_default();
                if trails.is_empty() {
                    return Err(Error::Infeasible);
                }
                Ok(trails[rng.gen_range(0..trails.len())].clone())
            }
        }
    }
}

/// The order-`k` graph of `{secret}` with the applicable knowledge.
pub fn instance_at(
    secret: &str,
    k: usize,
    knowledge: &[(String, Interval)],
    alphabet: Option<&Alphabet>,
) -> Result<DeBruijnGraph> {
    let alphabet = match alphabet {
        Some(a) => a.clone(),
        None => Alphabet::infer(&[secret])?,
    };
    let dbg = build_dbg(&[secret], k, Some(&alphabet))?;
    let relevant: Vec<(String, Interval)> = knowledge
        .iter()
        .filter(|(kmer, _)| kmer.chars().count() == k)
        .cloned()
        .collect();
    dbg.knowledge_to_intervals(&relevant)
}

/// Node-distinct count of `dbg`, by the de Bruijn engine when its size
/// estimate fits `node_budget`, else by exhaustive search when small enough.
pub fn census(dbg: DeBruijnGraph, node_budget: f64, max_states: usize) -> Result<Census> {
    let g: &TimedGraph = dbg.base();
    let fallback = |dbg: DeBruijnGraph, cap: usize| -> Result<Census> {
        if dbg.base().m() > NODE_DISTINCT_CAP {
            return Err(Error::SolverBudgetExceeded(cap));
        }
        let r = oracle::brute_solve(dbg.base(), Mode::NodeDistinct, false)?;
        Ok(Census {
            dbg,
            count: r.count,
            engine: Engine::Oracle,
            dag: None,
        })
    };
    let w = match g.interval_width() {
        Ok(w) => w,
        Err(_) => return fallback(dbg, max_states),
    };
    let estimate = dbg_estimate(g.m(), dbg.alphabet().size(), dbg.k(), w);
    if estimate > node_budget {
        return fallback(dbg, node_budget as usize);
    }
    let opts = DbgOptions {
        max_states: Some(max_states),
    };
    let built = DbgEngine::new(&dbg, opts).and_then(|e| Ok(e.build_state_graph()?.dag));
    let dag = match built {
        Ok(dag) => dag,
        Err(Error::DensityViolation { .. }) => {
            return Ok(Census {
                dbg,
                count: BigUint::default(),
                engine: Engine::Dbg,
                dag: None,
            })
        }
        Err(Error::SolverBudgetExceeded(cap)) => return fallback(dbg, cap),
        Err(e) => return Err(e),
    };
    let Optimum { count, .. } = dag.optimum()?;
    Ok(Census {
        dbg,
        count,
        engine: Engine::Dbg,
        dag: Some(dag),
    })
}

/// Whether the order-`k` graph has at least `z` node-distinct trails.
pub fn verify_anonymity(q: &AnonymityQuery, k: usize) -> Result<(bool, BigUint)> {
    let dbg = instance_at(&q.secret, k, &q.knowledge, q.alphabet.as_ref())?;
    let c = census(dbg, q.node_budget, q.max_states)?;
    Ok((c.count >= BigUint::from(q.z), c.count))
}

/// Scans `k` downward and releases a uniform reconstruction at the first
/// order with at least `z` trails.
pub fn anonymize(q: &AnonymityQuery) -> Result<Release> {
    let (lo, hi) = q.range()?;
    let z = BigUint::from(q.z);
    for k in (lo..=hi).rev() {
        let dbg = instance_at(&q.secret, k, &q.knowledge, q.alphabet.as_ref())?;
        let c = census(dbg, q.node_budget, q.max_states)?;
        if c.count >= z && c.count > BigUint::default() {
            let mut rng = ChaCha8Rng::seed_from_u64(q.seed);
            let trail = c.sample(&mut rng)?;
            let released = c.dbg.spell(&trail)?;
            return Ok(Release {
                k,
                count: c.count,
                released,
                engine: c.engine,
            });
        }
    }
    Err(Error::NoSuchK { z: q.z })
}

/// Uniform min-cost trail of a state graph, reproducible from `seed`.
pub fn sample_trail_uniform(dag: &StateDag, g: &TimedGraph, seed: u64) -> Result<TrailResult> {
    dag.sample(g, &mut ChaCha8Rng::seed_from_u64(seed))
}
