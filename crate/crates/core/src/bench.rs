//! Benchmark suites comparing the two state-graph engines.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::debruijn::{Alphabet, DeBruijnGraph};
use crate::error::{Error, Result};
use crate::generate::{planted_dbg, DbgProfile};
use crate::solver_dbg::{dbg_node_bound, DbgEngine, DbgOptions};
use crate::solver_general::{general_node_bound, GeneralEngine, GeneralOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Small random binary and quaternary instances; sizes against bounds.
    Bounds,
    /// One large quaternary instance of order 31.
    Perf,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bounds" => Ok(Suite::Bounds),
            "perf" => Ok(Suite::Perf),
            other => Err(Error::Unsupported(format!("suite `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub instance: String,
    pub engine: &'static str,
    pub n: usize,
    pub m: usize,
    pub w: usize,
    pub k: usize,
    pub sigma: usize,
    /// `|V(H)|`, or `None` when the state cap was hit.
    pub states: Option<usize>,
    pub bound: f64,
    pub feasible: Option<bool>,
    pub millis: f64,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub seed: u64,
    pub max_states: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            seed: 1,
            max_states: 4_000_000,
        }
    }
}

fn measure(name: &str, dbg: &DeBruijnGraph, max_states: usize) -> Result<Vec<BenchRow>> {
    let g = dbg.base();
    let w = g.interval_width()?;
    let (n, m, k, sigma) = (g.n(), g.m(), dbg.k(), dbg.alphabet().size());
    let row = |engine, states, bound, feasible, millis| BenchRow {
        instance: name.to_string(),
        engine,
        n,
        m,
        w: w.0,
        k,
        sigma,
        states,
        bound,
        feasible,
        millis,
    };
    let mut rows = Vec::new();

    let start = Instant::now();
    let opts = DbgOptions {
        max_states: Some(max_states),
    };
    let h = DbgEngine::new(dbg, opts).and_then(|e| e.build_state_graph());
    let (states, feasible) = match h {
        Ok(h) => (Some(h.dag.node_count()), Some(h.dag.optimum()?.feasible())),
        Err(Error::SolverBudgetExceeded(_)) => (None, None),
        Err(e) => return Err(e),
    };
    let bound = dbg_node_bound(n, m, sigma, k, w);
    rows.push(row("dbg", states, bound, feasible, elapsed_ms(start)));

    let start = Instant::now();
    let opts = GeneralOptions {
        max_states: Some(max_states),
    };
    let h = GeneralEngine::new(g, opts).and_then(|e| e.build_state_graph());
    let (states, feasible) = match h {
        Ok(h) => (Some(h.dag.node_count()), Some(h.dag.optimum()?.feasible())),
        Err(Error::SolverBudgetExceeded(_)) => (None, None),
        Err(e) => return Err(e),
    };
    let bound = general_node_bound(n, m, w);
    rows.push(row("general", states, bound, feasible, elapsed_ms(start)));
    Ok(rows)
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// The instance used by the `perf` suite.
pub fn perf_instance(seed: u64) -> Result<DeBruijnGraph> {
    let profile = DbgProfile {
        alphabet: Alphabet::new(['A', 'C', 'G', 'T'])?,
        k: 31,
        edges: 10_000,
        width: 60,
        costs: None,
        blocks: Some((40, 45)),
        exact_width: true,
    };
    Ok(planted_dbg(&profile, &mut ChaCha8Rng::seed_from_u64(seed))?.dbg)
}

pub fn run_suite(suite: Suite, cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rows = Vec::new();
    match suite {
        Suite::Bounds => {
            let binary = Alphabet::new(['0', '1'])?;
            let quaternary = Alphabet::new(['A', 'C', 'G', 'T'])?;
            for (alphabet, label) in [(&binary, "bin"), (&quaternary, "quat")] {
                for k in [3, 4, 5] {
                    for width in [k - 1, 2 * (k - 1)] {
                        let profile = DbgProfile {
                            alphabet: alphabet.clone(),
                            k,
                            edges: 40,
                            width,
                            costs: None,
                            blocks: None,
                            exact_width: false,
                        };
                        let p = planted_dbg(&profile, &mut rng)?;
                        let name = format!("{label}-k{k}-w{width}");
                        rows.extend(measure(&name, &p.dbg, cfg.max_states)?);
                    }
                }
            }
        }
        Suite::Perf => {
            let dbg = perf_instance(cfg.seed)?;
            rows.extend(measure("quat-k31-m10000", &dbg, cfg.max_states)?);
        }
    }
    Ok(rows)
}

/// Plain-text table; without timing the output depends only on the seed.
pub fn render(rows: &[BenchRow], timing: bool) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "{:<18} {:<8} {:>6} {:>6} {:>4} {:>3} {:>2} {:>10} {:>12} {:>9}",
        "instance", "engine", "n", "m", "w", "k", "σ", "states", "bound", "feasible"
    );
    if timing {
        let _ = write!(out, " {:>10}", "ms");
    }
    out.push('\n');
    for r in rows {
        let states = r.states.map_or("capped".to_string(), |s| s.to_string());
        let feasible = r.feasible.map_or("-", |f| if f { "yes" } else { "no" });
        let _ = write!(
            out,
            "{:<18} {:<8} {:>6} {:>6} {:>4} {:>3} {:>2} {:>10} {:>12.4e} {:>9}",
            r.instance, r.engine, r.n, r.m, r.w, r.k, r.sigma, states, r.bound, feasible
        );
        if timing {
            let _ = write!(out, " {:>10.1}", r.millis);
        }
        out.push('\n');
    }
    out
}
