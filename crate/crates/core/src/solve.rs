//! Engine selection and the common query surface.

use std::fmt;
use std::str::FromStr;

use crate::dag::{Optimum, StateDag};
use crate::debruijn::DeBruijnGraph;
use crate::error::{Error, Result};
use crate::graph::{TimedGraph, TrailResult, Width};
use crate::oracle::{self, Mode};
use crate::solver_dbg::{self, DbgEngine, DbgOptions};
use crate::solver_general::{self, GeneralEngine, GeneralOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Engine {
    General,
    Dbg,
    Oracle,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::General => "general",
            Engine::Dbg => "dbg",
            Engine::Oracle => "oracle",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum EngineChoice {
    #[default]
    Auto,
    Fixed(Engine),
}

impl FromStr for EngineChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "auto" => EngineChoice::Auto,
            "general" => EngineChoice::Fixed(Engine::General),
            "dbg" => EngineChoice::Fixed(Engine::Dbg),
            "oracle" => EngineChoice::Fixed(Engine::Oracle),
            other => return Err(Error::Unsupported(format!("solver `{other}`"))),
        })
    }
}

/// What makes two trails different.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Distinct {
    #[default]
    Nodes,
    Edges,
}

impl FromStr for Distinct {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nodes" => Ok(Distinct::Nodes),
            "edges" => Ok(Distinct::Edges),
            other => Err(Error::Unsupported(format!("distinctness `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    pub engine: EngineChoice,
    pub distinct: Distinct,
    pub max_states: Option<usize>,
}

/// `m w^1.5 4^w`, the work estimate of the general engine.
pub fn general_estimate(m: usize, w: Width) -> f64 {
    let w = w.0 as f64;
    m as f64 * w.powf(1.5) * 4f64.powf(w)
}

/// `m λ^(w/(k-1)+1)`, the work estimate of the de Bruijn engine.
pub fn dbg_estimate(m: usize, sigma: usize, k: usize, w: Width) -> f64 {
    let exp = w.0 as f64 / (k - 1) as f64 + 1.0;
    m as f64 * solver_dbg::lambda(sigma, k, w).powf(exp)
}

/// A graph bound to an engine.
pub struct Solver<'g> {
    g: &'g TimedGraph,
    dbg: Option<DeBruijnGraph>,
    engine: Engine,
    distinct: Distinct,
    max_states: Option<usize>,
}

impl<'g> Solver<'g> {
    pub fn new(g: &'g TimedGraph, opts: &SolveOptions) -> Result<Self> {
        let dbg = if g.is_directed() {
            DeBruijnGraph::from_graph(g.clone(), None).ok()
        } else {
            None
        };
        // node and edge semantics coincide unless some pair is joined twice
        let collapses = g.is_multigraph();
        let engine = match opts.engine {
            EngineChoice::Fixed(e) => e,
            EngineChoice::Auto => auto_engine(g, dbg.as_ref(), opts.distinct, collapses),
        };
        match engine {
            Engine::General if collapses && opts.distinct == Distinct::Nodes => {
                return Err(Error::Unsupported(
                    "the general engine counts edge-distinct trails on multigraphs".into(),
                ))
            }
            Engine::Dbg if dbg.is_none() => {
                return Err(Error::NotDeBruijn(
                    "node labels do not form a de Bruijn graph".into(),
                ))
            }
            Engine::Dbg if collapses && opts.distinct == Distinct::Edges => {
                return Err(Error::Unsupported(
                    "the de Bruijn engine counts node-distinct trails on multigraphs".into(),
                ))
            }
            _ => {}
        }
        Ok(Solver {
            g,
            dbg,
            engine,
            distinct: opts.distinct,
            max_states: opts.max_states,
        })
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    fn mode(&self) -> Mode {
        match self.distinct {
            Distinct::Nodes => Mode::NodeDistinct,
            Distinct::Edges => Mode::EdgeDistinct,
        }
    }

    fn dbg(&self) -> &DeBruijnGraph {
        self.dbg.as_ref().expect("checked in new")
    }

    /// The retained state graph (state-graph engines only); `None` when the
    /// density precheck already rules out every trail.
    pub fn state_graph(&self) -> Result<Option<StateDag>> {
        let built = match self.engine {
            Engine::General => GeneralEngine::new(
                self.g,
                GeneralOptions {
                    max_states: self.max_states,
                },
            )
            .and_then(|e| Ok(e.build_state_graph()?.dag)),
            Engine::Dbg => DbgEngine::new(
                self.dbg(),
                DbgOptions {
                    max_states: self.max_states,
                },
            )
            .and_then(|e| {
                e.require_uniform_costs()?;
                Ok(e.build_state_graph()?.dag)
            }),
            Engine::Oracle => {
                return Err(Error::Unsupported("the oracle has no state graph".into()))
            }
        };
        match built {
            Ok(dag) => Ok(Some(dag)),
            Err(Error::DensityViolation { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// Minimum cost and number of min-cost trails.
    pub fn count(&self) -> Result<Optimum> {
        match self.engine {
            Engine::General => {
                let opts = GeneralOptions {
                    max_states: self.max_states,
                };
                match GeneralEngine::new(self.g, opts) {
                    Ok(e) => e.count_min_cost(),
                    Err(Error::DensityViolation { .. }) => Ok(Optimum::infeasible()),
                    Err(e) => Err(e),
                }
            }
            Engine::Dbg => {
                if self.g.m() == 0 {
                    return solver_dbg::count_dbg(self.dbg());
                }
                match self.state_graph()? {
                    Some(dag) => dag.optimum(),
                    None => Ok(Optimum::infeasible()),
                }
            }
            Engine::Oracle => {
                let r = oracle::brute_solve(self.g, self.mode(), false)?;
                Ok(Optimum {
                    cost: r.min_cost,
                    count: r.count,
                })
            }
        }
    }

    /// Whether a trail exists within the graph's cost budget (if any).
    pub fn decide(&self) -> Result<bool> {
        let opt = match (self.engine, self.g.budget()) {
            (Engine::Dbg, None) => return solver_dbg::decide_dbg(self.dbg()),
            (Engine::General, None) => return solver_general::decide(self.g),
            _ => self.count()?,
        };
        Ok(match (opt.cost, self.g.budget()) {
            (Some(c), Some(b)) => c <= b,
            (Some(_), None) => true,
            (None, _) => false,
        })
    }

    /// First min-cost trail in enumeration order.
    pub fn solve(&self) -> Result<Option<TrailResult>> {
        Ok(self.enumerate(Some(1))?.into_iter().next())
    }

    pub fn enumerate(&self, limit: Option<usize>) -> Result<Vec<TrailResult>> {
        match self.engine {
            Engine::Oracle => {
                let r = oracle::brute_solve(self.g, self.mode(), true)?;
                let mut trails = r.trails.unwrap_or_default();
                trails.truncate(limit.unwrap_or(usize::MAX));
                Ok(trails)
            }
            _ => match self.state_graph()? {
                Some(dag) => dag.enumerate(self.g, limit),
                None => Ok(Vec::new()),
            },
        }
    }
}

fn auto_engine(
    g: &TimedGraph,
    dbg: Option<&DeBruijnGraph>,
    distinct: Distinct,
    collapses: bool,
) -> Engine {
    let Ok(w) = g.interval_width() else {
        return Engine::General;
    };
    let dbg_ok = dbg.is_some() && !(collapses && distinct == Distinct::Edges);
    let general_ok = !(collapses && distinct == Distinct::Nodes);
    match (dbg, dbg_ok, general_ok) {
        (Some(d), true, true) => {
            let ours = dbg_estimate(g.m(), d.alphabet().size(), d.k(), w);
            if ours < general_estimate(g.m(), w) {
                Engine::Dbg
            } else {
                Engine::General
            }
        }
        (_, true, false) => Engine::Dbg,
        (_, _, true) => Engine::General,
        _ => Engine::Oracle,
    }
}
