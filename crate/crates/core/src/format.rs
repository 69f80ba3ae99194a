//! Line-oriented text formats.
//!
//! Instance files:
//!
//! ```text
//! et v1 directed interval
//! # optional node lines fix the node order and declare isolated nodes
//! n a
//! e a b 1:2
//! e b c -
//! budget 3
//! ```
//!
//! In cost files every available edge line ends with its cost vector,
//! `e a b 2:4 5,0,-1`. Edge ids follow line order. Source graphs for the
//! reductions use `src v1 <directed|undirected>` with `n` and `e a b` lines.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, GraphBuilder, Interval, Orientation, TimedGraph};
use crate::reductions::SourceGraph;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = line.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn parse_interval(line: usize, s: &str) -> Result<Option<Interval>> {
    if s == "-" {
        return Ok(None);
    }
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| parse_err(line, format!("expected lo:hi, got `{s}`")))?;
    let num = |x: &str| {
        x.parse::<usize>()
            .map_err(|_| parse_err(line, format!("bad time step `{x}`")))
    };
    let (lo, hi) = (num(lo)?, num(hi)?);
    if lo < 1 || lo > hi {
        return Err(parse_err(
            line,
            format!("empty or zero-based interval `{s}`"),
        ));
    }
    Ok(Some(Interval::new(lo, hi)))
}

pub fn parse_instance(text: &str) -> Result<TimedGraph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let (orientation, costed) = match header.as_slice() {
        ["et", "v1", o, c] => {
            let o = match *o {
                "directed" => Orientation::Directed,
                "undirected" => Orientation::Undirected,
                _ => return Err(parse_err(hl, format!("unknown orientation `{o}`"))),
            };
            let c = match *c {
                "interval" => false,
                "cost" => true,
                _ => return Err(parse_err(hl, format!("unknown form `{c}`"))),
            };
            (o, c)
        }
        _ => {
            return Err(parse_err(
                hl,
                "expected `et v1 <directed|undirected> <interval|cost>`",
            ))
        }
    };
    let mut b = GraphBuilder::new(orientation);
    let mut budget_seen = false;
    for (ln, words) in lines {
        if budget_seen {
            return Err(parse_err(ln, "nothing may follow the budget line"));
        }
        match words.as_slice() {
            ["n", token] => {
                b.add_node(token)
                    .map_err(|e| parse_err(ln, e.to_string()))?;
            }
            ["e", tail, head, iv, rest @ ..] => {
                let interval = parse_interval(ln, iv)?;
                let costs = match (costed, interval, rest) {
                    (false, _, []) | (true, None, []) => None,
                    (true, Some(iv), [vec]) => {
                        let costs = vec
                            .split(',')
                            .map(|c| {
                                c.parse::<i64>()
                                    .map_err(|_| parse_err(ln, format!("bad cost `{c}`")))
                            })
                            .collect::<Result<Vec<i64>>>()?;
                        if costs.len() != iv.len() {
                            return Err(parse_err(
                                ln,
                                format!(
                                    "{} costs for an interval of length {}",
                                    costs.len(),
                                    iv.len()
                                ),
                            ));
                        }
                        Some(costs)
                    }
                    (true, Some(_), []) => return Err(parse_err(ln, "missing cost vector")),
                    _ => return Err(parse_err(ln, "unexpected fields after the interval")),
                };
                let (t, h) = (b.intern(tail), b.intern(head));
                b.push_edge(t, h, interval, costs);
            }
            ["budget", v] => {
                let v = v
                    .parse::<i64>()
                    .map_err(|_| parse_err(ln, format!("bad budget `{v}`")))?;
                b.set_budget(Some(v));
                budget_seen = true;
            }
            _ => {
                return Err(parse_err(
                    ln,
                    format!("unrecognized line `{}`", words.join(" ")),
                ))
            }
        }
    }
    b.build().map_err(|e| match e {
        Error::Parse { .. } => e,
        other => parse_err(0, other.to_string()),
    })
}

/// Serializes `g`; `parse_instance` returns an equal graph.
pub fn write_instance(g: &TimedGraph) -> String {
    let costed = g.has_costs();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "et v1 {} {}",
        if g.is_directed() {
            "directed"
        } else {
            "undirected"
        },
        if costed { "cost" } else { "interval" }
    );
    // node lines only when edge order alone would not reproduce the nodes
    let mut implied: Vec<usize> = Vec::with_capacity(g.n());
    let mut seen = vec![false; g.n()];
    for e in g.edges() {
        for v in [e.tail, e.head] {
            if !std::mem::replace(&mut seen[v], true) {
                implied.push(v);
            }
        }
    }
    if implied != (0..g.n()).collect::<Vec<_>>() {
        for v in g.nodes() {
            let _ = writeln!(out, "n {v}");
        }
    }
    for e in g.edges() {
        let (t, h) = (g.node_token(e.tail), g.node_token(e.head));
        match e.interval {
            None => {
                let _ = writeln!(out, "e {t} {h} -");
            }
            Some(iv) => {
                let _ = write!(out, "e {t} {h} {iv}");
                if costed {
                    let costs: Vec<String> = (iv.lo..=iv.hi)
                        .map(|s| e.cost_at(s).unwrap().to_string())
                        .collect();
                    let _ = write!(out, " {}", costs.join(","));
                }
                out.push('\n');
            }
        }
    }
    if let Some(b) = g.budget() {
        let _ = writeln!(out, "budget {b}");
    }
    out
}

/// One string per non-empty line, surrounding whitespace trimmed.
pub fn parse_strings(text: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let s = line.trim();
        if s.is_empty() {
            continue;
        }
        if s.split_whitespace().nth(1).is_some() {
            return Err(parse_err(i + 1, "whitespace inside a string"));
        }
        out.push(s.to_string());
    }
    Ok(out)
}

/// `<kmer> <lo>:<hi>` lines.
pub fn parse_knowledge(text: &str) -> Result<Vec<(String, Interval)>> {
    content_lines(text)
        .map(|(ln, words)| match words.as_slice() {
            [kmer, iv] => match parse_interval(ln, iv)? {
                Some(iv) => Ok((kmer.to_string(), iv)),
                None => Err(parse_err(ln, "knowledge intervals cannot be empty")),
            },
            _ => Err(parse_err(ln, "expected `<kmer> <lo>:<hi>`")),
        })
        .collect()
}

pub fn write_knowledge(know: &[(String, Interval)]) -> String {
    know.iter().map(|(k, iv)| format!("{k} {iv}\n")).collect()
}

pub fn parse_source_graph(text: &str) -> Result<SourceGraph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let directed = match header.as_slice() {
        ["src", "v1", "directed"] => true,
        ["src", "v1", "undirected"] => false,
        _ => return Err(parse_err(hl, "expected `src v1 <directed|undirected>`")),
    };
    let mut src = SourceGraph::new(directed, Vec::new());
    let intern = |src: &mut SourceGraph, t: &str| match src.nodes.iter().position(|x| x == t) {
        Some(i) => i,
        None => {
            src.nodes.push(t.to_string());
            src.nodes.len() - 1
        }
    };
    for (ln, words) in lines {
        match words.as_slice() {
            ["n", t] => {
                if src.nodes.iter().any(|x| x == t) {
                    return Err(parse_err(ln, format!("duplicate node `{t}`")));
                }
                intern(&mut src, t);
            }
            ["e", a, b] => {
                let (a, b) = (intern(&mut src, a), intern(&mut src, b));
                src.add_edge(a, b);
            }
            _ => {
                return Err(parse_err(
                    ln,
                    format!("unrecognized line `{}`", words.join(" ")),
                ))
            }
        }
    }
    Ok(src)
}

pub fn write_source_graph(src: &SourceGraph) -> String {
    let mut out = format!(
        "src v1 {}\n",
        if src.directed {
            "directed"
        } else {
            "undirected"
        }
    );
    for v in &src.nodes {
        let _ = writeln!(out, "n {v}");
    }
    for &(a, b) in &src.edges {
        let _ = writeln!(out, "e {} {}", src.nodes[a], src.nodes[b]);
    }
    out
}

/// Whitespace-separated node tokens, resolved against `src`.
pub fn parse_node_path(text: &str, src: &SourceGraph) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|t| {
            src.nodes
                .iter()
                .position(|x| x == t)
                .ok_or_else(|| Error::UnknownNode(t.to_string()))
        })
        .collect()
}

/// Whitespace-separated edge ids.
pub fn parse_trail(text: &str) -> Result<Vec<EdgeId>> {
    content_lines(text)
        .flat_map(|(ln, words)| words.into_iter().map(move |w| (ln, w)))
        .map(|(ln, w)| {
            w.parse::<u32>()
                .ok()
                .filter(|&id| id >= 1)
                .map(EdgeId)
                .ok_or_else(|| parse_err(ln, format!("bad edge id `{w}`")))
        })
        .collect()
}

pub fn write_trail(edges: &[EdgeId]) -> String {
    let ids: Vec<String> = edges.iter().map(ToString::to_string).collect();
    format!("{}\n", ids.join(" "))
}
