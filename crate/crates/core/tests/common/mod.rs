//! Brute-force reference implementations used by the integration tests.
//! Nothing here calls the solvers or the library oracle.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use timetrail::{EdgeId, TimedGraph};

/// One complete valid trail.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Walked {
    pub cost: i64,
    pub walk: Vec<usize>,
    pub edges: Vec<EdgeId>,
}

/// Every edge-distinct valid trail, regardless of cost or budget.
pub fn all_trails(g: &TimedGraph) -> Vec<Walked> {
    let mut out = Vec::new();
    let m = g.m();
    let mut used = vec![false; m];
    let mut walk = Vec::with_capacity(m + 1);
    let mut edges = Vec::with_capacity(m);
    for v in 0..g.n() {
        walk.push(v);
        extend(g, &mut used, &mut walk, &mut edges, 0, &mut out);
        walk.pop();
    }
    out
}

fn extend(
    g: &TimedGraph,
    used: &mut [bool],
    walk: &mut Vec<usize>,
    edges: &mut Vec<EdgeId>,
    cost: i64,
    out: &mut Vec<Walked>,
) {
    let t = edges.len();
    if t == g.m() {
        out.push(Walked {
            cost,
            walk: walk.clone(),
            edges: edges.clone(),
        });
        return;
    }
    let step = t + 1;
    // an unused edge whose window already closed can never be placed
    let dead = g
        .edges()
        .iter()
        .any(|e| !used[e.id.index()] && e.interval.is_none_or(|iv| iv.hi < step));
    if dead {
        return;
    }
    let cur = *walk.last().unwrap();
    for e in g.edges() {
        let i = e.id.index();
        if used[i] {
            continue;
        }
        let Some(c) = e.cost_at(step) else { continue };
        let mut nexts = Vec::new();
        if e.tail == cur {
            nexts.push(e.head);
        }
        if !g.is_directed() && e.head == cur && e.tail != e.head {
            nexts.push(e.tail);
        }
        for next in nexts {
            used[i] = true;
            walk.push(next);
            edges.push(e.id);
            extend(g, used, walk, edges, cost + c, out);
            edges.pop();
            walk.pop();
            used[i] = false;
        }
    }
}

/// Minimum cost, count at that cost and the min-cost trails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reference {
    pub min_cost: Option<i64>,
    pub edge_count: u64,
    pub node_count: u64,
    pub trails: Vec<Walked>,
    /// Distinct node sequences attaining the minimum.
    pub walks: BTreeSet<Vec<usize>>,
}

impl Reference {
    pub fn decide(&self, g: &TimedGraph) -> bool {
        match (self.min_cost, g.budget()) {
            (None, _) => false,
            (Some(c), Some(b)) => c <= b,
            (Some(_), None) => true,
        }
    }
}

pub fn reference(g: &TimedGraph) -> Reference {
    let all = all_trails(g);
    let min_cost = all.iter().map(|w| w.cost).min();
    let trails: Vec<Walked> = all
        .iter()
        .filter(|w| Some(w.cost) == min_cost)
        .cloned()
        .collect();
    // a node sequence attains the minimum when its cheapest copy assignment does
    let mut best: BTreeMap<&Vec<usize>, i64> = BTreeMap::new();
    for w in &all {
        let c = best.entry(&w.walk).or_insert(w.cost);
        *c = (*c).min(w.cost);
    }
    let walks: BTreeSet<Vec<usize>> = best
        .into_iter()
        .filter(|(_, c)| Some(*c) == min_cost)
        .map(|(w, _)| w.clone())
        .collect();
    Reference {
        min_cost,
        edge_count: trails.len() as u64,
        node_count: walks.len() as u64,
        trails,
        walks,
    }
}

/// Hamiltonian path by trying every permutation.
pub fn hamiltonian_path(n: usize, edge: impl Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    fn go(
        n: usize,
        edge: &dyn Fn(usize, usize) -> bool,
        path: &mut Vec<usize>,
        seen: &mut [bool],
    ) -> bool {
        if path.len() == n {
            return true;
        }
        for v in 0..n {
            if seen[v] || path.last().is_some_and(|&u| !edge(u, v)) {
                continue;
            }
            seen[v] = true;
            path.push(v);
            if go(n, edge, path, seen) {
                return true;
            }
            path.pop();
            seen[v] = false;
        }
        false
    }
    let mut path = Vec::new();
    go(n, &edge, &mut path, &mut vec![false; n]).then_some(path)
}

/// Whether an undirected graph admits a trail of cost at most `budget`.
///
/// Past the last step at which any edge's cost changes every edge has a fixed
/// cost, so only prefixes up to that step are enumerated (pruning any that
/// already exceed the budget); the rest is an Euler-trail existence check on
/// the unused edges. Costs must be non-negative.
pub fn undirected_within_budget(g: &TimedGraph, budget: i64) -> bool {
    let m = g.m();
    let settle = (1..=m)
        .rev()
        .find(|&t| g.edges().iter().any(|e| e.cost_at(t) != e.cost_at(m)))
        .unwrap_or(0);
    let mut used = vec![false; m];
    (0..g.n()).any(|v| prefix(g, settle, budget, v, 0, &mut used))
}

fn prefix(
    g: &TimedGraph,
    settle: usize,
    budget: i64,
    cur: usize,
    cost: i64,
    used: &mut [bool],
) -> bool {
    let t = used.iter().filter(|&&u| u).count();
    if cost > budget {
        return false;
    }
    if t == settle {
        return completes(g, settle, budget - cost, cur, used);
    }
    for e in g.edges() {
        let i = e.id.index();
        if used[i] || (e.tail != cur && e.head != cur) {
            continue;
        }
        let Some(c) = e.cost_at(t + 1) else { continue };
        used[i] = true;
        let next = if e.tail == cur { e.head } else { e.tail };
        if prefix(g, settle, budget, next, cost + c, used) {
            return true;
        }
        used[i] = false;
    }
    false
}

fn completes(g: &TimedGraph, settle: usize, slack: i64, start: usize, used: &[bool]) -> bool {
    let m = g.m();
    let rest: Vec<_> = g.edges().iter().filter(|e| !used[e.id.index()]).collect();
    if rest.is_empty() {
        return true;
    }
    let mut total = 0;
    for e in &rest {
        match e.cost_at(m) {
            // fixed from `settle + 1` on, so availability at m means throughout
            Some(c) if e.interval.is_some_and(|iv| iv.lo <= settle + 1) => total += c,
            _ => return false,
        }
    }
    if total > slack {
        return false;
    }
    let mut deg = vec![0usize; g.n()];
    let mut adj = vec![Vec::new(); g.n()];
    for e in &rest {
        deg[e.tail] += 1;
        deg[e.head] += 1;
        adj[e.tail].push(e.head);
        adj[e.head].push(e.tail);
    }
    let odd: Vec<usize> = (0..g.n()).filter(|&v| deg[v] % 2 == 1).collect();
    let parity_ok = odd.is_empty() || (odd.len() == 2 && odd.contains(&start));
    if !parity_ok || deg[start] == 0 {
        return false;
    }
    let mut seen = vec![false; g.n()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(v) = queue.pop_front() {
        for &u in &adj[v] {
            if !std::mem::replace(&mut seen[u], true) {
                queue.push_back(u);
            }
        }
    }
    (0..g.n()).all(|v| deg[v] == 0 || seen[v])
}

/// Distance from `from` to `to` and number of shortest paths, by BFS.
pub fn bfs_shortest(
    g: &TimedGraph,
    from: usize,
    to: usize,
    max_depth: usize,
) -> Option<(usize, u64)> {
    let mut dist: BTreeMap<usize, usize> = BTreeMap::from([(from, 0)]);
    let mut ways: BTreeMap<usize, u64> = BTreeMap::from([(from, 1)]);
    let mut frontier = vec![from];
    for d in 1..=max_depth {
        let mut next = Vec::new();
        for &v in &frontier {
            let w = ways[&v];
            for &id in g.adjacent(v) {
                let e = g.edge(id);
                if e.tail != v {
                    continue;
                }
                match dist.get(&e.head) {
                    None => {
                        dist.insert(e.head, d);
                        ways.insert(e.head, w);
                        next.push(e.head);
                    }
                    Some(&dd) if dd == d => *ways.get_mut(&e.head).unwrap() += w,
                    _ => {}
                }
            }
        }
        if dist.contains_key(&to) {
            return Some((dist[&to], ways[&to]));
        }
        frontier = next;
    }
    None
}

/// Strings over `letters` of the same length as `s` with the same k-mer
/// multiset, by exhaustive generation.
pub fn same_spectrum(s: &str, k: usize, letters: &[char]) -> BTreeSet<String> {
    let spectrum = |x: &[char]| {
        let mut v: Vec<String> = x.windows(k).map(|w| w.iter().collect()).collect();
        v.sort();
        v
    };
    let chars: Vec<char> = s.chars().collect();
    let want = spectrum(&chars);
    let len = chars.len();
    let sigma = letters.len();
    let mut out = BTreeSet::new();
    let total = sigma.pow(len as u32);
    let mut buf = vec![letters[0]; len];
    for mut code in 0..total {
        for slot in buf.iter_mut() {
            *slot = letters[code % sigma];
            code /= sigma;
        }
        if spectrum(&buf) == want {
            out.insert(buf.iter().collect());
        }
    }
    out
}

/// Sorted k-mers of a string.
pub fn kmers(s: &str, k: usize) -> Vec<String> {
    let chars: Vec<char> = s.chars().collect();
    let mut v: Vec<String> = chars.windows(k).map(|w| w.iter().collect()).collect();
    v.sort();
    v
}

/// All length-`t` prefixes `(walk, edges)` that respect availability and
/// leave no edge unused past the end of its interval.
pub fn prefixes(g: &TimedGraph, t: usize) -> Vec<(Vec<usize>, Vec<EdgeId>)> {
    fn go(
        g: &TimedGraph,
        t: usize,
        used: &mut [bool],
        walk: &mut Vec<usize>,
        edges: &mut Vec<EdgeId>,
        out: &mut Vec<(Vec<usize>, Vec<EdgeId>)>,
    ) {
        let placed = edges.len();
        let overdue = g
            .edges()
            .iter()
            .any(|e| !used[e.id.index()] && e.interval.is_none_or(|iv| iv.hi <= placed));
        if overdue {
            return;
        }
        if placed == t {
            out.push((walk.clone(), edges.clone()));
            return;
        }
        let cur = *walk.last().unwrap();
        for e in g.edges() {
            let i = e.id.index();
            if used[i] || !e.available_at(placed + 1) {
                continue;
            }
            let mut nexts = Vec::new();
            if e.tail == cur {
                nexts.push(e.head);
            }
            if !g.is_directed() && e.head == cur && e.tail != e.head {
                nexts.push(e.tail);
            }
            for next in nexts {
                used[i] = true;
                walk.push(next);
                edges.push(e.id);
                go(g, t, used, walk, edges, out);
                edges.pop();
                walk.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut used = vec![false; g.m()];
    for v in 0..g.n() {
        go(g, t, &mut used, &mut vec![v], &mut Vec::new(), &mut out);
    }
    out
}

/// `(endpoint, prefix edges available at t, sorted)` over all prefixes of length `t`.
pub fn prefix_states(g: &TimedGraph, t: usize) -> BTreeSet<(usize, Vec<EdgeId>)> {
    prefixes(g, t)
        .into_iter()
        .map(|(walk, edges)| {
            let mut s: Vec<EdgeId> = edges
                .into_iter()
                .filter(|&id| g.edge(id).available_at(t))
                .collect();
            s.sort();
            (*walk.last().unwrap(), s)
        })
        .collect()
}
