use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{invalid, Result};

/// Undirected graph with non-negative edge costs.
#[derive(Clone, Debug, Default)]
pub struct WeightedGraph {
    adj: Vec<Vec<(usize, f64)>>,
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        WeightedGraph { adj: vec![Vec::new(); n] }
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn add_edge(&mut self, a: usize, b: usize, cost: f64) {
        self.adj[a].push((b, cost));
        if a != b {
            self.adj[b].push((a, cost));
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adj[v]
    }
}

#[derive(Copy, Clone, PartialEq)]
struct State {
    cost: f64,
    vertex: usize,
}

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source costs; unreachable vertices stay at infinity.
pub fn shortest_costs(graph: &WeightedGraph, source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; graph.vertex_count()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(State { cost: 0.0, vertex: source });
    while let Some(State { cost, vertex }) = heap.pop() {
        if cost > dist[vertex] {
            continue;
        }
        for &(next, w) in graph.neighbors(vertex) {
            let c = cost + w;
            if c < dist[next] {
                dist[next] = c;
                heap.push(State { cost: c, vertex: next });
            }
        }
    }
    dist
}

/// Minimum-cost path from `source` to `target`. Among equal-cost paths the
/// lexicographically smallest vertex sequence is returned.
pub fn dijkstra(graph: &WeightedGraph, source: usize, target: usize) -> Result<Option<(Vec<usize>, f64)>> {
    let n = graph.vertex_count();
    if source >= n || target >= n {
        return Err(invalid(format!("vertex out of range for a {n}-vertex graph")));
    }
    if graph.adj.iter().flatten().any(|&(_, w)| !(w >= 0.0)) {
        return Err(invalid("edge costs must be non-negative"));
    }
    let dist = shortest_costs(graph, source);
    if !dist[target].is_finite() {
        return Ok(None);
    }
    let tight = |u: usize, v: usize, w: f64| dist[u].is_finite() && dist[u] + w == dist[v];

    // Vertices lying on some optimal source→target path.
    let mut useful = vec![false; n];
    useful[target] = true;
    let mut stack = vec![target];
    while let Some(v) = stack.pop() {
        for &(u, w) in graph.neighbors(v) {
            if !useful[u] && tight(u, v, w) {
                useful[u] = true;
                stack.push(u);
            }
        }
    }

    let mut path = vec![source];
    let mut on_path = vec![false; n];
    on_path[source] = true;
    let mut u = source;
    while u != target {
        let next = graph
            .neighbors(u)
            .iter()
            .filter(|&&(v, w)| useful[v] && !on_path[v] && tight(u, v, w))
            .map(|&(v, _)| v)
            .min();
        match next {
            Some(v) => {
                path.push(v);
                on_path[v] = true;
                u = v;
            }
            // Only reachable through zero-cost cycles; fall back to a plain predecessor walk.
            None => return Ok(Some((predecessor_path(graph, &dist, source, target), dist[target]))),
        }
    }
    Ok(Some((path, dist[target])))
}

fn predecessor_path(graph: &WeightedGraph, dist: &[f64], source: usize, target: usize) -> Vec<usize> {
    let mut path = vec![target];
    let mut v = target;
    let mut seen = vec![false; graph.vertex_count()];
    seen[v] = true;
    while v != source {
        let u = graph
            .neighbors(v)
            .iter()
            .filter(|&&(u, w)| !seen[u] && dist[u] + w == dist[v])
            .map(|&(u, _)| u)
            .min()
            .expect("tight predecessor exists");
        seen[u] = true;
        path.push(u);
        v = u;
    }
    path.reverse();
    path
}
