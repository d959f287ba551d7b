//! Shortest-path distances and average shortest path lengths.
//!
//! Unweighted distance counts hops; weighted distance sums `1 / w` along the
//! path, so heavy edges are short.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::network::{Network, VertexId};
use crate::numeric::{self, CompensatedSum};

use super::{check_vertex, Weighting};

/// How averages treat vertices that cannot be reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PathMode {
    /// Disconnected networks are an error.
    Strict,
    /// Average over what is reachable and flag the result as partial.
    #[default]
    Component,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathAverage {
    pub value: f64,
    /// Number of vertices the average is taken over (targets for a local
    /// average, sources for a global one).
    pub count: usize,
    /// False when unreachable vertices were left out.
    pub complete: bool,
}

/// Distance from `source` to every vertex; `None` for unreachable ones.
pub fn shortest_path_lengths(net: &Network, source: VertexId, weighting: Weighting) -> Result<Vec<Option<f64>>> {
    check_vertex(net, source)?;
    Ok(match weighting {
        Weighting::Unweighted => bfs(net, source)
            .into_iter()
            .map(|d| (d != u32::MAX).then_some(d as f64))
            .collect(),
        Weighting::Weighted => dijkstra(net, source)
            .into_iter()
            .map(|d| d.is_finite().then_some(d))
            .collect(),
    })
}

fn bfs(net: &Network, source: VertexId) -> Vec<u32> {
    let mut dist = vec![u32::MAX; net.vertex_count()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        let next = dist[v] + 1;
        for &(u, _) in net.neighbors(v) {
            if dist[u] == u32::MAX {
                dist[u] = next;
                queue.push_back(u);
            }
        }
    }
    dist
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    vertex: VertexId,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn dijkstra(net: &Network, source: VertexId) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; net.vertex_count()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Entry {
        dist: 0.0,
        vertex: source,
    });
    while let Some(Entry { dist: d, vertex: v }) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &(u, w) in net.neighbors(v) {
            let candidate = d + 1.0 / w as f64;
            if candidate < dist[u] {
                dist[u] = candidate;
                heap.push(Entry {
                    dist: candidate,
                    vertex: u,
                });
            }
        }
    }
    dist
}

/// Sum of finite distances from `source` to other vertices and how many
/// vertices were reached.
fn distance_sum(net: &Network, source: VertexId, weighting: Weighting) -> (f64, usize) {
    match weighting {
        Weighting::Unweighted => {
            let d = bfs(net, source);
            let (sum, count) = d
                .iter()
                .filter(|&&x| x != u32::MAX && x != 0)
                .fold((0u64, 0usize), |(s, c), &x| (s + x as u64, c + 1));
            (sum as f64, count)
        }
        Weighting::Weighted => {
            let d = dijkstra(net, source);
            let mut sum = CompensatedSum::new();
            let mut count = 0;
            for (v, &x) in d.iter().enumerate() {
                if v != source && x.is_finite() {
                    sum.add(x);
                    count += 1;
                }
            }
            (sum.value(), count)
        }
    }
}

/// Mean distance from `v` to every other vertex.
pub fn avg_shortest_path_local(
    net: &Network,
    v: VertexId,
    weighting: Weighting,
    mode: PathMode,
) -> Result<PathAverage> {
    check_vertex(net, v)?;
    let others = net.vertex_count() - 1;
    let (sum, reached) = distance_sum(net, v, weighting);
    if reached == 0 {
        return Err(Error::IsolatedVertex(net.label(v).to_string()));
    }
    if reached < others && mode == PathMode::Strict {
        return Err(Error::Disconnected);
    }
    Ok(PathAverage {
        value: sum / reached as f64,
        count: reached,
        complete: reached == others,
    })
}

/// Connected components as a component id per vertex, numbered in order of
/// their lowest vertex.
pub fn components(net: &Network) -> (Vec<usize>, usize) {
    let n = net.vertex_count();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = count;
        stack.push(start);
        while let Some(v) = stack.pop() {
            for &(u, _) in net.neighbors(v) {
                if comp[u] == usize::MAX {
                    comp[u] = count;
                    stack.push(u);
                }
            }
        }
        count += 1;
    }
    (comp, count)
}

pub fn is_connected(net: &Network) -> bool {
    net.vertex_count() > 0 && components(net).1 == 1
}

/// Largest connected component as an induced subnetwork; ties go to the
/// component containing the lowest vertex id.
pub fn largest_component(net: &Network) -> Network {
    let (comp, count) = components(net);
    let mut sizes = vec![0usize; count];
    for &c in &comp {
        sizes[c] += 1;
    }
    let best = sizes
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(c, _)| c)
        .unwrap_or(0);
    let selected: Vec<bool> = comp.iter().map(|&c| c == best).collect();
    net.induced(&selected)
}

/// Mean of the local average path lengths over all vertices. In component
/// mode a disconnected network is reduced to its largest component.
pub fn avg_shortest_path_global(net: &Network, weighting: Weighting, mode: PathMode) -> Result<PathAverage> {
    let n = net.vertex_count();
    if n == 0 {
        return Err(Error::EmptyNetwork);
    }
    if !is_connected(net) {
        if mode == PathMode::Strict {
            return Err(Error::Disconnected);
        }
        let core = largest_component(net);
        let mut avg = connected_global_average(&core, weighting)?;
        avg.complete = false;
        return Ok(avg);
    }
    connected_global_average(net, weighting)
}

fn connected_global_average(net: &Network, weighting: Weighting) -> Result<PathAverage> {
    let n = net.vertex_count();
    if n < 2 {
        return Err(Error::IsolatedVertex(net.labels().first().cloned().unwrap_or_default()));
    }
    let locals: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|v| {
            let (sum, reached) = distance_sum(net, v, weighting);
            debug_assert_eq!(reached, n - 1);
            sum / (n - 1) as f64
        })
        .collect();
    Ok(PathAverage {
        value: numeric::sum(locals) / n as f64,
        count: n,
        complete: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, edges: &[(usize, usize, u64)]) -> Network {
        Network::from_indexed_edges(n, edges).unwrap()
    }

    #[test]
    fn single_edge_and_path_distances() {
        let e = g(2, &[(0, 1, 4)]);
        assert_eq!(
            shortest_path_lengths(&e, 0, Weighting::Weighted).unwrap()[1],
            Some(0.25)
        );
        let p = g(3, &[(0, 1, 1), (1, 2, 1)]);
        assert_eq!(
            shortest_path_lengths(&p, 0, Weighting::Unweighted).unwrap()[2],
            Some(2.0)
        );
    }

    #[test]
    fn weighted_route_choice() {
        // a=0, b=1, c=2; direct a-b costs 1, a-c-b costs 1 + 0.1
        let t = g(3, &[(0, 1, 1), (0, 2, 1), (1, 2, 10)]);
        let d = shortest_path_lengths(&t, 0, Weighting::Weighted).unwrap();
        assert_eq!(d[1], Some(1.0));
        let local = avg_shortest_path_local(&t, 0, Weighting::Weighted, PathMode::Strict).unwrap();
        assert_eq!(local.value, 1.0);
    }

    #[test]
    fn local_and_global_averages_on_path() {
        let p = g(3, &[(0, 1, 1), (1, 2, 1)]);
        let l = |v| {
            avg_shortest_path_local(&p, v, Weighting::Unweighted, PathMode::Strict)
                .unwrap()
                .value
        };
        assert_eq!(l(1), 1.0);
        assert_eq!(l(0), 1.5);
        let global = avg_shortest_path_global(&p, Weighting::Unweighted, PathMode::Strict).unwrap();
        assert!((global.value - 4.0 / 3.0).abs() < 1e-15);
        let k3 = g(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]);
        assert_eq!(
            avg_shortest_path_global(&k3, Weighting::Unweighted, PathMode::Strict)
                .unwrap()
                .value,
            1.0
        );
        let e = g(2, &[(0, 1, 2)]);
        assert_eq!(
            avg_shortest_path_global(&e, Weighting::Weighted, PathMode::Strict)
                .unwrap()
                .value,
            0.5
        );
    }

    #[test]
    fn disconnected_networks() {
        // 0-1-2 and 3-4
        let net = g(5, &[(0, 1, 1), (1, 2, 1), (3, 4, 1)]);
        assert!(matches!(
            avg_shortest_path_local(&net, 0, Weighting::Unweighted, PathMode::Strict),
            Err(Error::Disconnected)
        ));
        let local = avg_shortest_path_local(&net, 0, Weighting::Unweighted, PathMode::Component).unwrap();
        assert_eq!((local.value, local.count, local.complete), (1.5, 2, false));
        assert!(matches!(
            avg_shortest_path_global(&net, Weighting::Unweighted, PathMode::Strict),
            Err(Error::Disconnected)
        ));
        let global = avg_shortest_path_global(&net, Weighting::Unweighted, PathMode::Component).unwrap();
        assert!((global.value - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!((global.count, global.complete), (3, false));

        let lonely = g(2, &[]);
        assert!(matches!(
            avg_shortest_path_local(&lonely, 0, Weighting::Unweighted, PathMode::Component),
            Err(Error::IsolatedVertex(_))
        ));
        let d = shortest_path_lengths(&lonely, 0, Weighting::Weighted).unwrap();
        assert_eq!(d, vec![Some(0.0), None]);
    }

    #[test]
    fn components_are_numbered_by_lowest_vertex() {
        let net = g(5, &[(3, 4, 1), (0, 2, 1)]);
        let (comp, count) = components(&net);
        assert_eq!(count, 3);
        assert_eq!(comp, vec![0, 1, 0, 2, 2]);
        assert_eq!(largest_component(&net).labels(), ["v0", "v2"]);
    }
}
