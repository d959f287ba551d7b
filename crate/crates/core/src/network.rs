//! Undirected weighted word-adjacency networks.
//!
//! Each distinct token becomes a vertex, numbered in order of first
//! occurrence. Each pair of neighbouring tokens adds 1 to the weight of the
//! edge between them; a token followed by itself adds nothing.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::preprocess::TokenStream;

pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    frequency: Vec<u64>,
    /// Sorted by neighbour id.
    adjacency: Vec<Vec<(VertexId, u64)>>,
    strength: Vec<u64>,
    edge_count: usize,
    total_weight: u64,
}

impl Network {
    /// Builds the adjacency network of a token stream.
    pub fn from_stream(stream: &TokenStream) -> Result<Self> {
        Self::from_tokens(&stream.tokens)
    }

    pub fn from_tokens<S: AsRef<str>>(tokens: &[S]) -> Result<Self> {
        if tokens.len() < 2 {
            return Err(Error::StreamTooShort(tokens.len()));
        }
        let mut labels = Vec::new();
        let mut index: HashMap<String, VertexId> = HashMap::new();
        let mut frequency = Vec::new();
        let mut ids = Vec::with_capacity(tokens.len());
        for t in tokens {
            let t = t.as_ref();
            let id = match index.get(t) {
                Some(&id) => id,
                None => {
                    let id = labels.len();
                    labels.push(t.to_string());
                    index.insert(t.to_string(), id);
                    frequency.push(0);
                    id
                }
            };
            frequency[id] += 1;
            ids.push(id);
        }

        let mut weights: HashMap<(VertexId, VertexId), u64> = HashMap::new();
        for pair in ids.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if a != b {
                *weights.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        let edges: Vec<_> = weights.into_iter().map(|((u, v), w)| (u, v, w)).collect();
        Ok(Self::assemble(labels, index, frequency, edges))
    }

    /// Builds a network from an explicit weighted edge list over vertices
    /// `0..labels.len()`. Parallel edges are summed; frequencies are set to 0.
    pub fn from_edges(labels: Vec<String>, edges: &[(VertexId, VertexId, u64)]) -> Result<Self> {
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateId(l.clone()));
            }
        }
        let mut weights: HashMap<(VertexId, VertexId), u64> = HashMap::new();
        for &(u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::UnknownVertex(format!("#{}", u.max(v))));
            }
            if u == v {
                return Err(Error::Config(format!("self-loop on vertex {u}")));
            }
            if w == 0 {
                return Err(Error::Config(format!("zero weight on edge {u}-{v}")));
            }
            *weights.entry((u.min(v), u.max(v))).or_insert(0) += w;
        }
        let edges: Vec<_> = weights.into_iter().map(|((u, v), w)| (u, v, w)).collect();
        Ok(Self::assemble(labels, index, vec![0; n], edges))
    }

    /// Convenience constructor labelling vertices `v0`, `v1`, ...
    pub fn from_indexed_edges(n: usize, edges: &[(VertexId, VertexId, u64)]) -> Result<Self> {
        Self::from_edges((0..n).map(|i| format!("v{i}")).collect(), edges)
    }

    fn assemble(
        labels: Vec<String>,
        index: HashMap<String, VertexId>,
        frequency: Vec<u64>,
        edges: Vec<(VertexId, VertexId, u64)>,
    ) -> Self {
        let n = labels.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut total_weight = 0;
        for &(u, v, w) in &edges {
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
            total_weight += w;
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let strength = adjacency.iter().map(|l| l.iter().map(|&(_, w)| w).sum()).collect();
        Self {
            labels,
            index,
            frequency,
            adjacency,
            strength,
            edge_count: edges.len(),
            total_weight,
        }
    }

    /// Number of vertices, N.
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// Number of edges, m.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sum of all edge weights, M.
    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex(&self, label: &str) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    pub fn require_vertex(&self, label: &str) -> Result<VertexId> {
        self.vertex(label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    /// Occurrence count of the vertex's token in the source stream.
    pub fn frequency(&self, v: VertexId) -> u64 {
        self.frequency[v]
    }

    /// `(neighbour, weight)` pairs sorted by neighbour id.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, u64)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn strength(&self, v: VertexId) -> u64 {
        self.strength[v]
    }

    /// Weight of the edge `u`-`v`, 0 when absent.
    pub fn weight(&self, u: VertexId, v: VertexId) -> u64 {
        self.adjacency[u]
            .binary_search_by_key(&v, |&(x, _)| x)
            .map(|i| self.adjacency[u][i].1)
            .unwrap_or(0)
    }

    /// Each edge once, as `(u, v, w)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, u64)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&(v, _)| u < v).map(move |&(v, w)| (u, v, w)))
    }

    /// Induced subgraph on the listed vertices. Vertex order follows the
    /// original numbering; weights and frequencies are kept.
    pub fn subnetwork<S: AsRef<str>>(&self, keep: &[S]) -> Result<Network> {
        let mut selected = vec![false; self.vertex_count()];
        for label in keep {
            selected[self.require_vertex(label.as_ref())?] = true;
        }
        Ok(self.induced(&selected))
    }

    pub(crate) fn induced(&self, selected: &[bool]) -> Network {
        let mut remap = vec![usize::MAX; self.vertex_count()];
        let mut labels = Vec::new();
        let mut frequency = Vec::new();
        let mut index = HashMap::new();
        for v in 0..self.vertex_count() {
            if selected[v] {
                remap[v] = labels.len();
                index.insert(self.labels[v].clone(), labels.len());
                labels.push(self.labels[v].clone());
                frequency.push(self.frequency[v]);
            }
        }
        let edges: Vec<_> = self
            .edges()
            .filter(|&(u, v, _)| selected[u] && selected[v])
            .map(|(u, v, w)| (remap[u], remap[v], w))
            .collect();
        Self::assemble(labels, index, frequency, edges)
    }

    /// Plain-text dump: a `vertices N` header, one `label<TAB>frequency`
    /// line per vertex in id order, an `edges m` header, then `u v w` lines.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "vertices {}", self.vertex_count());
        for (label, f) in self.labels.iter().zip(&self.frequency) {
            let _ = writeln!(out, "{label}\t{f}");
        }
        let _ = writeln!(out, "edges {}", self.edge_count);
        for (u, v, w) in self.edges() {
            let _ = writeln!(out, "{u} {v} {w}");
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Network> {
        let bad = |msg: String| Error::Config(format!("edge list: {msg}"));
        let mut lines = text.lines();
        let header = |line: Option<&str>, key: &str| -> Result<usize> {
            line.and_then(|l| l.strip_prefix(key))
                .and_then(|rest| rest.trim().parse().ok())
                .ok_or_else(|| bad(format!("expected `{key} <count>`")))
        };
        let n = header(lines.next(), "vertices ")?;
        let mut labels = Vec::with_capacity(n);
        let mut frequency = Vec::with_capacity(n);
        for _ in 0..n {
            let line = lines.next().ok_or_else(|| bad("truncated vertex list".into()))?;
            let (label, f) = line
                .rsplit_once('\t')
                .ok_or_else(|| bad(format!("bad vertex line {line:?}")))?;
            labels.push(label.to_string());
            frequency.push(f.parse().map_err(|_| bad(format!("bad frequency {f:?}")))?);
        }
        let m = header(lines.next(), "edges ")?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let line = lines.next().ok_or_else(|| bad("truncated edge list".into()))?;
            let parts: Vec<u64> = line
                .split_whitespace()
                .map(|p| p.parse().map_err(|_| bad(format!("bad edge line {line:?}"))))
                .collect::<Result<_>>()?;
            if parts.len() != 3 {
                return Err(bad(format!("bad edge line {line:?}")));
            }
            edges.push((parts[0] as usize, parts[1] as usize, parts[2]));
        }
        let mut net = Network::from_edges(labels, &edges)?;
        net.frequency = frequency;
        Ok(net)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preprocess::shuffle_tokens;
    use proptest::prelude::*;

    fn net(tokens: &[&str]) -> Network {
        Network::from_tokens(tokens).unwrap()
    }

    #[test]
    fn toy_stream() {
        let g = net(&["a", "b", "a", "#dot"]);
        let (a, b, dot) = (
            g.vertex("a").unwrap(),
            g.vertex("b").unwrap(),
            g.vertex("#dot").unwrap(),
        );
        assert_eq!((a, b, dot), (0, 1, 2));
        assert_eq!(g.weight(a, b), 2);
        assert_eq!(g.weight(a, dot), 1);
        assert_eq!(g.weight(b, dot), 0);
        assert_eq!((g.strength(a), g.strength(b), g.strength(dot)), (3, 2, 1));
        assert_eq!((g.frequency(a), g.frequency(b)), (2, 1));
        assert_eq!((g.vertex_count(), g.edge_count(), g.total_weight()), (3, 2, 3));
    }

    #[test]
    fn identical_neighbours_are_skipped() {
        let g = net(&["a", "a", "b"]);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.weight(0, 1), 1);
        assert_eq!(g.degree(0), 1);
        assert_eq!(g.frequency(0), 2);
    }

    #[test]
    fn minimal_stream() {
        let g = net(&["a", "b"]);
        assert_eq!((g.vertex_count(), g.edge_count(), g.total_weight()), (2, 1, 1));
        assert!(matches!(Network::from_tokens(&["a"]), Err(Error::StreamTooShort(1))));
    }

    #[test]
    fn subnetwork_examples() {
        let tri = Network::from_indexed_edges(3, &[(0, 1, 4), (1, 2, 1), (0, 2, 2)]).unwrap();
        assert_eq!(tri.subnetwork(tri.labels()).unwrap(), tri);

        let ab = tri.subnetwork(&["v0", "v1"]).unwrap();
        assert_eq!(ab.vertex_count(), 2);
        assert_eq!(ab.edge_count(), 1);
        assert_eq!(ab.weight(0, 1), 4);

        let a = tri.subnetwork(&["v0"]).unwrap();
        assert_eq!((a.vertex_count(), a.edge_count()), (1, 0));
        assert_eq!((a.degree(0), a.strength(0)), (0, 0));

        assert!(matches!(tri.subnetwork(&["zz"]), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn edge_list_round_trip() {
        let g = net(&["the", "cat", "#com", "the", "dog", "#dot"]);
        let back = Network::from_edge_list(&g.to_edge_list()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(Network::from_indexed_edges(2, &[(0, 0, 1)]).is_err());
        assert!(Network::from_indexed_edges(2, &[(0, 1, 0)]).is_err());
        assert!(Network::from_indexed_edges(2, &[(0, 2, 1)]).is_err());
    }

    fn stream() -> impl Strategy<Value = Vec<String>> {
        proptest::collection::vec(prop::sample::select(vec!["a", "b", "c", "d", "e", "#dot"]), 2..80)
            .prop_map(|v| v.into_iter().map(String::from).collect())
    }

    proptest! {
        #[test]
        fn handshake_and_weight_count(tokens in stream()) {
            let g = Network::from_tokens(&tokens).unwrap();
            let total: u64 = (0..g.vertex_count()).map(|v| g.strength(v)).sum();
            prop_assert_eq!(total, 2 * g.total_weight());
            let degrees: usize = (0..g.vertex_count()).map(|v| g.degree(v)).sum();
            prop_assert_eq!(degrees, 2 * g.edge_count());
            let repeats = tokens.windows(2).filter(|w| w[0] == w[1]).count() as u64;
            prop_assert_eq!(g.total_weight(), tokens.len() as u64 - 1 - repeats);
            for (u, v, w) in g.edges() {
                prop_assert!(u != v && w >= 1);
                prop_assert_eq!(g.weight(u, v), g.weight(v, u));
            }
            for v in 0..g.vertex_count() {
                prop_assert!(g.frequency(v) >= 1);
            }
        }

        #[test]
        fn strength_is_twice_frequency_without_repeats(tokens in stream()) {
            let mut tokens = tokens;
            tokens.dedup();
            prop_assume!(tokens.len() >= 2);
            let g = Network::from_tokens(&tokens).unwrap();
            let first = g.vertex(&tokens[0]).unwrap();
            let last = g.vertex(tokens.last().unwrap()).unwrap();
            for v in 0..g.vertex_count() {
                let endpoints = (v == first) as u64 + (v == last) as u64;
                prop_assert_eq!(g.strength(v), 2 * g.frequency(v) - endpoints);
            }
        }

        #[test]
        fn shuffling_keeps_vertices_and_frequencies(tokens in stream(), seed in any::<u64>()) {
            let s = TokenStream::new("d", tokens);
            let g = Network::from_stream(&s).unwrap();
            let h = Network::from_stream(&shuffle_tokens(&s, seed).unwrap()).unwrap();
            prop_assert_eq!(g.vertex_count(), h.vertex_count());
            for v in 0..g.vertex_count() {
                let u = h.vertex(g.label(v)).unwrap();
                prop_assert_eq!(g.frequency(v), h.frequency(u));
            }
        }
    }
}
