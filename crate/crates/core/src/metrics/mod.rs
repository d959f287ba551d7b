//! Network characteristics: degree and strength, clustering, average
//! shortest path length, assortativity and modularity, each in an
//! unweighted and a weighted version.

pub mod assortativity;
pub mod clustering;
pub mod modularity;
pub mod paths;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{Network, VertexId};

pub use assortativity::assortativity;
pub use clustering::{
    all_local_clustering, clustering_unweighted, clustering_weighted, global_clustering, local_clustering,
    LocalClustering,
};
pub use modularity::{modularity, modularity_louvain, CommunityResult, Partition};
pub use paths::{avg_shortest_path_global, avg_shortest_path_local, shortest_path_lengths, PathAverage, PathMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    Unweighted,
    Weighted,
}

pub(crate) fn check_vertex(net: &Network, v: VertexId) -> Result<()> {
    if v < net.vertex_count() {
        Ok(())
    } else {
        Err(Error::UnknownVertex(format!("#{v}")))
    }
}

pub fn degree(net: &Network, v: VertexId) -> Result<usize> {
    check_vertex(net, v)?;
    Ok(net.degree(v))
}

pub fn strength(net: &Network, v: VertexId) -> Result<u64> {
    check_vertex(net, v)?;
    Ok(net.strength(v))
}

/// Local characteristics of one vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexMetrics {
    pub degree: usize,
    pub strength: u64,
    pub clustering: LocalClustering,
    pub path_unweighted: Option<f64>,
    pub path_weighted: Option<f64>,
}

/// All local characteristics of `v`. Path lengths use component mode and
/// are `None` for an isolated vertex.
pub fn vertex_metrics(net: &Network, v: VertexId) -> Result<VertexMetrics> {
    check_vertex(net, v)?;
    let path = |w| {
        avg_shortest_path_local(net, v, w, PathMode::Component)
            .ok()
            .map(|p| p.value)
    };
    Ok(VertexMetrics {
        degree: net.degree(v),
        strength: net.strength(v),
        clustering: local_clustering(net, v)?,
        path_unweighted: path(Weighting::Unweighted),
        path_weighted: path(Weighting::Weighted),
    })
}

/// Global characteristics of a network. `None` marks an undefined value.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GlobalMetrics {
    pub clustering_unweighted: Option<f64>,
    pub clustering_weighted: Option<f64>,
    pub path_unweighted: Option<f64>,
    pub path_weighted: Option<f64>,
    pub assortativity_unweighted: Option<f64>,
    pub assortativity_weighted: Option<f64>,
    pub modularity_unweighted: Option<f64>,
    pub modularity_weighted: Option<f64>,
}

/// Which global characteristics to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GlobalSelection {
    pub clustering: [bool; 2],
    pub path: [bool; 2],
    pub assortativity: [bool; 2],
    pub modularity: [bool; 2],
    pub louvain_seed: u64,
    pub louvain_restarts: usize,
}

impl GlobalSelection {
    /// Everything except the weighted global path length.
    pub fn cheap(louvain_seed: u64) -> Self {
        Self {
            clustering: [true; 2],
            path: [true, false],
            assortativity: [true; 2],
            modularity: [true; 2],
            louvain_seed,
            louvain_restarts: 1,
        }
    }

    pub fn all(louvain_seed: u64) -> Self {
        Self {
            path: [true; 2],
            ..Self::cheap(louvain_seed)
        }
    }

    /// Everything except path lengths.
    pub fn non_path(louvain_seed: u64) -> Self {
        Self {
            path: [false; 2],
            ..Self::cheap(louvain_seed)
        }
    }
}

pub fn global_metrics(net: &Network, select: &GlobalSelection) -> Result<GlobalMetrics> {
    let mut out = GlobalMetrics::default();
    if select.clustering.iter().any(|&b| b) {
        let (u, w) = clustering::global_clustering_both(net)?;
        out.clustering_unweighted = select.clustering[0].then_some(u);
        out.clustering_weighted = select.clustering[1].then_some(w);
    }
    let modes = [Weighting::Unweighted, Weighting::Weighted];
    for (i, &w) in modes.iter().enumerate() {
        if select.path[i] {
            let v = avg_shortest_path_global(net, w, PathMode::Component)
                .ok()
                .map(|p| p.value);
            match w {
                Weighting::Unweighted => out.path_unweighted = v,
                Weighting::Weighted => out.path_weighted = v,
            }
        }
        if select.assortativity[i] {
            let v = match assortativity(net, w) {
                Ok(r) => r,
                Err(Error::Edgeless) => None,
                Err(e) => return Err(e),
            };
            match w {
                Weighting::Unweighted => out.assortativity_unweighted = v,
                Weighting::Weighted => out.assortativity_weighted = v,
            }
        }
        if select.modularity[i] {
            let v = match modularity_louvain(net, w, select.louvain_seed, select.louvain_restarts) {
                Ok(r) => Some(r.modularity),
                Err(Error::Edgeless) => None,
                Err(e) => return Err(e),
            };
            match w {
                Weighting::Unweighted => out.modularity_unweighted = v,
                Weighting::Weighted => out.modularity_weighted = v,
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_and_strength_on_toy_stream() {
        let net = Network::from_tokens(&["a", "b", "a", "#dot"]).unwrap();
        let a = net.vertex("a").unwrap();
        assert_eq!(degree(&net, a).unwrap(), 2);
        assert_eq!(strength(&net, a).unwrap(), 3);
        assert!(matches!(degree(&net, 9), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn isolated_and_uniform_cases() {
        let isolated = Network::from_indexed_edges(2, &[]).unwrap();
        assert_eq!((degree(&isolated, 0).unwrap(), strength(&isolated, 0).unwrap()), (0, 0));
        let tri = Network::from_indexed_edges(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap();
        for v in 0..3 {
            assert_eq!(degree(&tri, v).unwrap() as u64, strength(&tri, v).unwrap());
            assert_eq!(degree(&tri, v).unwrap(), 2);
        }
    }

    #[test]
    fn global_metrics_on_triangle() {
        let tri = Network::from_indexed_edges(3, &[(0, 1, 2), (1, 2, 2), (0, 2, 2)]).unwrap();
        let g = global_metrics(&tri, &GlobalSelection::all(0)).unwrap();
        assert_eq!(g.clustering_unweighted, Some(1.0));
        assert_eq!(g.clustering_weighted, Some(1.0));
        assert_eq!(g.path_unweighted, Some(1.0));
        assert_eq!(g.path_weighted, Some(0.5));
        assert_eq!(g.assortativity_unweighted, None);
        assert_eq!(g.modularity_unweighted, Some(0.0));
        let v = vertex_metrics(&tri, 0).unwrap();
        assert_eq!((v.degree, v.strength, v.path_weighted), (2, 4, Some(0.5)));
    }
}
