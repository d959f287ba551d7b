//! Local and global clustering coefficients, unweighted and Barrat-weighted.

use crate::error::{Error, Result};
use crate::network::{Network, VertexId};
use crate::numeric;

use super::{check_vertex, Weighting};

/// Both clustering coefficients of one vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalClustering {
    pub unweighted: f64,
    pub weighted: f64,
}

impl LocalClustering {
    pub fn get(&self, weighting: Weighting) -> f64 {
        match weighting {
            Weighting::Unweighted => self.unweighted,
            Weighting::Weighted => self.weighted,
        }
    }
}

/// Scratch space holding the focal vertex's edge weights, indexed by
/// neighbour. Reused across vertices to avoid reallocating.
struct Marker {
    weight_to_focal: Vec<u64>,
}

impl Marker {
    fn new(n: usize) -> Self {
        Self {
            weight_to_focal: vec![0; n],
        }
    }

    fn clustering(&mut self, net: &Network, v: VertexId) -> LocalClustering {
        let neighbors = net.neighbors(v);
        let deg = neighbors.len() as u64;
        if deg < 2 {
            return LocalClustering {
                unweighted: 0.0,
                weighted: 0.0,
            };
        }
        for &(u, w) in neighbors {
            self.weight_to_focal[u] = w;
        }
        // Ordered neighbour pairs (u, t) closing a triangle at v, and the
        // sum of w_vu + w_vt over them.
        let mut closed: u64 = 0;
        let mut weight_sum: u64 = 0;
        for &(u, w_vu) in neighbors {
            for &(t, _) in net.neighbors(u) {
                let w_vt = self.weight_to_focal[t];
                if w_vt > 0 {
                    closed += 1;
                    weight_sum += w_vu + w_vt;
                }
            }
        }
        for &(u, _) in neighbors {
            self.weight_to_focal[u] = 0;
        }
        let strength = net.strength(v);
        LocalClustering {
            unweighted: closed as f64 / (deg * (deg - 1)) as f64,
            weighted: weight_sum as f64 / (2 * strength * (deg - 1)) as f64,
        }
    }
}

pub fn local_clustering(net: &Network, v: VertexId) -> Result<LocalClustering> {
    check_vertex(net, v)?;
    Ok(Marker::new(net.vertex_count()).clustering(net, v))
}

/// Fraction of neighbour pairs of `v` that are themselves linked.
pub fn clustering_unweighted(net: &Network, v: VertexId) -> Result<f64> {
    Ok(local_clustering(net, v)?.unweighted)
}

/// Barrat weighted clustering coefficient of `v`.
pub fn clustering_weighted(net: &Network, v: VertexId) -> Result<f64> {
    Ok(local_clustering(net, v)?.weighted)
}

/// Clustering of the listed vertices, sharing one scratch buffer.
pub fn local_clustering_many(net: &Network, vertices: &[VertexId]) -> Result<Vec<LocalClustering>> {
    for &v in vertices {
        check_vertex(net, v)?;
    }
    let mut marker = Marker::new(net.vertex_count());
    Ok(vertices.iter().map(|&v| marker.clustering(net, v)).collect())
}

pub fn all_local_clustering(net: &Network) -> Vec<LocalClustering> {
    let mut marker = Marker::new(net.vertex_count());
    (0..net.vertex_count()).map(|v| marker.clustering(net, v)).collect()
}

/// Mean local clustering over all vertices.
pub fn global_clustering(net: &Network, weighting: Weighting) -> Result<f64> {
    let (u, w) = global_clustering_both(net)?;
    Ok(match weighting {
        Weighting::Unweighted => u,
        Weighting::Weighted => w,
    })
}

/// `(unweighted, weighted)` global clustering from a single pass.
pub fn global_clustering_both(net: &Network) -> Result<(f64, f64)> {
    let n = net.vertex_count();
    if n == 0 {
        return Err(Error::EmptyNetwork);
    }
    let locals = all_local_clustering(net);
    let u = numeric::sum(locals.iter().map(|c| c.unweighted)) / n as f64;
    let w = numeric::sum(locals.iter().map(|c| c.weighted)) / n as f64;
    Ok((u, w))
}
