//! Degree assortativity.
//!
//! Every edge contributes two ordered endpoint pairs, `(u, v)` and `(v, u)`.
//! The unweighted coefficient is the Pearson correlation of endpoint degrees
//! over those pairs; the weighted one correlates endpoint strengths with each
//! pair weighted by its edge weight.

use crate::error::{Error, Result};
use crate::network::Network;
use crate::numeric::CompensatedSum;

use super::Weighting;

/// Returns `None` when either marginal has zero variance (every endpoint
/// has the same degree or strength), where the correlation is undefined.
pub fn assortativity(net: &Network, weighting: Weighting) -> Result<Option<f64>> {
    if net.edge_count() == 0 {
        return Err(Error::Edgeless);
    }
    // (x, y, weight) for one orientation; the reverse orientation is implied.
    let pairs = net.edges().map(|(u, v, w)| match weighting {
        Weighting::Unweighted => (net.degree(u) as f64, net.degree(v) as f64, 1.0),
        Weighting::Weighted => (net.strength(u) as f64, net.strength(v) as f64, w as f64),
    });
    let pairs: Vec<_> = pairs.collect();

    let mut total = CompensatedSum::new();
    let mut first = CompensatedSum::new();
    for &(x, y, w) in &pairs {
        total.add(2.0 * w);
        first.add(w * (x + y));
    }
    let total = total.value();
    // Both marginals share one mean because each pair appears in both orders.
    let mean = first.value() / total;

    let mut var = CompensatedSum::new();
    let mut cov = CompensatedSum::new();
    for &(x, y, w) in &pairs {
        let (dx, dy) = (x - mean, y - mean);
        var.add(w * (dx * dx + dy * dy));
        cov.add(2.0 * w * dx * dy);
    }
    let var = var.value() / total;
    let cov = cov.value() / total;
    if var <= 1e-12 * mean * mean {
        return Ok(None);
    }
    Ok(Some((cov / var).clamp(-1.0, 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, edges: &[(usize, usize, u64)]) -> Network {
        Network::from_indexed_edges(n, edges).unwrap()
    }

    #[test]
    fn star_is_perfectly_disassortative() {
        let star = g(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1)]);
        let r = assortativity(&star, Weighting::Unweighted).unwrap().unwrap();
        assert!((r + 1.0).abs() < 1e-12);
    }

    #[test]
    fn path_of_four() {
        let p4 = g(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]);
        let r = assortativity(&p4, Weighting::Unweighted).unwrap().unwrap();
        assert!((r + 0.5).abs() < 1e-12, "{r}");
    }

    #[test]
    fn regular_graphs_are_undefined() {
        let c4 = g(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]);
        assert_eq!(assortativity(&c4, Weighting::Unweighted).unwrap(), None);
        assert_eq!(assortativity(&c4, Weighting::Weighted).unwrap(), None);
        let edgeless = g(2, &[]);
        assert!(matches!(
            assortativity(&edgeless, Weighting::Unweighted),
            Err(Error::Edgeless)
        ));
    }

    #[test]
    fn weighted_uses_strengths() {
        // C4 is degree-regular, but uneven weights make strengths differ.
        let c4 = g(4, &[(0, 1, 3), (1, 2, 1), (2, 3, 3), (3, 0, 1)]);
        assert_eq!(assortativity(&c4, Weighting::Unweighted).unwrap(), None);
        // every vertex has strength 4: still undefined
        assert_eq!(assortativity(&c4, Weighting::Weighted).unwrap(), None);
        let p = g(3, &[(0, 1, 2), (1, 2, 1)]);
        // strengths 2, 3, 1; ordered pairs (2,3)x2, (3,2)x2, (3,1)x1, (1,3)x1
        let r = assortativity(&p, Weighting::Weighted).unwrap().unwrap();
        let xs = [2.0, 3.0, 3.0, 1.0];
        let ys = [3.0, 2.0, 1.0, 3.0];
        let ws = [2.0, 2.0, 1.0, 1.0];
        let wsum: f64 = ws.iter().sum();
        let mx: f64 = xs.iter().zip(&ws).map(|(x, w)| x * w).sum::<f64>() / wsum;
        let my: f64 = ys.iter().zip(&ws).map(|(y, w)| y * w).sum::<f64>() / wsum;
        let mut sxy = 0.0;
        let mut sxx = 0.0;
        let mut syy = 0.0;
        for i in 0..4 {
            sxy += ws[i] * (xs[i] - mx) * (ys[i] - my);
            sxx += ws[i] * (xs[i] - mx).powi(2);
            syy += ws[i] * (ys[i] - my).powi(2);
        }
        assert!((r - sxy / (sxx * syy).sqrt()).abs() < 1e-12);
    }
}
