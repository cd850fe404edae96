//! Spherical k-means: points and centroids live on the unit sphere and
//! similarity is the cosine (a dot product after normalization).

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{dot, normalize};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeansParams {
    pub max_iters: usize,
    /// Stop once the relative objective improvement falls below this.
    pub tolerance: f64,
}

impl Default for KMeansParams {
    fn default() -> Self {
        KMeansParams {
            max_iters: 100,
            tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    /// Unit-norm centroids, `k` of them.
    pub centroids: Vec<Vec<f64>>,
    /// Cluster of each input point; `None` for zero-norm points.
    pub assignments: Vec<Option<usize>>,
    /// Sum of cosines after every assignment step.
    pub objective_trace: Vec<f64>,
    pub iterations: usize,
    /// Clusters that own no point at exit.
    pub empty_clusters: Vec<usize>,
}

impl KMeansResult {
    pub fn objective(&self) -> f64 {
        self.objective_trace.last().copied().unwrap_or(0.0)
    }
}

fn normalized_points(points: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut unit = Vec::with_capacity(points.len());
    let mut origin = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        let mut q = p.clone();
        if normalize(&mut q) > 0.0 && q.iter().all(|v| v.is_finite()) {
            unit.push(q);
            origin.push(i);
        }
    }
    (unit, origin)
}

/// Seeds centroids one at a time, sampling each new seed with probability
/// proportional to its cosine distance from the nearest existing seed. When
/// every remaining point coincides with a seed, the seed is duplicated.
fn seed_centroids<R: Rng>(points: &[Vec<f64>], k: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let mut centroids = Vec::with_capacity(k);
    centroids.push(points[rng.random_range(0..points.len())].clone());
    let mut nearest: Vec<f64> = points.iter().map(|p| dot(p, &centroids[0])).collect();
    while centroids.len() < k {
        let weights: Vec<f64> = nearest.iter().map(|&s| (1.0 - s).max(0.0)).collect();
        let pick = match WeightedIndex::new(&weights) {
            Ok(dist) => dist.sample(rng),
            Err(_) => 0,
        };
        let c = points[pick].clone();
        for (s, p) in nearest.iter_mut().zip(points) {
            *s = s.max(dot(p, &c));
        }
        centroids.push(c);
    }
    centroids
}

fn assign(points: &[Vec<f64>], centroids: &[Vec<f64>], out: &mut [usize]) -> f64 {
    let mut objective = 0.0;
    for (slot, p) in out.iter_mut().zip(points) {
        let mut best = 0;
        let mut best_sim = f64::NEG_INFINITY;
        for (j, c) in centroids.iter().enumerate() {
            let s = dot(p, c);
            if s > best_sim {
                best_sim = s;
                best = j;
            }
        }
        *slot = best;
        objective += best_sim;
    }
    objective
}

/// Replaces each centroid by the normalized mean of its points; clusters
/// that are empty (or whose points cancel out) keep their old centroid.
fn update(points: &[Vec<f64>], labels: &[usize], centroids: &mut [Vec<f64>]) {
    let dim = points[0].len();
    let mut sums = vec![vec![0.0; dim]; centroids.len()];
    for (p, &l) in points.iter().zip(labels) {
        for (s, v) in sums[l].iter_mut().zip(p) {
            *s += v;
        }
    }
    for (c, mut s) in centroids.iter_mut().zip(sums) {
        if normalize(&mut s) > 0.0 {
            *c = s;
        }
    }
}

pub fn spherical_kmeans(points: &[Vec<f64>], k: usize, seed: u64) -> Result<KMeansResult> {
    spherical_kmeans_with(points, k, seed, KMeansParams::default())
}

pub fn spherical_kmeans_with(
    points: &[Vec<f64>],
    k: usize,
    seed: u64,
    params: KMeansParams,
) -> Result<KMeansResult> {
    if k == 0 {
        return Err(Error::InvalidConfig("k-means needs k >= 1".into()));
    }
    if let Some(p) = points.first() {
        if points.iter().any(|q| q.len() != p.len()) {
            return Err(Error::InvalidConfig("k-means points differ in dimension".into()));
        }
    }
    let (unit, origin) = normalized_points(points);
    if unit.is_empty() {
        return Err(Error::InvalidConfig("k-means has no nonzero point".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = seed_centroids(&unit, k, &mut rng);
    let mut labels = vec![0usize; unit.len()];
    let mut trace = Vec::new();
    let mut iterations = 0;
    loop {
        let objective = assign(&unit, &centroids, &mut labels);
        iterations += 1;
        let converged = match trace.last() {
            Some(&prev) => {
                let prev: f64 = prev;
                (objective - prev) / prev.abs().max(f64::MIN_POSITIVE) < params.tolerance
            }
            None => false,
        };
        trace.push(objective);
        update(&unit, &labels, &mut centroids);
        if converged || iterations >= params.max_iters {
            break;
        }
    }
    let mut sizes = vec![0usize; k];
    let mut assignments = vec![None; points.len()];
    for (&l, &i) in labels.iter().zip(&origin) {
        assignments[i] = Some(l);
        sizes[l] += 1;
    }
    let empty_clusters = (0..k).filter(|&j| sizes[j] == 0).collect();
    Ok(KMeansResult {
        centroids,
        assignments,
        objective_trace: trace,
        iterations,
        empty_clusters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::norm;

    #[test]
    fn single_cluster_is_normalized_mean() {
        let pts = vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 3.0]];
        let r = spherical_kmeans(&pts, 1, 5).unwrap();
        let mut mean = vec![0.0; 2];
        for p in &pts {
            let n = norm(p);
            mean[0] += p[0] / n;
            mean[1] += p[1] / n;
        }
        normalize(&mut mean);
        assert!((r.centroids[0][0] - mean[0]).abs() < 1e-12);
        assert!((r.centroids[0][1] - mean[1]).abs() < 1e-12);
    }

    #[test]
    fn singleton_clusters() {
        let pts: Vec<Vec<f64>> = (0..6)
            .map(|i| {
                let a = i as f64 * 0.9;
                vec![a.cos(), a.sin(), 0.3]
            })
            .collect();
        let r = spherical_kmeans(&pts, 6, 11).unwrap();
        assert!((r.objective() - 6.0).abs() < 1e-9);
        assert!(r.empty_clusters.is_empty());
    }

    #[test]
    fn more_clusters_than_points_flags_empties() {
        let pts = vec![vec![1.0, 0.0], vec![1.0, 0.0]];
        let r = spherical_kmeans(&pts, 3, 1).unwrap();
        assert_eq!(r.centroids.len(), 3);
        assert_eq!(r.empty_clusters.len(), 2);
    }

    #[test]
    fn zero_points_are_dropped() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let r = spherical_kmeans(&pts, 2, 2).unwrap();
        assert_eq!(r.assignments[0], None);
        assert!(r.assignments[1].is_some() && r.assignments[2].is_some());
        assert!(spherical_kmeans(&[vec![0.0]], 1, 0).is_err());
        assert!(spherical_kmeans(&pts, 0, 0).is_err());
    }
}
