//! Dynamic time warping with the symmetric step pattern
//! (+1,0) / (0,+1) / (+1,+1) and Euclidean frame distance.

use crate::error::{Error, Result};

/// Monotone alignment path from (0,0) to (M-1, N-1) and its accumulated
/// distance (every visited cell counted once).
#[derive(Debug, Clone)]
pub struct DtwPath {
    pub pairs: Vec<(usize, usize)>,
    pub cost: f64,
}

impl DtwPath {
    /// For each column index `j`, the last row index paired with it.
    pub fn rows_for_columns(&self, num_columns: usize) -> Vec<usize> {
        let mut map = vec![0usize; num_columns];
        for &(i, j) in &self.pairs {
            map[j] = i;
        }
        map
    }
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Optimal monotone alignment of two feature sequences.
pub fn dtw_align(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<DtwPath> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Alignment("empty feature sequence".into()));
    }
    let dim = a[0].len();
    for row in a.iter().chain(b.iter()) {
        if row.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: row.len(),
            });
        }
    }

    let (m, n) = (a.len(), b.len());
    let mut acc = vec![f64::INFINITY; m * n];
    // Step taken to reach each cell: 0 = diagonal, 1 = (+1,0), 2 = (0,+1).
    let mut step = vec![0u8; m * n];
    let idx = |i: usize, j: usize| i * n + j;

    for i in 0..m {
        for j in 0..n {
            let d = euclidean(&a[i], &b[j]);
            let (best, s) = if i == 0 && j == 0 {
                (0.0, 0)
            } else {
                let diag = if i > 0 && j > 0 {
                    acc[idx(i - 1, j - 1)]
                } else {
                    f64::INFINITY
                };
                let up = if i > 0 { acc[idx(i - 1, j)] } else { f64::INFINITY };
                let left = if j > 0 { acc[idx(i, j - 1)] } else { f64::INFINITY };
                // Prefer the diagonal on ties for a deterministic path.
                if diag <= up && diag <= left {
                    (diag, 0)
                } else if up <= left {
                    (up, 1)
                } else {
                    (left, 2)
                }
            };
            acc[idx(i, j)] = best + d;
            step[idx(i, j)] = s;
        }
    }

    let mut pairs = Vec::with_capacity(m.max(n));
    let (mut i, mut j) = (m - 1, n - 1);
    loop {
        pairs.push((i, j));
        if i == 0 && j == 0 {
            break;
        }
        match step[idx(i, j)] {
            0 => {
                i = i.saturating_sub(1);
                j = j.saturating_sub(1);
            }
            1 => i -= 1,
            _ => j -= 1,
        }
    }
    pairs.reverse();
    Ok(DtwPath {
        pairs,
        cost: acc[idx(m - 1, n - 1)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    /// Exhaustive minimum over all monotone paths (test oracle).
    fn brute_force_cost(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
        fn walk(a: &[Vec<f64>], b: &[Vec<f64>], i: usize, j: usize) -> f64 {
            let d = euclidean(&a[i], &b[j]);
            if i + 1 == a.len() && j + 1 == b.len() {
                return d;
            }
            let mut best = f64::INFINITY;
            if i + 1 < a.len() && j + 1 < b.len() {
                best = best.min(walk(a, b, i + 1, j + 1));
            }
            if i + 1 < a.len() {
                best = best.min(walk(a, b, i + 1, j));
            }
            if j + 1 < b.len() {
                best = best.min(walk(a, b, i, j + 1));
            }
            d + best
        }
        walk(a, b, 0, 0)
    }

    fn random_frames(rng: &mut impl Rng, count: usize, dim: usize) -> Vec<Vec<f64>> {
        (0..count)
            .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect()
    }

    #[test]
    fn identical_sequences_align_on_the_diagonal_with_zero_cost() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let a = random_frames(&mut rng, 8, 3);
        let path = dtw_align(&a, &a).unwrap();
        assert_eq!(path.cost, 0.0);
        assert_eq!(
            path.pairs,
            (0..8).map(|i| (i, i)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn duplicated_frame_costs_exactly_one_insertion_step() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let a = random_frames(&mut rng, 5, 2);
            let dup = rng.gen_range(0..5);
            let mut b = a.clone();
            b.insert(dup, a[dup].clone());
            let path = dtw_align(&a, &b).unwrap();
            assert!(path.cost < 1e-12);
            let inserts = path
                .pairs
                .windows(2)
                .filter(|w| w[1].0 == w[0].0 && w[1].1 == w[0].1 + 1)
                .count();
            assert_eq!(inserts, 1, "path {:?}", path.pairs);
        }
    }

    #[test]
    fn cost_matches_brute_force_on_small_instances() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let m = rng.gen_range(1..=6);
            let n = rng.gen_range(1..=6);
            let a = random_frames(&mut rng, m, 4);
            let b = random_frames(&mut rng, n, 4);
            let path = dtw_align(&a, &b).unwrap();
            let oracle = brute_force_cost(&a, &b);
            assert!(
                (path.cost - oracle).abs() < 1e-9,
                "dtw {} vs oracle {oracle}",
                path.cost
            );
            // Path endpoints, monotonicity, and length bound.
            assert_eq!(*path.pairs.first().unwrap(), (0, 0));
            assert_eq!(*path.pairs.last().unwrap(), (m - 1, n - 1));
            assert!(path.pairs.len() >= m.max(n) && path.pairs.len() <= m + n - 1);
            for w in path.pairs.windows(2) {
                let (di, dj) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
                assert!(matches!((di, dj), (1, 0) | (0, 1) | (1, 1)));
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let a = vec![vec![0.0, 1.0]];
        let b = vec![vec![0.0, 1.0, 2.0]];
        assert!(matches!(
            dtw_align(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
