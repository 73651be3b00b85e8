//! Distances between empirical and reference laws.

use super::HarnessError;

/// `sup_i max(|i/N − F(x_(i))|, |F(x_(i)) − (i−1)/N|)` over the sorted sample.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64, HarnessError> {
    if samples.is_empty() {
        return Err(HarnessError::EmptySample);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0_f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let above = ((i + 1) as f64 / n - f).abs();
        let below = (f - i as f64 / n).abs();
        d = d.max(above).max(below);
    }
    Ok(d)
}

/// Minimum number of pairs accepted by [`independence_tv_pairs`].
pub const MIN_INDEPENDENCE_RECORDS: usize = 1000;

fn check_edges(edges: &[f64]) -> Result<(), HarnessError> {
    if edges.len() < 2 || !edges.windows(2).all(|w| w[0] < w[1]) {
        return Err(HarnessError::InvalidEdges);
    }
    Ok(())
}

/// Bin of `y` among `edges.len() − 1` bins; values beyond either end fall in
/// the outermost bins.
fn clamped_bin(y: f64, edges: &[f64]) -> usize {
    let bins = edges.len() - 1;
    edges[1..bins].partition_point(|&e| e <= y)
}

/// Total-variation distance between the joint law of `(1{x > x_cut}, bin(y))`
/// and the product of its marginals.
pub fn independence_tv_pairs(
    pairs: &[(f64, f64)],
    x_cut: f64,
    y_edges: &[f64],
) -> Result<f64, HarnessError> {
    check_edges(y_edges)?;
    if pairs.len() < MIN_INDEPENDENCE_RECORDS {
        return Err(HarnessError::TooFewRecords {
            got: pairs.len(),
            need: MIN_INDEPENDENCE_RECORDS,
        });
    }
    let bins = y_edges.len() - 1;
    let mut table = vec![[0u64; 2]; bins];
    for &(x, y) in pairs {
        table[clamped_bin(y, y_edges)][usize::from(x > x_cut)] += 1;
    }
    let total = pairs.len() as f64;
    let col = [0, 1].map(|c| table.iter().map(|r| r[c]).sum::<u64>() as f64 / total);
    let mut tv = 0.0;
    for row in &table {
        let row_p = (row[0] + row[1]) as f64 / total;
        for c in 0..2 {
            tv += (row[c] as f64 / total - row_p * col[c]).abs();
        }
    }
    Ok(0.5 * tv)
}

/// Counts of `(x, y)` pairs on a rectangular partition. Cells are half-open
/// `[lo, hi)` except the last row and column, which are closed.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram2D {
    pub x_edges: Vec<f64>,
    pub y_edges: Vec<f64>,
    /// Indexed `[x_bin][y_bin]`.
    pub counts: Vec<Vec<u64>>,
    offered: u64,
}

impl Histogram2D {
    pub fn new(x_edges: Vec<f64>, y_edges: Vec<f64>) -> Result<Self, HarnessError> {
        check_edges(&x_edges)?;
        check_edges(&y_edges)?;
        let counts = vec![vec![0; y_edges.len() - 1]; x_edges.len() - 1];
        Ok(Self {
            x_edges,
            y_edges,
            counts,
            offered: 0,
        })
    }

    /// Equal-width cells on `[x_lo, x_hi] × [y_lo, y_hi]`.
    pub fn uniform(
        (x_lo, x_hi, nx): (f64, f64, usize),
        (y_lo, y_hi, ny): (f64, f64, usize),
    ) -> Result<Self, HarnessError> {
        let edges = |lo: f64, hi: f64, k: usize| -> Vec<f64> {
            (0..=k)
                .map(|i| {
                    if i == k {
                        hi
                    } else {
                        lo + (hi - lo) * i as f64 / k as f64
                    }
                })
                .collect()
        };
        if nx == 0 || ny == 0 {
            return Err(HarnessError::InvalidEdges);
        }
        Self::new(edges(x_lo, x_hi, nx), edges(y_lo, y_hi, ny))
    }

    fn bin(v: f64, edges: &[f64]) -> Option<usize> {
        let last = edges.len() - 1;
        if !(v >= edges[0] && v <= edges[last]) {
            return None;
        }
        Some(edges[1..last].partition_point(|&e| e <= v))
    }

    /// Records one pair; returns whether it landed inside the bounding box.
    pub fn fill(&mut self, x: f64, y: f64) -> bool {
        self.offered += 1;
        match (Self::bin(x, &self.x_edges), Self::bin(y, &self.y_edges)) {
            (Some(i), Some(j)) => {
                self.counts[i][j] += 1;
                true
            }
            _ => false,
        }
    }

    pub fn inside(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn offered(&self) -> u64 {
        self.offered
    }

    /// Half the summed absolute difference between cell proportions (over all
    /// offered pairs) and `reference[i][j]`.
    pub fn tv_distance(&self, reference: &[Vec<f64>]) -> Result<f64, HarnessError> {
        if self.offered == 0 {
            return Err(HarnessError::EmptySample);
        }
        if reference.len() != self.counts.len()
            || reference
                .iter()
                .zip(&self.counts)
                .any(|(r, c)| r.len() != c.len())
        {
            return Err(HarnessError::ShapeMismatch);
        }
        let total = self.offered as f64;
        let outside = (self.offered - self.inside()) as f64 / total;
        let reference_outside = (1.0 - reference.iter().flatten().sum::<f64>()).max(0.0);
        let cells: f64 = self
            .counts
            .iter()
            .flatten()
            .zip(reference.iter().flatten())
            .map(|(&c, &p)| (c as f64 / total - p).abs())
            .sum();
        Ok(0.5 * (cells + (outside - reference_outside).abs()))
    }
}
