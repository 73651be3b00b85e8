use super::{density_tw, DensitySpec, LimitError};

/// Midpoint-rule integral of the joint density over `(0,1) × (0, y_max)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityIntegral {
    pub total: f64,
    /// Midpoints of the `y` cells.
    pub y_nodes: Vec<f64>,
    /// `∫₀¹ f(x, y) dx` at each entry of `y_nodes`.
    pub x_marginal: Vec<f64>,
}

fn midpoints(lo: f64, hi: f64, nodes: usize) -> impl Iterator<Item = f64> {
    let h = (hi - lo) / nodes as f64;
    (0..nodes).map(move |k| lo + (k as f64 + 0.5) * h)
}

pub fn integrate_density(
    spec: &DensitySpec,
    y_max: f64,
    nodes_x: usize,
    nodes_y: usize,
) -> Result<DensityIntegral, LimitError> {
    spec.validate()?;
    if !(y_max > 0.0 && y_max.is_finite()) {
        return Err(LimitError::InvalidQuadrature(format!(
            "y_max must be positive and finite, got {y_max}"
        )));
    }
    if nodes_x < 16 || nodes_y < 16 {
        return Err(LimitError::InvalidQuadrature(format!(
            "need at least 16 nodes per axis, got {nodes_x}x{nodes_y}"
        )));
    }
    let hx = 1.0 / nodes_x as f64;
    let hy = y_max / nodes_y as f64;
    let mut y_nodes = Vec::with_capacity(nodes_y);
    let mut x_marginal = Vec::with_capacity(nodes_y);
    for y in midpoints(0.0, y_max, nodes_y) {
        let mut row = 0.0;
        for x in midpoints(0.0, 1.0, nodes_x) {
            row += density_tw(x, y, spec)?;
        }
        y_nodes.push(y);
        x_marginal.push(row * hx);
    }
    let total = x_marginal.iter().sum::<f64>() * hy;
    Ok(DensityIntegral {
        total,
        y_nodes,
        x_marginal,
    })
}

/// Probability of each rectangle `[x_edges[i], x_edges[i+1]) × [y_edges[j], y_edges[j+1])`
/// under the joint density, by a `nodes_per_cell²` midpoint rule per cell.
/// Result is indexed `[i][j]`.
pub fn cell_masses(
    spec: &DensitySpec,
    x_edges: &[f64],
    y_edges: &[f64],
    nodes_per_cell: usize,
) -> Result<Vec<Vec<f64>>, LimitError> {
    spec.validate()?;
    let increasing = |e: &[f64]| e.len() >= 2 && e.windows(2).all(|w| w[0] < w[1]);
    if !increasing(x_edges) || !increasing(y_edges) {
        return Err(LimitError::InvalidQuadrature(
            "edges must be strictly increasing with at least two entries".into(),
        ));
    }
    if x_edges[0] < 0.0 || x_edges[x_edges.len() - 1] > 1.0 || y_edges[0] < 0.0 {
        return Err(LimitError::InvalidQuadrature(
            "cells must lie inside [0,1] x [0,inf)".into(),
        ));
    }
    if !y_edges[y_edges.len() - 1].is_finite() || nodes_per_cell == 0 {
        return Err(LimitError::InvalidQuadrature(
            "need finite edges and at least one node per cell".into(),
        ));
    }
    let mut out = Vec::with_capacity(x_edges.len() - 1);
    for xw in x_edges.windows(2) {
        let mut row = Vec::with_capacity(y_edges.len() - 1);
        for yw in y_edges.windows(2) {
            let area = (xw[1] - xw[0]) * (yw[1] - yw[0]);
            let mut acc = 0.0;
            for x in midpoints(xw[0], xw[1], nodes_per_cell) {
                for y in midpoints(yw[0], yw[1], nodes_per_cell) {
                    acc += density_tw(x, y, spec)?;
                }
            }
            row.push(acc * area / (nodes_per_cell * nodes_per_cell) as f64);
        }
        out.push(row);
    }
    Ok(out)
}
