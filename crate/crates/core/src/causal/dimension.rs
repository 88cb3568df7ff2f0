use rayon::prelude::*;
use serde::Serialize;

use super::graph::{SpaceGraph, VertexId};
use super::CausalError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionEstimate {
    /// Slope of `log |B(r)|` against `log r`.
    pub dimension: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    pub radii: Vec<usize>,
    /// Ball sizes averaged over the centres, one per radius.
    pub mean_ball_sizes: Vec<f64>,
    pub centers: usize,
    pub diameter: usize,
}

/// Largest eccentricity, or `None` for a disconnected or empty graph.
pub fn diameter(g: &SpaceGraph) -> Option<usize> {
    let vs: Vec<VertexId> = g.vertices().collect();
    if vs.is_empty() {
        return None;
    }
    vs.par_iter().map(|&v| g.eccentricity(v)).collect::<Option<Vec<_>>>()?.into_iter().max()
}

/// Fits ball growth `|B(v, r)| ~ r^D` over `r_min..=r_max`, averaging ball
/// sizes over `centers`.
///
/// The window is the caller's choice: too small and the lattice detail
/// dominates, too large and the ball wraps around the graph. It must hold
/// at least three radii, start at 1 or more, and stay below the diameter.
pub fn estimate_dimension(
    g: &SpaceGraph,
    centers: &[VertexId],
    r_min: usize,
    r_max: usize,
) -> Result<DimensionEstimate, CausalError> {
    if r_min < 1 || r_max < r_min + 2 {
        return Err(CausalError::DegenerateWindow(format!("need r_min >= 1 and three radii, got {r_min}..={r_max}")));
    }
    if centers.is_empty() {
        return Err(CausalError::NoCenters);
    }
    if let Some(&v) = centers.iter().find(|&&v| !g.contains_vertex(v)) {
        return Err(CausalError::UnknownVertex(v));
    }
    let diameter = diameter(g).ok_or(CausalError::Disconnected)?;
    if r_max >= diameter {
        return Err(CausalError::DegenerateWindow(format!("r_max {r_max} is not below the diameter {diameter}")));
    }
    let balls: Vec<Vec<u64>> = centers.par_iter().map(|&v| g.ball_sizes(v, r_max)).collect();
    let radii: Vec<usize> = (r_min..=r_max).collect();
    let mean: Vec<f64> = radii
        .iter()
        .map(|&r| balls.iter().map(|b| b[r] as f64).sum::<f64>() / centers.len() as f64)
        .collect();
    let xs: Vec<f64> = radii.iter().map(|&r| (r as f64).ln()).collect();
    let ys: Vec<f64> = mean.iter().map(|m| m.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum::<f64>() / n).sqrt();
    Ok(DimensionEstimate { dimension: slope, residual, radii, mean_ball_sizes: mean, centers: centers.len(), diameter })
}
