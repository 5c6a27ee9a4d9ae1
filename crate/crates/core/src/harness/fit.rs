use thiserror::Error;

use super::ExperimentRow;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("need at least 4 sweep points, got {0}")]
    InsufficientPoints(usize),
    #[error("point with n_hat={n_hat}, m={m}, queries={queries} cannot be placed on a log scale")]
    DegeneratePoint { n_hat: usize, m: usize, queries: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingPoint {
    pub n_hat: usize,
    pub m: usize,
    pub queries: f64,
}

/// Least-squares fit of `queries / log2(n_hat) = constant * sqrt(n_hat * m)^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    pub exponent: f64,
    pub constant: f64,
    /// Root mean square of the residuals in natural-log units.
    pub residual: f64,
}

/// `sqrt(n_hat * m) * log2(n_hat)`.
pub fn cost_shape(n_hat: usize, m: usize) -> f64 {
    ((n_hat * m) as f64).sqrt() * (n_hat as f64).log2()
}

pub fn fit_scaling(points: &[ScalingPoint]) -> Result<ScalingFit, FitError> {
    if points.len() < 4 {
        return Err(FitError::InsufficientPoints(points.len()));
    }
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for p in points {
        if p.n_hat < 2 || p.m == 0 || p.queries.is_nan() || p.queries <= 0.0 {
            return Err(FitError::DegeneratePoint { n_hat: p.n_hat, m: p.m, queries: p.queries });
        }
        xs.push(((p.n_hat * p.m) as f64).sqrt().ln());
        ys.push((p.queries / (p.n_hat as f64).log2()).ln());
    }
    let len = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / len;
    let my = ys.iter().sum::<f64>() / len;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - exponent * x).powi(2)).sum();
    Ok(ScalingFit { exponent, constant: intercept.exp(), residual: (rss / len).sqrt() })
}

/// Mean quantum queries per sweep point, ready for [`fit_scaling`].
pub fn fit_rows(rows: &[ExperimentRow]) -> Vec<ScalingPoint> {
    let mut out: Vec<(usize, ScalingPoint, usize)> = Vec::new();
    for r in rows {
        match out.iter_mut().find(|(p, ..)| *p == r.point) {
            Some((_, sp, count)) => {
                sp.queries += r.quantum_queries as f64;
                sp.n_hat += r.n_hat;
                *count += 1;
            }
            None => out.push((r.point, ScalingPoint { n_hat: r.n_hat, m: r.m, queries: r.quantum_queries as f64 }, 1)),
        }
    }
    out.sort_by_key(|(p, ..)| *p);
    out.into_iter()
        .map(|(_, sp, count)| ScalingPoint {
            n_hat: (sp.n_hat as f64 / count as f64).round() as usize,
            m: sp.m,
            queries: sp.queries / count as f64,
        })
        .collect()
}
