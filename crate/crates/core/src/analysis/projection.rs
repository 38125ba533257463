//! PCA projection of stored embeddings onto their top two principal
//! components.
//!
//! Each component is oriented so that its largest-magnitude loading is
//! positive (the first such loading on exact ties), which makes the output
//! independent of the input record order.

use nalgebra::{DMatrix, SVD};
use serde::Serialize;

use super::AnalysisError;
use crate::embedstore::Aligned;
use crate::natlog::{ConceptRelation, Monotonicity};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionPoint {
    pub example_id: String,
    pub x: f64,
    pub y: f64,
    pub monotonicity: Monotonicity,
    pub relation: ConceptRelation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub points: Vec<ProjectionPoint>,
    /// Variance captured by each component (mean squared score).
    pub component_variance: [f64; 2],
    /// Total variance of the centered vectors.
    pub total_variance: f64,
}

impl Projection {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("example_id,x,y,monotonicity,relation\n");
        for p in &self.points {
            s.push_str(&format!("{},{},{},{},{}\n", p.example_id, p.x, p.y, p.monotonicity, p.relation));
        }
        s
    }
}

pub fn project_2d(aligned: &Aligned) -> Result<Projection, AnalysisError> {
    let n = aligned.rows.len();
    if n < 3 {
        return Err(AnalysisError::TooFewRecords(n));
    }
    let d = aligned.dimension;
    if d < 2 {
        return Err(AnalysisError::TooFewDimensions(d));
    }
    let mut x = DMatrix::from_fn(n, d, |i, j| aligned.rows[i].1.vector[j] as f64);
    for mut col in x.column_iter_mut() {
        let mean = col.sum() / n as f64;
        col.add_scalar_mut(-mean);
    }
    let total_variance = x.norm_squared() / n as f64;

    let svd = SVD::new(x.clone(), false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]).then(a.cmp(&b)));

    let mut axes = Vec::with_capacity(2);
    for &k in order.iter().take(2) {
        let mut axis: Vec<f64> = v_t.row(k).iter().copied().collect();
        let mut lead = 0;
        for (j, v) in axis.iter().enumerate() {
            if v.abs() > axis[lead].abs() {
                lead = j;
            }
        }
        if axis[lead] < 0.0 {
            axis.iter_mut().for_each(|v| *v = -*v);
        }
        axes.push(axis);
    }

    let mut component_variance = [0.0; 2];
    let points = aligned
        .rows
        .iter()
        .enumerate()
        .map(|(i, (ex, _))| {
            let row = x.row(i);
            let px: f64 = row.iter().zip(&axes[0]).map(|(a, b)| a * b).sum();
            let py: f64 = row.iter().zip(&axes[1]).map(|(a, b)| a * b).sum();
            component_variance[0] += px * px / n as f64;
            component_variance[1] += py * py / n as f64;
            ProjectionPoint {
                example_id: ex.example_id.clone(),
                x: px,
                y: py,
                monotonicity: ex.monotonicity,
                relation: ex.relation,
            }
        })
        .collect();
    Ok(Projection { points, component_variance, total_variance })
}
