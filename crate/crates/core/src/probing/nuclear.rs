use nalgebra::{DMatrix, SVD};

use super::ProbeError;

fn ensure_finite(w: &DMatrix<f64>) -> Result<(), ProbeError> {
    if w.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(ProbeError::NonFiniteInput)
    }
}

/// Singular values of `w`, in no particular order.
pub fn singular_values(w: &DMatrix<f64>) -> Result<Vec<f64>, ProbeError> {
    ensure_finite(w)?;
    if w.is_empty() {
        return Ok(Vec::new());
    }
    let svd = SVD::new(w.clone(), false, false);
    Ok(svd.singular_values.iter().copied().collect())
}

/// Sum of the singular values of `w`.
pub fn nuclear_norm(w: &DMatrix<f64>) -> Result<f64, ProbeError> {
    Ok(singular_values(w)?.iter().sum())
}

/// Proximal operator of `tau * ||.||_*`: shrinks every singular value of `w`
/// by `tau`, clamping at zero. Returns the shrunk matrix and its nuclear norm.
pub fn singular_value_threshold(w: &DMatrix<f64>, tau: f64) -> Result<(DMatrix<f64>, f64), ProbeError> {
    ensure_finite(w)?;
    if w.is_empty() {
        return Ok((w.clone(), 0.0));
    }
    let mut svd = SVD::new(w.clone(), true, true);
    let mut norm = 0.0;
    for s in svd.singular_values.iter_mut() {
        *s = (*s - tau).max(0.0);
        norm += *s;
    }
    if norm == 0.0 {
        return Ok((DMatrix::zeros(w.nrows(), w.ncols()), 0.0));
    }
    let shrunk = svd.recompose().map_err(|_| ProbeError::NonFiniteInput)?;
    Ok((shrunk, norm))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_cases() {
        assert_eq!(nuclear_norm(&DMatrix::identity(3, 3)).unwrap(), 3.0);
        assert_eq!(nuclear_norm(&DMatrix::zeros(3, 5)).unwrap(), 0.0);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 4.0]));
        assert!((nuclear_norm(&d).unwrap() - 7.0).abs() < 1e-12);
        let mut bad = DMatrix::identity(2, 2);
        bad[(0, 1)] = f64::NAN;
        assert!(matches!(nuclear_norm(&bad), Err(ProbeError::NonFiniteInput)));
    }

    #[test]
    fn thresholding_shrinks_spectrum() {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 0.5]));
        let (w, norm) = singular_value_threshold(&d, 1.0).unwrap();
        assert!((norm - 2.0).abs() < 1e-12);
        assert!((w[(0, 0)] - 2.0).abs() < 1e-12);
        assert!(w[(1, 1)].abs() < 1e-12);
        let (z, zn) = singular_value_threshold(&d, 10.0).unwrap();
        assert_eq!(zn, 0.0);
        assert!(z.iter().all(|v| *v == 0.0));
    }
}
