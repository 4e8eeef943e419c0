//! Small dense complex linear algebra on top of nalgebra's SVD.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::C64;

/// SVD of `a` padded with zero rows to at least square, with singular
/// values sorted descending and the matching right singular vectors as the
/// columns of `v`.
struct SortedSvd {
    sigma: Vec<f64>,
    v: DMatrix<C64>,
    u: DMatrix<C64>,
}

fn sorted_svd(a: &DMatrix<C64>) -> Result<SortedSvd> {
    let (m, n) = a.shape();
    let rows = m.max(n);
    let mut padded = DMatrix::<C64>::zeros(rows, n);
    padded.view_mut((0, 0), (m, n)).copy_from(a);
    let svd = padded.svd(true, true);
    let (Some(u), Some(v_t)) = (svd.u, svd.v_t) else {
        return Err(Error::NoConvergence("singular value decomposition".into()));
    };
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sigma = order.iter().map(|&i| svd.singular_values[i]).collect();
    let v = DMatrix::from_fn(n, order.len(), |r, c| v_t[(order[c], r)].conj());
    let u = DMatrix::from_fn(rows, order.len(), |r, c| u[(r, order[c])]);
    Ok(SortedSvd { sigma, v, u })
}

/// One-dimensional null space of a matrix with one more column than rows
/// (or any shape whose null space should be a line).
///
/// Returns the unit null vector and the singular values of the padded square
/// matrix. Fails with `DegenerateNullSpace` when the second-smallest singular
/// value is below `threshold` times the largest, i.e. the null space is not
/// numerically one-dimensional.
pub fn null_vector(a: &DMatrix<C64>, threshold: f64) -> Result<(DVector<C64>, Vec<f64>)> {
    let n = a.ncols();
    if n == 0 {
        return Err(Error::Domain("null space of a matrix with no columns".into()));
    }
    let svd = sorted_svd(a)?;
    let smax = svd.sigma[0];
    if n >= 2 {
        let second = svd.sigma[n - 2];
        if smax == 0.0 || second / smax < threshold {
            return Err(Error::DegenerateNullSpace {
                ratio: if smax == 0.0 { 0.0 } else { second / smax },
                singular_values: svd.sigma,
            });
        }
    }
    Ok((svd.v.column(n - 1).into_owned(), svd.sigma))
}

/// Orthonormal basis (as columns) of the null space of `a`, counting singular
/// values at most `rel_tol * sigma_max` as zero.
pub fn null_space_basis(a: &DMatrix<C64>, rel_tol: f64) -> Result<DMatrix<C64>> {
    let n = a.ncols();
    if a.nrows() == 0 {
        return Ok(DMatrix::identity(n, n));
    }
    let svd = sorted_svd(a)?;
    let cut = rel_tol * svd.sigma[0];
    let rank = svd.sigma.iter().take(n).filter(|&&s| s > cut).count();
    Ok(svd.v.columns(rank, n - rank).into_owned())
}

/// Minimal-norm least-squares solution of `a x = b`.
pub fn least_squares(a: &DMatrix<C64>, b: &DVector<C64>, rel_tol: f64) -> Result<DVector<C64>> {
    let (m, n) = a.shape();
    let svd = sorted_svd(a)?;
    let mut rhs = DVector::<C64>::zeros(m.max(n));
    rhs.rows_mut(0, m).copy_from(b);
    let cut = rel_tol * svd.sigma[0];
    let mut x = DVector::<C64>::zeros(n);
    for (k, &s) in svd.sigma.iter().enumerate().take(n) {
        if s <= cut {
            break;
        }
        let coef = svd.u.column(k).dotc(&rhs) / s;
        x += svd.v.column(k) * coef;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn null_vector_of_one_row() {
        let a = DMatrix::from_row_slice(1, 2, &[c(1.0, 0.0), c(16.0 / 9.0, 0.0)]);
        let (v, _) = null_vector(&a, 1e-10).unwrap();
        assert!((a.clone() * &v).norm() < 1e-15);
        assert!((v.norm() - 1.0).abs() < 1e-15);
        assert!((v[0] / v[1] - c(-16.0 / 9.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn degenerate_null_space_is_reported() {
        let a = DMatrix::from_row_slice(1, 3, &[c(1.0, 0.0), c(2.0, 0.0), c(0.0, 1.0)]);
        assert!(matches!(null_vector(&a, 1e-10), Err(Error::DegenerateNullSpace { .. })));
    }

    #[test]
    fn null_space_basis_is_orthonormal_and_annihilated() {
        let a = DMatrix::from_row_slice(
            2,
            4,
            &[c(1.0, 0.0), c(0.0, 1.0), c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(1.0, -1.0), c(3.0, 0.0)],
        );
        let b = null_space_basis(&a, 1e-12).unwrap();
        assert_eq!(b.ncols(), 2);
        assert!((a * &b).norm() < 1e-14);
        assert!((b.adjoint() * &b - DMatrix::<C64>::identity(2, 2)).norm() < 1e-14);
    }

    #[test]
    fn least_squares_minimal_norm() {
        let a = DMatrix::from_row_slice(1, 2, &[c(1.0, 0.0), c(1.0, 0.0)]);
        let b = DVector::from_vec(vec![c(2.0, 0.0)]);
        let x = least_squares(&a, &b, 1e-12).unwrap();
        assert!((x[0] - c(1.0, 0.0)).norm() < 1e-14 && (x[1] - c(1.0, 0.0)).norm() < 1e-14);
        let a = DMatrix::from_row_slice(3, 1, &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        let b = DVector::from_vec(vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        let x = least_squares(&a, &b, 1e-12).unwrap();
        assert!((x[0] - c(2.0, 0.0)).norm() < 1e-14);
    }
}
