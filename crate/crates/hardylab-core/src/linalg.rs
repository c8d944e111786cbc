//! Dense helpers shared across the operator modules: spectral norm, hermitian
//! functional calculus, and orthonormalization with rank tracking.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{CoreError, Result};

pub type OperatorMatrix = DMatrix<Complex64>;

pub fn identity(n: usize) -> OperatorMatrix {
    DMatrix::identity(n, n)
}

/// Largest singular value.
pub fn opnorm(m: &OperatorMatrix) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    sv.iter().copied().fold(0.0, f64::max)
}

pub fn frobenius(m: &OperatorMatrix) -> f64 {
    m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &OperatorMatrix) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// ‖m1 − m2‖ in the spectral norm.
pub fn opnorm_diff(m1: &OperatorMatrix, m2: &OperatorMatrix) -> f64 {
    opnorm(&(m1 - m2))
}

/// How far m is from its own adjoint, in Frobenius norm.
pub fn hermitian_defect(m: &OperatorMatrix) -> f64 {
    frobenius(&(m - m.adjoint()))
}

/// Eigendecomposition of a hermitian matrix. The input is symmetrized as
/// (m + m^H)/2 first; inputs farther than `defect_tol` from hermitian are
/// rejected rather than silently flattened.
pub fn hermitian_eigen(
    m: &OperatorMatrix,
    defect_tol: f64,
) -> Result<(DVector<f64>, OperatorMatrix)> {
    let defect = hermitian_defect(m);
    if defect > defect_tol {
        return Err(CoreError::NotHermitian { defect });
    }
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = nalgebra::SymmetricEigen::new(sym);
    Ok((eig.eigenvalues, eig.eigenvectors))
}

/// f(M) for hermitian M via the eigendecomposition.
pub fn hermitian_fn(
    m: &OperatorMatrix,
    f: impl Fn(f64) -> f64,
    defect_tol: f64,
) -> Result<OperatorMatrix> {
    let (vals, vecs) = hermitian_eigen(m, defect_tol)?;
    let d = DMatrix::from_diagonal(&DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| Complex64::new(f(v), 0.0)),
    ));
    Ok(&vecs * d * vecs.adjoint())
}

/// M^{1/2} for hermitian positive semidefinite M. Eigenvalues below −tol are
/// an error; small negative roundoff is clipped to zero.
pub fn sqrt_psd(m: &OperatorMatrix, neg_tol: f64) -> Result<OperatorMatrix> {
    let (vals, vecs) = hermitian_eigen(m, 1e-10)?;
    if let Some(&bad) = vals.iter().find(|&&v| v < -neg_tol) {
        return Err(CoreError::IndefiniteInput { eigenvalue: bad });
    }
    let d = DMatrix::from_diagonal(&DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| Complex64::new(v.max(0.0).sqrt(), 0.0)),
    ));
    Ok(&vecs * d * vecs.adjoint())
}

/// M^{−1/2} for hermitian positive definite M.
pub fn inv_sqrt_pd(m: &OperatorMatrix, floor: f64) -> Result<OperatorMatrix> {
    let (vals, vecs) = hermitian_eigen(m, 1e-10)?;
    if vals.iter().any(|&v| v <= floor) {
        return Err(CoreError::SingularInput);
    }
    let d = DMatrix::from_diagonal(&DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| Complex64::new(1.0 / v.sqrt(), 0.0)),
    ));
    Ok(&vecs * d * vecs.adjoint())
}

/// Modified Gram–Schmidt with one reorthogonalization pass. Columns are
/// processed in order; a pivot below `rank_tol` relative to the column's
/// incoming norm reports the offending column.
pub fn orthonormalize(m: &OperatorMatrix, rank_tol: f64) -> Result<OperatorMatrix> {
    let n = m.nrows();
    let k = m.ncols();
    let mut q = OperatorMatrix::zeros(n, k);
    for j in 0..k {
        let mut v: DVector<Complex64> = m.column(j).into();
        let incoming = v.norm();
        for _pass in 0..2 {
            for i in 0..j {
                let qi = q.column(i);
                let c: Complex64 = qi.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                v -= DVector::from(qi) * c;
            }
        }
        let pivot = v.norm();
        if pivot <= rank_tol * incoming.max(1.0) {
            return Err(CoreError::RankLoss { column: j, pivot });
        }
        q.set_column(j, &(v / Complex64::new(pivot, 0.0)));
    }
    Ok(q)
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns of `b`: the trailing Householder directions of [b | I].
pub fn orthocomplement(b: &OperatorMatrix) -> OperatorMatrix {
    let n = b.nrows();
    let k = b.ncols();
    assert!(k <= n);
    let mut wide = OperatorMatrix::zeros(n, n + k);
    wide.view_mut((0, 0), (n, k)).copy_from(b);
    wide.view_mut((0, k), (n, n)).copy_from(&identity(n));
    let q = wide.qr().q();
    let comp: OperatorMatrix = q.columns(k, n - k).into();
    comp
}

/// Descending singular values of m1^H m2 for orthonormal column blocks:
/// cosines of the principal angles between the two spans.
pub fn principal_cosines(m1: &OperatorMatrix, m2: &OperatorMatrix) -> Vec<f64> {
    let prod = m1.adjoint() * m2;
    let mut sv: Vec<f64> = prod.svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}
