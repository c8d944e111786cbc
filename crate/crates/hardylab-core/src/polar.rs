//! Polar structure of the composition reflection: hermitian square roots,
//! the unitary part ρ_a, the range and nullspace symmetries, the power-series
//! route to the inverse modulus, and the modulus-injectivity scan.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::compose::{c_matrix, gram_cstarc};
use crate::error::{CoreError, Result};
use crate::linalg::{hermitian_eigen, identity, opnorm, OperatorMatrix};
use crate::moebius::DiskPoint;
use crate::toeplitz::{shift_matrix, symbol_one_plus_ka2, toeplitz_matrix};

/// Hermitian tolerance for square-root inputs.
const HERM_TOL: f64 = 1e-8;
/// Eigenvalues below this are rejected; negatives above it are clipped to 0.
const NEG_CLIP: f64 = -1e-10;

#[derive(Debug, Clone)]
pub struct PolarDecomposition {
    pub unitary_part: OperatorMatrix,
    pub modulus: OperatorMatrix,
}

/// Hermitian positive square root by full eigendecomposition. Tiny negative
/// eigenvalues (compression roundoff on positive operators) are clipped.
pub fn herm_sqrt(m: &OperatorMatrix) -> Result<OperatorMatrix> {
    let (vals, vecs) = hermitian_eigen(m, HERM_TOL)?;
    if let Some(&bad) = vals.iter().find(|&&v| v < NEG_CLIP) {
        return Err(CoreError::IndefiniteInput { eigenvalue: bad });
    }
    let d = DMatrix::from_diagonal(&DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| Complex64::new(v.max(0.0).sqrt(), 0.0)),
    ));
    Ok(&vecs * d * vecs.adjoint())
}

fn inv_sqrt_herm(m: &OperatorMatrix) -> Result<OperatorMatrix> {
    let (vals, vecs) = hermitian_eigen(m, HERM_TOL)?;
    if vals.iter().any(|&v| v <= 1e-10) {
        return Err(CoreError::SingularInput);
    }
    let d = DMatrix::from_diagonal(&DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| Complex64::new(1.0 / v.sqrt(), 0.0)),
    ));
    Ok(&vecs * d * vecs.adjoint())
}

/// M = unitary_part · modulus with modulus = (M*M)^{1/2}.
pub fn polar(m: &OperatorMatrix) -> Result<PolarDecomposition> {
    let smin = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if smin <= 1e-10 {
        return Err(CoreError::SingularInput);
    }
    let gram = m.adjoint() * m;
    let modulus = herm_sqrt(&gram)?;
    let unitary_part = m * inv_sqrt_herm(&gram)?;
    Ok(PolarDecomposition { unitary_part, modulus })
}

fn conditioning_guard(a: DiskPoint, name: &str) -> Result<()> {
    if a.modulus() > 0.8 {
        return Err(CoreError::AssertionFailure {
            name: format!("{name}: modulus condition number exceeds the |a| ≤ 0.8 guard"),
            value: a.modulus(),
            bound: 0.8,
        });
    }
    Ok(())
}

/// |C_a| = (C_a*C_a)^{1/2} from the closed Toeplitz form.
pub fn modulus_matrix(a: DiskPoint, order: usize) -> Result<OperatorMatrix> {
    conditioning_guard(a, "modulus_matrix")?;
    herm_sqrt(&gram_cstarc(a, order))
}

/// Unitary part of C_a: C_a·(C_a*C_a)^{−1/2}, with the closed Toeplitz form
/// feeding the inverse square root. A symmetry (hermitian and unitary) up to
/// compression error on leading blocks.
pub fn rho_matrix(a: DiskPoint, order: usize) -> Result<OperatorMatrix> {
    conditioning_guard(a, "rho_matrix")?;
    Ok(c_matrix(a, order) * inv_sqrt_herm(&gram_cstarc(a, order))?)
}

/// Which realization of C_a*C_a feeds a symmetry formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramRoute {
    /// Closed Toeplitz form; exact on the cut space.
    ClosedForm,
    /// Dense product C^H·C of stored compressions; carries column-tail error.
    Dense,
}

fn one_plus_gram(a: DiskPoint, order: usize, route: GramRoute) -> OperatorMatrix {
    match route {
        // I + (1−|a|²)T_{1/|1−āz|²} written as one Toeplitz symbol
        GramRoute::ClosedForm => toeplitz_matrix(&symbol_one_plus_ka2(a, order), order),
        GramRoute::Dense => {
            let c = c_matrix(a, order);
            c.adjoint() * &c + identity(order)
        }
    }
}

fn plus_minus_symmetry(a: DiskPoint, order: usize, route: GramRoute, sign: f64) -> Result<OperatorMatrix> {
    conditioning_guard(a, "range/null symmetry")?;
    let c = c_matrix(a, order);
    let q = one_plus_gram(a, order, route);
    let inv = q.clone().try_inverse().ok_or(CoreError::SingularInput)?;
    Ok(((identity(order) + c.scale(sign)) * inv).scale(2.0) - identity(order))
}

/// Symmetry that is the identity exactly on the +1 eigenspace of C_a:
/// 2(1+C_a)(C_a*C_a+1)⁻¹ − 1.
pub fn range_symmetry(a: DiskPoint, order: usize) -> Result<OperatorMatrix> {
    plus_minus_symmetry(a, order, GramRoute::ClosedForm, 1.0)
}

/// Symmetry that is the identity exactly on the −1 eigenspace of C_a:
/// 2(1−C_a)(C_a*C_a+1)⁻¹ − 1.
pub fn null_symmetry(a: DiskPoint, order: usize) -> Result<OperatorMatrix> {
    plus_minus_symmetry(a, order, GramRoute::ClosedForm, -1.0)
}

/// Leading-half-block disagreement between the closed-form and dense gram
/// routes for (range_symmetry, null_symmetry). The dense route inherits the
/// column-tail error of the stored C_a, so the gap measures how much of that
/// error survives the resolvent.
pub fn symmetry_route_gap(a: DiskPoint, order: usize) -> Result<(f64, f64)> {
    let mut out = [0.0f64; 2];
    for (i, sign) in [1.0, -1.0].into_iter().enumerate() {
        let closed = plus_minus_symmetry(a, order, GramRoute::ClosedForm, sign)?;
        let dense = plus_minus_symmetry(a, order, GramRoute::Dense, sign)?;
        let h = order / 2;
        let diff = closed.view((0, 0), (h, h)) - dense.view((0, 0), (h, h));
        out[i] = opnorm(&diff.into());
    }
    Ok((out[0], out[1]))
}

/// Prefactors c_m·κ^m of T^m in the inverse-modulus series, κ = 2|a|/(1+|a|²),
/// c_m = (2m−1)!!/(2m)!!. Index 0 holds the constant term 1.
pub fn series_prefactors(a: DiskPoint, terms: usize) -> Vec<f64> {
    let r = a.modulus();
    let kappa = 2.0 * r / (1.0 + r * r);
    let mut out = Vec::with_capacity(terms + 1);
    out.push(1.0);
    let mut coef = 1.0;
    for m in 1..=terms {
        coef *= kappa * (2.0 * m as f64 - 1.0) / (2.0 * m as f64);
        out.push(coef);
    }
    out
}

/// Partial sum of the power series for ((1+|a|²)I − āS − aS*)^{−1/2} in
/// T = (ω̄S + ωS*)/2 with ω = a/|a|, together with the residual against the
/// eigendecomposition of the same compressed operator.
pub fn series_inv_modulus(a: DiskPoint, order: usize, terms: usize) -> Result<(OperatorMatrix, f64)> {
    if a.is_origin() {
        return Ok((identity(order), 0.0));
    }
    let av = a.value();
    let r = a.modulus();
    let omega = av / r;
    let s = shift_matrix(order);
    let t = (s.scale(1.0) * omega.conj() + s.adjoint() * omega).scale(0.5);

    let pref = series_prefactors(a, terms);
    let mut sum = identity(order);
    let mut power = identity(order);
    for &p in pref.iter().skip(1) {
        power = &power * &t;
        sum += power.scale(p);
    }
    let scale = 1.0 / (1.0 + r * r).sqrt();
    let partial = sum.scale(scale);

    let compression =
        identity(order).scale(1.0 + r * r) - s.scale(1.0) * av.conj() - s.adjoint() * av;
    let oracle = inv_sqrt_herm(&compression)?;
    let residual = opnorm(&(&partial - &oracle));
    Ok((partial, residual))
}

/// One row of the modulus-injectivity scan.
#[derive(Debug, Clone)]
pub struct InjectivityRecord {
    pub a: DiskPoint,
    pub b: DiskPoint,
    /// ‖C_a*C_a − C_b*C_b‖ in the closed Toeplitz forms.
    pub gram_diff: f64,
    /// ‖|C_a| − |C_b|‖.
    pub modulus_diff: f64,
    /// ‖ρ_a − ρ_b‖ of the compressions.
    pub rho_diff: f64,
    /// Candidate lower bound scaled by (1+|a|)/√(1−|a|²); None when the
    /// modulus difference is too large for the local argument to apply.
    pub lower_with_subunit_norm: Option<f64>,
    /// Candidate lower bound scaled by √((1−|a|)/(1+|a|)); same caveat.
    pub lower_with_symbol_norm: Option<f64>,
}

/// For each pair: closed-form gram distance, modulus distance, unitary-part
/// distance, and the two candidate local-injectivity lower bounds (the two
/// circulating values of ‖C_a‖ disagree; both are reported, neither asserted).
pub fn modulus_injectivity_scan(
    pairs: &[(DiskPoint, DiskPoint)],
    order: usize,
) -> Result<Vec<InjectivityRecord>> {
    let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
    let mut out = Vec::with_capacity(pairs.len());
    for &(a, b) in pairs {
        let gram_diff = opnorm(&(gram_cstarc(a, order) - gram_cstarc(b, order)));
        let same = (a.value() - b.value()).norm() == 0.0;
        if same != (gram_diff <= 1e-12) {
            return Err(CoreError::AssertionFailure {
                name: "injectivity scan: gram distance vanishes exactly for equal points".into(),
                value: gram_diff,
                bound: 1e-12,
            });
        }
        let modulus_diff = opnorm(&(modulus_matrix(a, order)? - modulus_matrix(b, order)?));
        let rho_diff = opnorm(&(rho_matrix(a, order)? - rho_matrix(b, order)?));
        let r = a.modulus();
        let (lower_sub, lower_sym) = if modulus_diff < inv_sqrt2 {
            let margin = inv_sqrt2 - modulus_diff;
            (
                Some(margin * (1.0 + r) / (1.0 - r * r).sqrt()),
                Some(margin * ((1.0 - r) / (1.0 + r)).sqrt()),
            )
        } else {
            (None, None)
        };
        out.push(InjectivityRecord {
            a,
            b,
            gram_diff,
            modulus_diff,
            rho_diff,
            lower_with_subunit_norm: lower_sub,
            lower_with_symbol_norm: lower_sym,
        });
    }
    Ok(out)
}
