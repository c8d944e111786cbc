//! Eigenspace geometry of the composition reflection: orthonormal bases of
//! the ±1 eigenspaces from powers of the fixed-point automorphism, principal
//! angles and numerical intersection dimensions, and direct-rotation
//! exponents realizing Grassmann geodesics between them.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::hardy::{moebius_power, unit_tail, HardyVector};
use crate::linalg::{
    hermitian_eigen, opnorm, orthocomplement, orthonormalize, principal_cosines, OperatorMatrix,
};
use crate::moebius::{fixed_point, DiskPoint};

/// Cosine-deficit threshold for plain (non-complemented) basis pairs.
pub const PLAIN_THRESHOLD: f64 = 1e-3;
/// Doubled threshold when either side is a complemented basis.
pub const COMPLEMENTED_THRESHOLD: f64 = 2e-3;
/// A counted direction must clear the threshold line by this factor times
/// the recorded tails, or the report flags the classification as fragile.
const GAP_TAIL_FACTOR: f64 = 10.0;
/// Principal pairs closer than this to perfect alignment are not rotated.
const UNIT_COSINE_SKIP: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy)]
pub struct SubspaceTag {
    pub a: DiskPoint,
    pub parity: Parity,
    pub complemented: bool,
}

/// Orthonormal basis of a subspace of the truncated Hardy space, tagged with
/// the eigenspace family it approximates and the largest dropped column mass.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    pub columns: OperatorMatrix,
    pub tag: SubspaceTag,
    pub tail_bound: f64,
}

impl SubspaceBasis {
    pub fn order(&self) -> usize {
        self.columns.nrows()
    }

    pub fn dim(&self) -> usize {
        self.columns.ncols()
    }

    /// Orthonormalize raw columns into a basis. The span is exact within the
    /// truncated space, so the tail bound is zero.
    pub fn from_columns(columns: OperatorMatrix, tag: SubspaceTag) -> Result<Self> {
        let columns = orthonormalize(&columns, 1e-12)?;
        Ok(Self { columns, tag, tail_bound: 0.0 })
    }
}

/// Default basis size: keeps the largest neglected eigenfunction tail far
/// below the intersection thresholds for |a| ≤ 0.6.
pub fn default_basis_size(order: usize) -> usize {
    (order / 8).min(32)
}

/// Orthonormal basis spanning the truncated powers (φ_ω)^{2n} (even) or
/// (φ_ω)^{2n+1} (odd) of the fixed-point automorphism, n = 0..k−1. Even spans
/// approximate the +1 eigenspace of C_a, odd spans the −1 eigenspace.
pub fn eigenbasis(a: DiskPoint, parity: Parity, order: usize, k: usize) -> Result<SubspaceBasis> {
    if k == 0 || 4 * k > order {
        return Err(CoreError::AssertionFailure {
            name: "eigenbasis: 1 ≤ k ≤ order/4".into(),
            value: k as f64,
            bound: (order / 4) as f64,
        });
    }
    let omega = fixed_point(a);
    let mut raw = OperatorMatrix::zeros(order, k);
    let mut tail = 0.0f64;
    for n in 0..k {
        let power = match parity {
            Parity::Even => 2 * n as u32,
            Parity::Odd => 2 * n as u32 + 1,
        };
        let col = moebius_power(order, omega, power);
        tail = tail.max(unit_tail(&col));
        raw.set_column(n, &col.coeffs);
    }
    let columns = orthonormalize(&raw, 1e-12)?;
    Ok(SubspaceBasis {
        columns,
        tag: SubspaceTag { a, parity, complemented: false },
        tail_bound: tail,
    })
}

/// Orthogonal complement within the truncated space.
///
/// A plain basis is complemented through the richer partner sample of its
/// family at min(order/4, 2k) columns whenever that sample contains it:
/// complementing the k-column span directly would leave the family members
/// beyond index k inside the complement, and those directions masquerade as
/// intersections with everything the family meets. Bases the partner does not
/// contain (hand-built spans) and complemented bases complement directly.
pub fn complement(b: &SubspaceBasis) -> Result<SubspaceBasis> {
    let order = b.order();
    let tag = SubspaceTag { complemented: !b.tag.complemented, ..b.tag };
    if !b.tag.complemented {
        let partner_k = (order / 4).min(2 * b.dim());
        if partner_k > b.dim() {
            let partner = eigenbasis(b.tag.a, b.tag.parity, order, partner_k)?;
            let inside = &partner.columns * (partner.columns.adjoint() * &b.columns);
            if opnorm(&(inside - &b.columns)) < 1e-8 {
                let columns = orthocomplement(&partner.columns);
                return Ok(SubspaceBasis { columns, tag, tail_bound: partner.tail_bound });
            }
        }
    }
    let columns = orthocomplement(&b.columns);
    Ok(SubspaceBasis { columns, tag, tail_bound: b.tail_bound })
}

#[derive(Debug, Clone)]
pub struct PrincipalAngleReport {
    /// Cosines of the principal angles, descending in [0, 1].
    pub cosines: Vec<f64>,
    /// Count of cosines above the threshold line.
    pub intersection_dim: usize,
    /// Cosine-deficit threshold used (doubled for complemented inputs).
    pub threshold: f64,
    /// Distance from the threshold line down to the first excluded cosine.
    pub gap: f64,
    /// Whether the gap clears 10× the recorded tail bounds.
    pub gap_ok: bool,
}

pub fn principal_angles(b1: &SubspaceBasis, b2: &SubspaceBasis) -> Result<PrincipalAngleReport> {
    if b1.order() != b2.order() {
        return Err(CoreError::OrderMismatch { left: b1.order(), right: b2.order() });
    }
    let cosines: Vec<f64> = principal_cosines(&b1.columns, &b2.columns)
        .iter()
        .map(|s| s.clamp(0.0, 1.0))
        .collect();
    let threshold = if b1.tag.complemented || b2.tag.complemented {
        COMPLEMENTED_THRESHOLD
    } else {
        PLAIN_THRESHOLD
    };
    let intersection_dim = cosines.iter().filter(|&&s| s > 1.0 - threshold).count();
    let next = cosines.get(intersection_dim).copied().unwrap_or(0.0);
    let gap = (1.0 - threshold) - next;
    let gap_ok = gap >= GAP_TAIL_FACTOR * b1.tail_bound.max(b2.tail_bound);
    Ok(PrincipalAngleReport { cosines, intersection_dim, threshold, gap, gap_ok })
}

/// Principal vector pairs: columns of X span b1, columns of Y span b2, and
/// ⟨x_i, y_j⟩ = σ_i δ_ij with the cosines σ descending.
pub fn principal_pairs(
    b1: &SubspaceBasis,
    b2: &SubspaceBasis,
) -> Result<(OperatorMatrix, OperatorMatrix, Vec<f64>)> {
    if b1.order() != b2.order() {
        return Err(CoreError::OrderMismatch { left: b1.order(), right: b2.order() });
    }
    let svd = (b1.columns.adjoint() * &b2.columns).svd(true, true);
    let u = svd.u.as_ref().expect("svd with vectors");
    let vt = svd.v_t.as_ref().expect("svd with vectors");
    let x = &b1.columns * u;
    let y = &b2.columns * vt.adjoint();
    Ok((x, y, svd.singular_values.iter().copied().collect()))
}

/// |⟨x, y⟩| / (‖x‖‖y‖).
pub fn vec_correlation(x: &DVector<Complex64>, y: &DVector<Complex64>) -> f64 {
    let num = x.dotc(y).norm();
    num / (x.norm() * y.norm())
}

/// Normalized truncation of 1/(ω_a + ω̄_a z²). The Taylor coefficients have
/// constant modulus (poles sit on the unit circle), so the function is not
/// square-summable; correlations, not residuals, are the meaningful metric.
pub fn witness_function(a: DiskPoint, order: usize) -> Result<HardyVector> {
    if a.is_origin() {
        return Err(CoreError::ZeroBase);
    }
    let omega = fixed_point(a).value();
    let ratio = -omega.conj() / omega;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order];
    let mut c = 1.0 / omega;
    for m in 0..(order + 1) / 2 {
        coeffs[2 * m] = c;
        c *= ratio;
    }
    Ok(HardyVector::from_coeffs(coeffs).normalized())
}

/// Normalized truncation of the composition image (witness ∘ φ_ω) =
/// (1−ω̄z)² / ((1+|ω|²)ω − 4|ω|²z + (1+|ω|²)ω̄z²), by exact power-series
/// division rather than the truncated matrix product.
pub fn witness_image(a: DiskPoint, order: usize) -> Result<HardyVector> {
    if a.is_origin() {
        return Err(CoreError::ZeroBase);
    }
    let omega = fixed_point(a).value();
    let r2 = omega.norm_sqr();
    let q = [
        (1.0 + r2) * omega,
        Complex64::new(-4.0 * r2, 0.0),
        (1.0 + r2) * omega.conj(),
    ];
    let mut inv = vec![Complex64::new(0.0, 0.0); order];
    inv[0] = 1.0 / q[0];
    for n in 1..order {
        let mut s = q[1] * inv[n - 1];
        if n >= 2 {
            s += q[2] * inv[n - 2];
        }
        inv[n] = -s / q[0];
    }
    let num = [
        Complex64::new(1.0, 0.0),
        -2.0 * omega.conj(),
        omega.conj() * omega.conj(),
    ];
    let mut out = vec![Complex64::new(0.0, 0.0); order];
    for j in 0..order {
        for (i, ni) in num.iter().enumerate() {
            if j >= i {
                out[j] += ni * inv[j - i];
            }
        }
    }
    Ok(HardyVector::from_coeffs(out).normalized())
}

/// One pair of the intersection suite: what the theorems predict, what the
/// angle report found.
#[derive(Debug, Clone)]
pub struct PairOutcome {
    pub label: &'static str,
    pub expected_dim: usize,
    pub report: PrincipalAngleReport,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct IntersectionSuite {
    pub a: DiskPoint,
    pub generic_b: DiskPoint,
    pub order: usize,
    pub k: usize,
    pub pairs: Vec<PairOutcome>,
    /// Correlation of the near-1 principal vector of (minus-space, plus-⊥)
    /// with the truncated 1/(ω+ω̄z²).
    pub witness_correlation: f64,
    /// Same, against the composition image of the witness.
    pub witness_image_correlation: f64,
    /// Correlation of the top principal vector of (minus-space, even-space)
    /// with the constant function.
    pub constant_correlation: f64,
    pub constant_pass: bool,
    pub witness_pass: bool,
    pub all_pass: bool,
}

impl IntersectionSuite {
    /// Convert the first failed check into an error naming the pair and its
    /// leading cosines.
    pub fn assert_all(&self) -> Result<()> {
        for p in &self.pairs {
            if !p.pass {
                let shown = p.report.cosines.iter().take(4).map(|s| format!("{s:.6}"));
                return Err(CoreError::AssertionFailure {
                    name: format!(
                        "{}: dim {} (expected {}), cosines [{}]",
                        p.label,
                        p.report.intersection_dim,
                        p.expected_dim,
                        shown.collect::<Vec<_>>().join(", ")
                    ),
                    value: p.report.intersection_dim as f64,
                    bound: p.expected_dim as f64,
                });
            }
        }
        if !self.witness_pass {
            return Err(CoreError::AssertionFailure {
                name: "witness principal-vector correlation".into(),
                value: self.witness_correlation,
                bound: 0.999,
            });
        }
        if !self.constant_pass {
            return Err(CoreError::AssertionFailure {
                name: "constant principal-vector correlation".into(),
                value: self.constant_correlation,
                bound: 0.999,
            });
        }
        Ok(())
    }
}

/// The eleven intersection checks: both eigenspace pairs against the origin
/// bases, against a generic second point, the six zero-intersections mixing
/// eigenspaces with complements, and the line claimed inside
/// (minus-space ∩ plus-space⊥) together with its witness correlations.
pub fn intersection_suite(
    a: DiskPoint,
    generic_b: DiskPoint,
    order: usize,
    k: usize,
) -> Result<IntersectionSuite> {
    if a.is_origin() {
        return Err(CoreError::ZeroBase);
    }
    if a.modulus() > 0.6 {
        return Err(CoreError::AssertionFailure {
            name: "intersection_suite: |a| ≤ 0.6".into(),
            value: a.modulus(),
            bound: 0.6,
        });
    }
    let origin = DiskPoint::origin();
    let nm = eigenbasis(a, Parity::Even, order, k)?;
    let np = eigenbasis(a, Parity::Odd, order, k)?;
    let ev = eigenbasis(origin, Parity::Even, order, k)?;
    let od = eigenbasis(origin, Parity::Odd, order, k)?;
    let ngm = eigenbasis(generic_b, Parity::Even, order, k)?;
    let ngp = eigenbasis(generic_b, Parity::Odd, order, k)?;
    let cnm = complement(&nm)?;
    let cnp = complement(&np)?;

    let table: [(&'static str, &SubspaceBasis, &SubspaceBasis, usize); 11] = [
        ("minus_vs_origin_minus", &nm, &ev, 1),
        ("plus_vs_origin_plus", &np, &od, 0),
        ("minus_vs_generic_minus", &nm, &ngm, 1),
        ("plus_vs_generic_plus", &np, &ngp, 0),
        ("origin_plus_vs_minus", &od, &nm, 0),
        ("origin_minus_vs_minus_perp", &ev, &cnm, 0),
        ("origin_minus_vs_plus", &ev, &np, 0),
        ("origin_plus_vs_plus_perp", &od, &cnp, 0),
        ("origin_plus_vs_minus_perp", &od, &cnm, 0),
        ("origin_minus_vs_plus_perp", &ev, &cnp, 0),
        ("minus_vs_plus_perp", &nm, &cnp, 1),
    ];
    let mut pairs = Vec::with_capacity(table.len());
    for (label, b1, b2, expected_dim) in table {
        let report = principal_angles(b1, b2)?;
        let pass = report.intersection_dim == expected_dim && report.gap_ok;
        pairs.push(PairOutcome { label, expected_dim, report, pass });
    }

    let (x, _, _) = principal_pairs(&nm, &cnp)?;
    let principal = x.column(0).into_owned();
    let witness = witness_function(a, order)?;
    let image = witness_image(a, order)?;
    let witness_correlation = vec_correlation(&principal, &witness.coeffs);
    let witness_image_correlation = vec_correlation(&principal, &image.coeffs);

    let (xc, _, _) = principal_pairs(&nm, &ev)?;
    let constant = {
        let mut e0 = DVector::zeros(order);
        e0[0] = Complex64::new(1.0, 0.0);
        e0
    };
    let constant_correlation = vec_correlation(&xc.column(0).into_owned(), &constant);

    let constant_pass = constant_correlation > 0.999;
    let witness_pass = witness_correlation > 0.999;
    let all_pass = pairs.iter().all(|p| p.pass) && constant_pass && witness_pass;
    Ok(IntersectionSuite {
        a,
        generic_b,
        order,
        k,
        pairs,
        witness_correlation,
        witness_image_correlation,
        constant_correlation,
        constant_pass,
        witness_pass,
        all_pass,
    })
}

#[derive(Debug, Clone)]
pub struct GeodesicCondition {
    /// dim(span(B1) ∩ span(B2)⊥)
    pub dim_in_complement: usize,
    /// dim(span(B1)⊥ ∩ span(B2))
    pub dim_complement_in: usize,
    /// The two dimensions agree.
    pub exists: bool,
    /// Both dimensions vanish: the minimal geodesic is unique.
    pub unique: bool,
    pub left_report: PrincipalAngleReport,
    pub right_report: PrincipalAngleReport,
}

pub fn geodesic_condition(b1: &SubspaceBasis, b2: &SubspaceBasis) -> Result<GeodesicCondition> {
    let left_report = principal_angles(b1, &complement(b2)?)?;
    let right_report = principal_angles(&complement(b1)?, b2)?;
    let dim_in_complement = left_report.intersection_dim;
    let dim_complement_in = right_report.intersection_dim;
    Ok(GeodesicCondition {
        dim_in_complement,
        dim_complement_in,
        exists: dim_in_complement == dim_complement_in,
        unique: dim_in_complement == 0 && dim_complement_in == 0,
        left_report,
        right_report,
    })
}

#[derive(Debug, Clone)]
pub struct GeodesicResult {
    /// Skew-hermitian exponent supported on the principal 2-planes.
    pub z: OperatorMatrix,
    /// ‖Z‖ = largest principal angle, ≤ π/2 by construction.
    pub norm: f64,
    /// ‖P(e^Z span B1) − P(span B2)‖.
    pub residual: f64,
    /// Compression norms ‖B1ᴴZB1‖, ‖B2ᴴZB2‖.
    pub codiagonal_defects: (f64, f64),
}

/// e^M for skew-hermitian M, through the eigendecomposition of iM.
pub fn expm_skew(m: &OperatorMatrix) -> Result<OperatorMatrix> {
    let herm = m.map(|z| z * Complex64::new(0.0, 1.0));
    let (vals, vecs) = hermitian_eigen(&herm, 1e-8)?;
    let phases = OperatorMatrix::from_diagonal(&DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&w| Complex64::from_polar(1.0, -w)),
    ));
    Ok(&vecs * phases * vecs.adjoint())
}

/// Minimal-norm rotation taking span(B1) onto span(B2): each principal pair
/// is rotated in its own 2-plane by its principal angle. Requires generic
/// position (both geodesic-condition dimensions zero).
pub fn direct_rotation(b1: &SubspaceBasis, b2: &SubspaceBasis) -> Result<GeodesicResult> {
    if b1.dim() != b2.dim() {
        return Err(CoreError::OrderMismatch { left: b1.dim(), right: b2.dim() });
    }
    let cond = geodesic_condition(b1, b2)?;
    if !cond.unique {
        return Err(CoreError::GenericPositionViolated {
            dim_left: cond.dim_in_complement,
            dim_right: cond.dim_complement_in,
        });
    }
    let (x, y, sigma) = principal_pairs(b1, b2)?;
    let n = b1.order();
    let mut z = OperatorMatrix::zeros(n, n);
    let mut norm = 0.0f64;
    for (i, &s) in sigma.iter().enumerate() {
        let s = s.min(1.0);
        if s >= 1.0 - UNIT_COSINE_SKIP {
            continue;
        }
        let theta = s.acos();
        norm = norm.max(theta);
        let xi = x.column(i);
        let w = (y.column(i) - xi.scale(s)).unscale((1.0 - s * s).sqrt());
        z += (&w * xi.adjoint() - xi * w.adjoint()).scale(theta);
    }
    let rot = expm_skew(&z)?;
    let moved = &rot * &b1.columns;
    let residual = opnorm(&(&moved * moved.adjoint() - &b2.columns * b2.columns.adjoint()));
    let cod1 = opnorm(&(b1.columns.adjoint() * &z * &b1.columns));
    let cod2 = opnorm(&(b2.columns.adjoint() * &z * &b2.columns));
    Ok(GeodesicResult { z, norm, residual, codiagonal_defects: (cod1, cod2) })
}

/// Basis reached at parameter t along the rotation: e^{tZ}·span(B).
pub fn rotate_by(z: &OperatorMatrix, b: &SubspaceBasis, t: f64) -> Result<SubspaceBasis> {
    let rot = expm_skew(&z.scale(t))?;
    let columns = orthonormalize(&(&rot * &b.columns), 1e-12)?;
    Ok(SubspaceBasis { columns, tag: b.tag, tail_bound: b.tail_bound })
}
