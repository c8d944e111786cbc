//! Two-sided Fourier symbols and the Toeplitz / multiplication matrices they
//! induce on the truncated space.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::hardy::HardyVector;
use crate::linalg::{identity, OperatorMatrix};
use crate::moebius::DiskPoint;

/// Fourier coefficients c_k for |k| < order of a circle symbol Σ c_k e^{ikθ}.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolFourier {
    pub order: usize,
    /// c_0, c_1, …, c_{order−1}
    pub pos: Vec<Complex64>,
    /// c_{−1}, c_{−2}, …, c_{−(order−1)}
    pub neg: Vec<Complex64>,
}

impl SymbolFourier {
    pub fn coeff(&self, k: isize) -> Complex64 {
        if k >= 0 {
            self.pos.get(k as usize).copied().unwrap_or_default()
        } else {
            self.neg.get((-k) as usize - 1).copied().unwrap_or_default()
        }
    }

    /// Largest violation of c_{−k} = conj(c_k); zero for real symbols.
    pub fn reality_defect(&self) -> f64 {
        (1..self.order)
            .map(|k| (self.coeff(-(k as isize)) - self.coeff(k as isize).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        let mut s = self.coeff(0);
        for k in 1..self.order as isize {
            let e = Complex64::from_polar(1.0, k as f64 * theta);
            s += self.coeff(k) * e + self.coeff(-k) * e.conj();
        }
        s
    }
}

/// Symbol 1/|1−āe^{iθ}|²: c_k = ā^k/(1−|a|²) for k ≥ 0, conjugate-symmetric.
pub fn symbol_ka2(a: DiskPoint, order: usize) -> SymbolFourier {
    let av = a.value();
    let scale = 1.0 / (1.0 - av.norm_sqr());
    let mut pos = Vec::with_capacity(order);
    let mut p = Complex64::new(scale, 0.0);
    for _ in 0..order {
        pos.push(p);
        p *= av.conj();
    }
    let neg = pos.iter().skip(1).map(|c| c.conj()).collect();
    SymbolFourier { order, pos, neg }
}

/// Symbol 1 + (1−|a|²)/|1−āe^{iθ}|²: c_0 = 2 and c_k = ā^k for k ≥ 1.
pub fn symbol_one_plus_ka2(a: DiskPoint, order: usize) -> SymbolFourier {
    let av = a.value();
    let mut pos = Vec::with_capacity(order);
    pos.push(Complex64::new(2.0, 0.0));
    let mut p = av.conj();
    for _ in 1..order {
        pos.push(p);
        p *= av.conj();
    }
    let neg = pos.iter().skip(1).map(|c| c.conj()).collect();
    SymbolFourier { order, pos, neg }
}

/// Trapezoid quadrature of the Fourier integral over a uniform circle grid;
/// independent cross-check route for closed-form symbols.
pub fn symbol_from_grid(
    f: impl Fn(f64) -> Complex64,
    order: usize,
    samples: usize,
) -> SymbolFourier {
    let vals: Vec<Complex64> = (0..samples)
        .map(|j| f(2.0 * std::f64::consts::PI * j as f64 / samples as f64))
        .collect();
    let coeff = |k: isize| -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (j, v) in vals.iter().enumerate() {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / samples as f64;
            s += v * Complex64::from_polar(1.0, -(k as f64) * theta);
        }
        s / samples as f64
    };
    let pos = (0..order as isize).map(coeff).collect();
    let neg = (1..order as isize).map(|k| coeff(-k)).collect();
    SymbolFourier { order, pos, neg }
}

/// T_{jk} = c_{j−k}: compression of multiplication by the symbol.
pub fn toeplitz_matrix(sym: &SymbolFourier, order: usize) -> OperatorMatrix {
    DMatrix::from_fn(order, order, |j, k| sym.coeff(j as isize - k as isize))
}

/// Forward shift: e_k ↦ e_{k+1}.
pub fn shift_matrix(order: usize) -> OperatorMatrix {
    let mut s = OperatorMatrix::zeros(order, order);
    for j in 0..order - 1 {
        s[(j + 1, j)] = Complex64::new(1.0, 0.0);
    }
    s
}

/// Backward shift: adjoint of the forward shift.
pub fn coshift_matrix(order: usize) -> OperatorMatrix {
    shift_matrix(order).adjoint()
}

/// Lower-triangular Toeplitz matrix of multiplication by an analytic symbol.
pub fn mult_matrix(f: &HardyVector) -> OperatorMatrix {
    let n = f.order();
    DMatrix::from_fn(n, n, |j, k| {
        if j >= k {
            f.coeffs[j - k]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// I − ā·shift: the bidiagonal factor carrying (1−āz).
pub fn mult_one_minus_abar_z(a: DiskPoint, order: usize) -> OperatorMatrix {
    identity(order) - shift_matrix(order).scale(1.0) * a.value().conj()
}
