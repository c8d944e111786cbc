//! Spectral-measure quadrature for the Toeplitz modulus symbol
//! ω(θ) = |1−āe^{iθ}|⁻²: arc geometry of the level sets, the outer-function
//! kernel Ψ/Φ, matrix elements of functions of T_ω against Szegő kernels, and
//! the integral route to matrix elements of the unitary part ρ_a.
//!
//! The closed forms used as oracles come from the outer factorization of
//! |ω(θ)−λ|: with c(λ) = (1+|a|²−1/λ)/(2|a|) and γ = arccos c,
//! Ψ(u;λ) = (1−au)·(λ|a|)^{−1/2}·(1−ue^{iα})^{−1/2}(1−ue^{iβ})^{−1/2},
//! α,β = θ_a ∓ γ. For |u| < 1 every square-root factor stays in the right
//! half-plane, so principal branches are automatically continuous in λ.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::moebius::DiskPoint;

/// Support geometry of the spectral measure of T_ω for ω = |1−āe^{iθ}|⁻².
#[derive(Debug, Clone)]
pub struct SpectralProfile {
    pub a: DiskPoint,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub theta_a: f64,
}

/// Which formula supplies the density dm/dλ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityForm {
    /// sin(arccos c(λ))/π with c(λ) = (1+|a|²−1/λ)/(2|a|). Passes the mass
    /// oracle; the production form.
    SymbolCosine,
    /// √(1−¼(1+(1−1/λ)/|a|)²)/π, clamped at 0. Fails the endpoint limits and
    /// the mass oracle by design; kept as a negative control.
    HalfArc,
}

/// Endpoint handling for the logarithmic singularities in Ψ's inner integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplittingMode {
    /// Split at the arc endpoints and substitute t² toward each singular end.
    SqrtAtSingularities,
    /// Split at the arc endpoints only; plain Gauss panels. Converges, slowly.
    PlainPanels,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureBudget {
    pub theta_points: usize,
    pub lambda_points: usize,
    pub splitting: SplittingMode,
}

impl QuadratureBudget {
    pub fn new(theta_points: usize, lambda_points: usize, splitting: SplittingMode) -> Result<Self> {
        if theta_points < 128 {
            return Err(CoreError::AssertionFailure {
                name: "quadrature budget: theta_points ≥ 128".into(),
                value: theta_points as f64,
                bound: 128.0,
            });
        }
        if lambda_points < 64 {
            return Err(CoreError::AssertionFailure {
                name: "quadrature budget: lambda_points ≥ 64".into(),
                value: lambda_points as f64,
                bound: 64.0,
            });
        }
        Ok(Self { theta_points, lambda_points, splitting })
    }

    /// Budget the identity suites are pinned to.
    pub fn reference() -> Self {
        Self { theta_points: 2048, lambda_points: 256, splitting: SplittingMode::SqrtAtSingularities }
    }
}

/// Tolerance for the two-level refinement check inside psi.
const PSI_REFINE_TOL: f64 = 1e-6;

pub fn profile(a: DiskPoint) -> Result<SpectralProfile> {
    if a.is_origin() {
        return Err(CoreError::ZeroBase);
    }
    let r = a.modulus();
    Ok(SpectralProfile {
        a,
        lambda_min: 1.0 / ((1.0 + r) * (1.0 + r)),
        lambda_max: 1.0 / ((1.0 - r) * (1.0 - r)),
        theta_a: a.value().arg(),
    })
}

impl SpectralProfile {
    /// c(λ): cosine of the half-width of the arc {θ: ω(θ) ≥ λ}.
    pub fn arc_cos(&self, lambda: f64) -> f64 {
        let r = self.a.modulus();
        ((1.0 + r * r - 1.0 / lambda) / (2.0 * r)).clamp(-1.0, 1.0)
    }

    pub fn half_width(&self, lambda: f64) -> f64 {
        self.arc_cos(lambda).acos()
    }

    pub fn alpha(&self, lambda: f64) -> f64 {
        self.theta_a - self.half_width(lambda)
    }

    pub fn beta(&self, lambda: f64) -> f64 {
        self.theta_a + self.half_width(lambda)
    }

    pub fn density(&self, lambda: f64) -> f64 {
        self.density_with(lambda, DensityForm::SymbolCosine)
    }

    pub fn density_with(&self, lambda: f64, form: DensityForm) -> f64 {
        match form {
            DensityForm::SymbolCosine => {
                let c = self.arc_cos(lambda);
                (1.0 - c * c).max(0.0).sqrt() / std::f64::consts::PI
            }
            DensityForm::HalfArc => {
                let r = self.a.modulus();
                let q = 0.5 * (1.0 + (1.0 - 1.0 / lambda) / r);
                (1.0 - q * q).max(0.0).sqrt() / std::f64::consts::PI
            }
        }
    }

    pub fn contains(&self, lambda: f64) -> bool {
        lambda > self.lambda_min && lambda < self.lambda_max
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1], cached per order.
pub fn gauss_legendre(n: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return hit.clone();
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    let entry = Arc::new((nodes, weights));
    cache.lock().unwrap().insert(n, entry.clone());
    entry
}

fn gl_panel<F: FnMut(f64) -> Complex64>(lo: f64, hi: f64, n: usize, mut f: F) -> Complex64 {
    let gl = gauss_legendre(n.max(2));
    let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in gl.0.iter().zip(gl.1.iter()) {
        acc += f(mid + half * x) * *w;
    }
    acc * half
}

/// ∫ log|ω(θ)−λ| P(u,θ) dθ over the circle, singular at θ−θ_a = ±γ,
/// with n points distributed over four panels.
fn log_integral(u: Complex64, lambda: f64, prof: &SpectralProfile, n: usize, mode: SplittingMode) -> Complex64 {
    let r = prof.a.modulus();
    let gamma = prof.half_width(lambda);
    let integrand = |x: f64| -> Complex64 {
        let omega = 1.0 / (1.0 + r * r - 2.0 * r * x.cos());
        let z = Complex64::from_polar(1.0, prof.theta_a + x);
        let p = (1.0 + u * z) / (1.0 - u * z) / (4.0 * std::f64::consts::PI);
        p * (omega - lambda).abs().max(1e-300).ln()
    };
    let per = (n / 4).max(2);
    let pi = std::f64::consts::PI;
    match mode {
        SplittingMode::PlainPanels => {
            [(-pi, -gamma), (-gamma, 0.0), (0.0, gamma), (gamma, pi)]
                .into_iter()
                .map(|(lo, hi)| gl_panel(lo, hi, per, integrand))
                .sum()
        }
        SplittingMode::SqrtAtSingularities => {
            // x = singular end ± t² folds each panel so the log singularity
            // sits at t = 0 with an integrable t·log t profile
            let folds: [(f64, f64, f64); 4] = [
                (-gamma, -1.0, (pi - gamma).max(0.0)), // [−π, −γ], approach from below
                (-gamma, 1.0, gamma),                  // [−γ, 0]
                (gamma, -1.0, gamma),                  // [0, γ]
                (gamma, 1.0, (pi - gamma).max(0.0)),   // [γ, π]
            ];
            folds
                .into_iter()
                .map(|(end, dir, len)| {
                    gl_panel(0.0, len.sqrt(), per, |t| integrand(end + dir * t * t) * (2.0 * t))
                })
                .sum()
        }
    }
}

/// Ψ(u;λ) = exp(−∫log|ω−λ|·P(u,θ)dθ) by panel quadrature. Returns the value
/// and a two-level refinement error estimate (full vs half θ-budget).
pub fn psi(
    u: Complex64,
    lambda: f64,
    prof: &SpectralProfile,
    budget: &QuadratureBudget,
) -> Result<(Complex64, f64)> {
    if !prof.contains(lambda) {
        return Err(CoreError::AssertionFailure {
            name: "psi: lambda strictly inside the support".into(),
            value: lambda,
            bound: prof.lambda_max,
        });
    }
    let fine = (-log_integral(u, lambda, prof, budget.theta_points, budget.splitting)).exp();
    let coarse = (-log_integral(u, lambda, prof, budget.theta_points / 2, budget.splitting)).exp();
    let err = (fine - coarse).norm();
    if err > PSI_REFINE_TOL * (1.0 + fine.norm()) {
        return Err(CoreError::QuadratureFailure);
    }
    Ok((fine, err))
}

/// Closed form of Ψ from the outer factorization of |ω−λ|.
pub fn psi_closed(u: Complex64, lambda: f64, prof: &SpectralProfile) -> Complex64 {
    let r = prof.a.modulus();
    let ea = Complex64::from_polar(1.0, prof.alpha(lambda));
    let eb = Complex64::from_polar(1.0, prof.beta(lambda));
    (1.0 - prof.a.value() * u)
        / ((lambda * r).sqrt() * (1.0 - u * ea).sqrt() * (1.0 - u * eb).sqrt())
}

/// Φ(u;λ) = Ψ·(1−ue^{iα})^{−1/2}(1−ue^{iβ})^{−1/2}, Ψ by quadrature.
pub fn phi_fn(
    u: Complex64,
    lambda: f64,
    prof: &SpectralProfile,
    budget: &QuadratureBudget,
) -> Result<Complex64> {
    let (p, _) = psi(u, lambda, prof, budget)?;
    let ea = Complex64::from_polar(1.0, prof.alpha(lambda));
    let eb = Complex64::from_polar(1.0, prof.beta(lambda));
    Ok(p / ((1.0 - u * ea).sqrt() * (1.0 - u * eb).sqrt()))
}

/// Closed form of Φ; the square-root pair collapses to the quadratic
/// 1 − 2c·ue^{iθ_a} + u²e^{2iθ_a}.
pub fn phi_closed(u: Complex64, lambda: f64, prof: &SpectralProfile) -> Complex64 {
    let r = prof.a.modulus();
    let c = prof.arc_cos(lambda);
    let ephase = Complex64::from_polar(1.0, prof.theta_a);
    let quad = 1.0 - 2.0 * c * u * ephase + u * u * ephase * ephase;
    (1.0 - prof.a.value() * u) / ((lambda * r).sqrt() * quad)
}

fn lambda_grid(lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
    // λ = mid + half·cos t absorbs the √-vanishing of the density at the ends
    let gl = gauss_legendre(n);
    let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    let pi = std::f64::consts::PI;
    gl.0.iter()
        .zip(gl.1.iter())
        .map(|(x, w)| {
            let t = 0.5 * pi * (x + 1.0);
            (mid + half * t.cos(), half * t.sin() * w * 0.5 * pi)
        })
        .collect()
}

fn form_on_interval<F: Fn(f64) -> f64>(
    f: &F,
    u: Complex64,
    v: Complex64,
    prof: &SpectralProfile,
    budget: &QuadratureBudget,
    lo: f64,
    hi: f64,
    density: DensityForm,
) -> Result<Complex64> {
    let lo = lo.max(prof.lambda_min);
    let hi = hi.min(prof.lambda_max);
    if lo >= hi {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (lambda, weight) in lambda_grid(lo, hi, budget.lambda_points) {
        let fu = phi_fn(u.conj(), lambda, prof, budget)?;
        let fv = phi_fn(v.conj(), lambda, prof, budget)?;
        acc += fu * fv.conj() * (f(lambda) * prof.density_with(lambda, density) * weight);
    }
    Ok(acc)
}

/// ⟨f(T_ω)k_u, k_v⟩ = ∫ f(λ)Φ(ū;λ)conj(Φ(v̄;λ)) dm(λ) over the support.
pub fn spectral_form<F: Fn(f64) -> f64>(
    f: F,
    u: Complex64,
    v: Complex64,
    prof: &SpectralProfile,
    budget: &QuadratureBudget,
) -> Result<Complex64> {
    form_on_interval(&f, u, v, prof, budget, prof.lambda_min, prof.lambda_max, DensityForm::SymbolCosine)
}

/// spectral_form with an explicit density formula (negative-control knob).
pub fn spectral_form_with<F: Fn(f64) -> f64>(
    f: F,
    u: Complex64,
    v: Complex64,
    prof: &SpectralProfile,
    budget: &QuadratureBudget,
    density: DensityForm,
) -> Result<Complex64> {
    form_on_interval(&f, u, v, prof, budget, prof.lambda_min, prof.lambda_max, density)
}

/// ⟨E(Λ)f(T_ω)k_u, k_v⟩ over Λ = [lo, hi] ∩ support; exactly 0 when disjoint.
pub fn spectral_restricted<F: Fn(f64) -> f64>(
    f: F,
    u: Complex64,
    v: Complex64,
    prof: &SpectralProfile,
    budget: &QuadratureBudget,
    lo: f64,
    hi: f64,
) -> Result<Complex64> {
    form_on_interval(&f, u, v, prof, budget, lo, hi, DensityForm::SymbolCosine)
}

/// ⟨ρ_a k_u, k_v⟩ by the two-term route: ρ_a = (C_a*C_a)^{1/2}·C_a and
/// C_a k_u = c₁·k_{φ_a(u)} + c₂·1 with
/// c₁ = ū(1−|a|²)/((ū−ā)(1−ūa)), c₂ = ā/(ā−ū), so both terms are √λ-moments.
pub fn rho_element(
    u: DiskPoint,
    v: DiskPoint,
    prof: &SpectralProfile,
    budget: &QuadratureBudget,
) -> Result<Complex64> {
    let a = prof.a.value();
    let (ub, ab) = (u.value().conj(), a.conj());
    let denom = ub - ab;
    if denom.norm() <= 1e-14 {
        return Err(CoreError::PoleAtPoint { denominator: denom.norm() });
    }
    let r2 = a.norm_sqr();
    let c1 = ub * (1.0 - r2) / (denom * (1.0 - ub * a));
    let c2 = ab / (ab - ub);
    let w = crate::moebius::MoebiusMap::reflection(prof.a).eval(u.value())?;
    let scale = (1.0 - r2).sqrt();
    let sqrt = |l: f64| l.sqrt();
    let term1 = spectral_form(sqrt, w, v.value(), prof, budget)?;
    let term2 = spectral_form(sqrt, Complex64::new(0.0, 0.0), v.value(), prof, budget)?;
    Ok(scale * (c1 * term1 + c2 * term2))
}

/// Same matrix element by the reflected one-term route:
/// ⟨ρ_a k_u, k_v⟩ = ⟨(C*C)^{−1/2}k_u, C*k_v⟩, a λ^{−1/2}-moment at φ_a(v).
pub fn rho_element_reflected(
    u: DiskPoint,
    v: DiskPoint,
    prof: &SpectralProfile,
    budget: &QuadratureBudget,
) -> Result<Complex64> {
    let r2 = prof.a.value().norm_sqr();
    let w = crate::moebius::MoebiusMap::reflection(prof.a).eval(v.value())?;
    let inv_sqrt = |l: f64| 1.0 / l.sqrt();
    let form = spectral_form(inv_sqrt, u.value(), w, prof, budget)?;
    Ok(form / (1.0 - r2).sqrt())
}
