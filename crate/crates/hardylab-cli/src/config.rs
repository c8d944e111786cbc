//! Run configuration: defaults per subcommand, optional TOML file, CLI flag
//! overrides, and the input validation backing exit code 2.

use std::collections::BTreeMap;
use std::path::PathBuf;

use hardylab_core::spectral::{QuadratureBudget, SplittingMode};
use hardylab_core::subspace::default_basis_size;
use hardylab_core::DiskPoint;
use serde::Deserialize;

/// Every tolerance the suites consult, with its shipped default. Overrides
/// must name one of these.
pub const TOLERANCES: &[(&str, f64)] = &[
    ("moebius_projective", 1e-10),
    ("moebius_pointwise", 1e-12),
    ("c_squared", 1e-8),
    ("adjoint_block", 1e-8),
    ("kernel_identity", 1e-8),
    ("w_squared", 1e-8),
    ("w_shift_toeplitz", 1e-8),
    ("toeplitz_block", 1e-7),
    ("rho_hermitian", 1e-7),
    ("rho_unitary", 1e-7),
    ("reconstruction", 1e-7),
    ("symmetry_fix", 1e-6),
    ("symmetry_routes", 1e-7),
    ("series_residual", 1e-6),
    ("mass", 1e-3),
    ("moment", 1e-3),
    ("sqrt_moment", 1e-3),
    ("geodesic_residual", 1e-6),
    ("codiagonal", 1e-8),
    ("midpoint", 1e-6),
    ("berkson_slack", 1e-9),
];

const MIN_TOLERANCE: f64 = 100.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Verify,
    Spectral,
    Subspaces,
    Geodesic,
    Scan,
}

impl CommandKind {
    fn default_a(self) -> (f64, f64) {
        match self {
            CommandKind::Verify => (0.25, 0.0),
            CommandKind::Spectral => (0.6, 0.0),
            CommandKind::Subspaces | CommandKind::Geodesic | CommandKind::Scan => (0.5, 0.0),
        }
    }
}

/// Shared flags; every key mirrors a config-file field.
#[derive(clap::Args, Debug, Default, Clone)]
pub struct CommonArgs {
    /// TOML file with RunConfig fields (flags take precedence)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Point as "re,im", "r@deg", or a bare real
    #[arg(long)]
    pub a: Option<String>,
    /// Second point (same syntax); for scan, defaults to the a-grid
    #[arg(long)]
    pub b: Option<String>,
    /// Truncation order N
    #[arg(long)]
    pub order: Option<usize>,
    /// Columns per eigenspace basis
    #[arg(long)]
    pub k: Option<usize>,
    /// Quadrature nodes on the circle
    #[arg(long = "theta-points")]
    pub theta_points: Option<usize>,
    /// Quadrature nodes on the spectral interval
    #[arg(long = "lambda-points")]
    pub lambda_points: Option<usize>,
    /// Seed for the randomized suites
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write records to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format: json (records as JSON lines) or csv
    #[arg(long)]
    pub format: Option<String>,
    /// Tolerance override, NAME=VALUE; also accepted as --tol.NAME VALUE
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    a: Option<PointSpec>,
    b: Option<PointSpec>,
    order: Option<usize>,
    k: Option<usize>,
    seed: Option<u64>,
    format: Option<String>,
    out: Option<PathBuf>,
    quadrature: Option<QuadFile>,
    tolerances: Option<BTreeMap<String, f64>>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct QuadFile {
    theta_points: Option<usize>,
    lambda_points: Option<usize>,
}

/// A point is either a single value or a polar-product grid.
#[derive(Deserialize, Debug, Clone)]
#[serde(untagged)]
enum PointSpec {
    Text(String),
    Grid { radii: Vec<f64>, phases_deg: Vec<f64> },
}

#[derive(Debug)]
pub struct Resolved {
    pub a: DiskPoint,
    pub b: DiskPoint,
    pub a_grid: Vec<DiskPoint>,
    pub b_grid: Vec<DiskPoint>,
    pub order: usize,
    pub k: usize,
    pub budget: QuadratureBudget,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub csv: bool,
    tol: BTreeMap<&'static str, f64>,
}

impl Resolved {
    pub fn tol(&self, name: &str) -> f64 {
        *self.tol.get(name).unwrap_or_else(|| panic!("unknown tolerance {name}"))
    }
}

pub fn parse_point(s: &str) -> Result<DiskPoint, String> {
    let s = s.trim();
    let build = |re: f64, im: f64| {
        DiskPoint::from_re_im(re, im).map_err(|e| format!("point '{s}': {e}"))
    };
    if let Some((r, deg)) = s.split_once('@') {
        let r: f64 = r.trim().parse().map_err(|_| format!("bad modulus in '{s}'"))?;
        let d: f64 = deg.trim().parse().map_err(|_| format!("bad phase in '{s}'"))?;
        let t = d.to_radians();
        build(r * t.cos(), r * t.sin())
    } else if let Some((re, im)) = s.split_once(',') {
        let re: f64 = re.trim().parse().map_err(|_| format!("bad real part in '{s}'"))?;
        let im: f64 = im.trim().parse().map_err(|_| format!("bad imaginary part in '{s}'"))?;
        build(re, im)
    } else {
        let re: f64 = s.parse().map_err(|_| format!("cannot parse point '{s}'"))?;
        build(re, 0.0)
    }
}

fn expand_grid(radii: &[f64], phases_deg: &[f64]) -> Result<Vec<DiskPoint>, String> {
    let mut pts = Vec::with_capacity(radii.len() * phases_deg.len());
    for &r in radii {
        if !(0.0..=0.8).contains(&r) {
            return Err(format!("grid radius {r} outside [0, 0.8]"));
        }
        for &p in phases_deg {
            let t = p.to_radians();
            pts.push(
                DiskPoint::from_re_im(r * t.cos(), r * t.sin()).map_err(|e| e.to_string())?,
            );
        }
    }
    if pts.is_empty() {
        return Err("empty grid".into());
    }
    Ok(pts)
}

fn point_scalar(spec: &PointSpec, what: &str) -> Result<DiskPoint, String> {
    match spec {
        PointSpec::Text(t) => parse_point(t),
        PointSpec::Grid { .. } => Err(format!("{what} must be a single point, not a grid")),
    }
}

fn point_grid(spec: &PointSpec) -> Result<Vec<DiskPoint>, String> {
    match spec {
        PointSpec::Text(t) => Ok(vec![parse_point(t)?]),
        PointSpec::Grid { radii, phases_deg } => expand_grid(radii, phases_deg),
    }
}

fn default_scan_grid() -> Vec<DiskPoint> {
    expand_grid(&[0.2, 0.4, 0.6], &[0.0, 120.0, 240.0]).expect("static grid")
}

pub fn resolve(kind: CommandKind, args: &CommonArgs) -> Result<Resolved, String> {
    let file: FileConfig = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("config {}: {e}", path.display()))?;
            toml::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))?
        }
        None => FileConfig::default(),
    };

    let a_spec = args
        .a
        .as_ref()
        .map(|t| PointSpec::Text(t.clone()))
        .or(file.a.clone());
    let b_spec = args
        .b
        .as_ref()
        .map(|t| PointSpec::Text(t.clone()))
        .or(file.b.clone());

    let order = args.order.or(file.order).unwrap_or(256);
    if !(8..=2048).contains(&order) {
        return Err(format!("order {order} outside [8, 2048]"));
    }
    let k = args.k.or(file.k).unwrap_or_else(|| default_basis_size(order));
    if k == 0 || 4 * k > order {
        return Err(format!("k {k} outside [1, order/4 = {}]", order / 4));
    }

    let theta = args
        .theta_points
        .or(file.quadrature.as_ref().and_then(|q| q.theta_points))
        .unwrap_or(1024);
    let lambda = args
        .lambda_points
        .or(file.quadrature.as_ref().and_then(|q| q.lambda_points))
        .unwrap_or(128);
    let budget = QuadratureBudget::new(theta, lambda, SplittingMode::SqrtAtSingularities)
        .map_err(|e| e.to_string())?;

    let format = args
        .format
        .clone()
        .or(file.format)
        .unwrap_or_else(|| "json".into());
    let csv = match format.as_str() {
        "json" => false,
        "csv" => true,
        other => return Err(format!("format '{other}' is not json or csv")),
    };

    let mut tol: BTreeMap<&'static str, f64> = TOLERANCES.iter().copied().collect();
    let mut apply = |name: &str, value: f64| -> Result<(), String> {
        let key = TOLERANCES
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(n, _)| *n)
            .ok_or_else(|| format!("unknown tolerance '{name}'"))?;
        if !value.is_finite() || value < MIN_TOLERANCE {
            return Err(format!(
                "tolerance {name} = {value} below the floor {MIN_TOLERANCE:.3e}"
            ));
        }
        tol.insert(key, value);
        Ok(())
    };
    if let Some(map) = &file.tolerances {
        for (name, value) in map {
            apply(name, *value)?;
        }
    }
    for pair in &args.tol {
        let (name, value) = pair
            .split_once('=')
            .ok_or_else(|| format!("tolerance override '{pair}' is not NAME=VALUE"))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| format!("tolerance override '{pair}': bad number"))?;
        apply(name.trim(), value)?;
    }

    let (da_re, da_im) = kind.default_a();
    let default_a = DiskPoint::from_re_im(da_re, da_im).expect("default point");

    let (a, b, a_grid, b_grid) = if kind == CommandKind::Scan {
        let a_grid = match &a_spec {
            Some(spec) => point_grid(spec)?,
            None => default_scan_grid(),
        };
        let b_grid = match &b_spec {
            Some(spec) => point_grid(spec)?,
            None => a_grid.clone(),
        };
        for p in a_grid.iter().chain(&b_grid) {
            if p.modulus() > 0.8 {
                return Err(format!("grid point modulus {} exceeds 0.8", p.modulus()));
            }
        }
        (default_a, default_a, a_grid, b_grid)
    } else {
        let a = match &a_spec {
            Some(spec) => point_scalar(spec, "--a")?,
            None => default_a,
        };
        let b = match &b_spec {
            Some(spec) => point_scalar(spec, "--b")?,
            None => DiskPoint::from_re_im(-0.2, 0.1).expect("default partner"),
        };
        for p in [a, b] {
            if p.modulus() > 0.8 {
                return Err(format!("point modulus {} exceeds 0.8", p.modulus()));
            }
        }
        (a, b, Vec::new(), Vec::new())
    };

    Ok(Resolved {
        a,
        b,
        a_grid,
        b_grid,
        order,
        k,
        budget,
        seed: args.seed.or(file.seed).unwrap_or(7),
        out: args.out.clone().or(file.out),
        csv,
        tol,
    })
}
