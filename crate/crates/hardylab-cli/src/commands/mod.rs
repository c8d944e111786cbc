//! Subcommand implementations. Each run emits ResultRecords through the
//! Emitter; the caller maps the outcome to the exit-code contract.

pub mod geodesic;
pub mod scan;
pub mod spectral;
pub mod subspaces;
pub mod verify;

use hardylab_core::linalg::OperatorMatrix;
use hardylab_core::{CoreError, DiskPoint};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Failure classes behind exit codes 2 and 3.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numerical(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::QuadratureFailure { .. }
            | CoreError::RankLoss { .. }
            | CoreError::SingularInput { .. }
            | CoreError::NotHermitian { .. }
            | CoreError::IndefiniteInput { .. } => CliError::Numerical(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(format!("output: {e}"))
    }
}

pub type CmdResult = Result<(), CliError>;

pub fn leading(m: &OperatorMatrix, size: usize) -> OperatorMatrix {
    m.view((0, 0), (size, size)).into_owned()
}

/// Uniform points of the closed disk of radius rmax, bounded away from 0.
pub fn sample_points(rng: &mut ChaCha8Rng, count: usize, rmax: f64) -> Vec<DiskPoint> {
    let mut pts = Vec::with_capacity(count);
    while pts.len() < count {
        let re: f64 = rng.gen_range(-rmax..=rmax);
        let im: f64 = rng.gen_range(-rmax..=rmax);
        let z = Complex64::new(re, im);
        if z.norm() > rmax || z.norm() < 1e-2 {
            continue;
        }
        pts.push(DiskPoint::new(z).expect("inside the disk"));
    }
    pts
}
