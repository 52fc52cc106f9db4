//! On-disk formats for characteristics and reports.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sympindex::dual::{max_gauge_error, symmetry_error, ClosedCharacteristic, ConvexBody};
use sympindex::symplectic::SymplecticMatrix;

use crate::CliError;

/// One characteristic as written to `chars.json`.
#[derive(Serialize, Deserialize)]
pub struct CharJson {
    pub tau: f64,
    pub rho: f64,
    pub symmetric: bool,
    pub psi_value: f64,
    pub symmetry_error: f64,
    pub gauge_error: f64,
    /// `y(t_j)`, `t_j = jτ/N`.
    pub samples: Vec<Vec<f64>>,
    pub monodromy: Option<Vec<Vec<f64>>>,
    pub gamma: Option<f64>,
    pub index: Option<i64>,
    pub nullity: Option<i64>,
}

impl CharJson {
    pub fn from_characteristic(c: &ClosedCharacteristic, gamma: Option<f64>) -> Self {
        Self {
            tau: c.tau,
            rho: c.rho,
            symmetric: c.symmetric,
            psi_value: c.psi_value,
            symmetry_error: c.symmetry_error,
            gauge_error: c.gauge_error,
            samples: c.samples.clone(),
            monodromy: c.monodromy.as_ref().map(|m| m.to_rows()),
            gamma,
            index: c.index,
            nullity: c.nullity,
        }
    }

    /// Rebuild the characteristic, re-deriving the audit fields from the samples.
    pub fn into_characteristic(
        self,
        body: &dyn ConvexBody,
        orbit_tol: f64,
    ) -> Result<ClosedCharacteristic, CliError> {
        let d = 2 * body.dim_half();
        if self.samples.len() < 4 || !self.samples.len().is_multiple_of(2) {
            return Err(CliError::usage(
                "a characteristic needs an even number of samples ≥ 4",
            ));
        }
        if self.samples.iter().any(|s| s.len() != d) {
            return Err(CliError::usage(format!("samples must have length {d}")));
        }
        let monodromy = match self.monodromy {
            Some(rows) => Some(SymplecticMatrix::from_rows(&rows, 1e-6)?),
            None => None,
        };
        let symmetry = symmetry_error(&self.samples);
        Ok(ClosedCharacteristic {
            tau: self.tau,
            rho: self.rho,
            psi_value: self.psi_value,
            symmetric: symmetry <= orbit_tol,
            symmetry_error: symmetry,
            gauge_error: max_gauge_error(body, &self.samples),
            samples: self.samples,
            monodromy,
            index: self.index,
            nullity: self.nullity,
        })
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// `writer` on `path`, or standard output.
pub fn output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}
