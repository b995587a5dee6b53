//! On-disk state format: a small JSON document carrying either a density
//! matrix or a pure-state amplitude vector.
//!
//! Layout: `{"version":1,"kind":"density"|"pure","m":…,"n":…,"data":[[re,im],…]}`
//! with `data` row-major under the composite convention |a_i b_k⟩ ↦ i·n+k —
//! (mn)² pairs for a density matrix, mn pairs for a pure state. Numbers are
//! written as shortest round-trip decimals, so saving the same state twice
//! produces byte-identical files.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matkernel::ComplexMatrix;
use crate::states::{BipartiteDims, DensityMatrix, PureState};

/// Format version written and accepted.
pub const STATEFILE_VERSION: u32 = 1;

/// What the `data` array encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Density,
    Pure,
}

/// The serialized document, exactly as stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub version: u32,
    pub kind: StateKind,
    pub m: usize,
    pub n: usize,
    pub data: Vec<[f64; 2]>,
}

/// A state loaded from disk, already validated.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadedState {
    Density(DensityMatrix),
    Pure(PureState),
}

impl LoadedState {
    pub fn dims(&self) -> BipartiteDims {
        match self {
            LoadedState::Density(rho) => rho.dims(),
            LoadedState::Pure(psi) => psi.dims(),
        }
    }

    pub fn kind(&self) -> StateKind {
        match self {
            LoadedState::Density(_) => StateKind::Density,
            LoadedState::Pure(_) => StateKind::Pure,
        }
    }

    /// The density matrix of the state (pure states become projectors).
    pub fn to_density(&self) -> DensityMatrix {
        match self {
            LoadedState::Density(rho) => rho.clone(),
            LoadedState::Pure(psi) => DensityMatrix::from_pure(psi),
        }
    }
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        Self {
            version: STATEFILE_VERSION,
            kind: StateKind::Density,
            m: rho.dims().dim_a(),
            n: rho.dims().dim_b(),
            data: rho.matrix().entries().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            version: STATEFILE_VERSION,
            kind: StateKind::Pure,
            m: psi.dims().dim_a(),
            n: psi.dims().dim_b(),
            data: psi.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    /// Validates the document and builds the in-memory state. `origin` is
    /// only used to label diagnostics.
    pub fn into_state(self, origin: &str) -> Result<LoadedState> {
        let parse_err = |detail: String| Error::Parse {
            path: origin.to_string(),
            detail,
        };
        if self.version != STATEFILE_VERSION {
            return Err(parse_err(format!(
                "unsupported version {} (expected {STATEFILE_VERSION})",
                self.version
            )));
        }
        let dims = BipartiteDims::new(self.m, self.n)
            .map_err(|e| parse_err(format!("bad dims: {e}")))?;
        let expected = match self.kind {
            StateKind::Density => dims.total() * dims.total(),
            StateKind::Pure => dims.total(),
        };
        if self.data.len() != expected {
            return Err(parse_err(format!(
                "{} entries for a {}x{} {} state (expected {expected})",
                self.data.len(),
                self.m,
                self.n,
                match self.kind {
                    StateKind::Density => "density",
                    StateKind::Pure => "pure",
                }
            )));
        }
        let values: Vec<Complex64> =
            self.data.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        match self.kind {
            StateKind::Density => {
                let d = dims.total();
                let matrix = ComplexMatrix::new(d, d, values)?;
                Ok(LoadedState::Density(DensityMatrix::new(dims, matrix)?))
            }
            StateKind::Pure => Ok(LoadedState::Pure(PureState::new(dims, values)?)),
        }
    }
}

/// Serializes a state file to its canonical single-line JSON form
/// (trailing newline included).
pub fn to_json(file: &StateFile) -> String {
    let mut s = serde_json::to_string(file).expect("state file serialization cannot fail");
    s.push('\n');
    s
}

/// Writes a density matrix to `path`.
pub fn save_density(rho: &DensityMatrix, path: &Path) -> Result<()> {
    write_file(path, &to_json(&StateFile::from_density(rho)))
}

/// Writes a pure state to `path`.
pub fn save_pure(psi: &PureState, path: &Path) -> Result<()> {
    write_file(path, &to_json(&StateFile::from_pure(psi)))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        detail: format!("write failed: {e}"),
    })
}

/// Loads and validates a state file.
pub fn load(path: &Path) -> Result<LoadedState> {
    let origin = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| Error::Parse {
        path: origin.clone(),
        detail: format!("read failed: {e}"),
    })?;
    parse(&text, &origin)
}

/// Parses a state document from text; `origin` labels diagnostics.
pub fn parse(text: &str, origin: &str) -> Result<LoadedState> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: origin.to_string(),
        detail: e.to_string(),
    })?;
    file.into_state(origin)
}
