//! Bipartite gates `U` on `A ⊗ B`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{isometry_deviation, matrix_from_pairs, matrix_to_pairs, CMat, Pair};
use crate::quantum::gates;

pub const MAX_LOCAL_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub name: String,
    pub da: usize,
    pub db: usize,
    pub matrix: CMat,
}

#[derive(Serialize, Deserialize)]
struct GateJson {
    dims: [usize; 2],
    matrix: Vec<Vec<Pair>>,
}

impl Gate {
    pub fn new(name: &str, da: usize, db: usize, matrix: CMat) -> Result<Self> {
        if !(2..=MAX_LOCAL_DIM).contains(&da) || !(2..=MAX_LOCAL_DIM).contains(&db) {
            return invalid(format!("local dimensions must lie in 2..={MAX_LOCAL_DIM}, got {da}x{db}"));
        }
        let d = da * db;
        if matrix.nrows() != d || matrix.ncols() != d {
            return invalid(format!("gate must be {d}x{d}"));
        }
        let dev = isometry_deviation(&matrix);
        if dev > 1e-10 {
            return invalid(format!("gate is not unitary (deviation {dev:.3e})"));
        }
        Ok(Gate {
            name: name.to_string(),
            da,
            db,
            matrix,
        })
    }

    /// `cnot`, `swap`, `cz` or `identity` on two qubits.
    pub fn named(name: &str) -> Result<Self> {
        match gates::named(name) {
            Some(m) => Gate::new(name, 2, 2, m),
            None => invalid(format!("unknown gate `{name}` (expected cnot, swap, cz or identity)")),
        }
    }

    pub fn identity(da: usize, db: usize) -> Result<Self> {
        Gate::new("identity", da, db, gates::identity(da * db))
    }

    /// `{"dims": [dA, dB], "matrix": [[[re, im], ...], ...]}`.
    pub fn from_json(name: &str, text: &str) -> Result<Self> {
        let j: GateJson = serde_json::from_str(text).map_err(|e| crate::Error::InvalidArgument(format!("gate file: {e}")))?;
        Gate::new(name, j.dims[0], j.dims[1], matrix_from_pairs(&j.matrix)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GateJson {
            dims: [self.da, self.db],
            matrix: matrix_to_pairs(&self.matrix),
        })
        .expect("gates always serialise")
    }
}
