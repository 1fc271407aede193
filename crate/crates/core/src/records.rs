//! Serializable records for graphs, spectra and enumerations.
//!
//! Field elements are written as little-endian coefficient lists, so 1 + X
//! in F_9 is `[1, 1]`. Every record carries the field header (p, e,
//! modulus, ν) because relation indices depend on the choice of ν.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{FieldHeader, FieldSpec};
use crate::geometry::{OmegaSet, Sphere};
use crate::scheme::{GraphHeader, SchemeGraph};
use crate::spectra::{EigenMethod, Spectrum};

/// `{header, edges}` with edges sorted, u < v.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub header: GraphHeader,
    pub edges: Vec<(u32, u32)>,
}

impl GraphRecord {
    pub fn from_graph(graph: &SchemeGraph) -> Self {
        GraphRecord {
            header: graph.header.clone(),
            edges: graph.edges().collect(),
        }
    }

    /// Rebuilds the graph, rejecting records whose derived header fields
    /// disagree with the edge list.
    pub fn into_graph(self) -> Result<SchemeGraph> {
        let h = &self.header;
        let g = SchemeGraph::from_edges(&h.field(), h.d, h.i, h.n, &self.edges)?;
        if g.header != self.header {
            return Err(Error::InvariantViolated(format!(
                "graph header says valency {:?}, edges give {:?}",
                self.header.valency,
                g.valency()
            )));
        }
        Ok(g)
    }
}

/// `{header, eigenvalues, residual}`; eigenvalues descending.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub header: GraphHeader,
    pub eigenvalues: Vec<f64>,
    pub residual: f64,
    pub method: String,
}

impl SpectrumRecord {
    pub fn new(header: &GraphHeader, spectrum: &Spectrum<f64>) -> Self {
        SpectrumRecord {
            header: header.clone(),
            eigenvalues: spectrum.eigenvalues.clone(),
            residual: spectrum.residual,
            method: method_name(spectrum.method).to_string(),
        }
    }

    pub fn spectrum(&self) -> Result<Spectrum<f64>> {
        let method = match self.method.as_str() {
            "jacobi" => EigenMethod::Jacobi,
            "tridiagonal" => EigenMethod::Tridiagonal,
            other => return Err(Error::InvariantViolated(format!("unknown eigen method {other:?}"))),
        };
        if self.eigenvalues.len() != self.header.n {
            return Err(Error::DimensionMismatch {
                left: self.eigenvalues.len(),
                right: self.header.n,
            });
        }
        Ok(Spectrum {
            eigenvalues: self.eigenvalues.clone(),
            residual: self.residual,
            method,
            iterations: 0,
        })
    }
}

fn method_name(m: EigenMethod) -> &'static str {
    match m {
        EigenMethod::Jacobi => "jacobi",
        EigenMethod::Tridiagonal => "tridiagonal",
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereRecord {
    pub field: FieldHeader,
    pub q: u32,
    pub d: usize,
    pub count: usize,
    pub points: Vec<Vec<Vec<u32>>>,
}

impl SphereRecord {
    pub fn new(field: &FieldSpec, sphere: &Sphere) -> Self {
        SphereRecord {
            field: field.header(),
            q: sphere.q,
            d: sphere.d,
            count: sphere.len(),
            points: sphere.points.iter().map(|x| x.to_coeffs(field)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaRecord {
    pub field: FieldHeader,
    pub q: u32,
    pub d: usize,
    pub count: usize,
    pub representatives: Vec<Vec<Vec<u32>>>,
}

impl OmegaRecord {
    pub fn new(field: &FieldSpec, omega: &OmegaSet) -> Self {
        OmegaRecord {
            field: field.header(),
            q: omega.q,
            d: omega.d,
            count: omega.len(),
            representatives: omega.lines().iter().map(|l| l.rep().to_coeffs(field)).collect(),
        }
    }
}

/// Summary of a field: header plus counts of nonzero squares and
/// non-squares.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub field: FieldHeader,
    pub nonzero_squares: usize,
    pub non_squares: usize,
}

impl FieldInfo {
    pub fn new(field: &FieldSpec) -> Self {
        let nonzero_squares = field
            .enumerate()
            .filter(|&a| !a.is_zero() && field.is_square(a))
            .count();
        FieldInfo {
            field: field.header(),
            nonzero_squares,
            non_squares: field.q() as usize - 1 - nonzero_squares,
        }
    }
}
