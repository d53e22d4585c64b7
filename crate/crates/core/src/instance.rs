//! Problem instances `(A, B, φ)` and their JSON file format.
//!
//! Matrix documents look like
//! `{"rows": n, "cols": n, "data": [[[re, im], ...], ...]}` with rows in
//! order; instances wrap two matrices and an optional Kraus list.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{c64, real_matrix, CMatrix, Tolerances};
use crate::quantum::{pinching_channel, DensityMatrix, KrausChannel};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<[f64; 2]>>,
}

impl From<&CMatrix> for MatrixJson {
    fn from(m: &CMatrix) -> Self {
        let data = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        Self { rows: m.nrows(), cols: m.ncols(), data }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.data.len() != self.rows || self.data.iter().any(|r| r.len() != self.cols) {
            return Err(Error::Invalid(format!(
                "matrix data does not match declared shape {}x{}",
                self.rows, self.cols
            )));
        }
        let m = CMatrix::from_fn(self.rows, self.cols, |i, j| {
            let [re, im] = self.data[i][j];
            c64(re, im)
        });
        crate::matcore::ensure_finite(&m)?;
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelJson {
    pub kraus: Vec<MatrixJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub label: String,
    #[serde(rename = "A")]
    pub a: MatrixJson,
    #[serde(rename = "B")]
    pub b: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<ChannelJson>,
}

/// The triple `(A, B, φ)` that most commands operate on.
#[derive(Clone, Debug)]
pub struct ProblemInstance {
    pub label: String,
    pub a: DensityMatrix,
    pub b: DensityMatrix,
    pub channel: Option<KrausChannel>,
}

impl ProblemInstance {
    pub fn new(label: impl Into<String>, a: DensityMatrix, b: DensityMatrix, channel: Option<KrausChannel>) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch(format!("A is {0}x{0}, B is {1}x{1}", a.dim(), b.dim())));
        }
        if let Some(ch) = &channel {
            if ch.in_dim() != a.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "channel acts on {0}x{0}, states are {1}x{1}",
                    ch.in_dim(),
                    a.dim()
                )));
            }
        }
        Ok(Self { label: label.into(), a, b, channel })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// The instance channel, or the identity channel when none is given.
    pub fn channel_or_identity(&self) -> KrausChannel {
        self.channel.clone().unwrap_or_else(|| KrausChannel::identity(self.dim()))
    }

    /// `A = (1/2)[[1,1],[1,1]]`, `B = [[3/4,−1/4],[−1/4,1/4]]`, φ the pinching
    /// onto the diagonal of M₂.
    pub fn paper_example() -> Self {
        let tol = Tolerances::default();
        let a = DensityMatrix::new(real_matrix(2, 2, &[0.5, 0.5, 0.5, 0.5]), &tol).expect("valid state");
        let b = DensityMatrix::new(real_matrix(2, 2, &[0.75, -0.25, -0.25, 0.25]), &tol).expect("valid state");
        let phi = pinching_channel(&CMatrix::identity(2, 2), &tol).expect("standard basis");
        Self { label: "paper-example".into(), a, b, channel: Some(phi) }
    }

    pub fn from_json(doc: &InstanceJson, tol: &Tolerances) -> Result<Self> {
        let a = DensityMatrix::new(doc.a.to_matrix()?, tol)?;
        let b = DensityMatrix::new(doc.b.to_matrix()?, tol)?;
        let channel = match &doc.channel {
            Some(c) => Some(KrausChannel::new(c.kraus.iter().map(MatrixJson::to_matrix).collect::<Result<_>>()?)?),
            None => None,
        };
        Self::new(doc.label.clone(), a, b, channel)
    }

    pub fn to_json(&self) -> InstanceJson {
        InstanceJson {
            label: self.label.clone(),
            a: self.a.matrix().into(),
            b: self.b.matrix().into(),
            channel: self.channel.as_ref().map(|c| ChannelJson { kraus: c.kraus().iter().map(Into::into).collect() }),
        }
    }

    pub fn from_json_str(s: &str, tol: &Tolerances) -> Result<Self> {
        let doc: InstanceJson = serde_json::from_str(s).map_err(|e| Error::Invalid(format!("instance JSON: {e}")))?;
        Self::from_json(&doc, tol)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("instance serializes")
    }

    /// Loads a file, or the built-in instance when `path` is `paper-example`.
    pub fn load(path: &Path, tol: &Tolerances) -> Result<Self> {
        if path.as_os_str() == "paper-example" {
            return Ok(Self::paper_example());
        }
        let s = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&s, tol)
    }
}

pub fn matrix_from_json_str(s: &str) -> Result<CMatrix> {
    let doc: MatrixJson = serde_json::from_str(s).map_err(|e| Error::Invalid(format!("matrix JSON: {e}")))?;
    doc.to_matrix()
}

pub fn matrix_to_json_string(m: &CMatrix) -> String {
    serde_json::to_string(&MatrixJson::from(m)).expect("matrix serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{random_channel, random_state};

    #[test]
    fn matrix_round_trip_is_bitwise() {
        let a = random_state(4, 3, 77).unwrap();
        let s = matrix_to_json_string(a.matrix());
        let back = matrix_from_json_str(&s).unwrap();
        assert_eq!(&back, a.matrix());
    }

    #[test]
    fn instance_round_trip() {
        let tol = Tolerances::default();
        let inst = ProblemInstance::new(
            "rt",
            random_state(3, 3, 1).unwrap(),
            random_state(3, 2, 2).unwrap(),
            Some(random_channel(3, 2, 2, 3).unwrap()),
        )
        .unwrap();
        let back = ProblemInstance::from_json_str(&inst.to_json_string(), &tol).unwrap();
        assert_eq!(back.label, "rt");
        assert_eq!(back.a.matrix(), inst.a.matrix());
        assert_eq!(back.b.matrix(), inst.b.matrix());
        assert_eq!(back.channel, inst.channel);
    }

    #[test]
    fn rejects_bad_documents() {
        let tol = Tolerances::default();
        let shape = r#"{"rows": 2, "cols": 2, "data": [[[1,0]]]}"#;
        assert!(matrix_from_json_str(shape).is_err());
        let not_state = r#"{"label":"x","A":{"rows":1,"cols":1,"data":[[[2,0]]]},"B":{"rows":1,"cols":1,"data":[[[1,0]]]}}"#;
        assert!(matches!(ProblemInstance::from_json_str(not_state, &tol), Err(Error::BadTrace(_))));
        let mismatch = r#"{"label":"x","A":{"rows":1,"cols":1,"data":[[[1,0]]]},"B":{"rows":2,"cols":2,"data":[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}}"#;
        assert!(matches!(ProblemInstance::from_json_str(mismatch, &tol), Err(Error::DimensionMismatch(_))));
        assert!(ProblemInstance::from_json_str("{", &tol).is_err());
    }

    #[test]
    fn paper_example_shape() {
        let p = ProblemInstance::paper_example();
        assert_eq!(p.a.rank(), 1);
        assert!(p.b.is_positive_definite());
        assert_eq!(p.channel.as_ref().unwrap().kraus().len(), 2);
    }
}
