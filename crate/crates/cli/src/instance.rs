use serde::{Deserialize, Serialize};
use threeway_core::reductions::EmbeddingSpec;
use threeway_core::{Dims3, Matrix, OneMarginals, Table3, TwoMarginals};

use crate::CliError;

/// A problem instance as stored on disk.
///
/// At least one constraint block is present and every block agrees with
/// `dims`. When `embedding_spec` is present, `dims` are the embedded
/// (target) dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceFile {
    pub dims: Dims3,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_marginals: Option<TwoMarginals>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub one_marginals: Option<OneMarginals>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_bounds: Option<Table3>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embedding_spec: Option<EmbeddingSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    dims: [usize; 3],
    two_marginals: Option<RawTwo>,
    one_marginals: Option<RawOne>,
    upper_bounds: Option<Vec<Vec<Vec<u64>>>>,
    embedding_spec: Option<EmbeddingSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTwo {
    ij: Vec<Vec<u64>>,
    ik: Vec<Vec<u64>>,
    jk: Vec<Vec<u64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOne {
    i: Vec<u64>,
    j: Vec<u64>,
    k: Vec<u64>,
}

fn matrix(name: &str, rows: Vec<Vec<u64>>) -> Result<Matrix<u64>, CliError> {
    Matrix::from_rows(rows).map_err(|e| CliError::Input(format!("two_marginals.{name}: {e}")))
}

impl InstanceFile {
    pub fn from_two_marginals(m: TwoMarginals) -> Self {
        Self { dims: m.dims(), two_marginals: Some(m), one_marginals: None, upper_bounds: None, embedding_spec: None }
    }

    pub fn from_bounds(u: OneMarginals, p: Table3) -> Self {
        Self {
            dims: u.dims(),
            two_marginals: None,
            one_marginals: Some(u),
            upper_bounds: Some(p),
            embedding_spec: None,
        }
    }

    pub fn embedded(m: TwoMarginals, spec: EmbeddingSpec) -> Self {
        Self { embedding_spec: Some(spec), ..Self::from_two_marginals(m) }
    }

    fn validate(self) -> Result<Self, CliError> {
        if self.two_marginals.is_none() && self.one_marginals.is_none() && self.upper_bounds.is_none() {
            return Err(CliError::Input(
                "instance needs at least one of two_marginals, one_marginals, upper_bounds".into(),
            ));
        }
        if let Some(p) = &self.upper_bounds {
            if p.dims() != self.dims {
                return Err(CliError::Input(format!("upper_bounds has dims {} but dims is {}", p.dims(), self.dims)));
            }
        }
        if let Some(spec) = &self.embedding_spec {
            if spec.target_dims != self.dims {
                return Err(CliError::Input(format!(
                    "embedding_spec targets {} but dims is {}",
                    spec.target_dims, self.dims
                )));
            }
            let m = spec.marginals().map_err(|e| CliError::Input(format!("embedding_spec: {e}")))?;
            if self.two_marginals.as_ref().is_some_and(|given| *given != m) {
                return Err(CliError::Input("two_marginals differ from the ones rebuilt from embedding_spec".into()));
            }
        }
        Ok(self)
    }

    pub fn require_two(&self, command: &str) -> Result<&TwoMarginals, CliError> {
        self.two_marginals.as_ref().ok_or_else(|| CliError::Input(format!("`{command}` needs a two_marginals block")))
    }

    pub fn require_bounds(&self, command: &str) -> Result<&Table3, CliError> {
        self.upper_bounds.as_ref().ok_or_else(|| CliError::Input(format!("`{command}` needs an upper_bounds block")))
    }

    pub fn require_one(&self, command: &str) -> Result<&OneMarginals, CliError> {
        self.one_marginals.as_ref().ok_or_else(|| CliError::Input(format!("`{command}` needs a one_marginals block")))
    }
}

/// Parses and validates an instance file.
pub fn parse_instance(text: &str) -> Result<InstanceFile, CliError> {
    let raw: RawInstance = serde_json::from_str(text).map_err(|e| CliError::Input(format!("instance: {e}")))?;
    let [r, c, h] = raw.dims;
    let dims = Dims3::new(r, c, h).map_err(|e| CliError::Input(e.to_string()))?;
    let two_marginals = raw
        .two_marginals
        .map(|t| {
            let m = TwoMarginals::new(dims, matrix("ij", t.ij)?, matrix("ik", t.ik)?, matrix("jk", t.jk)?)?;
            Ok::<_, CliError>(m)
        })
        .transpose()?;
    let one_marginals = raw.one_marginals.map(|o| OneMarginals::new(dims, o.i, o.j, o.k)).transpose()?;
    let upper_bounds = raw.upper_bounds.map(Table3::from_nested).transpose()?;
    InstanceFile { dims, two_marginals, one_marginals, upper_bounds, embedding_spec: raw.embedding_spec }.validate()
}

/// Normalized pretty JSON; `parse_instance(write_instance(x)) == x`.
pub fn write_instance(inst: &InstanceFile) -> String {
    let mut s = serde_json::to_string_pretty(inst).expect("instance serializes");
    s.push('\n');
    s
}

/// Parses a 0/1 square matrix given as a JSON array of rows.
pub fn parse_matrix(text: &str) -> Result<Matrix<u64>, CliError> {
    let rows: Vec<Vec<u64>> = serde_json::from_str(text).map_err(|e| CliError::Input(format!("matrix: {e}")))?;
    Ok(Matrix::from_rows(rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use threeway_core::reductions::{embed_bounds, vlach_instance};

    #[test]
    fn minimal_file() {
        let inst = parse_instance(r#"{"dims":[1,1,1],"two_marginals":{"ij":[[0]],"ik":[[0]],"jk":[[0]]}}"#).unwrap();
        assert_eq!(inst.dims, Dims3::new(1, 1, 1).unwrap());
        assert_eq!(parse_instance(&write_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn shape_error_names_the_face() {
        let text = r#"{"dims":[2,2,2],"two_marginals":{"ij":[[0,0,0],[0,0,0]],"ik":[[0,0],[0,0]],"jk":[[0,0],[0,0]]}}"#;
        let err = parse_instance(text).unwrap_err().to_string();
        assert!(err.contains("ij"), "{err}");
    }

    #[test]
    fn rejects_negative_entries_and_empty_files() {
        let err = parse_instance(r#"{"dims":[1,1,1],"upper_bounds":[[[-1]]]}"#).unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
        assert!(parse_instance(r#"{"dims":[1,1,1]}"#).is_err());
        assert!(parse_instance(r#"{"dims":[1,1,1],"extra":1,"upper_bounds":[[[1]]]}"#).is_err());
    }

    #[test]
    fn embedded_round_trip() {
        let (u, p) = vlach_instance();
        let (m, spec) = embed_bounds(&u, &p).unwrap();
        let inst = InstanceFile::embedded(m, spec);
        let text = write_instance(&inst);
        let back = parse_instance(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(write_instance(&back), text);
    }

    #[test]
    fn tampered_spec_is_rejected() {
        let (u, p) = vlach_instance();
        let (m, spec) = embed_bounds(&u, &p).unwrap();
        let mut json: serde_json::Value =
            serde_json::from_str(&write_instance(&InstanceFile::embedded(m, spec))).unwrap();
        json["embedding_spec"]["u"] = 2.into();
        assert!(parse_instance(&json.to_string()).is_err());
    }
}
