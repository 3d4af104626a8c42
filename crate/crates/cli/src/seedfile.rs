//! JSON seed files. Vertex indices are 1-based on disk.

use serde::{Deserialize, Serialize};

use qcluster::lattice::{self, IMat};
use qcluster::seed::QuantumSeed;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedFile {
    pub n: usize,
    pub unfrozen: Vec<usize>,
    #[serde(rename = "B")]
    pub b: IMat,
    #[serde(rename = "Lambda", default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<IMat>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<i64>>,
}

impl SeedFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("seed file: {e}"))
    }

    pub fn from_seed(s: &QuantumSeed) -> Self {
        Self {
            n: s.n(),
            unfrozen: s.unfrozen().iter().map(|k| k + 1).collect(),
            b: s.b().clone(),
            lambda: Some(s.lambda().clone()),
            d: Some(s.d().to_vec()),
        }
    }

    fn unfrozen0(&self) -> Result<Vec<usize>, String> {
        self.unfrozen
            .iter()
            .map(|&k| {
                if k == 0 || k > self.n {
                    Err(format!("seed file: field `unfrozen`: vertex {k} outside 1..={}", self.n))
                } else {
                    Ok(k - 1)
                }
            })
            .collect()
    }

    /// The seed as written, with only shapes validated. A missing `Lambda` is synthesized and
    /// a missing `D` is read off the diagonal of `B~^T Lambda`.
    pub fn to_seed_unchecked(&self) -> Result<(QuantumSeed, bool), String> {
        let unfrozen = self.unfrozen0()?;
        let Some(lambda) = &self.lambda else {
            let s = QuantumSeed::with_synthesized_lambda(self.n, unfrozen, self.b.clone())
                .map_err(|e| format!("seed file: no compatible Lambda: {e}"))?;
            return Ok((s, true));
        };
        let d = match &self.d {
            Some(d) => d.clone(),
            None => {
                if self.b.len() != self.n || lambda.len() != self.n || self.b.iter().any(|r| r.len() != unfrozen.len()) {
                    return Err("seed file: field `B` or `Lambda` has the wrong shape".into());
                }
                let bt_l = lattice::mat_mul(&lattice::transpose(&self.b), lambda);
                unfrozen.iter().enumerate().map(|(a, &k)| bt_l[a][k]).collect()
            }
        };
        QuantumSeed::from_parts(self.n, unfrozen, self.b.clone(), lambda.clone(), d)
            .map(|s| (s, false))
            .map_err(|e| format!("seed file: {e}"))
    }

    pub fn to_seed(&self) -> Result<QuantumSeed, String> {
        let (s, _) = self.to_seed_unchecked()?;
        if s.d().iter().any(|&x| x <= 0) {
            return Err("seed is not compatible: D must be positive".into());
        }
        QuantumSeed::new(s.n(), s.unfrozen().to_vec(), s.b().clone(), s.lambda().clone(), s.d().to_vec())
            .map_err(|e| format!("seed is not compatible: {e}"))
    }
}
