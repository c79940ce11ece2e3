//! On-disk formats: state files and evolution schedules (JSON).

use crate::channels::{self, KrausChannel};
use crate::dynamics::{
    local_product_unitary, phase_rotation, sample_commutant_unitary, Step, UnitaryOperator,
};
use crate::error::{Error, Result};
use crate::linalg::{c, DimList};
use crate::resources::CoherenceGenerator;
use crate::rng::Seed;
use crate::states::{haar_unitary, DensityMatrix};
use crate::CMatrix;
use serde::{Deserialize, Serialize};

/// `{"dims":[2,2,2],"matrix":[[[re,im],...],...]}`, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn from_state(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        Self {
            dims: rho.dims().as_slice().to_vec(),
            matrix: (0..m.rows())
                .map(|i| {
                    (0..m.cols())
                        .map(|j| [m[(i, j)].re, m[(i, j)].im])
                        .collect()
                })
                .collect(),
        }
    }

    /// Validates shape and the density-matrix conditions.
    pub fn to_state(&self) -> Result<DensityMatrix> {
        let dims = DimList::new(self.dims.clone())?;
        let n = dims.total();
        if self.matrix.len() != n || self.matrix.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "matrix shape does not match dims {:?} (need {n}x{n})",
                self.dims
            )));
        }
        let data = self
            .matrix
            .iter()
            .flat_map(|r| r.iter().map(|&[re, im]| c(re, im)))
            .collect();
        DensityMatrix::new(CMatrix::from_vec(n, n, data)?, dims)
    }

    pub fn parse(text: &str) -> Result<DensityMatrix> {
        let f: StateFile = serde_json::from_str(text)
            .map_err(|e| Error::Invalid(format!("malformed state file: {e}")))?;
        f.to_state()
    }
}

/// One entry of a schedule file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StepSpec {
    Channel {
        name: String,
        #[serde(default)]
        p: Option<f64>,
        #[serde(default)]
        target: usize,
        #[serde(default)]
        seed: Option<u64>,
        #[serde(default)]
        rank: Option<usize>,
    },
    Unitary {
        spec: String,
        #[serde(default)]
        seed: Option<u64>,
        #[serde(default)]
        theta: Option<f64>,
    },
}

fn need_p(name: &str, p: Option<f64>) -> Result<f64> {
    p.ok_or_else(|| Error::Invalid(format!("channel {name:?} needs parameter \"p\"")))
}

impl StepSpec {
    /// Builds the step for a state with subsystem dims `dims`.
    pub fn build(&self, dims: &DimList, g: &CoherenceGenerator, index: usize) -> Result<Step> {
        match self {
            StepSpec::Channel {
                name,
                p,
                target,
                seed,
                rank,
            } => {
                if *target >= dims.len() {
                    return Err(Error::Invalid(format!("target {target} out of range")));
                }
                let d = dims[*target];
                let channel: KrausChannel = match name.as_str() {
                    "identity" => KrausChannel::identity(d),
                    "depolarizing" => channels::depolarizing(d, need_p(name, *p)?)?,
                    "dephasing" => {
                        let basis = if d == g.dim() {
                            g.clone()
                        } else {
                            CoherenceGenerator::number(d)?
                        };
                        channels::dephasing(need_p(name, *p)?, &basis)?
                    }
                    "amplitude-damping" => {
                        if d != 2 {
                            return Err(Error::Invalid("amplitude-damping needs a qubit".into()));
                        }
                        channels::amplitude_damping(need_p(name, *p)?)?
                    }
                    "random" => channels::random_channel(
                        d,
                        d,
                        rank.unwrap_or(2),
                        Seed::new(seed.unwrap_or(0), index as u64),
                    )?,
                    other => return Err(Error::Invalid(format!("unknown channel {other:?}"))),
                };
                let label = match p {
                    Some(p) => format!("{name}({p})@{target}"),
                    None => format!("{name}@{target}"),
                };
                Ok(Step::Channel {
                    label,
                    channel,
                    target: *target,
                })
            }
            StepSpec::Unitary { spec, seed, theta } => {
                let seed = Seed::new(seed.unwrap_or(0), index as u64);
                let op = match spec.as_str() {
                    "identity" => UnitaryOperator::identity(dims.clone()),
                    "commutant-random" => sample_commutant_unitary(g, dims, seed)?,
                    "local-symmetric" => {
                        if dims.len() != 3 || dims[0] != g.dim() {
                            return Err(Error::Invalid(
                                "local-symmetric needs three subsystems with the generator on A"
                                    .into(),
                            ));
                        }
                        let th = theta.unwrap_or(0.5);
                        local_product_unitary(
                            &phase_rotation(g, th),
                            &haar_unitary(dims[1], seed.child(1))?,
                            &haar_unitary(dims[2], seed.child(2))?,
                        )?
                    }
                    "global-random" => {
                        UnitaryOperator::new(haar_unitary(dims.total(), seed)?, dims.clone())?
                    }
                    other => return Err(Error::Invalid(format!("unknown unitary spec {other:?}"))),
                };
                Ok(Step::Unitary {
                    label: spec.clone(),
                    op,
                })
            }
        }
    }
}

pub fn parse_schedule(text: &str) -> Result<Vec<StepSpec>> {
    serde_json::from_str(text).map_err(|e| Error::Invalid(format!("malformed schedule: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::ghz;

    #[test]
    fn state_file_round_trip() {
        let f = StateFile::from_state(&ghz());
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(StateFile::parse(&text).unwrap(), ghz());
    }

    #[test]
    fn malformed_state_files() {
        for bad in [
            "",
            "{",
            r#"{"dims":[2],"matrix":[[[1,0],[0,0]]]}"#,
            r#"{"dims":[2],"matrix":[[[1,0],[0,0]],[[0,0],[-0.5,0]]]}"#,
            r#"{"dims":[2],"matrix":[[[2,0],[0,0]],[[0,0],[0,0]]]}"#,
            r#"{"dims":[0],"matrix":[]}"#,
            r#"{"dims":[2],"matrix":[[[1,0],[1,0]],[[0,0],[0,0]]]}"#,
            r#"{"dims":[2],"matrix":[[[1,0],[0,0]],[[0,0],[0,0]]],"x":1}"#,
        ] {
            assert!(StateFile::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn schedule_parsing() {
        let text = r#"[
            {"type":"channel","name":"depolarizing","p":0.1,"target":0},
            {"type":"unitary","spec":"commutant-random","seed":5},
            {"type":"unitary","spec":"identity"}
        ]"#;
        let s = parse_schedule(text).unwrap();
        assert_eq!(s.len(), 3);
        let dims = DimList::new(vec![2, 2, 2]).unwrap();
        let g = CoherenceGenerator::sigma_z();
        for (k, spec) in s.iter().enumerate() {
            spec.build(&dims, &g, k).unwrap();
        }
        assert!(parse_schedule(r#"[{"type":"teleport"}]"#).is_err());
        let missing = parse_schedule(r#"[{"type":"channel","name":"depolarizing"}]"#).unwrap();
        assert!(missing[0].build(&dims, &g, 0).is_err());
        let unknown = parse_schedule(r#"[{"type":"channel","name":"mystery","p":0.1}]"#).unwrap();
        assert!(unknown[0].build(&dims, &g, 0).is_err());
    }
}
