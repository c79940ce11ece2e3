//! Seeded, tolerance-parameterized checks of the claims made about the
//! resource profile. Each check produces a [`ClaimReport`].
//!
//! Checks come in two tiers. Hard checks (extremal anchors, q1/q3
//! monotonicity, local-family conservation, the mutual-information bound)
//! report `violated` when any trial fails. Report-only checks record
//! violation counts and witnesses as findings and never fail a run.

mod checks;

pub use checks::{
    check_conservation, check_convexity, check_entropic_bounds, check_extremals,
    check_monotonicity, check_qirc_ball,
};

use crate::error::{Error, Result};
use crate::io::StateFile;
use crate::linalg::DimList;
use crate::resources::{
    CoherenceGenerator, OptimizerSettings, ProfileConfig, Q2Mode, ResourceProfile,
};
use crate::rng::Seed;
use crate::states::{self, DensityMatrix};
use crate::tol;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Stable claim identifiers, in canonical run order.
pub const CLAIM_IDS: [&str; 6] = [
    "C1.extremal",
    "T1.ball",
    "C2.convexity",
    "C3.monotonicity",
    "T2.conservation",
    "A2.entropic",
];

/// Resolves a full id or its prefix (`T1`, `c3`, …).
pub fn resolve_claim(name: &str) -> Result<&'static str> {
    let up = name.to_ascii_uppercase();
    CLAIM_IDS
        .iter()
        .find(|id| id.to_ascii_uppercase() == up || id.split('.').next() == Some(up.as_str()))
        .copied()
        .ok_or_else(|| Error::Invalid(format!("unknown claim {name:?}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    HoldsWithinTolerance,
    Violated,
    ReportOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampler {
    HaarPure,
    GinibreMixed,
    /// Werner sweep `p = i/(trials−1)` with a maximally mixed spectator.
    NamedFamily,
}

impl std::str::FromStr for Sampler {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "haar-pure" => Ok(Self::HaarPure),
            "ginibre-mixed" => Ok(Self::GinibreMixed),
            "named-family" => Ok(Self::NamedFamily),
            other => Err(Error::Invalid(format!("unknown sampler {other:?}"))),
        }
    }
}

/// Coherence generator on A, by name.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorSpec {
    /// `σ_z` on qubits, the number operator otherwise.
    #[default]
    SigmaZ,
    SigmaX,
    /// `diag(0, 1, …, d−1)`.
    Number,
}

impl GeneratorSpec {
    pub fn build(self, d: usize) -> Result<CoherenceGenerator> {
        match (self, d) {
            (Self::SigmaZ, 2) => Ok(CoherenceGenerator::sigma_z()),
            (Self::SigmaX, 2) => Ok(CoherenceGenerator::sigma_x()),
            (Self::SigmaX, _) => Err(Error::Invalid("σ_x generator needs a qubit".into())),
            (Self::SigmaZ | Self::Number, d) => CoherenceGenerator::number(d),
        }
    }
}

impl std::str::FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sigma-z" => Ok(Self::SigmaZ),
            "sigma-x" => Ok(Self::SigmaX),
            "number" => Ok(Self::Number),
            other => Err(Error::Invalid(format!("unknown generator {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub extremal: f64,
    pub ball: f64,
    pub mono_q3: f64,
    pub mono_q1: f64,
    pub conservation: f64,
    pub entropic: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            extremal: tol::EXTREMAL,
            ball: tol::BALL,
            mono_q3: tol::MONO_Q3,
            mono_q1: tol::MONO_Q1,
            conservation: tol::CONSERVATION,
            entropic: tol::ENTROPIC,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CampaignConfig {
    pub sampler: Sampler,
    /// Number of sampled states (pairs, for convexity).
    pub trials: usize,
    pub dims: Vec<usize>,
    /// Ginibre rank; full rank when absent.
    pub rank: Option<usize>,
    pub q2_mode: Q2Mode,
    pub generator: GeneratorSpec,
    pub seed: u64,
    /// Random channels per state in the monotonicity check.
    pub channels_per_state: usize,
    /// Mixing weights for the convexity check.
    pub lambdas: Vec<f64>,
    pub tolerances: Tolerances,
    pub optimizer: OptimizerSettings,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            sampler: Sampler::HaarPure,
            trials: 200,
            dims: vec![2, 2, 2],
            rank: None,
            q2_mode: Q2Mode::Transfer,
            generator: GeneratorSpec::SigmaZ,
            seed: 0,
            channels_per_state: 20,
            lambdas: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            tolerances: Tolerances::default(),
            optimizer: OptimizerSettings::default(),
        }
    }
}

impl CampaignConfig {
    pub fn dim_list(&self) -> Result<DimList> {
        let d = DimList::new(self.dims.clone())?;
        if d.len() != 3 {
            return Err(Error::Invalid(format!(
                "campaigns need three subsystems, got {:?}",
                self.dims
            )));
        }
        if d[0] < 2 || d[1] != d[0] || d[2] != d[0] {
            return Err(Error::Invalid(format!(
                "campaigns need equal subsystem dims ≥ 2, got {:?}",
                self.dims
            )));
        }
        Ok(d)
    }

    pub fn generator(&self) -> Result<CoherenceGenerator> {
        self.generator
            .build(self.dims.first().copied().unwrap_or(0))
    }

    pub fn profile_config(&self) -> Result<ProfileConfig> {
        Ok(ProfileConfig {
            generator: self.generator()?,
            q2_mode: self.q2_mode,
            optimizer: self.optimizer.clone(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Invalid("trials must be ≥ 1".into()));
        }
        self.dim_list()?;
        self.generator()?;
        if self.lambdas.iter().any(|l| !(0.0..=1.0).contains(l)) {
            return Err(Error::Invalid("mixing weights must lie in [0, 1]".into()));
        }
        if self.sampler == Sampler::NamedFamily && self.dims != [2, 2, 2] {
            return Err(Error::Invalid(
                "the named-family sweep needs dims [2,2,2]".into(),
            ));
        }
        Ok(())
    }

    /// State for trial `index` under the configured sampler.
    pub fn sample(&self, index: u64) -> Result<(DensityMatrix, Seed)> {
        let seed = Seed::trial(self.seed, index);
        let dims = self.dim_list()?;
        let rho = match self.sampler {
            Sampler::HaarPure => states::haar_pure(&dims, seed),
            Sampler::GinibreMixed => {
                states::ginibre_mixed(&dims, self.rank.unwrap_or(dims.total()), seed)?
            }
            Sampler::NamedFamily => {
                let p = if self.trials > 1 {
                    index as f64 / (self.trials - 1) as f64
                } else {
                    1.0
                };
                crate::families::werner_spectator(p.min(1.0))?
            }
        };
        Ok((rho, seed))
    }
}

/// Re-checkable counterexample or extreme case.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub trial: u64,
    pub seed: Seed,
    pub state: StateFile,
    pub profile: ResourceProfile,
    /// Profile after the channel or unitary, where applicable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub after: Option<ResourceProfile>,
    /// Signed amount by which the inequality fails (or the drift).
    pub margin: f64,
    pub note: String,
}

impl Witness {
    pub fn new(
        trial: u64,
        seed: Seed,
        rho: &DensityMatrix,
        profile: ResourceProfile,
        margin: f64,
        note: impl Into<String>,
    ) -> Self {
        Self {
            trial,
            seed,
            state: StateFile::from_state(rho),
            profile,
            after: None,
            margin,
            note: note.into(),
        }
    }

    pub fn with_after(mut self, after: ResourceProfile) -> Self {
        self.after = Some(after);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimReport {
    pub claim_id: String,
    pub verdict: Verdict,
    pub trials: usize,
    pub violations: usize,
    /// Worst hard violation, or the most extreme report-only finding.
    pub worst_case: Option<Witness>,
    /// Further full witnesses for report-only findings.
    pub witnesses: Vec<Witness>,
    pub statistics: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
    pub seed: u64,
}

impl ClaimReport {
    fn new(claim_id: &str, cfg: &CampaignConfig) -> Self {
        Self {
            claim_id: claim_id.to_string(),
            verdict: Verdict::HoldsWithinTolerance,
            trials: 0,
            violations: 0,
            worst_case: None,
            witnesses: Vec::new(),
            statistics: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            seed: cfg.seed,
        }
    }

    /// Verdict for a hard check.
    fn settle_hard(&mut self) {
        self.verdict = if self.violations > 0 {
            Verdict::Violated
        } else {
            Verdict::HoldsWithinTolerance
        };
    }

    pub fn hard_failure(&self) -> bool {
        self.verdict == Verdict::Violated
    }

    /// Report-only findings (used by strict mode).
    pub fn has_findings(&self) -> bool {
        self.verdict == Verdict::ReportOnly && self.violations > 0
            || self
                .statistics
                .iter()
                .any(|(k, v)| k.starts_with("report_only_") && *v > 0.0)
    }

    pub fn stat(&self, key: &str) -> Option<f64> {
        self.statistics.get(key).copied()
    }
}

/// One row of the ball campaign point cloud.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CloudPoint {
    pub trial: u64,
    pub seed: Seed,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub norm: f64,
    pub q1_raw: Option<f64>,
    pub q2_raw: Option<f64>,
}

/// Runs one claim by id; the ball check also returns its point cloud.
pub fn run_claim(id: &str, cfg: &CampaignConfig) -> Result<(ClaimReport, Option<Vec<CloudPoint>>)> {
    cfg.validate()?;
    match resolve_claim(id)? {
        "C1.extremal" => Ok((check_extremals(cfg)?, None)),
        "T1.ball" => {
            let (r, cloud) = check_qirc_ball(cfg)?;
            Ok((r, Some(cloud)))
        }
        "C2.convexity" => Ok((check_convexity(cfg)?, None)),
        "C3.monotonicity" => Ok((check_monotonicity(cfg)?, None)),
        "T2.conservation" => Ok((check_conservation(cfg)?, None)),
        "A2.entropic" => Ok((check_entropic_bounds(cfg)?, None)),
        _ => unreachable!("resolve_claim returns a known id"),
    }
}
