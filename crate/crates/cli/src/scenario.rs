//! Simulation scenario files.
//!
//! A scenario names exactly one target and a noise model:
//!
//! ```json
//! {
//!   "protocolFile": "cnot.json",
//!   "noise": { "kind": "depolarizingChannel", "p": 0.05 },
//!   "trials": 100000,
//!   "seed": 7
//! }
//! ```
//!
//! State targets are `state` (inline) or `strategyFile`; gate targets are
//! `protocol` (inline), `protocolFile`, `gate` or `anglesOverPi`. Relative
//! paths resolve against the scenario's directory. `QVK_SEED` overrides `seed`.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::error::Category;

use qvk::canon2q::CanonicalAngles;
use qvk::gateprotocol::GateProtocol;
use qvk::gates::Gate;
use qvk::simulator::{acceptance_rate, run_gate_verification, run_state_verification, NoiseModel, SimReport};
use qvk::stateverify::{two_setting_protocol, BipartiteState, VerificationStrategy};

use crate::commands::{synthesize_protocol, to_json, Target};
use crate::error::{CliError, CliResult};

pub const SEED_ENV: &str = "QVK_SEED";

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub state: Option<BipartiteState>,
    #[serde(default)]
    pub strategy_file: Option<PathBuf>,
    #[serde(default)]
    pub protocol: Option<GateProtocol>,
    #[serde(default)]
    pub protocol_file: Option<PathBuf>,
    #[serde(default)]
    pub gate: Option<Gate>,
    #[serde(default)]
    pub angles_over_pi: Option<[f64; 3]>,
    #[serde(default = "ideal")]
    pub noise: NoiseModel,
    pub trials: u64,
    pub seed: u64,
    /// Also estimate the acceptance of a worst-case source over `N` rounds.
    #[serde(default)]
    pub sample_complexity: Option<SampleComplexityRequest>,
}

fn ideal() -> NoiseModel {
    NoiseModel::Ideal
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SampleComplexityRequest {
    pub eps: f64,
    pub delta: f64,
    pub replicates: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SampleComplexityReport {
    pub analytic_n: u64,
    pub empirical_accept_rate: f64,
    pub replicates: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScenarioReport {
    #[serde(flatten)]
    pub report: SimReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_complexity: Option<SampleComplexityReport>,
}

enum Subject {
    State(VerificationStrategy),
    Gate(GateProtocol),
}

fn schema(path: &Path, reason: impl ToString) -> CliError {
    CliError::Scenario {
        path: path.to_owned(),
        reason: reason.to_string(),
    }
}

/// Parses a file, treating well-formed JSON of the wrong shape as a schema error.
fn load<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| match e.classify() {
        Category::Data => schema(path, e),
        _ => CliError::Json {
            path: path.to_owned(),
            source: e,
        },
    })
}

impl Scenario {
    pub fn load(path: &Path) -> CliResult<Self> {
        load(path)
    }

    fn subject(&self, path: &Path) -> CliResult<Subject> {
        let base = path.parent().unwrap_or(Path::new("."));
        let given = [
            self.state.is_some(),
            self.strategy_file.is_some(),
            self.protocol.is_some(),
            self.protocol_file.is_some(),
            self.gate.is_some(),
            self.angles_over_pi.is_some(),
        ];
        if given.iter().filter(|&&g| g).count() != 1 {
            return Err(schema(
                path,
                "give exactly one of state, strategyFile, protocol, protocolFile, gate, anglesOverPi",
            ));
        }
        let resolve = |p: &PathBuf| if p.is_absolute() { p.clone() } else { base.join(p) };
        if let Some(s) = &self.state {
            return Ok(Subject::State(two_setting_protocol(s)?));
        }
        if let Some(f) = &self.strategy_file {
            return Ok(Subject::State(load(&resolve(f))?));
        }
        if let Some(p) = &self.protocol {
            return Ok(Subject::Gate(p.clone()));
        }
        if let Some(f) = &self.protocol_file {
            return Ok(Subject::Gate(load(&resolve(f))?));
        }
        let target = match (self.gate, self.angles_over_pi) {
            (Some(g), _) => Target::Gate(g),
            (_, Some([a1, a2, a3])) => Target::Angles(CanonicalAngles::new(a1 * PI, a2 * PI, a3 * PI)),
            _ => unreachable!("one target checked above"),
        };
        Ok(Subject::Gate(synthesize_protocol(&target)?))
    }
}

fn seed_override() -> CliResult<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{SEED_ENV} must be an unsigned integer, got '{s}'"))),
        Err(_) => Ok(None),
    }
}

pub fn run(path: &Path) -> CliResult<ScenarioReport> {
    let sc = Scenario::load(path)?;
    let seed = seed_override()?.unwrap_or(sc.seed);
    if sc.trials == 0 {
        return Err(schema(path, "trials must be at least 1"));
    }
    let subject = sc.subject(path)?;
    let dim = match &subject {
        Subject::State(s) => s.target.dim(),
        Subject::Gate(p) => p.target.rows(),
    };
    sc.noise.validate(dim).map_err(|e| schema(path, e))?;
    let report = match &subject {
        Subject::State(s) => run_state_verification(s, &sc.noise, sc.trials, seed)?,
        Subject::Gate(p) => run_gate_verification(p, &sc.noise, sc.trials, seed)?,
    };
    let sample_complexity = match (sc.sample_complexity, &subject) {
        (None, _) => None,
        (Some(req), Subject::State(s)) => {
            let n = s.sample_count(req.eps, req.delta)?;
            Some(SampleComplexityReport {
                analytic_n: n,
                empirical_accept_rate: acceptance_rate(s, req.eps, n, req.replicates, seed)?,
                replicates: req.replicates,
            })
        }
        (Some(_), Subject::Gate(_)) => {
            return Err(schema(path, "sampleComplexity applies to state targets only"));
        }
    };
    Ok(ScenarioReport {
        report,
        sample_complexity,
    })
}

pub fn simulate(path: &Path) -> CliResult<String> {
    Ok(to_json(&run(path)?))
}
