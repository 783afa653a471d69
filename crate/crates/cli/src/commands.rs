use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use qvk::canon2q::{build_canonical, operator_schmidt_spectrum, recover_angles, AngleRecovery, CanonicalAngles};
use qvk::gateprotocol::{
    build_protocol, build_protocol_for_angles, build_protocol_for_gate, mu, GateProtocol,
};
use qvk::gates::Gate;
use qvk::prodgeom::{classify_by_spectrum, classify_region, d_prod_estimate, Region};
use qvk::stateverify::{schmidt_decompose, two_setting_protocol, BipartiteState, VerificationStrategy};
use qvk::{tol, CMatrix, CVector};

use crate::args::{AnalyzeArgs, SynthesizeArgs, UnitarySource, VerifyStateArgs};
use crate::error::{CliError, CliResult};

pub(crate) fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_owned(),
        source,
    })
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output types serialize")
}

/// A resolved unitary together with how it was specified.
pub enum Target {
    Gate(Gate),
    Angles(CanonicalAngles),
    Matrix(CMatrix),
}

impl Target {
    pub fn resolve(source: &UnitarySource, phi: Option<f64>) -> CliResult<Self> {
        if phi.is_some() && source.gate.is_none() {
            return Err(CliError::Usage("--phi only applies to --gate CPHASE".into()));
        }
        if let Some(name) = &source.gate {
            let gate: Gate = name.parse()?;
            return match (gate, phi) {
                (Gate::CPhase { .. }, Some(p)) => Ok(Target::Gate(Gate::CPhase { phi: p * PI })),
                (_, Some(_)) => Err(CliError::Usage("--phi only applies to --gate CPHASE".into())),
                (g, None) => Ok(Target::Gate(g)),
            };
        }
        if let Some(a) = &source.angles {
            if a.len() != 3 {
                return Err(CliError::Usage(format!("--angles needs 3 values, got {}", a.len())));
            }
            let angles = CanonicalAngles::from_pi_units(a[0], a[1], a[2]);
            if !angles.is_finite() {
                return Err(CliError::Usage("angles must be finite".into()));
            }
            return Ok(Target::Angles(angles));
        }
        let path = source.unitary.as_ref().expect("clap enforces one source");
        let m: CMatrix = read_json(path)?;
        if m.rows() != 4 || m.cols() != 4 {
            return Err(qvk::Error::DimensionMismatch(format!("expected a 4x4 unitary, got {}x{}", m.rows(), m.cols())).into());
        }
        m.ensure_unitary(tol::UNITARY)?;
        Ok(Target::Matrix(m))
    }

    pub fn matrix(&self) -> CMatrix {
        match self {
            Target::Gate(g) => g.matrix(),
            Target::Angles(a) => build_canonical(a),
            Target::Matrix(m) => m.clone(),
        }
    }
}

fn over_pi(a: &CanonicalAngles) -> [f64; 3] {
    a.as_array().map(|x| x / PI)
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
enum RecoveryOut {
    #[serde(rename_all = "camelCase")]
    Unique { angles_over_pi: [f64; 3] },
    #[serde(rename_all = "camelCase")]
    DegenerateFamily { family_product: f64 },
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Analysis {
    schmidt_spectrum: [f64; 4],
    schmidt_rank: usize,
    angle_recovery: Option<RecoveryOut>,
    region: Region,
    #[serde(skip_serializing_if = "Option::is_none")]
    reduced_angles_over_pi: Option<[f64; 3]>,
    mu: usize,
    d_prod: Option<usize>,
}

pub fn analyze(args: &AnalyzeArgs) -> CliResult<String> {
    let target = Target::resolve(&args.source, args.phi)?;
    let u = target.matrix();
    let spec = operator_schmidt_spectrum(&u)?;
    let angle_recovery = recover_angles(&spec, 1e-9).ok().map(|r| match r {
        AngleRecovery::Unique { angles } => RecoveryOut::Unique {
            angles_over_pi: over_pi(&angles),
        },
        AngleRecovery::DegenerateFamily { family_product } => RecoveryOut::DegenerateFamily { family_product },
    });
    let (region, reduced) = match &target {
        Target::Angles(a) => {
            let tag = classify_region(a.a1, a.a2, a.a3);
            (tag.tag, Some(over_pi(&tag.reduced_angles)))
        }
        _ => (classify_by_spectrum(&u)?, None),
    };
    let out = Analysis {
        schmidt_spectrum: spec.s,
        schmidt_rank: spec.rank(tol::RANK),
        angle_recovery,
        region,
        reduced_angles_over_pi: reduced,
        mu: mu(&u)?,
        d_prod: d_prod_estimate(&u, args.samples, args.seed).ok(),
    };
    Ok(to_json(&out))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct StateReport {
    dims: [usize; 2],
    schmidt_coefficients: Vec<f64>,
    schmidt_rank: usize,
    settings: usize,
    nu: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    sample_count: Option<u64>,
    strategy: VerificationStrategy,
}

pub fn verify_state(args: &VerifyStateArgs) -> CliResult<String> {
    let [d_a, d_b] = args.dims[..] else {
        return Err(CliError::Usage(format!("--dims needs 2 values, got {}", args.dims.len())));
    };
    let v: CVector = read_json(&args.state)?;
    let state = BipartiteState::normalized(v, d_a, d_b)?;
    let sd = schmidt_decompose(&state)?;
    let strategy = two_setting_protocol(&state)?;
    let sample_count = match (args.eps, args.delta) {
        (Some(e), Some(d)) => Some(strategy.sample_count(e, d)?),
        _ => None,
    };
    let out = StateReport {
        dims: [state.d_a(), state.d_b()],
        schmidt_coefficients: sd.coeffs.clone(),
        schmidt_rank: sd.rank,
        settings: strategy.settings(),
        nu: strategy.nu,
        sample_count,
        strategy,
    };
    Ok(to_json(&out))
}

pub fn synthesize_protocol(target: &Target) -> CliResult<GateProtocol> {
    Ok(match target {
        Target::Gate(g) => build_protocol_for_gate(*g)?,
        Target::Angles(a) => build_protocol_for_angles(a)?,
        Target::Matrix(m) => build_protocol(m)?,
    })
}

/// Returns the protocol JSON, or an empty string after writing `--out`.
pub fn synthesize(args: &SynthesizeArgs) -> CliResult<String> {
    let target = Target::resolve(&args.source, args.phi)?;
    let json = to_json(&synthesize_protocol(&target)?);
    match &args.out {
        Some(path) => {
            fs::write(path, json + "\n").map_err(|source| CliError::Write {
                path: path.clone(),
                source,
            })?;
            Ok(String::new())
        }
        None => Ok(json),
    }
}
