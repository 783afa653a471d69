//! Gate-verification protocols with the minimal number of settings.
//!
//! A protocol prepares test inputs `ρ_j` with probabilities `p_j` and verifies
//! each output `U ρ_j U†` with a state-verification strategy `Ω_j`. A channel
//! `Λ` passes one round with probability `Σ_j p_j tr[Ω_j Λ(ρ_j)]`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::canon2q::{build_canonical, CanonicalAngles};
use crate::channel::Channel;
use crate::efmis::{gate_efmis, synthesize};
use crate::gates::Gate;
use crate::idsets::{extract_connected_basis, is_connected_spanning, StateSet};
use crate::matkernel::{c64, numerical_rank, CMatrix, CScalar, CVector};
use crate::prodgeom::{classify_by_spectrum, classify_region, prod_members, solve_constraint_magic, Region};
use crate::stateverify::{two_setting_protocol, BipartiteState, VerificationStrategy};
use crate::{tol, Error, Result};

/// Seed for the product-state sampling inside [`build_protocol`].
pub const SYNTHESIS_SEED: u64 = 0x5EED_0001;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GateTest {
    pub probability: f64,
    pub input: CVector,
    pub strategy: VerificationStrategy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Classification {
    pub region: Region,
    /// Present when the protocol was built from canonical angles.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced_angles: Option<CanonicalAngles>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GateProtocol {
    pub target: CMatrix,
    pub tests: Vec<GateTest>,
    pub setting_count: usize,
    pub classification: Classification,
    pub ordinary: bool,
}

impl GateProtocol {
    pub fn input_set(&self) -> StateSet {
        StateSet {
            states: self.tests.iter().map(|t| t.input.clone()).collect(),
            labels: None,
        }
    }

    pub fn gaps(&self) -> Vec<f64> {
        self.tests.iter().map(|t| t.strategy.nu).collect()
    }

    /// Number of tests whose output needs the two-setting strategy.
    pub fn entangled_outputs(&self) -> usize {
        self.tests.iter().filter(|t| t.strategy.settings() > 1).count()
    }
}

/// Minimum number of settings for a two-qubit unitary: 5 on `S_E`, else 4.
pub fn mu(u: &CMatrix) -> Result<usize> {
    if u.rows() != 4 || u.cols() != 4 {
        return Err(Error::DimensionMismatch("two-qubit unitary must be 4x4".into()));
    }
    Ok(match classify_by_spectrum(u)? {
        Region::SE => 5,
        Region::SEF => 4,
    })
}

/// `(d, 2d)` with `d = dA·dB`.
pub fn mu_bounds_general(d_a: usize, d_b: usize) -> (usize, usize) {
    let d = d_a * d_b;
    (d, 2 * d)
}

pub fn mu_from_dprod(d: usize, d_prod: usize, prod_connected: bool) -> usize {
    if d_prod < d {
        2 * d - d_prod
    } else if prod_connected {
        d
    } else {
        d + 1
    }
}

/// Uniform-probability protocol on the given inputs; each output gets the
/// one-setting product test or the two-setting strategy.
pub fn protocol_from_test_states(
    target: &CMatrix,
    inputs: Vec<CVector>,
    classification: Classification,
) -> Result<GateProtocol> {
    target.ensure_unitary(tol::UNITARY)?;
    let set = StateSet::new(inputs.clone())?;
    if !is_connected_spanning(&set)?.is_identification_set() {
        return Err(Error::SynthesisFailed("test states do not form an identification set".into()));
    }
    let p = 1.0 / inputs.len() as f64;
    let mut tests = Vec::with_capacity(inputs.len());
    for input in inputs {
        let out = BipartiteState::normalized(target.mul_vec(&input), 2, 2)?;
        let mut strategy = two_setting_protocol(&out)?;
        let input_state = BipartiteState::normalized(input.clone(), 2, 2)?;
        for t in &mut strategy.tests {
            t.operator.input_state = Some(input_state.clone());
        }
        tests.push(GateTest {
            probability: p,
            input,
            strategy,
        });
    }
    let setting_count = tests.iter().map(|t| t.strategy.settings()).sum();
    let ordinary = tests.iter().all(|t| t.strategy.nu > 0.0);
    Ok(GateProtocol {
        target: target.clone(),
        tests,
        setting_count,
        classification,
        ordinary,
    })
}

fn ket2(a: [CScalar; 2], b: [CScalar; 2]) -> CVector {
    CVector::from_vec(a.to_vec()).kron(&CVector::from_vec(b.to_vec()))
}

/// Products of `{|0⟩, |1⟩, |+⟩, |+i⟩}` on both sides.
fn connecting_candidates() -> Vec<CVector> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let singles = [
        [c64(1.0, 0.0), c64(0.0, 0.0)],
        [c64(0.0, 0.0), c64(1.0, 0.0)],
        [c64(h, 0.0), c64(h, 0.0)],
        [c64(h, 0.0), c64(0.0, h)],
    ];
    let mut out = Vec::with_capacity(16);
    for a in singles {
        for b in singles {
            out.push(ket2(a, b));
        }
    }
    out
}

/// First candidate outside `span(base)` that overlaps every base state.
fn connecting_state(base: &[CVector]) -> Option<CVector> {
    connecting_candidates().into_iter().find(|c| {
        let mut trial = base.to_vec();
        trial.push(c.clone());
        let outside = projection_residual(c, base) > 1e-6;
        let overlaps = base.iter().all(|b| b.inner(c).norm() > 1e-6);
        outside && overlaps && numerical_rank(&trial, tol::RANK).is_ok_and(|r| r == base.len() + 1)
    })
}

/// Norm of the component of `v` orthogonal to `span(base)`.
fn projection_residual(v: &CVector, base: &[CVector]) -> f64 {
    let mut ortho: Vec<CVector> = Vec::new();
    for b in base {
        let mut w = b.clone();
        for o in &ortho {
            w = &w - &o.scale(o.inner(&w));
        }
        if let Some(n) = w.normalized().filter(|_| w.norm() > 1e-10) {
            ortho.push(n);
        }
    }
    let mut r = v.clone();
    for o in &ortho {
        r = &r - &o.scale(o.inner(&r));
    }
    r.norm()
}

/// Greedily picks `k` linearly independent states in order.
fn independent_subset(states: &[CVector], k: usize) -> Result<Vec<CVector>> {
    let mut chosen: Vec<CVector> = Vec::with_capacity(k);
    for s in states {
        let mut trial = chosen.clone();
        trial.push(s.clone());
        if numerical_rank(&trial, 1e-7)? == trial.len() {
            chosen = trial;
            if chosen.len() == k {
                return Ok(chosen);
            }
        }
    }
    Err(Error::SynthesisFailed(format!("found only {} independent product states", chosen.len())))
}

/// Three product-preserving states plus one connecting state.
fn five_setting_inputs(prod: &[CVector]) -> Result<Vec<CVector>> {
    let base = independent_subset(prod, 3)?;
    let extra = connecting_state(&base)
        .ok_or_else(|| Error::SynthesisFailed("no connecting state among the candidates".into()))?;
    let mut inputs = base;
    inputs.push(extra);
    Ok(inputs)
}

/// Builds a minimal-setting protocol for an arbitrary two-qubit unitary.
///
/// Product-preserving inputs are sampled directly from the unitary, so no
/// canonical decomposition is needed.
pub fn build_protocol(u: &CMatrix) -> Result<GateProtocol> {
    u.ensure_unitary(tol::UNITARY)?;
    let region = classify_by_spectrum(u)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SYNTHESIS_SEED);
    let members = prod_members(u, 64, &mut rng)?;
    let prod: Vec<CVector> = members.iter().map(|m| m.state()).collect();
    let classification = Classification {
        region,
        reduced_angles: None,
    };
    let inputs = match region {
        Region::SEF => {
            let set = StateSet::new(prod).map_err(|e| Error::SynthesisFailed(e.to_string()))?;
            extract_connected_basis(&set)
                .map_err(|_| Error::SynthesisFailed("sampled product states do not connect".into()))?
                .states
        }
        Region::SE => five_setting_inputs(&prod)?,
    };
    let proto = protocol_from_test_states(u, inputs, classification)?;
    check_setting_count(proto, u)
}

/// Builds the protocol for `U(angles)`, using the closed-form EFMIS on `S_EF`
/// and constraint-family states on `S_E`.
pub fn build_protocol_for_angles(angles: &CanonicalAngles) -> Result<GateProtocol> {
    let u = build_canonical(angles);
    if !angles.in_canonical_cell(1e-12) {
        return build_protocol(&u);
    }
    let tag = classify_region(angles.a1, angles.a2, angles.a3);
    let classification = Classification {
        region: tag.tag,
        reduced_angles: Some(tag.reduced_angles),
    };
    let inputs = match tag.tag {
        Region::SEF => synthesize(angles)?.states,
        Region::SE => {
            let seeds: [(CScalar, CScalar); 6] = [
                (c64(1.0, 0.0), c64(0.0, 0.0)),
                (c64(0.0, 0.0), c64(1.0, 0.0)),
                (c64(1.0, 0.0), c64(1.0, 0.0)),
                (c64(1.0, 0.0), c64(0.0, 1.0)),
                (c64(1.0, 0.0), c64(-1.0, 0.0)),
                (c64(2.0, 0.0), c64(1.0, 0.0)),
            ];
            let prod = seeds
                .iter()
                .map(|&(g1, g2)| solve_constraint_magic(angles, g1, g2).map(|m| m.to_state()))
                .collect::<Result<Vec<_>>>()?;
            five_setting_inputs(&prod)?
        }
    };
    let proto = protocol_from_test_states(&u, inputs, classification)?;
    check_setting_count(proto, &u)
}

/// Protocol on the published EFMIS of a library gate.
pub fn build_protocol_for_gate(gate: Gate) -> Result<GateProtocol> {
    let u = gate.matrix();
    let classification = Classification {
        region: classify_by_spectrum(&u)?,
        reduced_angles: Some(gate.decomposition().angles).map(|a| classify_region(a.a1, a.a2, a.a3).reduced_angles),
    };
    let proto = protocol_from_test_states(&u, gate_efmis(gate)?.states, classification)?;
    check_setting_count(proto, &u)
}

fn check_setting_count(proto: GateProtocol, u: &CMatrix) -> Result<GateProtocol> {
    let want = mu(u)?;
    if proto.setting_count != want {
        return Err(Error::SynthesisFailed(format!(
            "protocol uses {} settings, expected {want}",
            proto.setting_count
        )));
    }
    Ok(proto)
}

/// Per-test, per-setting pass probabilities `tr[E_l Λ(ρ_j)]`.
pub fn setting_pass_probabilities(protocol: &GateProtocol, channel: &Channel) -> Result<Vec<Vec<f64>>> {
    channel.check_cptp()?;
    if channel.dim() != protocol.target.rows() {
        return Err(Error::DimensionMismatch("channel and protocol dimensions differ".into()));
    }
    Ok(protocol
        .tests
        .iter()
        .map(|t| {
            let out = channel.apply(&CMatrix::projector(&t.input));
            t.strategy
                .tests
                .iter()
                .map(|e| e.operator.matrix.matmul(&out).trace().re.clamp(0.0, 1.0))
                .collect()
        })
        .collect())
}

/// `Σ_j p_j tr[Ω_j Λ(ρ_j)]`.
pub fn pass_probability(protocol: &GateProtocol, channel: &Channel) -> Result<f64> {
    let per = setting_pass_probabilities(protocol, channel)?;
    Ok(protocol
        .tests
        .iter()
        .zip(&per)
        .map(|(t, probs)| {
            t.probability
                * t.strategy
                    .tests
                    .iter()
                    .zip(probs)
                    .map(|(e, q)| e.probability * q)
                    .sum::<f64>()
        })
        .sum())
}
