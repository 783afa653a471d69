//! Seeded Monte-Carlo runs of state and gate verification.
//!
//! Trial `t` draws from its own ChaCha8 stream `(seed, t)`, so parallel and
//! serial execution produce the same counts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::Channel;
use crate::gateprotocol::{setting_pass_probabilities, GateProtocol};
use crate::matkernel::{hermitian_eig, unitary_exp, CMatrix, CVector};
use crate::stateverify::{sample_count, VerificationStrategy};
use crate::{tol, Error, Result};

/// Source or channel imperfection.
///
/// For gate runs the state models act on the output: `DepolarizingState`
/// and `DepolarizingChannel` coincide, and `WorstCase` replaces each output
/// with the saturating mixture of its own strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum NoiseModel {
    Ideal,
    DepolarizingState { p: f64 },
    DepolarizingChannel { p: f64 },
    /// Applies `exp(−i·strength·G)` after the ideal operation.
    UnitaryPerturbation { generator: CMatrix, strength: f64 },
    /// `(1 − ε)|ψ⟩⟨ψ| + ε|φ⟩⟨φ|` with `φ` the second eigenvector of `Ω`.
    WorstCase { eps: f64 },
}

impl NoiseModel {
    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            NoiseModel::Ideal => Ok(()),
            NoiseModel::DepolarizingState { p } | NoiseModel::DepolarizingChannel { p } => unit_interval("p", *p),
            NoiseModel::WorstCase { eps } => unit_interval("eps", *eps),
            NoiseModel::UnitaryPerturbation { generator, strength } => {
                if !strength.is_finite() {
                    return Err(Error::NonFinite("perturbation strength"));
                }
                if generator.rows() != dim || generator.cols() != dim {
                    return Err(Error::DimensionMismatch(format!(
                        "generator is {}x{}, expected {dim}x{dim}",
                        generator.rows(),
                        generator.cols()
                    )));
                }
                let dev = generator.hermitian_deviation();
                if dev > tol::HERMITIAN {
                    return Err(Error::NotHermitian(dev));
                }
                Ok(())
            }
        }
    }

    fn perturbation(&self) -> Result<Option<CMatrix>> {
        match self {
            NoiseModel::UnitaryPerturbation { generator, strength } => {
                let v = unitary_exp(generator, *strength)?;
                v.ensure_unitary(1e-10)?;
                Ok(Some(v))
            }
            _ => Ok(None),
        }
    }
}

fn unit_interval(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} = {x} outside [0, 1]")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TestCount {
    pub trials: u64,
    pub passes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SimReport {
    pub trials: u64,
    pub passes: u64,
    pub empirical_pass_rate: f64,
    /// Exact per-trial pass probability of the simulated source or channel.
    pub analytic_bound: f64,
    pub per_test_counts: Vec<TestCount>,
    pub seed: u64,
}

impl SimReport {
    /// Binomial standard deviation of the empirical rate around the analytic value.
    pub fn sigma(&self) -> f64 {
        let p = self.analytic_bound.clamp(0.0, 1.0);
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// `|empirical − analytic|` in units of σ; zero when both agree exactly.
    pub fn deviation_sigmas(&self) -> f64 {
        let d = (self.empirical_pass_rate - self.analytic_bound).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.sigma()
        }
    }
}

fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn draw_index<R: Rng>(weights: impl IntoIterator<Item = f64>, rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, w) in weights.into_iter().enumerate() {
        acc += w;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}

/// Runs `trials` rounds; `round` returns `(test index, passed)`.
fn tally(
    trials: u64,
    tests: usize,
    seed: u64,
    round: impl Fn(&mut ChaCha8Rng) -> (usize, bool) + Sync,
) -> Vec<TestCount> {
    (0..trials)
        .into_par_iter()
        .fold(
            || vec![TestCount::default(); tests],
            |mut acc, t| {
                let mut rng = trial_rng(seed, t);
                let (j, ok) = round(&mut rng);
                acc[j].trials += 1;
                acc[j].passes += ok as u64;
                acc
            },
        )
        .reduce(
            || vec![TestCount::default(); tests],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    x.trials += y.trials;
                    x.passes += y.passes;
                }
                a
            },
        )
}

fn report(trials: u64, seed: u64, analytic: f64, counts: Vec<TestCount>) -> SimReport {
    let passes = counts.iter().map(|c| c.passes).sum();
    SimReport {
        trials,
        passes,
        empirical_pass_rate: passes as f64 / trials as f64,
        analytic_bound: analytic,
        per_test_counts: counts,
        seed,
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    Ok(())
}

/// Unit vector orthogonal to `target` spanning the eigenspace of `β(Ω)`.
fn second_eigenvector(omega: &CMatrix, target: &CVector) -> Result<CVector> {
    let eig = hermitian_eig(omega)?;
    let v = eig.vectors.column(1);
    let v = &v - &target.scale(target.inner(&v));
    v.normalized()
        .ok_or_else(|| Error::InvalidOperator("second eigenvector parallel to target".into()))
}

/// Saturating source `(1 − ε)|ψ⟩⟨ψ| + ε|φ⟩⟨φ|`.
pub fn worst_case_state(omega: &CMatrix, target: &CVector, eps: f64) -> Result<CMatrix> {
    unit_interval("eps", eps)?;
    let phi = second_eigenvector(omega, target)?;
    Ok(&CMatrix::projector(target).scale_real(1.0 - eps) + &CMatrix::projector(&phi).scale_real(eps))
}

fn depolarize(rho: &CMatrix, p: f64) -> CMatrix {
    let d = rho.rows();
    &rho.scale_real(1.0 - p) + &CMatrix::identity(d).scale_real(p / d as f64)
}

/// Density matrix emitted by the noisy source for a state-verification run.
pub fn source_state(strategy: &VerificationStrategy, source: &NoiseModel) -> Result<CMatrix> {
    let psi = strategy.target.vector();
    source.validate(psi.dim())?;
    let pure = CMatrix::projector(psi);
    Ok(match source {
        NoiseModel::Ideal => pure,
        NoiseModel::DepolarizingState { p } | NoiseModel::DepolarizingChannel { p } => depolarize(&pure, *p),
        NoiseModel::UnitaryPerturbation { .. } => {
            let v = source.perturbation()?.expect("perturbation model");
            CMatrix::projector(&v.mul_vec(psi))
        }
        NoiseModel::WorstCase { eps } => worst_case_state(&strategy.omega, psi, *eps)?,
    })
}

fn test_pass_probabilities(strategy: &VerificationStrategy, rho: &CMatrix) -> Vec<f64> {
    strategy
        .tests
        .iter()
        .map(|t| t.operator.matrix.matmul(rho).trace().re.clamp(0.0, 1.0))
        .collect()
}

/// Each trial picks test `l` with probability `p_l` and passes with `tr(E_l ρ)`.
pub fn run_state_verification(
    strategy: &VerificationStrategy,
    source: &NoiseModel,
    trials: u64,
    seed: u64,
) -> Result<SimReport> {
    check_trials(trials)?;
    let rho = source_state(strategy, source)?;
    let q = test_pass_probabilities(strategy, &rho);
    let probs: Vec<f64> = strategy.tests.iter().map(|t| t.probability).collect();
    let analytic = probs.iter().zip(&q).map(|(p, q)| p * q).sum();
    let counts = tally(trials, q.len(), seed, |rng| {
        let l = draw_index(probs.iter().copied(), rng);
        (l, rng.random::<f64>() < q[l])
    });
    Ok(report(trials, seed, analytic, counts))
}

/// Per-test, per-setting pass probabilities under the noise model.
fn gate_setting_probabilities(protocol: &GateProtocol, noise: &NoiseModel) -> Result<Vec<Vec<f64>>> {
    let u = &protocol.target;
    noise.validate(u.rows())?;
    let channel = match noise {
        NoiseModel::Ideal => Channel::unitary(u)?,
        NoiseModel::DepolarizingState { p } | NoiseModel::DepolarizingChannel { p } => Channel::depolarizing(u, *p)?,
        NoiseModel::UnitaryPerturbation { .. } => {
            let v = noise.perturbation()?.expect("perturbation model");
            Channel::unitary(&v.matmul(u))?
        }
        NoiseModel::WorstCase { eps } => {
            return protocol
                .tests
                .iter()
                .map(|t| {
                    let rho = worst_case_state(&t.strategy.omega, t.strategy.target.vector(), *eps)?;
                    Ok(test_pass_probabilities(&t.strategy, &rho))
                })
                .collect();
        }
    };
    setting_pass_probabilities(protocol, &channel)
}

/// Each trial picks input `j` with `p_j`, then one setting of the output strategy.
pub fn run_gate_verification(
    protocol: &GateProtocol,
    noise: &NoiseModel,
    trials: u64,
    seed: u64,
) -> Result<SimReport> {
    check_trials(trials)?;
    let q = gate_setting_probabilities(protocol, noise)?;
    let analytic = protocol
        .tests
        .iter()
        .zip(&q)
        .map(|(t, qs)| {
            t.probability
                * t.strategy
                    .tests
                    .iter()
                    .zip(qs)
                    .map(|(e, q)| e.probability * q)
                    .sum::<f64>()
        })
        .sum();
    let counts = tally(trials, protocol.tests.len(), seed, |rng| {
        let j = draw_index(protocol.tests.iter().map(|t| t.probability), rng);
        let strat = &protocol.tests[j].strategy;
        let l = draw_index(strat.tests.iter().map(|e| e.probability), rng);
        (j, rng.random::<f64>() < q[j][l])
    });
    Ok(report(trials, seed, analytic, counts))
}

/// Fraction of replicates in which a worst-case source at infidelity
/// `source_eps` passes `n` consecutive independent tests.
pub fn acceptance_rate(
    strategy: &VerificationStrategy,
    source_eps: f64,
    n: u64,
    replicates: u64,
    seed: u64,
) -> Result<f64> {
    check_trials(replicates)?;
    let rho = worst_case_state(&strategy.omega, strategy.target.vector(), source_eps)?;
    let q = test_pass_probabilities(strategy, &rho);
    let probs: Vec<f64> = strategy.tests.iter().map(|t| t.probability).collect();
    let accepted: u64 = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = trial_rng(seed, r);
            let all = (0..n).all(|_| {
                let l = draw_index(probs.iter().copied(), &mut rng);
                rng.random::<f64>() < q[l]
            });
            all as u64
        })
        .sum();
    Ok(accepted as f64 / replicates as f64)
}

/// `(N, empirical acceptance at N)` for a worst-case source at infidelity `eps`.
pub fn empirical_sample_complexity(
    strategy: &VerificationStrategy,
    eps: f64,
    delta: f64,
    replicates: u64,
    seed: u64,
) -> Result<(u64, f64)> {
    let n = sample_count(strategy.nu, eps, delta)?;
    Ok((n, acceptance_rate(strategy, eps, n, replicates, seed)?))
}
