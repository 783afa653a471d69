//! Verification of bipartite pure states with local projective measurements.
//!
//! A strategy is a probability distribution over pass/fail tests `E_l`, each
//! of which accepts the target with certainty. Its efficiency is governed by
//! the spectral gap of `Ω = Σ p_l E_l`: a state at infidelity `ε` passes one
//! round with probability at most `1 − ν·ε`.

use serde::{Deserialize, Serialize};

use crate::matkernel::{complete_basis, hermitian_eig, kron, svd, CMatrix, CVector};
use crate::{tol, Error, Result};

/// Pure state of a `dA × dB` system, stored as a unit vector in `A ⊗ B`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", try_from = "StateRepr")]
pub struct BipartiteState {
    vector: CVector,
    #[serde(rename = "dA")]
    d_a: usize,
    #[serde(rename = "dB")]
    d_b: usize,
}

#[derive(Deserialize)]
struct StateRepr {
    vector: CVector,
    #[serde(rename = "dA")]
    d_a: usize,
    #[serde(rename = "dB")]
    d_b: usize,
}

impl TryFrom<StateRepr> for BipartiteState {
    type Error = Error;

    fn try_from(r: StateRepr) -> Result<Self> {
        BipartiteState::new(r.vector, r.d_a, r.d_b)
    }
}

impl BipartiteState {
    pub fn new(vector: CVector, d_a: usize, d_b: usize) -> Result<Self> {
        if d_a == 0 || d_b == 0 || vector.dim() != d_a * d_b {
            return Err(Error::DimensionMismatch(format!(
                "state of dim {} does not factor as {d_a}x{d_b}",
                vector.dim()
            )));
        }
        if vector.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("state"));
        }
        let n = vector.norm();
        if (n - 1.0).abs() > tol::STATE_NORM {
            return Err(Error::NotNormalized(n));
        }
        Ok(BipartiteState { vector, d_a, d_b })
    }

    /// Two-qubit state.
    pub fn qubits(vector: CVector) -> Result<Self> {
        BipartiteState::new(vector, 2, 2)
    }

    /// Normalizes `vector` before validating it.
    pub fn normalized(vector: CVector, d_a: usize, d_b: usize) -> Result<Self> {
        let v = vector
            .normalized()
            .ok_or_else(|| Error::InvalidArgument("zero vector is not a state".into()))?;
        BipartiteState::new(v, d_a, d_b)
    }

    pub fn product(a: &CVector, b: &CVector) -> Result<Self> {
        let v = a.kron(b);
        let n = v.norm();
        if (n - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized(n));
        }
        BipartiteState::normalized(v, a.dim(), b.dim())
    }

    pub fn vector(&self) -> &CVector {
        &self.vector
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn dim(&self) -> usize {
        self.vector.dim()
    }

    /// Coefficient matrix `M[i, k] = ψ[i·dB + k]`.
    pub fn reshape(&self) -> CMatrix {
        CMatrix::from_fn(self.d_a, self.d_b, |i, k| self.vector[i * self.d_b + k])
    }
}

/// Schmidt decomposition `|Ψ⟩ = Σ λ_j |a_j⟩|b_j⟩`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SchmidtData {
    /// Nonincreasing, length `min(dA, dB)`.
    pub coeffs: Vec<f64>,
    /// `dA × k`, columns `|a_j⟩`.
    pub left_basis: CMatrix,
    /// `dB × k`, columns `|b_j⟩`.
    pub right_basis: CMatrix,
    pub rank: usize,
}

impl SchmidtData {
    pub fn left(&self, j: usize) -> CVector {
        self.left_basis.column(j)
    }

    pub fn right(&self, j: usize) -> CVector {
        self.right_basis.column(j)
    }

    pub fn reconstruct(&self) -> CVector {
        let mut out = CVector::zeros(self.left_basis.rows() * self.right_basis.rows());
        for (j, &l) in self.coeffs.iter().enumerate() {
            out = &out + &self.left(j).kron(&self.right(j)).scale_real(l);
        }
        out
    }
}

pub fn schmidt_decompose(state: &BipartiteState) -> Result<SchmidtData> {
    let d = svd(&state.reshape())?;
    // M = U S V†, so ψ = Σ s_j u_j ⊗ conj(v_j)
    let right_basis = d.v.conj();
    let rank = d.s.iter().filter(|&&s| s > tol::SCHMIDT_RANK).count();
    Ok(SchmidtData {
        coeffs: d.s,
        left_basis: d.u,
        right_basis,
        rank,
    })
}

/// Factors of a product state, `None` if the state is entangled.
pub fn product_factors(state: &BipartiteState) -> Result<Option<(CVector, CVector)>> {
    let s = schmidt_decompose(state)?;
    if s.rank > 1 {
        return Ok(None);
    }
    // absorb the global phase into the left factor
    let a = s.left(0);
    let b = s.right(0);
    let phase = {
        let z = a.kron(&b).inner(state.vector());
        z / z.norm()
    };
    Ok(Some((a.scale(phase), b)))
}

/// One experimental setting: a local projective measurement on each side and
/// the set of joint outcomes that count as "pass".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Setting {
    pub alice: Vec<CMatrix>,
    pub bob: Vec<CMatrix>,
    pub pass_pairs: Vec<[usize; 2]>,
}

impl Setting {
    /// `Σ_{(i,j) ∈ pass} A_i ⊗ B_j`.
    pub fn pass_operator(&self) -> CMatrix {
        let d = self.alice[0].rows() * self.bob[0].rows();
        self.pass_pairs.iter().fold(CMatrix::zeros(d, d), |acc, &[i, j]| {
            &acc + &kron(&self.alice[i], &self.bob[j])
        })
    }

    /// Rank-one projectors onto each column of a unitary basis.
    pub fn basis_projectors(basis: &[CVector]) -> Vec<CMatrix> {
        basis.iter().map(CMatrix::projector).collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TestOperator {
    pub matrix: CMatrix,
    pub realization: Setting,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_state: Option<BipartiteState>,
}

impl TestOperator {
    pub fn from_setting(realization: Setting) -> Self {
        TestOperator {
            matrix: realization.pass_operator(),
            realization,
            input_state: None,
        }
    }

    /// Residual `‖E|Ψ⟩ − |Ψ⟩‖_max`.
    pub fn target_residual(&self, target: &CVector) -> f64 {
        self.matrix.mul_vec(target).max_abs_diff(target)
    }

    /// Distance between the matrix and the declared pass projectors.
    pub fn realization_residual(&self) -> f64 {
        self.matrix.max_abs_diff(&self.realization.pass_operator())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WeightedTest {
    pub probability: f64,
    #[serde(flatten)]
    pub operator: TestOperator,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationStrategy {
    pub tests: Vec<WeightedTest>,
    pub target: BipartiteState,
    pub omega: CMatrix,
    pub nu: f64,
}

impl VerificationStrategy {
    /// Builds `Ω` and its gap from weighted tests.
    pub fn from_tests(target: BipartiteState, tests: Vec<WeightedTest>) -> Result<Self> {
        let total: f64 = tests.iter().map(|t| t.probability).sum();
        if tests.is_empty() || (total - 1.0).abs() > 1e-12 || tests.iter().any(|t| t.probability <= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "test probabilities must be positive and sum to 1 (got {total})"
            )));
        }
        let d = target.dim();
        let omega = tests.iter().fold(CMatrix::zeros(d, d), |acc, t| {
            &acc + &t.operator.matrix.scale_real(t.probability)
        });
        let nu = spectral_gap(&omega, target.vector())?;
        Ok(VerificationStrategy { tests, target, omega, nu })
    }

    /// Number of distinct measurement settings.
    pub fn settings(&self) -> usize {
        self.tests.len()
    }

    pub fn sample_count(&self, eps: f64, delta: f64) -> Result<u64> {
        sample_count(self.nu, eps, delta)
    }
}

/// The two-setting strategy for an entangled target, or the single product
/// test when the target is a product state.
pub fn two_setting_protocol(state: &BipartiteState) -> Result<VerificationStrategy> {
    let sd = schmidt_decompose(state)?;
    let (d_a, d_b) = (state.d_a(), state.d_b());
    let r = sd.rank;
    let k = sd.coeffs.len();
    let left: Vec<CVector> = (0..k).map(|j| sd.left(j)).collect();
    let right: Vec<CVector> = (0..k).map(|j| sd.right(j)).collect();
    let alice_basis = complete_basis(&left, d_a);
    let bob_basis = complete_basis(&right, d_b);

    if r <= 1 {
        let p0 = Setting {
            alice: Setting::basis_projectors(&alice_basis),
            bob: Setting::basis_projectors(&bob_basis),
            pass_pairs: vec![[0, 0]],
        };
        return VerificationStrategy::from_tests(
            state.clone(),
            vec![WeightedTest {
                probability: 1.0,
                operator: TestOperator::from_setting(p0),
            }],
        );
    }

    let p1 = Setting {
        alice: Setting::basis_projectors(&alice_basis),
        bob: Setting::basis_projectors(&bob_basis),
        pass_pairs: (0..r).map(|j| [j, j]).collect(),
    };

    let u = (0..r)
        .fold(CVector::zeros(d_a), |acc, j| &acc + &left[j])
        .scale_real(1.0 / (r as f64).sqrt());
    let v = (0..r)
        .fold(CVector::zeros(d_b), |acc, j| &acc + &right[j].scale_real(sd.coeffs[j]))
        .normalized()
        .expect("entangled state has nonzero Schmidt coefficients");
    let uu = CMatrix::projector(&u);
    let vv = CMatrix::projector(&v);
    let p2 = Setting {
        alice: vec![uu.clone(), &CMatrix::identity(d_a) - &uu],
        bob: vec![vv.clone(), &CMatrix::identity(d_b) - &vv],
        pass_pairs: vec![[0, 0], [1, 0], [1, 1]],
    };

    VerificationStrategy::from_tests(
        state.clone(),
        vec![
            WeightedTest {
                probability: 0.5,
                operator: TestOperator::from_setting(p1),
            },
            WeightedTest {
                probability: 0.5,
                operator: TestOperator::from_setting(p2),
            },
        ],
    )
}

/// Closed-form gap of the two-setting strategy for Schmidt rank `r`.
pub fn two_setting_gap(r: usize) -> f64 {
    if r <= 1 {
        return 1.0;
    }
    let r = r as f64;
    (1.0 - ((r - 1.0) / r).sqrt()) / 2.0
}

/// `ν(Ω) = 1 − β(Ω)`, with `β` the second largest eigenvalue.
pub fn spectral_gap(omega: &CMatrix, target: &CVector) -> Result<f64> {
    if !omega.is_square() || omega.rows() != target.dim() {
        return Err(Error::DimensionMismatch("operator and target disagree".into()));
    }
    let eig = hermitian_eig(omega)?;
    let (lo, hi) = (eig.values[eig.values.len() - 1], eig.values[0]);
    if lo < -1e-9 || hi > 1.0 + 1e-9 {
        return Err(Error::InvalidOperator(format!("spectrum spans [{lo}, {hi}]")));
    }
    let residual = omega.mul_vec(target).max_abs_diff(target);
    if residual > 1e-9 {
        return Err(Error::TargetNotFixed(residual));
    }
    Ok(match eig.values.get(1) {
        Some(beta) => (1.0 - beta).clamp(0.0, 1.0),
        None => 1.0,
    })
}

/// Number of passed rounds needed to certify infidelity below `eps` at
/// significance `delta`.
pub fn sample_count(nu: f64, eps: f64, delta: f64) -> Result<u64> {
    if !(nu > 0.0) {
        return Err(Error::ZeroGap);
    }
    if nu > 1.0 + 1e-12 || !(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "need nu in (0,1], eps and delta in (0,1); got nu={nu}, eps={eps}, delta={delta}"
        )));
    }
    let n = (delta.ln() / (-nu * eps).ln_1p()).ceil();
    Ok((n as u64).max(1))
}

/// Worst-case single-round pass probability of a state at infidelity `eps`.
pub fn max_pass_probability(omega: &CMatrix, target: &CVector, eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidArgument(format!("eps = {eps} outside [0, 1]")));
    }
    Ok(1.0 - spectral_gap(omega, target)? * eps)
}
