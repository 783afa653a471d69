//! Canonical form of two-qubit unitaries.
//!
//! Every two-qubit unitary is locally equivalent to
//! `U(α) = exp(−i Σ α_k σ_k⊗σ_k) = Σ ζ_k σ_k⊗σ_k`, and the moduli `|ζ_k|` are
//! its operator Schmidt coefficients.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::matkernel::{c64, kron, svd, CMatrix, CScalar, CVector};
use crate::{tol, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalAngles {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl CanonicalAngles {
    pub const fn new(a1: f64, a2: f64, a3: f64) -> Self {
        CanonicalAngles { a1, a2, a3 }
    }

    /// Angles given as multiples of π.
    pub fn from_pi_units(a1: f64, a2: f64, a3: f64) -> Self {
        CanonicalAngles::new(a1 * PI, a2 * PI, a3 * PI)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.a1, self.a2, self.a3]
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|a| a.is_finite())
    }

    /// `0 ≤ a3 ≤ a2 ≤ a1 ≤ π/4` up to `tol`.
    pub fn in_canonical_cell(&self, tol: f64) -> bool {
        -tol <= self.a3 && self.a3 <= self.a2 + tol && self.a2 <= self.a1 + tol && self.a1 <= FRAC_PI_4 + tol
    }
}

/// Pauli matrices `σ_0 = I, σ_1 = X, σ_2 = Y, σ_3 = Z`.
pub fn pauli(k: usize) -> CMatrix {
    let (o, z, i) = (c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 1.0));
    match k {
        0 => CMatrix::from_rows(&[[o, z], [z, o]]),
        1 => CMatrix::from_rows(&[[z, o], [o, z]]),
        2 => CMatrix::from_rows(&[[z, -i], [i, z]]),
        3 => CMatrix::from_rows(&[[o, z], [z, -o]]),
        _ => panic!("Pauli index {k} out of range"),
    }
}

/// `σ_k ⊗ σ_k`.
pub fn pauli_pair(k: usize) -> CMatrix {
    kron(&pauli(k), &pauli(k))
}

pub fn zeta(angles: &CanonicalAngles) -> [CScalar; 4] {
    let (c1, s1) = (angles.a1.cos(), angles.a1.sin());
    let (c2, s2) = (angles.a2.cos(), angles.a2.sin());
    let (c3, s3) = (angles.a3.cos(), angles.a3.sin());
    [
        c64(c1 * c2 * c3, -s1 * s2 * s3),
        c64(c1 * s2 * s3, -s1 * c2 * c3),
        c64(s1 * c2 * s3, -c1 * s2 * c3),
        c64(s1 * s2 * c3, -c1 * c2 * s3),
    ]
}

/// `U(α) = Σ ζ_k σ_k⊗σ_k`.
pub fn build_canonical(angles: &CanonicalAngles) -> CMatrix {
    let z = zeta(angles);
    (0..4).fold(CMatrix::zeros(4, 4), |acc, k| &acc + &pauli_pair(k).scale(z[k]))
}

/// `Σ α_k σ_k⊗σ_k`, so that `U(α) = exp(−i·H)`.
pub fn hamiltonian(angles: &CanonicalAngles) -> CMatrix {
    let a = angles.as_array();
    (1..4).fold(CMatrix::zeros(4, 4), |acc, k| &acc + &pauli_pair(k).scale_real(a[k - 1]))
}

/// `M[(a,a′),(b,b′)] = U[(a,b),(a′,b′)] / 2`.
pub fn reshuffle(u: &CMatrix) -> Result<CMatrix> {
    if u.rows() != 4 || u.cols() != 4 {
        return Err(Error::DimensionMismatch("two-qubit operator must be 4x4".into()));
    }
    Ok(CMatrix::from_fn(4, 4, |row, col| {
        let (a, ap) = (row / 2, row % 2);
        let (b, bp) = (col / 2, col % 2);
        u[(2 * a + b, 2 * ap + bp)] * 0.5
    }))
}

/// Operator Schmidt coefficients, nonincreasing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchmidtSpectrum4 {
    pub s: [f64; 4],
}

impl SchmidtSpectrum4 {
    /// Sorts and validates.
    pub fn new(mut s: [f64; 4]) -> Result<Self> {
        if s.iter().any(|x| !x.is_finite() || *x < -1e-12) {
            return Err(Error::InvalidArgument(format!("invalid Schmidt coefficients {s:?}")));
        }
        s.sort_by(|a, b| b.total_cmp(a));
        for x in &mut s {
            *x = x.max(0.0);
        }
        let norm: f64 = s.iter().map(|x| x * x).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!("squared coefficients sum to {norm}")));
        }
        Ok(SchmidtSpectrum4 { s })
    }

    pub fn from_angles(angles: &CanonicalAngles) -> Self {
        let z = zeta(angles);
        let mut s = z.map(|x| x.norm());
        s.sort_by(|a, b| b.total_cmp(a));
        SchmidtSpectrum4 { s }
    }

    /// Coefficient ranges every two-qubit unitary obeys.
    pub fn in_unitary_ranges(&self, tol: f64) -> bool {
        let [s0, s1, s2, s3] = self.s;
        (0.5 - tol..=1.0 + tol).contains(&s0)
            && s1 <= FRAC_1_SQRT_2 + tol
            && s2 <= 0.5 + tol
            && s3 <= 0.5 + tol
    }

    pub fn max_abs_diff(&self, other: &SchmidtSpectrum4) -> f64 {
        (0..4).map(|k| (self.s[k] - other.s[k]).abs()).fold(0.0, f64::max)
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.s.iter().filter(|&&x| x > tol).count()
    }
}

pub fn operator_schmidt_spectrum(u: &CMatrix) -> Result<SchmidtSpectrum4> {
    u.ensure_unitary(tol::UNITARY)?;
    let d = svd(&reshuffle(u)?)?;
    Ok(SchmidtSpectrum4 {
        s: [d.s[0], d.s[1], d.s[2], d.s[3]],
    })
}

pub fn schmidt_rank(u: &CMatrix, tol: f64) -> Result<usize> {
    Ok(operator_schmidt_spectrum(u)?.rank(tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum AngleRecovery {
    Unique { angles: CanonicalAngles },
    /// `α1 = π/4`; only `cos 2α2 · cos 2α3` is determined.
    #[serde(rename_all = "camelCase")]
    DegenerateFamily { family_product: f64 },
}

impl AngleRecovery {
    /// A concrete member of the class: the unique angles, or the family
    /// member with `α3 = 0`.
    pub fn representative(&self) -> CanonicalAngles {
        match *self {
            AngleRecovery::Unique { angles } => angles,
            AngleRecovery::DegenerateFamily { family_product } => {
                CanonicalAngles::new(FRAC_PI_4, family_product.clamp(-1.0, 1.0).acos() / 2.0, 0.0)
            }
        }
    }
}

/// Inverts the spectrum map on the canonical cell.
///
/// With `C_j = cos 2α_j` the squared coefficients are
/// `4s0² = 1+x+y+z`, `4s1² = 1−x−y+z`, `4s2² = 1−x+y−z`, `4s3² = 1+x−y−z`
/// where `x = C1C2`, `y = C1C3`, `z = C2C3`.
pub fn recover_angles(spec: &SchmidtSpectrum4, tol: f64) -> Result<AngleRecovery> {
    let [s0, s1, s2, s3] = spec.s;
    let q = spec.s.map(|x| x * x);
    let infeasible = |why: &str| Err(Error::InfeasibleSpectrum(format!("{why}: {:?}", spec.s)));
    if !spec.in_unitary_ranges(1e-9) {
        return infeasible("coefficients outside the unitary ranges");
    }

    if s0 <= s1 + tol {
        let z = 4.0 * q[0] - 1.0;
        if (s2 - s3).abs() > 1e-7 || (s0 - s1).abs() > 1e-7 || !(-1e-7..=1.0 + 1e-7).contains(&z) {
            return infeasible("no member of the maximal family matches");
        }
        return Ok(AngleRecovery::DegenerateFamily {
            family_product: z.clamp(0.0, 1.0),
        });
    }

    let x = q[0] + q[3] - q[1] - q[2];
    let y = q[0] + q[2] - q[1] - q[3];
    let z = q[0] + q[1] - q[2] - q[3];
    let ratio = |num: f64, den: f64| if den.abs() < 1e-300 { f64::NAN } else { num / den };
    let c = [ratio(x * y, z), ratio(x * z, y), ratio(y * z, x)];
    if c.iter().any(|v| !v.is_finite() || *v < -1e-9 || *v > 1.0 + 1e-7) {
        return infeasible("cosine products inconsistent");
    }
    let alpha = c.map(|v| v.clamp(0.0, 1.0).sqrt().acos() / 2.0);
    let angles = CanonicalAngles::new(alpha[0], alpha[1], alpha[2]);
    if !angles.in_canonical_cell(1e-7) || SchmidtSpectrum4::from_angles(&angles).max_abs_diff(spec) > 1e-7 {
        return infeasible("recovered angles do not reproduce the spectrum");
    }
    Ok(AngleRecovery::Unique { angles })
}

pub fn same_schmidt_class(u: &CMatrix, v: &CMatrix, tol: f64) -> Result<bool> {
    let a = operator_schmidt_spectrum(u)?;
    let b = operator_schmidt_spectrum(v)?;
    Ok(a.max_abs_diff(&b) <= tol)
}

/// `|Φ̃_k⟩ = σ_k ⊗ I |Φ⟩` with `|Φ⟩ = (|00⟩+|11⟩)/√2`.
pub fn bell_basis() -> [CVector; 4] {
    let phi = CVector::from_real(&[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]);
    std::array::from_fn(|k| kron(&pauli(k), &pauli(0)).mul_vec(&phi))
}

/// Basis in which product states have vanishing squared-coefficient sum.
pub fn magic_basis() -> [CVector; 4] {
    let h = FRAC_1_SQRT_2;
    let (z, r, i) = (c64(0.0, 0.0), c64(h, 0.0), c64(0.0, h));
    [
        CVector::from_vec(vec![r, z, z, r]),
        CVector::from_vec(vec![i, z, z, -i]),
        CVector::from_vec(vec![z, i, i, z]),
        CVector::from_vec(vec![z, r, -r, z]),
    ]
}

/// Columns are the magic basis vectors.
pub fn magic_matrix() -> CMatrix {
    CMatrix::from_columns(&magic_basis()).expect("four 4-vectors")
}

/// Local unitaries `(V_A ⊗ W_B) · core · (Ṽ_A ⊗ W̃_B)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LocalUnitaryFrame {
    pub v_a: CMatrix,
    pub w_b: CMatrix,
    pub v_tilde_a: CMatrix,
    pub w_tilde_b: CMatrix,
}

impl LocalUnitaryFrame {
    pub fn new(v_a: CMatrix, w_b: CMatrix, v_tilde_a: CMatrix, w_tilde_b: CMatrix) -> Result<Self> {
        for m in [&v_a, &w_b, &v_tilde_a, &w_tilde_b] {
            if m.rows() != 2 || m.cols() != 2 {
                return Err(Error::DimensionMismatch("local frames are 2x2".into()));
            }
            m.ensure_unitary(1e-10)?;
        }
        Ok(LocalUnitaryFrame { v_a, w_b, v_tilde_a, w_tilde_b })
    }

    pub fn identity() -> Self {
        let i = CMatrix::identity(2);
        LocalUnitaryFrame {
            v_a: i.clone(),
            w_b: i.clone(),
            v_tilde_a: i.clone(),
            w_tilde_b: i,
        }
    }

    pub fn pre(&self) -> CMatrix {
        kron(&self.v_tilde_a, &self.w_tilde_b)
    }

    pub fn post(&self) -> CMatrix {
        kron(&self.v_a, &self.w_b)
    }

    pub fn apply(&self, core: &CMatrix) -> CMatrix {
        self.post().matmul(core).matmul(&self.pre())
    }
}
