//! Product-state geometry of two-qubit unitaries.
//!
//! `Prod(U)` is the set of product inputs whose outputs are again product
//! states. Whether it contains a connected basis decides if `U` can be
//! verified with four settings or needs five.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::canon2q::{
    build_canonical, magic_basis, operator_schmidt_spectrum, zeta, CanonicalAngles,
};
use crate::matkernel::{c64, numerical_rank, CMatrix, CScalar, CVector};
use crate::random::haar_state;
use crate::{tol, Error, Result};

/// `2|c00·c11 − c01·c10|`.
pub fn concurrence(state: &CVector) -> f64 {
    assert_eq!(state.dim(), 4, "concurrence is defined for two qubits");
    2.0 * (state[0] * state[3] - state[1] * state[2]).norm()
}

/// Concurrence of the input and of its image under `U(angles)`.
pub fn constraint_residual(angles: &CanonicalAngles, input: &CVector) -> (f64, f64) {
    let out = build_canonical(angles).mul_vec(input);
    (concurrence(input), concurrence(&out))
}

/// Same as [`constraint_residual`] for an arbitrary unitary.
pub fn constraint_residual_for(u: &CMatrix, input: &CVector) -> (f64, f64) {
    (concurrence(input), concurrence(&u.mul_vec(input)))
}

/// Phases of `U(α)` in the magic basis: `U|Φ_k⟩ = e^{−iλ_k}|Φ_k⟩`.
pub fn lambdas(angles: &CanonicalAngles) -> [f64; 4] {
    let CanonicalAngles { a1, a2, a3 } = *angles;
    [a1 - a2 + a3, -a1 + a2 + a3, a1 + a2 - a3, -a1 - a2 - a3]
}

/// Coordinates `γ_k` of a two-qubit state in the magic basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagicCoeffs {
    pub gamma: [CScalar; 4],
}

impl MagicCoeffs {
    /// Normalizes; fails on the zero vector.
    pub fn new(gamma: [CScalar; 4]) -> Result<Self> {
        let n: f64 = gamma.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
        if !(n > 1e-300) || !n.is_finite() {
            return Err(Error::DegenerateSeed);
        }
        Ok(MagicCoeffs {
            gamma: gamma.map(|g| g / n),
        })
    }

    pub fn from_state(state: &CVector) -> Self {
        let basis = magic_basis();
        MagicCoeffs {
            gamma: std::array::from_fn(|k| basis[k].inner(state)),
        }
    }

    pub fn to_state(&self) -> CVector {
        let basis = magic_basis();
        (0..4).fold(CVector::zeros(4), |acc, k| &acc + &basis[k].scale(self.gamma[k]))
    }

    /// `|Σ γ_k²|`, the concurrence.
    pub fn concurrence(&self) -> f64 {
        self.gamma.iter().map(|g| g * g).sum::<CScalar>().norm()
    }
}

/// Square root with `Re ≥ 0`, and `Im ≥ 0` on the imaginary axis.
pub fn principal_sqrt(z: CScalar) -> CScalar {
    let r = z.sqrt();
    if r.re < 0.0 || (r.re == 0.0 && r.im < 0.0) {
        -r
    } else {
        r
    }
}

/// Completes `(γ1, γ2)` to a vector whose input and output under `U(α)` are
/// both product states.
pub fn solve_constraint_magic(angles: &CanonicalAngles, g1: CScalar, g2: CScalar) -> Result<MagicCoeffs> {
    let CanonicalAngles { a1, a2, a3 } = *angles;
    let s12 = (2.0 * a1 + 2.0 * a2).sin();
    if !(a1 + a2 > 1e-12 && a1 + a2 < FRAC_PI_2 - 1e-12) || s12.abs() < 1e-12 {
        return Err(Error::RangeUnsupported);
    }
    let r = |phase: f64, amp: f64| CScalar::from_polar(amp / s12, phase + PI);
    let r31 = r(2.0 * a2 - 2.0 * a3, (2.0 * a1 + 2.0 * a3).sin());
    let r32 = r(2.0 * a1 - 2.0 * a3, (2.0 * a2 + 2.0 * a3).sin());
    let r41 = r(-2.0 * a1 - 2.0 * a3, (2.0 * a2 - 2.0 * a3).sin());
    let r42 = r(-2.0 * a2 - 2.0 * a3, (2.0 * a1 - 2.0 * a3).sin());
    let (q1, q2) = (g1 * g1, g2 * g2);
    let g3 = principal_sqrt(r31 * q1 + r32 * q2);
    let g4 = principal_sqrt(r41 * q1 + r42 * q2);
    MagicCoeffs::new([g1, g2, g3, g4])
}

/// Folds arbitrary angles into the canonical cell using the `π/2`
/// periodicity and the reflection `α ↦ π/2 − α` of each angle, then sorts.
pub fn reduce_angles(a1: f64, a2: f64, a3: f64) -> CanonicalAngles {
    let fold = |a: f64| {
        let m = a.rem_euclid(FRAC_PI_2);
        let m = if m > FRAC_PI_4 { FRAC_PI_2 - m } else { m };
        // values within rounding of a period boundary are exactly zero
        if m < 1e-15 {
            0.0
        } else {
            m
        }
    };
    let mut v = [fold(a1), fold(a2), fold(a3)];
    v.sort_by(|x, y| y.total_cmp(x));
    CanonicalAngles::new(v[0], v[1], v[2])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// Five settings needed; no entanglement-free protocol exists.
    #[serde(rename = "S_E")]
    SE,
    /// Four settings suffice with product inputs and product outputs.
    #[serde(rename = "S_EF")]
    SEF,
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Region::SE => "S_E",
            Region::SEF => "S_EF",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RegionTag {
    pub tag: Region,
    pub reduced_angles: CanonicalAngles,
}

pub fn classify_region(a1: f64, a2: f64, a3: f64) -> RegionTag {
    let r = reduce_angles(a1, a2, a3);
    let eq = tol::EQ;
    let equal = (r.a1 - r.a2).abs() <= eq && (r.a2 - r.a3).abs() <= eq;
    let interior = r.a3 > eq && r.a1 < FRAC_PI_4 - eq;
    RegionTag {
        tag: if equal && interior { Region::SE } else { Region::SEF },
        reduced_angles: r,
    }
}

/// `S_E` iff `s0 > s1 = s2 = s3 > 0`.
pub fn classify_by_spectrum(u: &CMatrix) -> Result<Region> {
    let [s0, s1, s2, s3] = operator_schmidt_spectrum(u)?.s;
    let eq = tol::EQ;
    Ok(if s0 > s1 + eq && (s1 - s2).abs() < eq && (s2 - s3).abs() < eq && s3 > eq {
        Region::SE
    } else {
        Region::SEF
    })
}

/// A product input `|a⟩⊗|b⟩` whose image is also a product state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProdMember {
    pub a: CVector,
    pub b: CVector,
}

impl ProdMember {
    pub fn state(&self) -> CVector {
        self.a.kron(&self.b)
    }
}

/// Null directions `(x, y)` of the form `q00 x² + 2 q01 xy + q11 y²`. The
/// variable with the larger squared coefficient is the one solved for.
fn quadratic_null_directions(q00: CScalar, q01: CScalar, q11: CScalar) -> Vec<[CScalar; 2]> {
    let one = c64(1.0, 0.0);
    // solve lead·t² + 2·mid·t + tail = 0
    let solve = |lead: CScalar, mid: CScalar, tail: CScalar| -> Vec<CScalar> {
        let disc = (mid * mid - lead * tail).sqrt();
        let q = if (mid.conj() * disc).re >= 0.0 { -(mid + disc) } else { -(mid - disc) };
        if q.norm() == 0.0 {
            return vec![c64(0.0, 0.0)];
        }
        vec![q / lead, tail / q]
    };
    if q00.norm() == 0.0 && q11.norm() == 0.0 {
        return vec![[one, c64(0.0, 0.0)], [c64(0.0, 0.0), one]];
    }
    if q11.norm() >= q00.norm() {
        // b = (1, t): q00 + 2 q01 t + q11 t²
        solve(q11, q01, q00).into_iter().map(|t| [one, t]).collect()
    } else {
        // b = (t, 1): q00 t² + 2 q01 t + q11
        solve(q00, q01, q11).into_iter().map(|t| [t, one]).collect()
    }
}

/// Output-concurrence quadratic form in the free factor.
///
/// With one factor fixed the output amplitudes are `o_i = Σ_k M[i,k] x_k`,
/// and `o0·o3 − o1·o2 = xᵀ Q x`.
fn concurrence_form(m: &CMatrix) -> (CScalar, CScalar, CScalar) {
    let q = |k: usize, l: usize| {
        (m[(0, k)] * m[(3, l)] + m[(0, l)] * m[(3, k)] - m[(1, k)] * m[(2, l)] - m[(1, l)] * m[(2, k)]) * 0.5
    };
    (q(0, 0), q(0, 1), q(1, 1))
}

/// Draws members of `Prod(U)` by fixing a Haar-random factor on one side and
/// solving the output-concurrence quadratic for the other. Both orientations
/// are used so that neither factor is privileged.
pub fn prod_members<R: Rng + ?Sized>(u: &CMatrix, count: usize, rng: &mut R) -> Result<Vec<ProdMember>> {
    u.ensure_unitary(tol::UNITARY)?;
    if u.rows() != 4 {
        return Err(Error::DimensionMismatch("two-qubit unitary must be 4x4".into()));
    }
    let mut out = Vec::with_capacity(count);
    let mut draws = 0;
    while out.len() < count && draws < 4 * count.max(1) {
        let fix_a = draws % 2 == 0;
        draws += 1;
        let fixed = haar_state(2, rng);
        // column k of m is the image of (fixed ⊗ e_k) or (e_k ⊗ fixed)
        let m = CMatrix::from_fn(4, 2, |i, k| {
            (0..2)
                .map(|j| {
                    let col = if fix_a { 2 * j + k } else { 2 * k + j };
                    u[(i, col)] * fixed[j]
                })
                .sum()
        });
        let (q00, q01, q11) = concurrence_form(&m);
        let scale = q00.norm().max(q01.norm()).max(q11.norm());
        let frees: Vec<CVector> = if scale < 1e-12 {
            vec![haar_state(2, rng)]
        } else {
            quadratic_null_directions(q00, q01, q11)
                .into_iter()
                .filter_map(|[x, y]| CVector::from_vec(vec![x, y]).normalized())
                .collect()
        };
        for free in frees {
            let member = if fix_a {
                ProdMember { a: fixed.clone(), b: free }
            } else {
                ProdMember { a: free, b: fixed.clone() }
            };
            if concurrence(&u.mul_vec(&member.state())) < 1e-8 && out.len() < count {
                out.push(member);
            }
        }
    }
    Ok(out)
}

/// Dimension of the span of `Prod(U)`, estimated from `samples` members.
pub fn d_prod_estimate(u: &CMatrix, samples: usize, seed: u64) -> Result<usize> {
    if samples < 50 {
        return Err(Error::InvalidArgument(format!("need at least 50 samples, got {samples}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let members = prod_members(u, samples, &mut rng)?;
    if members.len() < 4 {
        return Err(Error::InsufficientSamples);
    }
    let states: Vec<CVector> = members.iter().map(ProdMember::state).collect();
    numerical_rank(&states, 1e-7)
}

/// Point in the accessible-spectrum diagram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RegionSample {
    pub zeta0sq: f64,
    /// Barycentric coordinates `ξ_j = |ζ_j|² / (1 − |ζ_0|²)`.
    pub xi: [f64; 3],
}

pub fn region_sample(angles: &CanonicalAngles) -> Result<RegionSample> {
    let z = zeta(angles).map(|x| x.norm_sqr());
    let rest = 1.0 - z[0];
    if rest < tol::ZERO {
        return Err(Error::ProductUnitary);
    }
    Ok(RegionSample {
        zeta0sq: z[0],
        xi: [z[1] / rest, z[2] / rest, z[3] / rest],
    })
}
