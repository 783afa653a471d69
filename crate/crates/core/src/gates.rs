//! Named two-qubit gates and their canonical decompositions.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::canon2q::{build_canonical, pauli, CanonicalAngles, LocalUnitaryFrame};
use crate::matkernel::{c64, kron, CMatrix, CScalar};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "UPPERCASE")]
pub enum Gate {
    Cnot,
    Cz,
    /// `diag(1, 1, 1, e^{iφ})`.
    #[serde(rename = "CPHASE")]
    CPhase { phi: f64 },
    Swap,
    #[serde(rename = "I")]
    Identity,
}

/// `gate = phase · F(U(angles))`, where `F` applies the frame and then, if
/// `conjugate` is set, complex conjugation.
#[derive(Debug, Clone)]
pub struct GateDecomposition {
    pub angles: CanonicalAngles,
    pub frame: LocalUnitaryFrame,
    pub phase: CScalar,
    pub conjugate: bool,
}

impl GateDecomposition {
    pub fn rebuild(&self) -> CMatrix {
        let m = self.frame.apply(&build_canonical(&self.angles));
        let m = if self.conjugate { m.conj() } else { m };
        m.scale(self.phase)
    }
}

fn hadamard() -> CMatrix {
    CMatrix::from_real_rows(&[[1.0, 1.0], [1.0, -1.0]]).scale_real(FRAC_1_SQRT_2)
}

fn cnot_frame() -> LocalUnitaryFrame {
    let h = FRAC_1_SQRT_2;
    let (o, i) = (c64(h, 0.0), c64(0.0, h));
    LocalUnitaryFrame {
        v_a: CMatrix::from_rows(&[[o, o], [i, -i]]),
        w_b: CMatrix::from_rows(&[[o, i], [-i, -o]]),
        v_tilde_a: hadamard(),
        w_tilde_b: pauli(3),
    }
}

/// Frame taking `U(φ/4, 0, 0)` to `diag(1, 1, 1, e^{−iφ})`.
fn cphase_conjugate_frame(phi: f64) -> LocalUnitaryFrame {
    let h = FRAC_1_SQRT_2;
    let e = |t: f64| CScalar::from_polar(h, t);
    LocalUnitaryFrame {
        v_a: CMatrix::from_rows(&[[e(0.0), e(0.0)], [-e(-phi / 2.0), e(-phi / 2.0)]]),
        w_b: CMatrix::from_rows(&[[e(phi / 4.0), e(phi / 4.0)], [e(-phi / 4.0), -e(-phi / 4.0)]]),
        v_tilde_a: CMatrix::from_real_rows(&[[h, -h], [h, h]]),
        w_tilde_b: hadamard(),
    }
}

impl Gate {
    pub fn matrix(&self) -> CMatrix {
        let one = c64(1.0, 0.0);
        let zero = c64(0.0, 0.0);
        match *self {
            Gate::Cnot => CMatrix::from_real_rows(&[
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
                [0.0, 0.0, 1.0, 0.0],
            ]),
            Gate::Cz => CMatrix::diag_real(&[1.0, 1.0, 1.0, -1.0]),
            Gate::CPhase { phi } => CMatrix::from_fn(4, 4, |i, j| match (i, j) {
                (3, 3) => CScalar::from_polar(1.0, phi),
                (i, j) if i == j => one,
                _ => zero,
            }),
            Gate::Swap => CMatrix::from_real_rows(&[
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
            ]),
            Gate::Identity => CMatrix::identity(4),
        }
    }

    pub fn decomposition(&self) -> GateDecomposition {
        match *self {
            Gate::Cnot => GateDecomposition {
                angles: CanonicalAngles::new(FRAC_PI_4, 0.0, 0.0),
                frame: cnot_frame(),
                phase: c64(1.0, 0.0),
                conjugate: false,
            },
            Gate::Cz => {
                let f = cnot_frame();
                let h = hadamard();
                GateDecomposition {
                    angles: CanonicalAngles::new(FRAC_PI_4, 0.0, 0.0),
                    frame: LocalUnitaryFrame {
                        w_b: h.matmul(&f.w_b),
                        w_tilde_b: f.w_tilde_b.matmul(&h),
                        ..f
                    },
                    phase: c64(1.0, 0.0),
                    conjugate: false,
                }
            }
            Gate::CPhase { phi } => GateDecomposition {
                angles: CanonicalAngles::new(phi / 4.0, 0.0, 0.0),
                frame: cphase_conjugate_frame(phi),
                phase: c64(1.0, 0.0),
                conjugate: true,
            },
            Gate::Swap => GateDecomposition {
                angles: CanonicalAngles::new(FRAC_PI_4, FRAC_PI_4, FRAC_PI_4),
                frame: LocalUnitaryFrame::identity(),
                phase: c64(FRAC_1_SQRT_2, FRAC_1_SQRT_2),
                conjugate: false,
            },
            Gate::Identity => GateDecomposition {
                angles: CanonicalAngles::new(0.0, 0.0, 0.0),
                frame: LocalUnitaryFrame::identity(),
                phase: c64(1.0, 0.0),
                conjugate: false,
            },
        }
    }

    /// `I ⊗ H`, the local map relating CNOT and CZ.
    pub fn cz_from_cnot_map() -> CMatrix {
        kron(&CMatrix::identity(2), &hadamard())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Cnot => write!(f, "CNOT"),
            Gate::Cz => write!(f, "CZ"),
            Gate::CPhase { phi } => write!(f, "CPHASE({phi})"),
            Gate::Swap => write!(f, "SWAP"),
            Gate::Identity => write!(f, "I"),
        }
    }
}

impl FromStr for Gate {
    type Err = Error;

    /// Parses a gate name; `CPHASE` defaults to `φ = π/2`.
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "CNOT" | "CX" => Ok(Gate::Cnot),
            "CZ" => Ok(Gate::Cz),
            "CPHASE" => Ok(Gate::CPhase {
                phi: std::f64::consts::FRAC_PI_2,
            }),
            "SWAP" => Ok(Gate::Swap),
            "I" | "ID" | "IDENTITY" => Ok(Gate::Identity),
            other => Err(Error::InvalidArgument(format!("unknown gate '{other}'"))),
        }
    }
}
