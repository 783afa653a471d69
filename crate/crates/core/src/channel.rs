//! Quantum channels stored as Choi matrices.
//!
//! `J = Σ_{ij} |i⟩⟨j| ⊗ Λ(|i⟩⟨j|)`, so the `(i, j)` block of `J` is the image
//! of the matrix unit `|i⟩⟨j|`.

use serde::{Deserialize, Serialize};

use crate::matkernel::{hermitian_eig, CMatrix};
use crate::{Error, Result};

/// Tolerance of the CPTP check.
pub const CPTP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "ChannelRepr", into = "ChannelRepr")]
pub struct Channel {
    dim: usize,
    choi: CMatrix,
}

#[derive(Serialize, Deserialize)]
struct ChannelRepr {
    choi: CMatrix,
}

impl TryFrom<ChannelRepr> for Channel {
    type Error = Error;

    fn try_from(r: ChannelRepr) -> Result<Self> {
        Channel::from_choi(r.choi)
    }
}

impl From<Channel> for ChannelRepr {
    fn from(c: Channel) -> Self {
        ChannelRepr { choi: c.choi }
    }
}

impl Channel {
    /// Wraps a Choi matrix after checking complete positivity and trace preservation.
    pub fn from_choi(choi: CMatrix) -> Result<Self> {
        let n = choi.rows();
        let dim = (n as f64).sqrt().round() as usize;
        if !choi.is_square() || dim * dim != n {
            return Err(Error::DimensionMismatch(format!("Choi matrix must be d²×d², got {n}x{}", choi.cols())));
        }
        let ch = Channel { dim, choi };
        ch.check_cptp()?;
        Ok(ch)
    }

    fn from_blocks(dim: usize, block: impl Fn(usize, usize) -> CMatrix) -> Self {
        let mut choi = CMatrix::zeros(dim * dim, dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let b = block(i, j);
                for r in 0..dim {
                    for c in 0..dim {
                        choi[(i * dim + r, j * dim + c)] = b[(r, c)];
                    }
                }
            }
        }
        Channel { dim, choi }
    }

    /// `ρ ↦ U ρ U†`.
    pub fn unitary(u: &CMatrix) -> Result<Self> {
        u.ensure_unitary(crate::tol::UNITARY)?;
        let d = u.rows();
        Ok(Channel::from_blocks(d, |i, j| CMatrix::outer(&u.column(i), &u.column(j))))
    }

    /// `ρ ↦ (1 − p) U ρ U† + p·tr(ρ)·I/d`.
    pub fn depolarizing(u: &CMatrix, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("depolarizing strength {p} outside [0, 1]")));
        }
        u.ensure_unitary(crate::tol::UNITARY)?;
        let d = u.rows();
        let mixed = CMatrix::identity(d).scale_real(p / d as f64);
        Ok(Channel::from_blocks(d, |i, j| {
            let coherent = CMatrix::outer(&u.column(i), &u.column(j)).scale_real(1.0 - p);
            if i == j {
                &coherent + &mixed
            } else {
                coherent
            }
        }))
    }

    /// `ρ ↦ Σ K ρ K†`; fails unless `Σ K†K = I`.
    pub fn from_kraus(kraus: &[CMatrix]) -> Result<Self> {
        let Some(first) = kraus.first() else {
            return Err(Error::InvalidArgument("no Kraus operators".into()));
        };
        let d = first.cols();
        if kraus.iter().any(|k| k.rows() != d || k.cols() != d) {
            return Err(Error::DimensionMismatch("Kraus operators must be square and equal-sized".into()));
        }
        let ch = Channel::from_blocks(d, |i, j| {
            kraus.iter().fold(CMatrix::zeros(d, d), |acc, k| {
                &acc + &CMatrix::outer(&k.column(i), &k.column(j))
            })
        });
        ch.check_cptp()?;
        Ok(ch)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn choi(&self) -> &CMatrix {
        &self.choi
    }

    fn block(&self, i: usize, j: usize) -> CMatrix {
        let d = self.dim;
        CMatrix::from_fn(d, d, |r, c| self.choi[(i * d + r, j * d + c)])
    }

    pub fn check_cptp(&self) -> Result<()> {
        let dev = self.choi.hermitian_deviation();
        if dev > CPTP_TOL {
            return Err(Error::NotCptp(format!("Choi matrix not Hermitian (deviation {dev:e})")));
        }
        let herm = CMatrix::from_fn(self.choi.rows(), self.choi.cols(), |i, j| {
            (self.choi[(i, j)] + self.choi[(j, i)].conj()) * 0.5
        });
        let min = *hermitian_eig(&herm)?.values.last().expect("nonempty spectrum");
        if min < -CPTP_TOL {
            return Err(Error::NotCptp(format!("negative Choi eigenvalue {min:e}")));
        }
        let d = self.dim;
        let traces = CMatrix::from_fn(d, d, |i, j| self.block(i, j).trace());
        let tp = traces.max_abs_diff(&CMatrix::identity(d));
        if tp > CPTP_TOL {
            return Err(Error::NotCptp(format!("not trace preserving (deviation {tp:e})")));
        }
        Ok(())
    }

    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let d = self.dim;
        assert!(rho.rows() == d && rho.cols() == d, "density matrix has wrong dimension");
        let mut out = CMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let w = rho[(i, j)];
                if w.norm() == 0.0 {
                    continue;
                }
                out = &out + &self.block(i, j).scale(w);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::Gate;
    use crate::matkernel::{c64, CVector};

    #[test]
    fn unitary_channel_conjugates() {
        let u = Gate::Cnot.matrix();
        let ch = Channel::unitary(&u).unwrap();
        let psi = CVector::from_real(&[0.6, 0.0, 0.8, 0.0]);
        let out = ch.apply(&CMatrix::projector(&psi));
        assert!(out.max_abs_diff(&CMatrix::projector(&u.mul_vec(&psi))) < 1e-15);
        ch.check_cptp().unwrap();
    }

    #[test]
    fn depolarizing_mixes() {
        let ch = Channel::depolarizing(&CMatrix::identity(4), 1.0).unwrap();
        let out = ch.apply(&CMatrix::projector(&CVector::basis(4, 2)));
        assert!(out.max_abs_diff(&CMatrix::identity(4).scale_real(0.25)) < 1e-15);
        assert!(Channel::depolarizing(&CMatrix::identity(4), 1.5).is_err());
    }

    #[test]
    fn kraus_and_choi_checks() {
        let p = 0.3f64;
        let k0 = CMatrix::identity(2).scale_real((1.0 - p).sqrt());
        let k1 = CMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]).scale_real(p.sqrt());
        let ch = Channel::from_kraus(&[k0.clone(), k1]).unwrap();
        let out = ch.apply(&CMatrix::projector(&CVector::basis(2, 0)));
        assert!((out[(0, 0)] - c64(0.7, 0.0)).norm() < 1e-15);
        assert!(matches!(Channel::from_kraus(&[k0]), Err(Error::NotCptp(_))));

        let bad = CMatrix::identity(16).scale_real(-1.0);
        assert!(matches!(Channel::from_choi(bad), Err(Error::NotCptp(_))));
        let js = serde_json::to_string(&ch).unwrap();
        let back: Channel = serde_json::from_str(&js).unwrap();
        assert!(back.choi().max_abs_diff(ch.choi()) == 0.0);
    }
}
