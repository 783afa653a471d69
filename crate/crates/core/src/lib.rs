//! Verification protocols with a minimal number of experimental settings.
//!
//! [`stateverify`] verifies bipartite pure states with at most two local
//! projective settings. [`canon2q`], [`prodgeom`] and [`efmis`] describe the
//! structure of two-qubit unitaries and build entanglement-free identification
//! sets; [`gateprotocol`] turns those into gate-verification protocols, which
//! [`simulator`] runs against noisy devices.
//!
//! All of it sits on a small dense complex linear-algebra kernel
//! ([`matkernel`]) sized for dimensions up to 16.

pub mod canon2q;
pub mod channel;
pub mod efmis;
mod error;
pub mod gateprotocol;
pub mod gates;
pub mod idsets;
pub mod matkernel;
pub mod prodgeom;
pub mod random;
pub mod simulator;
pub mod stateverify;
pub mod tol;

pub use error::{Error, Result};
pub use matkernel::{c64, CMatrix, CScalar, CVector};
