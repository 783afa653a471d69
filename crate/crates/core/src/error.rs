use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("Jacobi iteration did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("verification operator does not fix the target (residual {0:e})")]
    TargetNotFixed(f64),
    #[error("verification operator is not between 0 and I: {0}")]
    InvalidOperator(String),
    #[error("spectral gap is zero; the strategy cannot verify the target")]
    ZeroGap,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("state set is not a connected spanning set")]
    NotConnectedSpanning,
    #[error("spectrum is not accessible by any two-qubit unitary: {0}")]
    InfeasibleSpectrum(String),
    #[error("magic-basis constraint solution requires 0 < a1 + a2 < pi/2")]
    RangeUnsupported,
    #[error("seed coefficients produce a zero vector")]
    DegenerateSeed,
    #[error("unitary with angles ({0}, {1}, {2}) admits no entanglement-free identification set")]
    InSE(f64, f64, f64),
    #[error("case precondition violated: {0}")]
    CasePreconditionViolated(String),
    #[error("validation failed: {0}")]
    ValidationFailed(String),
    #[error("protocol synthesis failed: {0}")]
    SynthesisFailed(String),
    #[error("not enough product-preserving samples to estimate the span")]
    InsufficientSamples,
    #[error("channel is not completely positive and trace preserving: {0}")]
    NotCptp(String),
    #[error("unitary is a product of local unitaries; barycentric coordinates are undefined")]
    ProductUnitary,
}
