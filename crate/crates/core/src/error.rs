use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("classification ambiguous: {detail} (clusters: {clusters:?})")]
    ClassificationAmbiguous {
        detail: String,
        clusters: Vec<Complex64>,
    },

    #[error("unsupported normal form: {0}")]
    UnsupportedForm(String),

    #[error("gap search exhausted at m_max = {m_max}; largest gap seen {max_gap}")]
    SearchExhausted { m_max: u32, max_gap: i64 },

    #[error(
        "quadrature under-resolved: {nodes} nodes for {modes} modes (need at least {required})"
    )]
    Resolution {
        nodes: usize,
        modes: usize,
        required: usize,
    },

    #[error("dual evaluation failed after {iterations} Newton steps (residual {residual:.3e})")]
    DualEval { iterations: usize, residual: f64 },

    #[error("singular point: {0}")]
    SingularPoint(String),

    #[error("descent converged to the trivial loop (norm {norm:.3e})")]
    TrivialLimit { norm: f64 },

    #[error("no convergence after {iterations} iterations (gradient norm {grad_norm:.3e}, value {value:.12e})")]
    NonConvergence {
        iterations: usize,
        grad_norm: f64,
        value: f64,
    },

    #[error("orbit recovery failed: {0}")]
    Recovery(String),

    #[error("integration accuracy: {0}")]
    IntegrationAccuracy(String),

    #[error("form assembly failed: {0}")]
    Assembly(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of a numerical method to converge, as opposed to bad input.
    pub fn is_nonconvergence(&self) -> bool {
        matches!(
            self,
            Error::SearchExhausted { .. }
                | Error::DualEval { .. }
                | Error::TrivialLimit { .. }
                | Error::NonConvergence { .. }
                | Error::Recovery(_)
                | Error::IntegrationAccuracy(_)
        )
    }
}
