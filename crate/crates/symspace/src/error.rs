use crate::lattice::OrbitSample;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown space label `{0}` (expected H{{n}}R, H{{n}}C or SL{{n}}R with n >= 2)")]
    UnknownSpace(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("vector lies outside the closed Weyl chamber: root #{index} evaluates to {value:.3e}")]
    OutsideChamber { index: usize, value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("model error: {0}")]
    Model(String),

    #[error(
        "distance {distance} violates the envelope hypothesis d >= 2; \
         use the *_unchecked variant to evaluate anyway"
    )]
    Hypothesis { distance: f64 },

    #[error(
        "quadrature budget exhausted after {evals} evaluations \
         (partial estimate {estimate:.6e} +/- {error:.3e})"
    )]
    Quadrature {
        estimate: f64,
        error: f64,
        evals: usize,
    },

    #[error("orbit enumeration truncated at the cap of {cap} elements ({} partial samples kept)", partial.len())]
    OrbitTruncated {
        cap: usize,
        partial: Vec<OrbitSample>,
    },

    #[error("estimation error: {0}")]
    Estimation(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
