use thiserror::Error;

#[derive(Debug, Error)]
pub enum HypackError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("disk radius {rho} exceeds the saturation limit {max} of this packing")]
    Saturation { rho: f64, max: f64 },
    #[error("Voronoi cell of site {site} is unbounded within search radius {search_radius}")]
    UnboundedCell { site: String, search_radius: f64 },
    #[error("vertex deduplication is ambiguous: candidates {distance:e} apart")]
    DedupAmbiguity { distance: f64 },
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("invalid document: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, HypackError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(HypackError::Domain(msg.into()))
}
