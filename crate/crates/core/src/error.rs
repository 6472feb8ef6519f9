use crate::Point;
use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QhError {
    /// A point lies outside the set an operation requires it to be in.
    #[error("point ({re}, {im}) is not in {context}", re = .point.re, im = .point.im)]
    Membership { point: Point, context: String },

    /// Bulk evaluation failed at a specific element.
    #[error("element {index}: {source}")]
    AtIndex {
        index: usize,
        #[source]
        source: Box<QhError>,
    },

    /// Invalid mesh, sampling or scenario parameters.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// Two points that should be joined by a path are not.
    #[error("connectivity error: {0}")]
    Connectivity(String),

    /// The discretization is too coarse for the requested object.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// A numeric parameter is outside the domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two maps cannot be composed.
    #[error("composition error: {0}")]
    Composition(String),

    /// Input data violates a structural requirement (e.g. monotonicity).
    #[error("validation error: {0}")]
    Validation(String),
}

impl QhError {
    pub(crate) fn membership(point: Point, context: impl Into<String>) -> Self {
        QhError::Membership {
            point,
            context: context.into(),
        }
    }

    pub(crate) fn at_index(index: usize, source: QhError) -> Self {
        QhError::AtIndex {
            index,
            source: Box::new(source),
        }
    }
}

pub type Result<T> = std::result::Result<T, QhError>;
