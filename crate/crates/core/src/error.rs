use thiserror::Error;

use crate::label::Label;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge {edge:?} has {found} vertices, expected {expected}")]
    EdgeWrongArity {
        edge: Vec<String>,
        expected: usize,
        found: usize,
    },
    #[error("edge {0:?} repeats a vertex")]
    DegenerateEdge(Vec<String>),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("duplicate edge {0:?}")]
    DuplicateEdge(Vec<String>),
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("part {0} is empty")]
    EmptyPart(usize),
    #[error("size guard exceeded while building {what}: more than {limit}")]
    SizeGuard { what: String, limit: usize },
    #[error("invalid group action: {0}")]
    InvalidAction(String),
    #[error("orbit members {0} and {1} share a coface")]
    OrbitCofaceClash(Label, Label),
    #[error("cell {0} is not free")]
    NotFree(Label),
    #[error("cell {cell} is free but its facet has dimension {facet_dim}, expected {expected}")]
    WrongCodimension {
        cell: Label,
        facet_dim: usize,
        expected: usize,
    },
    #[error("orbit of {0} is not independently free")]
    OrbitNotIndependentlyFree(Label),
    #[error("chain {0:?} is not matched")]
    NotInSigma(Vec<usize>),
    #[error("matching invalid: {reason} (at {chain:?})")]
    MatchingInvalid { reason: String, chain: Vec<usize> },
    #[error("collapse stuck with {remaining} unmatched cells left: {reason}")]
    Stuck { remaining: usize, reason: String },
    #[error("certificate mismatch: {0}")]
    CertificateMismatch(String),
    #[error("complexes are not isomorphic: {0}")]
    NotIsomorphic(String),
    #[error("stage {stage}: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn guard(what: impl Into<String>, limit: usize) -> Self {
        Error::SizeGuard {
            what: what.into(),
            limit,
        }
    }

    pub fn in_stage(self, stage: impl Into<String>) -> Self {
        Error::Stage {
            stage: stage.into(),
            source: Box::new(self),
        }
    }

    /// Innermost error, skipping stage wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }

    pub fn is_size_guard(&self) -> bool {
        matches!(self.root(), Error::SizeGuard { .. })
    }

    pub fn is_input_error(&self) -> bool {
        matches!(
            self.root(),
            Error::EdgeWrongArity { .. }
                | Error::DegenerateEdge(_)
                | Error::UnknownVertex(_)
                | Error::DuplicateEdge(_)
                | Error::DuplicateVertex(_)
                | Error::InvalidParams(_)
                | Error::EmptyPart(_)
                | Error::Io(_)
                | Error::Json(_)
        )
    }
}

/// Size limits shared by every constructor that enumerates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_cells: usize,
    pub max_assignments: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_cells: 1_000_000,
            max_assignments: 1_000_000,
        }
    }
}

impl Limits {
    pub fn with_max_cells(max_cells: usize) -> Self {
        Limits {
            max_cells,
            ..Limits::default()
        }
    }

    pub(crate) fn check_cells(&self, what: &str, n: usize) -> Result<()> {
        if n > self.max_cells {
            Err(Error::guard(what, self.max_cells))
        } else {
            Ok(())
        }
    }
}
