use std::fmt;

use thiserror::Error;

/// A rejected input line. Every parse failure is pinned to a line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub file: Option<String>,
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub token: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>, token: impl Into<String>) -> Self {
        ParseError {
            file: None,
            line,
            column,
            message: message.into(),
            token: token.into(),
        }
    }

    pub fn with_file(mut self, file: impl Into<String>) -> Self {
        self.file = Some(file.into());
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let file = self.file.as_deref().unwrap_or("<input>");
        write!(f, "{}:{}:{}: {}", file, self.line, self.column, self.message)?;
        if !self.token.is_empty() {
            write!(f, " (at `{}`)", self.token)?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge or arrow `{0}`")]
    UnknownEdge(String),
    #[error("graph is not connected (`{0}` is unreachable)")]
    Disconnected(String),
    #[error("vertex `{vertex}` has no {kind} decoration while others do")]
    MissingDecoration { vertex: String, kind: &'static str },
    #[error("graph is empty")]
    EmptyGraph,
    #[error("invalid value for `{id}`: {reason}")]
    InvalidValue { id: String, reason: String },

    #[error("graph has no node (no vertex with negative Euler characteristic)")]
    NoNode,
    #[error("gcd of consecutive multiplicities is not constant along bamboo `{bamboo}`")]
    NonConstantGcd { bamboo: String },

    #[error("vertex `{0}` has no euler decoration")]
    MissingEuler(String),
    #[error("vertex `{0}` has no multiplicity")]
    MissingMultiplicity(String),
    #[error("intersection matrix is not negative definite")]
    NotNegativeDefinite,
    #[error("multiplicity of `{vertex}` is {value}, not an integer")]
    NonIntegralSolution { vertex: String, value: String },
    #[error("multiplicity of `{vertex}` is {value}, not positive")]
    NonPositiveSolution { vertex: String, value: String },
    #[error("multiplicity of `{vertex}` is decorated as {given} but solves to {solved}")]
    DecorationMismatch { vertex: String, given: u64, solved: String },

    #[error("screw weight of bamboo `{bamboo}` is {value}, not a positive integer")]
    NonIntegralScrew { bamboo: String, value: String },

    #[error("semistable graph is disconnected (`{0}` is unreachable)")]
    DisconnectedSemistable(String),
    #[error("loop bamboo `{bamboo}` sits at a node with {components} fiber components")]
    AmbiguousLoopAttachment { bamboo: String, components: u64 },
    #[error("fiber piece over node `{node}` is inconsistent: {reason}")]
    InconsistentPiece { node: String, reason: String },
    #[error("orbit `{orbit}` is malformed: {reason}")]
    InvalidOrbit { orbit: String, reason: String },

    #[error("chain `{chain}` has nonzero boundary at piece `{piece}`")]
    NotARelativeCycle { chain: String, piece: String },
    #[error("basis chains are linearly dependent")]
    DependentBasis,
    #[error("matrix is not square or not symmetric")]
    NotSymmetric,

    #[error("vertex `{0}` has positive genus; the characteristic polynomial formula needs a rational graph")]
    NonRationalVertex(String),
    #[error("graph has no arrowheads")]
    NoArrowheads,
    #[error("factored product {0} is not a polynomial")]
    NonPolynomial(String),
    #[error("orbit product {0} for the graph automorphism is not a polynomial")]
    NonPolynomialDelta2(String),

    #[error("value `{0}` does not fit in a machine integer")]
    Overflow(String),
}

impl Error {
    /// True for failures of the structural identities the pipeline relies on
    /// (as opposed to malformed or unsupported input).
    pub fn is_invariant_violation(&self) -> bool {
        matches!(
            self,
            Error::NonConstantGcd { .. }
                | Error::NonIntegralSolution { .. }
                | Error::NonPositiveSolution { .. }
                | Error::NonIntegralScrew { .. }
                | Error::InconsistentPiece { .. }
                | Error::NonPolynomial(_)
                | Error::NonPolynomialDelta2(_)
        )
    }

    /// The id this error is about, when it names one.
    pub fn subject(&self) -> Option<&str> {
        match self {
            Error::DuplicateId(s)
            | Error::UnknownVertex(s)
            | Error::UnknownEdge(s)
            | Error::Disconnected(s)
            | Error::MissingEuler(s)
            | Error::MissingMultiplicity(s)
            | Error::DisconnectedSemistable(s)
            | Error::NonRationalVertex(s) => Some(s),
            Error::MissingDecoration { vertex, .. } => Some(vertex),
            Error::InvalidValue { id, .. } => Some(id),
            Error::InvalidOrbit { orbit, .. } => Some(orbit),
            Error::NotARelativeCycle { chain, .. } => Some(chain),
            _ => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
