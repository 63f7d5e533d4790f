use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed textual input (polynomials, alpha specs, element renderings).
    #[error("{what}: {msg}")]
    Parse { what: String, msg: String },

    /// A manifold or trace document failed validation. All problems found are
    /// collected before reporting.
    #[error("invalid document: {}", .0.join("; "))]
    Schema(Vec<String>),

    /// Vectors or matrices whose lengths disagree with the model's ranks.
    #[error("dimension mismatch: {}", .0.join("; "))]
    Dimension(Vec<String>),

    #[error("unknown builtin manifold `{0}`")]
    UnknownBuiltin(String),

    #[error("invalid parameters for builtin `{name}`: {msg}")]
    InvalidParams { name: String, msg: String },

    #[error("component index {index} out of range for a link with {len} components")]
    ComponentIndex { index: usize, len: usize },

    #[error("mixed crossing needs two distinct components, got {0} twice")]
    SameComponent(usize),

    /// A slide must sweep a torus belonging to the component's torus subgroup.
    #[error("slide class {class:?} is not in the torus subgroup of component {component}")]
    SlideNotSwept { component: usize, class: Vec<i64> },

    #[error("unknown class id `{0}`")]
    UnknownClass(String),

    #[error("module mismatch: {0}")]
    ModuleMismatch(String),
}

impl Error {
    /// Short machine-readable category used in `error:<category>:` lines.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Schema(_) => "schema",
            Error::Dimension(_) => "dimension",
            Error::UnknownBuiltin(_) | Error::InvalidParams { .. } => "builtin",
            Error::ComponentIndex { .. } | Error::SameComponent(_) => "component",
            Error::SlideNotSwept { .. } => "slide",
            Error::UnknownClass(_) => "class",
            Error::ModuleMismatch(_) => "module",
        }
    }

    pub(crate) fn dimension(name: impl std::fmt::Display, expected: usize, got: usize) -> Self {
        Error::Dimension(vec![format!(
            "{name}: expected length {expected}, got {got}"
        )])
    }

    pub(crate) fn parse(what: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Parse {
            what: what.into(),
            msg: msg.into(),
        }
    }
}
