use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{field}` = {value} out of range (expected {expected})")]
    ParameterOutOfRange {
        field: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("index pair ({i}, {j}) invalid: need 1 <= i < j <= {n}")]
    InvalidPair { i: usize, j: usize, n: usize },
    #[error("initial infected set is empty")]
    EmptyInit,
    #[error("graph has {n} vertices, the exact oracle supports at most {max}")]
    TooManyVertices { n: usize, max: usize },
    #[error("linear system is singular")]
    SingularSystem,
    #[error("graph is disconnected: no path from {from} to {to}")]
    Disconnected { from: usize, to: usize },
    #[error("only {distinct} distinct values in fit range, need at least {required}")]
    InsufficientRange { distinct: usize, required: usize },
    #[error("tree sampled to depth {depth}, need at least {required}")]
    TreeTooShallow { depth: usize, required: usize },
    #[error("ball depth {depth} exceeds comparison index {index}")]
    DepthExceedsIndex { depth: usize, index: usize },
    #[error("expected {expected:.3e} timeline events exceeds the limit {limit:.3e}")]
    WindowTooLarge { expected: f64, limit: f64 },
    #[error("need at least {required} points, got {got}")]
    TooFewPoints { got: usize, required: usize },
}

impl Error {
    pub(crate) fn out_of_range(field: &'static str, value: f64, expected: &'static str) -> Self {
        Error::ParameterOutOfRange {
            field,
            value,
            expected,
        }
    }
}
