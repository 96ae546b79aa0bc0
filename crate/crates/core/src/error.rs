use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("lattice length {0} is outside the supported range 1..={max}", max = crate::lattice::MAX_LENGTH)]
    UnsupportedLength(usize),
    #[error("vertex ({x},{y}) is not in TSN({n})")]
    VertexOutOfRange { x: usize, y: usize, n: usize },
    #[error("vertex index {index} is not in 1..={count}")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("vertex {0} is a source and has no incoming edges")]
    SourceHasNoParents(usize),
    #[error("a placement in TSN({n}) needs {n} labels, got {got}")]
    PlacementSize { n: usize, got: usize },
    #[error("label {0} appears more than once")]
    DuplicateLabel(usize),
    #[error("placement {0} is not valid")]
    InvalidPlacement(String),
    #[error("placements of different lattices were mixed (n = {0} and n = {1})")]
    MixedLengths(usize, usize),
    #[error("no supported field of order {0}")]
    UnsupportedField(u32),
    #[error("point has {got} coordinates, expected {expected}")]
    PointLength { expected: usize, got: usize },
    #[error("element {element} is not in F_{q}")]
    ElementOutOfRange { element: u32, q: u32 },
    #[error("{what} needs {required} steps, over the budget of {limit}")]
    Budget {
        what: &'static str,
        required: u128,
        limit: u128,
    },
    #[error("polynomial is not multilinear")]
    NotMultilinear,
    #[error("parse error: {0}")]
    Parse(String),
}
