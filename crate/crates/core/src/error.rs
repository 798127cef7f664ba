use thiserror::Error;

use crate::quiver::DimVector;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vector has {found} entries but the quiver has {expected} vertices")]
    VertexMismatch { expected: usize, found: usize },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("rational function has a pole at t = {0}")]
    Pole(String),
    #[error("slope of the zero dimension vector is undefined")]
    ZeroDimension,
    #[error("central charge at vertex {0} has non-positive imaginary part")]
    NonPositiveImaginary(usize),
    #[error("cannot compare the distinct symbolic slopes {0} and {1}")]
    SymbolicComparison(String, String),
    #[error("stability is not generic at slope {slope} on box ({boxed}): <({d}), ({e})> = {pairing}")]
    NotGeneric {
        slope: String,
        boxed: DimVector,
        d: DimVector,
        e: DimVector,
        pairing: i64,
    },
    #[error("support does not commute: <({d}), ({e})> = {pairing}")]
    NonCommutingSupport { d: DimVector, e: DimVector, pairing: i64 },
    #[error("plethystic exponential needs a vanishing constant term")]
    NonzeroConstantTerm,
    #[error("plethystic logarithm needs constant term 1")]
    NonUnitConstantTerm,
    #[error("series boxes differ: {0} vs {1}")]
    BoxMismatch(DimVector, DimVector),
    #[error("series tags differ or are not allowed here: {0}")]
    TagMismatch(String),
    #[error("dimension vector {0} lies outside the box {1}")]
    OutsideBox(DimVector, DimVector),
    #[error("slopes must be strictly decreasing: {0} then {1}")]
    SlopeOrder(String, String),
    #[error("coefficient at {d} has slope {found}, expected {expected}")]
    SupportOutsideSlope {
        d: DimVector,
        found: String,
        expected: String,
    },
    #[error("framings must be ascending componentwise: {0} then {1}")]
    FramingOrder(DimVector, DimVector),
    #[error("{0} is not of slope {1}")]
    NotOfSlope(DimVector, String),
    #[error("unsupported field order q = {0} (expected 4, 9 or 25)")]
    UnsupportedField(u64),
    #[error("enumeration needs {required} representations, budget is {budget}")]
    BudgetExceeded { required: String, budget: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
