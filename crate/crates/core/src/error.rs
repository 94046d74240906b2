use thiserror::Error;

use crate::poly::Poly;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 unsupported")]
    CharacteristicTwo,
    #[error("extension degree must be at least 1, got {0}")]
    BadExtensionDegree(i64),
    #[error("field order {q} exceeds the supported cap of {cap} (set INVFORGE_MAX_Q to override)")]
    FieldTooLarge { q: u64, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero is neither a quadratic residue nor a nonresidue")]
    ZeroResidueClass,
    #[error("operands live over different fields: F_{left} and F_{right}")]
    FieldMismatch { left: u32, right: u32 },
    #[error("the zero polynomial has no lead term")]
    ZeroPolynomial,
    #[error("division is not exact; remainder {remainder}")]
    NotExact { remainder: Box<Poly> },
    #[error("singular matrix (determinant 0)")]
    SingularMatrix,
    #[error("full group enumeration is limited to q <= {max}, got q = {q}")]
    EnumerationBound { q: u32, max: u32 },
    #[error("degree bound {bound} is below the largest generator degree {max}")]
    DegreeBoundTooSmall { bound: u32, max: u32 },
    #[error("generator set is invalid: {0}")]
    InvalidGenSet(String),
    #[error("oracle budget exceeded: degree {degree} over q = {q} needs ~{cost:.2e} field operations (limit {limit:.2e})")]
    BudgetExceeded { q: u32, degree: u32, cost: f64, limit: f64 },
    #[error("polynomial is not invariant: {0}")]
    NotInvariant(String),
    #[error("{identity} does not hold; residual {residual}")]
    NonzeroResidual { identity: String, residual: Box<Poly> },
    #[error("identity failed: {0}")]
    IdentityFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}
