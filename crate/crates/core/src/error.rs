use thiserror::Error;

use crate::lie::ValidationReport;
use crate::matrix::Matrix;
use crate::rational::Vector;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    // Lie algebras
    #[error("bracket entry ({i}, {j}) is not an ordered pair i < j < {dim}")]
    BadBracketIndex { i: usize, j: usize, dim: usize },
    #[error("bracket pair ({i}, {j}) given twice")]
    DuplicateBracket { i: usize, j: usize },
    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(ValidationReport),
    #[error("matrix does not preserve brackets on basis pair ({i}, {j})")]
    NotHomomorphism { i: usize, j: usize },
    #[error("basis vector {index} of the subspace is not central")]
    NotCentral { index: usize },

    // Chevalley-Eilenberg complex
    #[error("cochain degree {degree} exceeds base dimension {base_dim}")]
    DegreeOverflow { degree: usize, base_dim: usize },
    #[error("action is not flat on base pair ({i}, {j})")]
    NotFlat { i: usize, j: usize, defect: Matrix },
    #[error("cochain is not a cocycle")]
    NotCocycle,
    #[error("cohomology classes live in different modules or degrees")]
    ModuleMismatch,
    #[error("map does not intertwine the actions of base element {index}")]
    NotIntertwining { index: usize, defect: Matrix },
    #[error("map is not invertible")]
    NotInvertible,

    // couplings and obstruction
    #[error("representative {index} is not a derivation of the fiber")]
    NotDerivation { index: usize },
    #[error("representatives ({i}, {j}) do not bracket like the base modulo inner derivations")]
    NotCouplingHomomorphism {
        i: usize,
        j: usize,
        defect: Matrix,
        outer_defect: Vector,
    },
    #[error("shift {index} is not an inner derivation")]
    NotInner { index: usize },
    #[error("curvature value on ({i}, {j}) is not inner")]
    CurvatureNotInner { i: usize, j: usize },
    #[error("no preimage under ad for the curvature value on ({i}, {j})")]
    NoPreimage { i: usize, j: usize },
    #[error("d(Omega) is not central on tuple {tuple:?}")]
    CocycleNotCentral { tuple: Vec<usize> },
    #[error("obstruction cocycle is not closed")]
    NotClosed,
    #[error("internal check failed: {0}")]
    InternalCheckFailure(String),
    #[error("obstruction class changed in independence trial {trial}")]
    IndependenceViolation {
        trial: usize,
        nabla_shift: Vec<Vector>,
        omega_shift: Vec<Vector>,
        default_class: Vector,
        trial_class: Vector,
    },
    #[error("extension fails the Jacobi identity on ({i}, {j}, {k})")]
    JacobiFailure { i: usize, j: usize, k: usize },

    // coupling space
    #[error("alpha and beta are both zero")]
    ScalarsBothZero,
    #[error("elements have different base algebras")]
    BaseMismatch,
    #[error("elements have different reference modules")]
    ReferenceMismatch,
    #[error("induced derivation {index} does not preserve the identified center")]
    SubspaceNotPreserved { index: usize },
    #[error("center of the quotient has dimension {center_dim}, expected {expected}")]
    CenterGrew { center_dim: usize, expected: usize },
    #[error("linearity fails: class3 = {class3:?}, expected {expected:?}")]
    LinearityViolation {
        class1: Vector,
        class2: Vector,
        class3: Vector,
        expected: Vector,
    },
}

impl Error {
    /// True when the error signals a broken mathematical invariant inside the
    /// library rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::CurvatureNotInner { .. }
                | Error::NoPreimage { .. }
                | Error::CocycleNotCentral { .. }
                | Error::NotClosed
                | Error::InternalCheckFailure(_)
                | Error::IndependenceViolation { .. }
                | Error::JacobiFailure { .. }
                | Error::SubspaceNotPreserved { .. }
                | Error::LinearityViolation { .. }
        )
    }
}
