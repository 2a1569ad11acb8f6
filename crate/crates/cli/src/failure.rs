//! Exit-code policy: 0 success, 1 usage/parse error, 2 theorem violation,
//! 3 numerical non-convergence.

use std::fmt;

use treespec_core::bounds::BoundsError;
use treespec_core::closed_form::ClosedFormError;
use treespec_core::fem::FemError;
use treespec_core::graph::GraphError;
use treespec_core::method::MethodError;
use treespec_core::secular::SecularError;

#[derive(Debug)]
pub enum CliFailure {
    Usage(String),
    Violation(String),
    Numerical(String),
}

impl CliFailure {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliFailure::Usage(_) => 1,
            CliFailure::Violation(_) => 2,
            CliFailure::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliFailure::Usage(msg) => write!(f, "error: {msg}"),
            CliFailure::Violation(msg) => write!(f, "theorem violation: {msg}"),
            CliFailure::Numerical(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

impl From<std::io::Error> for CliFailure {
    fn from(e: std::io::Error) -> Self {
        CliFailure::Usage(e.to_string())
    }
}

impl From<GraphError> for CliFailure {
    fn from(e: GraphError) -> Self {
        CliFailure::Usage(e.to_string())
    }
}

impl From<ClosedFormError> for CliFailure {
    fn from(e: ClosedFormError) -> Self {
        CliFailure::Usage(e.to_string())
    }
}

impl From<SecularError> for CliFailure {
    fn from(e: SecularError) -> Self {
        match e {
            SecularError::RootCountMismatch { .. } | SecularError::StructuralFailure { .. } => {
                CliFailure::Numerical(e.to_string())
            }
            SecularError::Graph(g) => g.into(),
            SecularError::InvalidInput(_) => CliFailure::Usage(e.to_string()),
        }
    }
}

impl From<FemError> for CliFailure {
    fn from(e: FemError) -> Self {
        match e {
            FemError::NonConvergence | FemError::MassNotPositiveDefinite => {
                CliFailure::Numerical(e.to_string())
            }
            FemError::Graph(g) => g.into(),
            FemError::CountExceedsDimension { .. } | FemError::InvalidMesh(_) => {
                CliFailure::Usage(e.to_string())
            }
        }
    }
}

impl From<BoundsError> for CliFailure {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::TheoremViolation { .. } => CliFailure::Violation(e.to_string()),
            BoundsError::Internal(_) => CliFailure::Numerical(e.to_string()),
            BoundsError::Graph(g) => g.into(),
            BoundsError::ClosedForm(c) => c.into(),
            BoundsError::Secular(s) => s.into(),
            BoundsError::EdgeCountTooSmall(_)
            | BoundsError::InsufficientSpectrum { .. }
            | BoundsError::IrrationalLength { .. } => CliFailure::Usage(e.to_string()),
        }
    }
}

impl From<MethodError> for CliFailure {
    fn from(e: MethodError) -> Self {
        match e {
            MethodError::NotApplicable { .. } | MethodError::UnknownMethod(_) => {
                CliFailure::Usage(e.to_string())
            }
            MethodError::Graph(g) => g.into(),
            MethodError::ClosedForm(c) => c.into(),
            MethodError::Secular(s) => s.into(),
            MethodError::Fem(f) => f.into(),
        }
    }
}
