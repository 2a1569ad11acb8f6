//! Eigenvalue sequences with multiplicities folded in by repetition.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;

use crate::exact::{rational_to_f64, ExactLength};

/// How a spectrum was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodTag {
    ClosedForm(Formula),
    Secular,
    VariationalOracle,
}

/// Which closed-form formula produced a spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Formula {
    PathNeumann,
    EquilateralStar,
    Dirichlet,
    NeumannDecoupled,
    Loop,
}

impl fmt::Display for MethodTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MethodTag::ClosedForm(formula) => write!(f, "closed-form/{formula}"),
            MethodTag::Secular => write!(f, "secular"),
            MethodTag::VariationalOracle => write!(f, "variational-oracle"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Formula::PathNeumann => "path",
            Formula::EquilateralStar => "equilateral-star",
            Formula::Dirichlet => "dirichlet",
            Formula::NeumannDecoupled => "neumann-decoupled",
            Formula::Loop => "loop",
        };
        write!(f, "{name}")
    }
}

/// An eigenvalue `coeff · π² / length²` with exact pieces; comparisons avoid
/// floating point entirely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactEigenvalue {
    pub coeff: BigRational,
    pub length: ExactLength,
}

impl ExactEigenvalue {
    pub fn new(coeff: BigRational, length: ExactLength) -> Self {
        assert!(length.is_positive(), "eigenvalue scale must be positive");
        Self { coeff, length }
    }

    pub fn zero() -> Self {
        use num_traits::Zero;
        Self {
            coeff: BigRational::zero(),
            length: ExactLength::one(),
        }
    }

    pub fn value(&self) -> f64 {
        let len = self.length.to_f64();
        rational_to_f64(&self.coeff) * std::f64::consts::PI.powi(2) / (len * len)
    }

    /// Exact comparison: `c1/l1² ≤ c2/l2²  ⇔  c1·l2² ≤ c2·l1²`.
    pub fn exact_cmp(&self, other: &Self) -> Ordering {
        let lhs = other.length.square().scale(&self.coeff);
        let rhs = self.length.square().scale(&other.coeff);
        lhs.cmp(&rhs)
    }

    /// When the squared length is rational, the eigenvalue is `q·π²` for a
    /// rational `q`, returned here.
    pub fn as_pi_squared_multiple(&self) -> Option<BigRational> {
        use num_traits::Zero;
        let len_sq = self.length.square();
        if len_sq.rad2_part().is_zero() {
            Some(&self.coeff / len_sq.rational_part())
        } else {
            None
        }
    }

    pub fn exact_eq(&self, other: &Self) -> bool {
        self.exact_cmp(other) == Ordering::Equal
    }
}

/// Nondecreasing sequence of eigenvalues of one operator, with a method tag
/// and, for closed forms, the exact representations alongside the floats.
#[derive(Clone, Debug)]
pub struct Spectrum {
    values: Vec<f64>,
    method: MethodTag,
    exact: Option<Vec<ExactEigenvalue>>,
}

impl Spectrum {
    pub fn from_values(values: Vec<f64>, method: MethodTag) -> Self {
        assert!(
            values.windows(2).all(|w| w[0] <= w[1]),
            "spectrum must be nondecreasing"
        );
        Self {
            values,
            method,
            exact: None,
        }
    }

    pub fn from_exact(entries: Vec<ExactEigenvalue>, method: MethodTag) -> Self {
        assert!(
            entries
                .windows(2)
                .all(|w| w[0].exact_cmp(&w[1]) != Ordering::Greater),
            "spectrum must be nondecreasing"
        );
        let values = entries.iter().map(ExactEigenvalue::value).collect();
        Self {
            values,
            method,
            exact: Some(entries),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn method(&self) -> MethodTag {
        self.method
    }

    pub fn exact(&self) -> Option<&[ExactEigenvalue]> {
        self.exact.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// 1-indexed eigenvalue accessor: `lambda(1)` is the first eigenvalue.
    pub fn lambda(&self, k: usize) -> Option<f64> {
        assert!(k >= 1, "eigenvalue indices are 1-based");
        self.values.get(k - 1).copied()
    }

    /// 1-indexed exact accessor, when available.
    pub fn lambda_exact(&self, k: usize) -> Option<&ExactEigenvalue> {
        assert!(k >= 1, "eigenvalue indices are 1-based");
        self.exact.as_ref()?.get(k - 1)
    }

    /// Number of entries `<= mu` (plain comparison, no tolerance).
    pub fn count_up_to(&self, mu: f64) -> usize {
        self.values.iter().take_while(|&&v| v <= mu).count()
    }
}
