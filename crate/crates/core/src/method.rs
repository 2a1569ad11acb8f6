//! Runtime-selectable spectrum methods behind a common trait.
//!
//! Three interchangeable strategies compute spectra: exact closed forms for
//! the special shapes, the secular solver for everything, and the variational
//! oracle for auditing. They register by name and the CLI picks one with
//! `--method`.

use thiserror::Error;

use crate::closed_form::{
    equilateral_star_spectrum_exact, loop_spectrum_exact, path_spectrum_exact, ClosedFormError,
};
use crate::exact::ExactLength;
use crate::fem::{self, FemError};
use crate::graph::{GraphError, MetricGraph};
use crate::secular::{self, SecularError, SolveOptions};
use crate::spectrum::Spectrum;

#[derive(Debug, Error)]
pub enum MethodError {
    #[error("method {method:?} does not apply: {reason}")]
    NotApplicable {
        method: &'static str,
        reason: String,
    },
    #[error("unknown method {0:?}")]
    UnknownMethod(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    ClosedForm(#[from] ClosedFormError),
    #[error(transparent)]
    Secular(#[from] SecularError),
    #[error(transparent)]
    Fem(#[from] FemError),
}

/// Options shared by all methods plus the oracle's mesh override.
#[derive(Clone, Debug, Default)]
pub struct MethodOptions {
    pub solve: SolveOptions,
    /// Uniform element count per edge for the oracle; graded default mesh
    /// when unset.
    pub elements_per_edge: Option<usize>,
}

/// A spectrum-computation strategy selectable at runtime.
pub trait SpectrumMethod: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    /// Ok when the method can handle this graph.
    fn supports(&self, graph: &MetricGraph) -> Result<(), MethodError>;
    fn spectrum(
        &self,
        graph: &MetricGraph,
        count: usize,
        opts: &MethodOptions,
    ) -> Result<Spectrum, MethodError>;
}

/// Special shapes with known closed-form spectra.
#[derive(Clone, Debug)]
pub enum SpecialShape {
    /// Connected tree with all degrees ≤ 2: a Neumann interval of the total
    /// length.
    Path,
    /// All edges share one vertex and one length, |E| ≥ 2.
    EquilateralStar { edges: usize, length: ExactLength },
    /// Connected, every degree exactly 2: a circle of the total length.
    Cycle,
}

/// Classify a valid connected graph, if it has a closed-form spectrum.
pub fn classify_closed_form(graph: &MetricGraph) -> Result<Option<SpecialShape>, GraphError> {
    graph.require_valid()?;
    let degrees = graph.degrees();
    if graph.is_tree()? && degrees.iter().all(|&d| d <= 2) && graph.edge_count() >= 1 {
        return Ok(Some(SpecialShape::Path));
    }
    if graph.is_equilateral_star()? {
        return Ok(Some(SpecialShape::EquilateralStar {
            edges: graph.edge_count(),
            length: graph.edges()[0].length.clone(),
        }));
    }
    if !degrees.is_empty() && degrees.iter().all(|&d| d == 2) {
        return Ok(Some(SpecialShape::Cycle));
    }
    Ok(None)
}

struct ClosedFormMethod;

impl SpectrumMethod for ClosedFormMethod {
    fn name(&self) -> &'static str {
        "closed-form"
    }

    fn summary(&self) -> &'static str {
        "exact formulas for paths, equilateral stars and cycles"
    }

    fn supports(&self, graph: &MetricGraph) -> Result<(), MethodError> {
        match classify_closed_form(graph)? {
            Some(_) => Ok(()),
            None => Err(MethodError::NotApplicable {
                method: self.name(),
                reason: "graph is not a path, an equilateral star, or a cycle".into(),
            }),
        }
    }

    fn spectrum(
        &self,
        graph: &MetricGraph,
        count: usize,
        _opts: &MethodOptions,
    ) -> Result<Spectrum, MethodError> {
        let shape = classify_closed_form(graph)?.ok_or_else(|| MethodError::NotApplicable {
            method: self.name(),
            reason: "graph is not a path, an equilateral star, or a cycle".into(),
        })?;
        let spectrum = match shape {
            SpecialShape::Path => path_spectrum_exact(&graph.total_length(), count),
            SpecialShape::EquilateralStar { edges, length } => {
                equilateral_star_spectrum_exact(edges, &length, count)?
            }
            SpecialShape::Cycle => loop_spectrum_exact(&graph.total_length(), count),
        };
        Ok(spectrum)
    }
}

struct SecularMethod;

impl SpectrumMethod for SecularMethod {
    fn name(&self) -> &'static str {
        "secular"
    }

    fn summary(&self) -> &'static str {
        "directed-bond secular function root scan (any connected graph)"
    }

    fn supports(&self, graph: &MetricGraph) -> Result<(), MethodError> {
        graph.require_valid().map_err(MethodError::from)
    }

    fn spectrum(
        &self,
        graph: &MetricGraph,
        count: usize,
        opts: &MethodOptions,
    ) -> Result<Spectrum, MethodError> {
        Ok(secular::eigenvalues_with(graph, count, &opts.solve)?)
    }
}

struct OracleMethod;

impl SpectrumMethod for OracleMethod {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn summary(&self) -> &'static str {
        "variational (finite element) upper bounds, O(h²) accurate"
    }

    fn supports(&self, graph: &MetricGraph) -> Result<(), MethodError> {
        graph.require_valid().map_err(MethodError::from)
    }

    fn spectrum(
        &self,
        graph: &MetricGraph,
        count: usize,
        opts: &MethodOptions,
    ) -> Result<Spectrum, MethodError> {
        let spectrum = match opts.elements_per_edge {
            Some(n) => fem::eigenvalues_oracle(graph, count, n)?,
            None => fem::eigenvalues_oracle_auto(graph, count)?,
        };
        Ok(spectrum)
    }
}

/// Name-keyed registry of spectrum methods.
pub struct MethodRegistry {
    methods: Vec<Box<dyn SpectrumMethod>>,
}

impl MethodRegistry {
    pub fn empty() -> Self {
        Self {
            methods: Vec::new(),
        }
    }

    /// The standard three: closed-form, secular, oracle.
    pub fn standard() -> Self {
        let mut registry = Self::empty();
        registry.register(Box::new(ClosedFormMethod));
        registry.register(Box::new(SecularMethod));
        registry.register(Box::new(OracleMethod));
        registry
    }

    pub fn register(&mut self, method: Box<dyn SpectrumMethod>) {
        self.methods.push(method);
    }

    pub fn get(&self, name: &str) -> Result<&dyn SpectrumMethod, MethodError> {
        self.methods
            .iter()
            .map(|m| m.as_ref())
            .find(|m| m.name() == name)
            .ok_or_else(|| MethodError::UnknownMethod(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.methods.iter().map(|m| m.name()).collect()
    }
}

impl Default for MethodRegistry {
    fn default() -> Self {
        Self::standard()
    }
}
