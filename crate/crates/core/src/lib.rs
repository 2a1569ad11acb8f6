//! Spectra of standard (Kirchhoff) Laplacians on finite metric trees and
//! graphs.
//!
//! Edge lengths live in the quadratic field Q + Q·√2, which makes rational
//! (in)dependence — the hinge of the strict/equality dichotomy in the
//! Dirichlet comparison — exactly decidable. Spectra come from three
//! interchangeable methods (closed forms, the directed-bond secular function,
//! and a variational finite-element oracle), and the bounds module evaluates
//! every eigenvalue bound against them, aborting on violations since the
//! bounds are theorems.

pub mod bounds;
pub mod closed_form;
pub mod exact;
pub mod fem;
pub mod graph;
pub mod method;
pub mod secular;
pub mod spectrum;

pub use exact::ExactLength;
pub use graph::{parse_graph, random_tree, write_graph, LengthModel, MetricGraph};
pub use method::{MethodOptions, MethodRegistry, SpectrumMethod};
pub use secular::SolveOptions;
pub use spectrum::{MethodTag, Spectrum};
