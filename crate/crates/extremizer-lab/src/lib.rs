//! Search for large values of the `L^4` quotient over radial profiles, and
//! numerical checks of the inequalities around it: symmetrization, the
//! full-hyperboloid expansion, bilinear dyadic decay, dyadic refinement, the
//! tail bound and the cone limit.

pub mod cone;
pub mod dyadic;
pub mod functional;
pub mod nodal;
pub mod optimizer;
pub mod sheets;
pub mod slab;
pub mod tail;

use thiserror::Error;

pub use cone::{cone_limit_scan, ConeDistance, ConeLimit};
pub use dyadic::{
    bilinear_dyadic_scan, dyadic_refinement_check, refinement_corpus, CorpusStats, DecayTable, DyadicDecomposition, Refinement,
    ShellKind,
};
pub use functional::{q_ratio, q_value, QRatio};
pub use nodal::{nodal_norm_sq, nodal_weights};
pub use optimizer::{maximize_radial, trial_scan, RestartReport, SearchConfig, SearchResult, Start, Stop, TraceEntry};
pub use sheets::{full_q_ratio, full_terms, symmetrize, FullQ, FullTerms, SheetPair};
pub use slab::bilinear_norm_sq;
pub use tail::{cauchy_schwarz_integral, tail_bound_check, TailCheck};

#[derive(Debug, Error)]
pub enum ExtremizerError {
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("non-finite gradient at nodes {nodes:?}")]
    NonFinite { nodes: Vec<usize> },
    #[error(transparent)]
    Core(#[from] radial_core::CoreError),
}

pub type Result<T> = std::result::Result<T, ExtremizerError>;
