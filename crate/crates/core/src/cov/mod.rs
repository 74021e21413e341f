//! Resolvent change of variables for multiple operator integrals.
//!
//! A signature over `{L, 0, R}` decides where resolvents `(H_j - i)^{-1}` are attached to
//! the arguments; the expansion trades them for extra powers of `u(x) = x - i` in the symbol.

mod bound;
mod check;
mod corollary;
mod expand;
mod measure;
mod signature;

pub use bound::{p_j_alpha, BoundReport, HOLDER_TOL};
pub use check::{build_check_operators, CheckOperators};
pub use corollary::{corollary_expand, corollary_indices, BarOperators, CorollaryExpansion, CorollaryTerm, Parity};
pub use expand::{cov_expand, expansion_terms, index_tuples, scalar_cov_identity, CovExpansion, ExpansionTerm, ScalarIdentity};
pub use measure::{trace_measure, trace_via_measure, TraceMeasure, TraceMeasureReport};
pub use signature::{signature_for_j, Eps, EpsilonSignature};
