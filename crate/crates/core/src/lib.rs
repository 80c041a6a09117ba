//! Interval influence diagrams.
//!
//! Decision models whose chance nodes carry independent *lower bounds* on
//! their conditional probabilities and whose value node carries an interval
//! per parent configuration. Solving a diagram yields an expected-value
//! interval and, for each decision and information state, the set of
//! alternatives that no other alternative strictly dominates.
//!
//! - [`model`]: diagrams, tables, configuration indexing, validation.
//! - [`transforms`]: chance removal into the value node, decision removal,
//!   arc reversal, chance marginalization, barren-node removal.
//! - [`solver`]: reduction of a diagram to its value node.
//! - [`exact`]: point-valued solving, endpoint enumeration, sampling and the
//!   soundness harness.
//! - [`sensitivity`]: imprecision injection and sweep reports.
//! - [`format`]: the JSON diagram file format.
//! - [`cli`]: the `iid` command line.
//!
//! ```
//! use iid::model::DiagramSpec;
//!
//! let diagram = DiagramSpec::new()
//!     .decision("D", &["d1", "d2"], &[])
//!     .chance("C", &["c1", "c2"], &[], vec![vec![0.5, 0.3]])
//!     .value("V", &["D", "C"], vec![(10.0, 10.0), (0.0, 0.0), (4.0, 4.0), (4.0, 4.0)])
//!     .build()?;
//! let report = iid::solver::solve(&diagram)?;
//! assert!((report.final_interval.lo - 5.0).abs() < 1e-12);
//! assert!((report.final_interval.hi - 7.0).abs() < 1e-12);
//! assert_eq!(report.policy("D").unwrap().sets, vec![vec![0]]);
//! # Ok::<(), iid::Error>(())
//! ```

pub mod cli;
pub mod error;
pub mod exact;
pub mod format;
pub mod model;
pub mod render;
pub mod sensitivity;
pub mod solver;
pub mod transforms;

pub use error::{Error, Result};
pub use model::{DiagramSpec, InfluenceDiagram, Interval, NodeId};
pub use solver::{solve, SolveReport};
