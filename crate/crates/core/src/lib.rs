//! Simulated quantum dynamic programming on directed acyclic graphs.
//!
//! Graphs are 1-indexed [`Dag`]s. Quantum subroutines (Grover search,
//! threshold-based extremum finding) run on a [`Backend`], either a
//! real-amplitude statevector simulator or a cost model with one-sided
//! misses, and every oracle access is charged to a [`QueryLedger`].
//!
//! On top of that sit the topological sort ([`topsort`]), the generic DP
//! sweep with boosted vertex functions ([`dp`]), circuit and Zhegalkin
//! polynomial evaluation ([`circuits`]), path lengths and the diameter
//! ([`paths`]), and an experiment runner with scaling fits ([`harness`]).
//! Each module has an exact classical counterpart used as an oracle.
//!
//! The `examples/` directory has one runnable program per capability:
//!
//! | example | shows |
//! |---|---|
//! | `grover` | statevector Grover runs against the closed form |
//! | `topsort` | quantum topological sort and relabeling |
//! | `boosting` | error of repeated vertex functions |
//! | `dp` | the DP sweep against the classical pass |
//! | `circuit` | labeled AND/OR/NAND circuits and XOR rewriting |
//! | `zhegalkin` | parsing and compiling ANF polynomials |
//! | `paths` | longest and shortest paths with witnesses |
//! | `diameter` | diameter of an unweighted DAG |
//! | `bench` | a query-count sweep with a scaling fit |

pub mod backend;
pub mod circuits;
pub mod dag;
pub mod dp;
pub mod format;
pub mod generate;
pub mod harness;
pub mod paths;
pub mod search;
pub mod topsort;

pub use backend::{Backend, BackendConfig, BackendKind, Bucket, QueryLedger};
pub use dag::{Dag, DagError};
pub use search::{BoostPolicy, VertexFn};
