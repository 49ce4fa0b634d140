//! Root finding for square polynomial systems through Macaulay matrices and
//! Möller–Stetter multiplication matrices.
//!
//! A system is expanded into its Macaulay matrix at degree `d = Σ(d_i - 1) + 1`,
//! reduced to a basis of the quotient algebra (direct, null-space, or
//! degree-by-degree), and the multiplication matrices are simultaneously
//! diagonalised to recover the `r = Π d_i` roots.
//!
//! ```
//! use msroot_core::{solve, MethodConfig, Polynomial, PolySystem};
//!
//! let p1 = Polynomial::from_real_terms(2, &[(&[2, 0], 1.0), (&[0, 0], -1.0)]).unwrap();
//! let p2 = Polynomial::from_real_terms(2, &[(&[0, 1], 1.0), (&[1, 0], -2.0)]).unwrap();
//! let sys = PolySystem::new(vec![p1, p2]).unwrap();
//! let res = solve(&sys, &MethodConfig::default()).unwrap();
//! assert_eq!(res.roots.len(), 2);
//! assert!(res.max_residual() < 1e-12);
//! ```

pub mod analysis;
pub mod combinatorics;
pub mod config;
pub mod error;
pub mod flops;
pub mod generators;
pub mod io;
mod lapack;
pub mod linalg;
pub mod macaulay;
pub mod poly;
pub mod reduction;
pub mod solver;

pub use analysis::{ConditioningRecord, EigCondition};
pub use combinatorics::RowCounts;
pub use config::{Tolerances, MACHINE_EPS};
pub use error::{Error, Result};
pub use flops::{CostMethod, CostReport};
pub use generators::{ConicSystem, GeneratorSpec};
pub use linalg::CMatrix;
pub use macaulay::{build_macaulay, ColumnOrder, MacaulayMatrix};
pub use poly::{Exponent, PolySystem, Polynomial};
pub use reduction::{Factorization, MethodConfig, Pipeline, ReductionResult};
pub use solver::{solve, MSMatrices, RootResult};
