//! Tensor-network states and the SES / SESSP decision problems.
//!
//! States are matrix product states in canonical form ([`MpsState`]).
//! Reduced density matrices of arbitrary qubit subsets are computed by a
//! left-to-right sweep ([`reduced_density_matrix`]) and fed to a
//! [`WeightFunction`]. [`solvers`] decides SES / SESSP instances and
//! [`reductions`] builds them from SUBSET SUM and PARTITION.

pub mod entropy;
pub mod error;
pub mod exact;
pub mod files;
mod linalg;
pub mod mps;
pub mod problems;
pub mod rdm;
pub mod reductions;
pub mod solvers;
pub mod weights;

pub use entropy::{binary_entropy, inverse_binary_entropy};
pub use error::{Error, Result};
pub use exact::Decimal;
pub use linalg::hermitian_eigenvalues;
pub use mps::{BuildReport, MpsState, Tensor3};
pub use problems::{
    subset_weight, verify_ses, verify_sessp, SesInstance, SesspInstance, SplitCertificate, SubsetCertificate,
    FLOAT_SLACK,
};
pub use rdm::{reduced_density_matrix, DensityMatrix, BLOCK_CAP};
pub use reductions::{
    lift_to_real, normalize, reduce_to_ses_entropy, reduce_to_ses_magnetization, reduce_to_sessp,
    NormalizedRealInstance, PartitionInstance, RealSubsetSumInstance, ReductionMap, SubsetSumInstance,
};
pub use solvers::{
    solve_partition_dp, solve_ses, solve_ses_bruteforce, solve_sessp, solve_sessp_bruteforce,
    solve_subset_sum_dp, Certificate, SolveOptions, SolveResult, Strategy,
};
pub use weights::{check_weight_axioms, AxiomReport, Axis, WeightFunction};
