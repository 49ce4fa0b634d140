//! Shared inputs for the benchmarks.

use msroot_core::{generators, Factorization, MethodConfig, Pipeline, PolySystem};

/// Random dense system used by the solver benchmarks.
pub fn bench_system(n: usize, degree: u32) -> PolySystem {
    generators::random_dense(n, degree, 2024).expect("valid generator parameters")
}

/// The seven method combinations, plus random combinations for the direct
/// and null-space pipelines with SVD.
pub fn bench_methods() -> Vec<MethodConfig> {
    let mut v = Vec::new();
    for p in [Pipeline::Direct, Pipeline::Nullspace] {
        for f in [Factorization::Svd, Factorization::Qrp, Factorization::Lq] {
            v.push(MethodConfig::new(p, f));
        }
        v.push(MethodConfig::new(p, Factorization::Svd).with_random_combinations(true));
    }
    v.push(MethodConfig::new(Pipeline::DegreeByDegree, Factorization::Svd));
    v
}
