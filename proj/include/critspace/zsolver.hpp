#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "critspace/bigint.hpp"
#include "critspace/tensor.hpp"

namespace critspace {

using cplx = std::complex<double>;

/// Singular-value gap too small to call a numerical rank.
class IllConditioned : public std::runtime_error {
public:
    IllConditioned() : std::runtime_error("ill-conditioned span") {}
};

/// Path tracking failed on too many paths for every seed tried.
class TrackingUnstable : public std::runtime_error {
public:
    TrackingUnstable() : std::runtime_error("tracking unstable, retry with new seed") {}
};

/// One unit vector per factor plus the minor residual of the tuple.
struct SingularTuple {
    std::vector<Eigen::VectorXcd> x;
    double residual = 0.0;
    bool multiple = false;  // Jacobian of the square system was near singular
};

/// Unit norm per factor, first coordinate above 1e-6 in modulus made real positive.
SingularTuple normalized(const SingularTuple& t);

/// Max over factors of the sup-norm distance between representatives.
double tuple_distance(const SingularTuple& a, const SingularTuple& b);

/// Max modulus over all 2x2 minors of [T(x_j, j != i); x_i], all i, with the
/// x_i rescaled to unit norm.
double minor_residual(const ComplexTensor& t, const std::vector<Eigen::VectorXcd>& x);

/// Square system on the product of affine charts: factor i is written as
/// x_i = N_i (1, y_i) with N_i = M_i^{-1} for a random complex M_i, and the
/// n_i equations say M_i T(x_j, j != i) is proportional to (1, y_i).
class MinorSystem {
public:
    MinorSystem(ComplexTensor t, std::vector<Eigen::MatrixXcd> charts);

    int factors() const { return static_cast<int>(ns_.size()); }
    int unknowns() const { return total_; }
    int equations() const { return total_; }
    /// Total degree of every equation (the number of factors).
    std::vector<int> degrees() const { return std::vector<int>(static_cast<std::size_t>(total_), factors()); }
    const std::vector<int>& group_sizes() const { return ns_; }
    int offset(int i) const { return offsets_[static_cast<std::size_t>(i)]; }

    void evaluate(const Eigen::VectorXcd& y, Eigen::VectorXcd& f, Eigen::MatrixXcd* jac) const;
    /// All 2x2 minors (overdetermined) and their Jacobian in y.
    void evaluate_minors(const Eigen::VectorXcd& y, Eigen::VectorXcd& r, Eigen::MatrixXcd* jac) const;
    std::vector<Eigen::VectorXcd> to_vectors(const Eigen::VectorXcd& y) const;

    const ComplexTensor& tensor() const { return t_; }

private:
    // P[i][j] = T contracted with x_l for l != i, j; a d_i x d_j matrix
    void pair_contractions(const std::vector<Eigen::VectorXcd>& x,
                           std::vector<std::vector<Eigen::MatrixXcd>>& p) const;

    ComplexTensor t_;
    std::vector<Eigen::MatrixXcd> m_, minv_;
    std::vector<int> ns_, offsets_;
    int total_ = 0;
};

/// Builds the square system with charts drawn from chart_seed.
MinorSystem build_system(const ComplexTensor& t, std::uint64_t chart_seed);

/// Number of paths of the multihomogeneous start system: (sum n_i)! / prod n_i!.
BigInt start_path_count(const Format& format);

struct SolverOptions {
    std::uint64_t seed = 1;
    double tol = 1e-8;              // certification residual
    double dedup_tol = 1e-6;
    double max_paths = 1e5;
    int max_seeds = 3;
    bool parallel = true;
};

struct TupleSolveReport {
    std::vector<SingularTuple> tuples;
    BigInt expected_count;
    std::size_t paths_tracked = 0;
    std::size_t paths_failed = 0;
    std::size_t paths_diverged = 0;
    std::size_t seeds_used = 0;
    bool complete = false;  // tuples.size() == expected_count
    std::size_t span_rank = 0;
    std::size_t critical_dim = 0;
    std::size_t span_codim = 0;
};

/// All singular vector tuples of t by homotopy continuation, retrying with
/// up to options.max_seeds seeds while fewer than the ED degree are found.
/// Throws GuardRefusal past max_paths, TrackingUnstable if more than 20% of
/// paths fail on every seed tried.
TupleSolveReport solve_singular_tuples(const ComplexTensor& t, const SolverOptions& options);

/// Max modulus of the critical-space equations evaluated at x_1 (x) ... (x) x_k.
double verify_in_critical(const ComplexTensor& t, const SingularTuple& tuple);

/// Numerical rank by the largest gap among the singular values followed by
/// the floor 1e-16 * s_1; throws IllConditioned if the gap is below min_gap.
std::size_t numeric_rank(const Eigen::MatrixXcd& m, double min_gap = 1e3);

/// Rank of the span of the rank-one tensors of the tuples.
std::size_t span_rank(const std::vector<SingularTuple>& tuples);

/// Critical-space dimension; exact when every entry is real.
std::size_t critical_dim_of(const ComplexTensor& t);

/// critical_dim_of(t) - span_rank(tuples).
std::size_t span_codim_in_H(const ComplexTensor& t, const std::vector<SingularTuple>& tuples);

/// x_1 (x) ... (x) x_k in the row-major layout.
Eigen::VectorXcd rank_one(const std::vector<Eigen::VectorXcd>& x);

/// Real tensor with independent standard normal entries, portable across
/// standard libraries for a given seed.
ComplexTensor random_real_tensor(const Format& format, std::uint64_t seed);

}  // namespace critspace
