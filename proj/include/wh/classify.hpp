#pragma once

#include "wh/transport.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wh {

enum class HolonomyType { Type1 = 1, Type2 = 2, Type3 = 3, Type4 = 4, Indeterminate = 0 };

std::string to_string(HolonomyType t);

inline constexpr double kSymbolicTol = 1e-8;
inline constexpr double kSampledTol = 1e-5;

struct HolonomyReport {
    HolonomyType type = HolonomyType::Indeterminate;
    std::string reason;  // why the type is indeterminate, empty otherwise
    int n = 0;
    int algebra_dim = 0;
    std::vector<Eigen::MatrixXd> h_basis;  // orthonormal basis of the orthogonal part
    int h_prime_dim = 0;
    int center_dim = 0;
    /// Type 3: phi(A) = phi.dot(so_to_vector(A)) on h.
    std::optional<Eigen::VectorXd> phi;
    /// Type 4: screen split R^n = V1 + V2 with dim V1 = n1, and
    /// psi(A) = psi * so_to_vector(A) in the orthonormal basis `split` of V2.
    int n1 = 0;
    int n2 = 0;
    std::optional<Eigen::MatrixXd> psi;
    std::optional<Eigen::MatrixXd> split;
    bool weakly_irreducible = false;
    std::map<std::string, double> residuals;
};

/// Decide the type of the algebra spanned by `basis` (assumed bracket-closed).
/// Every rank or membership decision uses singular values against `tol`.
HolonomyReport classify(const AlgebraBasis& basis, int n, double tol);

/// Convenience: closure of the given elements followed by classify.
HolonomyReport classify_elements(const std::vector<LorentzBlockElement>& elements, int n, double tol);

/// Tolerance from the environment (WH_TOL) or the given fallback.
double default_tolerance(double fallback);

}  // namespace wh
