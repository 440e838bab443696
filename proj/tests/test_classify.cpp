#include "doctest.h"

#include "support.hpp"
#include "wh/classify.hpp"
#include "wh/errors.hpp"

#include <cmath>
#include <cstdlib>

using namespace wh;
using wh::testing::uniform;

namespace {

LorentzBlockElement elem(double a, Eigen::VectorXd x, Eigen::MatrixXd A) { return {a, std::move(x), std::move(A)}; }

Eigen::MatrixXd rot(int n, int i, int j)
{
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    m(i, j) = -1.0;
    m(j, i) = 1.0;
    return m;
}

Eigen::VectorXd e(int n, int k) { return Eigen::VectorXd::Unit(n, k); }
Eigen::VectorXd z(int n) { return Eigen::VectorXd::Zero(n); }
Eigen::MatrixXd zm(int n) { return Eigen::MatrixXd::Zero(n, n); }

HolonomyReport run(const std::vector<LorentzBlockElement>& els, int n, double tol = 1e-8)
{
    return classify_elements(els, n, tol);
}

// Type 3 family: (1, 0, J) with translations.
std::vector<LorentzBlockElement> type3(int n = 2)
{
    std::vector<LorentzBlockElement> out{elem(1, z(n), rot(n, 0, 1))};
    for (int k = 0; k < n; ++k) out.push_back(elem(0, e(n, k), zm(n)));
    return out;
}

// Type 4 with n = 3: h = so(2) on (e1, e2), psi(J) = e3.
std::vector<LorentzBlockElement> type4()
{
    return {elem(0, e(3, 0), zm(3)), elem(0, e(3, 1), zm(3)), elem(0, e(3, 2), rot(3, 0, 1))};
}

Eigen::MatrixXd random_rotation(std::mt19937_64& rng, int n)
{
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = uniform(rng, -1, 1);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    return qr.householderQ();
}

LorentzBlockElement conjugate(const LorentzBlockElement& el, const Eigen::MatrixXd& o)
{
    const int n = el.n();
    Eigen::MatrixXd d = Eigen::MatrixXd::Identity(n + 2, n + 2);
    d.block(1, 1, n, n) = o;
    return LorentzBlockElement::from_matrix(d * el.to_matrix() * d.transpose());
}

}  // namespace

TEST_CASE("classify: examples")
{
    const HolonomyReport t2 = run({elem(0, e(2, 0), zm(2)), elem(0, e(2, 1), zm(2))}, 2);
    CHECK(t2.type == HolonomyType::Type2);
    CHECK(t2.h_basis.empty());
    CHECK(t2.weakly_irreducible);

    const HolonomyReport t1 =
        run({elem(1, z(2), zm(2)), elem(0, e(2, 0), zm(2)), elem(0, e(2, 1), zm(2)), elem(0, z(2), rot(2, 0, 1))}, 2);
    CHECK(t1.type == HolonomyType::Type1);
    CHECK(t1.h_basis.size() == 1);
    CHECK(t1.center_dim == 1);
    CHECK(t1.h_prime_dim == 0);

    const HolonomyReport t3 = run(type3(), 2);
    CHECK(t3.type == HolonomyType::Type3);
    REQUIRE(t3.phi.has_value());
    // phi(J) = 1 for J = rot(0, 1).
    CHECK(t3.phi->dot(so_to_vector(rot(2, 0, 1))) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(t3.center_dim == 1);

    const HolonomyReport t4 = run(type4(), 3);
    CHECK(t4.type == HolonomyType::Type4);
    CHECK(t4.n1 == 2);
    CHECK(t4.n2 == 1);
    REQUIRE(t4.psi.has_value());
    REQUIRE(t4.split.has_value());
    // psi(J) pairs with the e3 direction: |psi(J)| = 1.
    const Eigen::VectorXd image = *t4.psi * so_to_vector(rot(3, 0, 1));
    CHECK(std::abs(image[0]) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs((*t4.split)(2, 0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("classify: indeterminate cases")
{
    const HolonomyReport none = run({}, 2);
    CHECK(none.type == HolonomyType::Indeterminate);
    CHECK_FALSE(none.weakly_irreducible);

    const HolonomyReport partial = run({elem(0, e(2, 0), zm(2))}, 2);
    CHECK(partial.type == HolonomyType::Indeterminate);
    CHECK_FALSE(partial.weakly_irreducible);

    // Boost coupled to a derived-algebra element: so(3) with phi != 0 is impossible.
    std::vector<LorentzBlockElement> bad{elem(1, z(3), rot(3, 0, 1)), elem(0, z(3), rot(3, 1, 2))};
    for (int k = 0; k < 3; ++k) bad.push_back(elem(0, e(3, k), zm(3)));
    const HolonomyReport r = run(bad, 3);
    CHECK(r.type != HolonomyType::Type3);
}

TEST_CASE("classify: invariant under recombination of the basis")
{
    std::mt19937_64 rng(9);
    const std::vector<std::pair<std::vector<LorentzBlockElement>, int>> cases{{type3(), 2}, {type4(), 3}};
    for (const auto& [els, n] : cases) {
        const AlgebraBasis closed = lie_closure(els, 1e-8, n);
        const HolonomyReport ref = classify(closed, n, 1e-8);
        AlgebraBasis mixed = closed;
        for (auto& el : mixed.elements) {
            LorentzBlockElement acc = LorentzBlockElement::zero(n);
            for (const auto& other : closed.elements) acc += uniform(rng, -1, 1) * other;
            el = acc;
        }
        const HolonomyReport again = classify(mixed, n, 1e-8);
        CHECK(again.type == ref.type);
        Eigen::MatrixXd h1(n * (n - 1) / 2, ref.h_basis.size()), h2(n * (n - 1) / 2, again.h_basis.size());
        for (size_t k = 0; k < ref.h_basis.size(); ++k) h1.col(static_cast<Eigen::Index>(k)) = so_to_vector(ref.h_basis[k]);
        for (size_t k = 0; k < again.h_basis.size(); ++k)
            h2.col(static_cast<Eigen::Index>(k)) = so_to_vector(again.h_basis[k]);
        CHECK(span_distance(h1, h2) <= 1e-8);
    }
}

TEST_CASE("classify: invariant under screen rotation")
{
    std::mt19937_64 rng(10);
    const std::vector<std::pair<std::vector<LorentzBlockElement>, int>> cases{{type3(), 2}, {type4(), 3}};
    for (const auto& [els, n] : cases) {
        const Eigen::MatrixXd o = random_rotation(rng, n);
        std::vector<LorentzBlockElement> rotated;
        for (const auto& el : els) rotated.push_back(conjugate(el, o));
        const HolonomyReport ref = run(els, n), again = run(rotated, n);
        CHECK(again.type == ref.type);
        CHECK(again.h_basis.size() == ref.h_basis.size());
        // Conjugated orthogonal part spans the same space.
        Eigen::MatrixXd h1(n * (n - 1) / 2, ref.h_basis.size()), h2(n * (n - 1) / 2, again.h_basis.size());
        for (size_t k = 0; k < ref.h_basis.size(); ++k)
            h1.col(static_cast<Eigen::Index>(k)) = so_to_vector(o * ref.h_basis[k] * o.transpose());
        for (size_t k = 0; k < again.h_basis.size(); ++k)
            h2.col(static_cast<Eigen::Index>(k)) = so_to_vector(again.h_basis[k]);
        CHECK(span_distance(h1, h2) <= 1e-8);
    }
}

TEST_CASE("classify: stable under tolerance changes")
{
    for (const double tol : {1e-9, 1e-8, 1e-7}) {
        CHECK(run(type3(), 2, tol).type == HolonomyType::Type3);
        CHECK(run(type4(), 3, tol).type == HolonomyType::Type4);
    }
}

TEST_CASE("default_tolerance reads WH_TOL")
{
    unsetenv("WH_TOL");
    CHECK(default_tolerance(1e-8) == 1e-8);
    setenv("WH_TOL", "1e-6", 1);
    CHECK(default_tolerance(1e-8) == 1e-6);
    setenv("WH_TOL", "abc", 1);
    CHECK_THROWS_AS(default_tolerance(1e-8), DomainError);
    unsetenv("WH_TOL");
}
