#pragma once

#include "quiverforge/errors.hpp"
#include "quiverforge/rational.hpp"
#include "quiverforge/representation.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace quiverforge {

/// Permutation of {1..N} in one-line notation (1-based images).
class Permutation {
public:
    static Permutation identity(int n);
    static Permutation from_one_line(std::vector<int> images);

    int size() const { return static_cast<int>(images_.size()); }
    int operator()(int i) const;  // 1-based
    const std::vector<int>& one_line() const { return images_; }

    Permutation compose(const Permutation& other) const;  // this after other
    Permutation inverse() const;
    bool operator==(const Permutation& other) const { return images_ == other.images_; }

private:
    explicit Permutation(std::vector<int> images) : images_(std::move(images)) {}
    std::vector<int> images_;
};

std::vector<Permutation> all_permutations(int n);

/// Sparse multivariate polynomial over exact rationals in one or more
/// variable families. Exponent vectors concatenate the families in order.
class SymPoly {
public:
    struct Family {
        std::string name;
        int arity = 0;
    };

    explicit SymPoly(std::vector<Family> families);
    static SymPoly monomial(std::vector<Family> families, const std::vector<int>& exponents,
                            Rational coeff = 1);

    const std::vector<Family>& families() const { return families_; }
    int total_arity() const { return total_arity_; }
    int family_offset(int k) const;
    const std::map<std::vector<int>, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const;

    SymPoly& add_term(const std::vector<int>& exponents, const Rational& coeff);

    // Hidden friends: found only by ADL on SymPoly operands.
    friend SymPoly operator+(const SymPoly& x, const SymPoly& y) {
        require(x.total_arity_ == y.total_arity_, "sympoly: arity mismatch");
        SymPoly r = x;
        for (const auto& [e, c] : y.terms_) r.add_term(e, c);
        return r;
    }
    friend SymPoly operator*(const SymPoly& x, const SymPoly& y) {
        require(x.total_arity_ == y.total_arity_, "sympoly: arity mismatch");
        SymPoly r(x.families_);
        std::vector<int> e(x.total_arity_);
        for (const auto& [ex, cx] : x.terms_)
            for (const auto& [ey, cy] : y.terms_) {
                for (int i = 0; i < x.total_arity_; ++i) e[i] = ex[i] + ey[i];
                r.add_term(e, cx * cy);
            }
        return r;
    }
    friend SymPoly operator*(const Rational& c, const SymPoly& x) {
        SymPoly r(x.families_);
        if (c == 0) return r;
        for (const auto& [e, ce] : x.terms_) r.add_term(e, c * ce);
        return r;
    }
    bool operator==(const SymPoly& other) const;

    /// Applies sigma to the variables of family k: x_i -> x_{sigma(i)}.
    SymPoly permute_family(int k, const Permutation& sigma) const;
    /// Applies the same sigma to every family simultaneously.
    SymPoly permute_simultaneous(const Permutation& sigma) const;

private:
    std::vector<Family> families_;
    int total_arity_ = 0;
    std::map<std::vector<int>, Rational> terms_;
};

/// Orbit sum of every monomial under the simultaneous symmetric group action
/// (each distinct image occurs once with the original coefficient). Requires
/// all families to have equal arity.
SymPoly symmetrize_simultaneous(const SymPoly& p);

bool is_invariant_family(const SymPoly& p, int family);
bool is_invariant_simultaneous(const SymPoly& p);
bool is_invariant_independent(const SymPoly& p);

/// The permutation km+j -> m(sigma(k+1)-1) + sigma'(j) of {1..nm}; it is a
/// group homomorphism S_n x S_m -> S_{nm}.
Permutation tau(int n, int m, const Permutation& sigma, const Permutation& sigma_p);
/// r-fold generalization with mixed-radix digits, first factor slowest.
Permutation tau_r(const std::vector<int>& dims, const std::vector<Permutation>& sigmas);

/// Substitution lambda_{km+j} -> alpha_{k+1}, mu_{km+j} -> beta_j turning an
/// S_{nm}-invariant in two arity-nm families into a polynomial in families
/// (alpha, n), (beta, m). A ring morphism.
SymPoly phi_substitute(const SymPoly& p, int n, int m);
SymPoly phi_substitute_r(const SymPoly& p, const std::vector<int>& dims);

/// Verifies phi(p) is fixed by (sigma, sigma') acting on (alpha, beta), and
/// that phi(tau . p) = phi(p). Rejects p that is not simultaneously invariant.
bool equivariance_check(const SymPoly& p, int n, int m, const Permutation& sigma,
                        const Permutation& sigma_p);

/// Elementary symmetric functions e_1..e_d of the eigenvalues (signed
/// characteristic polynomial coefficients): exact Faddeev-LeVerrier expansion
/// for d <= 6, eigenvalues above.
std::vector<std::complex<double>> char_poly_invariants(const Mat& a);

/// Joint eigenvalue tuples of commuting matrices, read off in the eigenbasis
/// of a seeded random linear combination; retries on defective combinations.
/// Tuples are sorted lexicographically by (re, im) per coordinate.
std::vector<std::vector<std::complex<double>>> joint_spectrum(const std::vector<Mat>& mats,
                                                              double tol = 1e-8,
                                                              std::uint64_t seed = 12345);

struct GridTestResult {
    bool ok = false;
    /// factors[s] has length dims[s]; the grid of their products reproduces
    /// the input multiset.
    std::vector<std::vector<std::complex<double>>> factors;
};

/// True iff the multiset of r-tuples is the full grid {(a^1_{k_1},...,a^r_{k_r})}
/// of nonzero factor tuples. Zero coordinates are rejected (GL only).
GridTestResult grid_test_r(const std::vector<std::vector<std::complex<double>>>& tuples,
                           const std::vector<int>& dims, double tol = 1e-6);
GridTestResult grid_test(const std::vector<std::pair<std::complex<double>, std::complex<double>>>& pairs,
                         int n, int m, double tol = 1e-6);

}  // namespace quiverforge
