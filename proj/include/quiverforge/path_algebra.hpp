#pragma once

#include "quiverforge/quiver.hpp"

#include <complex>
#include <map>
#include <utility>
#include <vector>

namespace quiverforge {

using Complex = std::complex<double>;

/// Formal complex combination of parallel paths of length >= 2.
class Relation {
public:
    struct Term {
        Complex coeff;
        Path path;
    };

    static Relation make(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    int head() const { return terms_.front().path.head(); }
    int tail() const { return terms_.front().path.tail(); }
    const QuiverPtr& quiver() const { return terms_.front().path.quiver(); }

private:
    explicit Relation(std::vector<Term> terms) : terms_(std::move(terms)) {}
    std::vector<Term> terms_;
};

/// Element of the path algebra A_Q restricted to finitely many paths.
/// Zero coefficients are never stored.
class PathAlgebraElement {
public:
    explicit PathAlgebraElement(QuiverPtr q);
    static PathAlgebraElement from_path(Path p, Complex coeff = 1.0);
    /// 1 = sum of all trivial paths.
    static PathAlgebraElement unit(QuiverPtr q);

    const QuiverPtr& quiver() const { return quiver_; }
    const std::map<Path, Complex>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    PathAlgebraElement& add_term(const Path& p, Complex c);

    // Hidden friends: found only by ADL on PathAlgebraElement operands.
    friend PathAlgebraElement operator+(const PathAlgebraElement& x,
                                        const PathAlgebraElement& y) {
        require(*x.quiver_ == *y.quiver_, "path algebra: mixed quivers");
        PathAlgebraElement r = x;
        for (const auto& [p, c] : y.terms_) r.add_term(p, c);
        return r;
    }
    friend PathAlgebraElement operator*(Complex c, const PathAlgebraElement& x) {
        PathAlgebraElement r(x.quiver_);
        if (c == Complex(0.0, 0.0)) return r;
        for (const auto& [p, cp] : x.terms_) r.add_term(p, c * cp);
        return r;
    }
    bool operator==(const PathAlgebraElement& other) const { return terms_ == other.terms_; }

private:
    QuiverPtr quiver_;
    std::map<Path, Complex> terms_;
};

/// Bilinear extension of path concatenation; non-composable products vanish.
PathAlgebraElement multiply(const PathAlgebraElement& x, const PathAlgebraElement& y);

/// Generators of the commutation ideal of a tensor quiver: one pair of
/// parallel length-2 paths (h a, b)(a, t b) and (a, h b)(t a, b) per
/// (a, b) in Q'_1 x Q''_1.
struct CommutationIdeal {
    QuiverPtr product;
    /// (normal-form word, the other word) per generator, same (alpha, beta) order.
    std::vector<std::pair<Path, Path>> pairs;
    /// The same generators as Relations p - q.
    std::vector<Relation> relations;
};

CommutationIdeal commutation_generators(const TensorQuiverMap& tq);

/// Unique representative of p modulo the commutation ideal: all first-factor
/// edges act first (stored rightmost), then all second-factor edges. Computed
/// by the terminating single-rule rewrite that bubbles first-factor edges
/// toward the tail; each swap lowers the inversion count by one.
Path normal_form(const Path& p, const TensorQuiverMap& tq);

/// Number of distinct normal forms of length <= max_len between product
/// vertices. Equals the sum over a+b <= max_len of (#paths of length a in Q')
/// x (#paths of length b in Q'').
long long count_paths_mod_ideal(const TensorQuiverMap& tq, std::pair<int, int> from,
                                std::pair<int, int> to, int max_len,
                                long long cap = 1'000'000);

}  // namespace quiverforge
