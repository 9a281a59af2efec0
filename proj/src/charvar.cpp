#include "quiverforge/charvar.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <random>

namespace quiverforge {

Permutation Permutation::identity(int n) {
    require(n >= 0, "permutation: negative size");
    std::vector<int> images(n);
    std::iota(images.begin(), images.end(), 1);
    return Permutation(std::move(images));
}

Permutation Permutation::from_one_line(std::vector<int> images) {
    std::vector<bool> seen(images.size(), false);
    for (int x : images) {
        require(x >= 1 && x <= static_cast<int>(images.size()) && !seen[x - 1],
                "permutation: not a bijection of {1..N}");
        seen[x - 1] = true;
    }
    return Permutation(std::move(images));
}

int Permutation::operator()(int i) const {
    require(i >= 1 && i <= size(), "permutation: index out of range");
    return images_[i - 1];
}

Permutation Permutation::compose(const Permutation& other) const {
    require(size() == other.size(), "permutation: size mismatch");
    std::vector<int> images(size());
    for (int i = 1; i <= size(); ++i) images[i - 1] = images_[other.images_[i - 1] - 1];
    return Permutation(std::move(images));
}

Permutation Permutation::inverse() const {
    std::vector<int> images(size());
    for (int i = 1; i <= size(); ++i) images[images_[i - 1] - 1] = i;
    return Permutation(std::move(images));
}

std::vector<Permutation> all_permutations(int n) {
    std::vector<int> images(n);
    std::iota(images.begin(), images.end(), 1);
    std::vector<Permutation> out;
    do {
        out.push_back(Permutation::from_one_line(images));
    } while (std::next_permutation(images.begin(), images.end()));
    return out;
}

SymPoly::SymPoly(std::vector<Family> families) : families_(std::move(families)) {
    for (const Family& f : families_) {
        require(f.arity >= 0, "sympoly: negative arity");
        total_arity_ += f.arity;
    }
}

SymPoly SymPoly::monomial(std::vector<Family> families, const std::vector<int>& exponents,
                          Rational coeff) {
    SymPoly p(std::move(families));
    p.add_term(exponents, coeff);
    return p;
}

int SymPoly::family_offset(int k) const {
    require(k >= 0 && k < static_cast<int>(families_.size()), "sympoly: bad family index");
    int off = 0;
    for (int i = 0; i < k; ++i) off += families_[i].arity;
    return off;
}

int SymPoly::degree() const {
    int deg = 0;
    for (const auto& [e, c] : terms_)
        deg = std::max(deg, std::accumulate(e.begin(), e.end(), 0));
    return deg;
}

SymPoly& SymPoly::add_term(const std::vector<int>& exponents, const Rational& coeff) {
    require(static_cast<int>(exponents.size()) == total_arity_,
            "sympoly: exponent tuple does not match total arity");
    for (int e : exponents) require(e >= 0, "sympoly: negative exponent");
    if (coeff == 0) return *this;
    auto it = terms_.find(exponents);
    if (it == terms_.end()) {
        terms_.emplace(exponents, coeff);
    } else {
        it->second += coeff;
        if (it->second == 0) terms_.erase(it);
    }
    return *this;
}

bool SymPoly::operator==(const SymPoly& other) const { return terms_ == other.terms_; }

SymPoly SymPoly::permute_family(int k, const Permutation& sigma) const {
    int off = family_offset(k);
    require(sigma.size() == families_[k].arity, "sympoly: permutation size mismatch");
    SymPoly r(families_);
    std::vector<int> e(total_arity_);
    for (const auto& [ex, c] : terms_) {
        e = ex;
        // x_i -> x_{sigma(i)}: the exponent on slot sigma(i) becomes that of slot i.
        for (int i = 1; i <= sigma.size(); ++i) e[off + sigma(i) - 1] = ex[off + i - 1];
        r.add_term(e, c);
    }
    return r;
}

SymPoly SymPoly::permute_simultaneous(const Permutation& sigma) const {
    SymPoly r = *this;
    for (std::size_t k = 0; k < families_.size(); ++k) {
        require(families_[k].arity == sigma.size(),
                "sympoly: simultaneous action requires equal arities");
        r = r.permute_family(static_cast<int>(k), sigma);
    }
    return r;
}

SymPoly symmetrize_simultaneous(const SymPoly& p) {
    const auto& families = p.families();
    require(!families.empty(), "symmetrize: no families");
    const int n = families[0].arity;
    for (const auto& f : families)
        require(f.arity == n, "symmetrize: simultaneous action requires equal arities");

    SymPoly out(families);
    const int nf = static_cast<int>(families.size());
    for (const auto& [exp, coeff] : p.terms()) {
        // Columns of the monomial: per position i, the vector of exponents
        // across families. Distinct rearrangements = the monomial's orbit.
        std::vector<std::vector<int>> columns(n, std::vector<int>(nf));
        for (int k = 0; k < nf; ++k) {
            int off = p.family_offset(k);
            for (int i = 0; i < n; ++i) columns[i][k] = exp[off + i];
        }
        std::sort(columns.begin(), columns.end());
        std::vector<int> e(p.total_arity());
        do {
            for (int k = 0; k < nf; ++k) {
                int off = p.family_offset(k);
                for (int i = 0; i < n; ++i) e[off + i] = columns[i][k];
            }
            out.add_term(e, coeff);
        } while (std::next_permutation(columns.begin(), columns.end()));
    }
    return out;
}

namespace {

bool invariant_under(const SymPoly& p, const std::vector<Permutation>& gens, bool simultaneous,
                     int family = 0) {
    for (const Permutation& g : gens) {
        SymPoly q = simultaneous ? p.permute_simultaneous(g) : p.permute_family(family, g);
        if (!(q == p)) return false;
    }
    return true;
}

std::vector<Permutation> adjacent_transpositions(int n) {
    std::vector<Permutation> gens;
    for (int i = 1; i < n; ++i) {
        std::vector<int> images(n);
        std::iota(images.begin(), images.end(), 1);
        std::swap(images[i - 1], images[i]);
        gens.push_back(Permutation::from_one_line(std::move(images)));
    }
    return gens;
}

}  // namespace

bool is_invariant_family(const SymPoly& p, int family) {
    return invariant_under(p, adjacent_transpositions(p.families()[family].arity), false, family);
}

bool is_invariant_simultaneous(const SymPoly& p) {
    return invariant_under(p, adjacent_transpositions(p.families()[0].arity), true);
}

bool is_invariant_independent(const SymPoly& p) {
    for (std::size_t k = 0; k < p.families().size(); ++k)
        if (!is_invariant_family(p, static_cast<int>(k))) return false;
    return true;
}

Permutation tau(int n, int m, const Permutation& sigma, const Permutation& sigma_p) {
    return tau_r({n, m}, {sigma, sigma_p});
}

Permutation tau_r(const std::vector<int>& dims, const std::vector<Permutation>& sigmas) {
    require(dims.size() == sigmas.size() && !dims.empty(), "tau: dims/sigmas mismatch");
    long long total = 1;
    for (std::size_t s = 0; s < dims.size(); ++s) {
        require(dims[s] >= 1, "tau: dimensions must be >= 1");
        require(sigmas[s].size() == dims[s], "tau: permutation degree mismatch");
        total *= dims[s];
        require(total <= 1'000'000, "tau: product of dimensions too large");
    }
    const int N = static_cast<int>(total);
    std::vector<int> images(N);
    for (int i = 0; i < N; ++i) {
        // Mixed-radix digits of i, first factor slowest.
        int rest = i;
        std::vector<int> digits(dims.size());
        for (int s = static_cast<int>(dims.size()) - 1; s >= 0; --s) {
            digits[s] = rest % dims[s];
            rest /= dims[s];
        }
        int image = 0;
        for (std::size_t s = 0; s < dims.size(); ++s)
            image = image * dims[s] + (sigmas[s](digits[s] + 1) - 1);
        images[i] = image + 1;
    }
    return Permutation::from_one_line(std::move(images));
}

SymPoly phi_substitute(const SymPoly& p, int n, int m) { return phi_substitute_r(p, {n, m}); }

SymPoly phi_substitute_r(const SymPoly& p, const std::vector<int>& dims) {
    const auto& fams = p.families();
    require(fams.size() == dims.size(), "phi: one family per factor required");
    long long total = 1;
    for (int d : dims) {
        require(d >= 1, "phi: dimensions must be >= 1");
        total *= d;
    }
    for (const auto& f : fams)
        require(f.arity == static_cast<int>(total),
                "phi: family arity must equal the product of the dimensions");

    std::vector<SymPoly::Family> target;
    static const char* kGreek[] = {"alpha", "beta", "gamma", "delta", "epsilon", "zeta"};
    for (std::size_t s = 0; s < dims.size(); ++s) {
        std::string name = s < 6 ? kGreek[s] : "x" + std::to_string(s);
        target.push_back({name, dims[s]});
    }
    SymPoly out(target);
    int target_arity = std::accumulate(dims.begin(), dims.end(), 0);

    for (const auto& [exp, coeff] : p.terms()) {
        std::vector<int> e(target_arity, 0);
        for (std::size_t s = 0; s < fams.size(); ++s) {
            int off_src = p.family_offset(static_cast<int>(s));
            int off_dst = 0;
            for (std::size_t u = 0; u < s; ++u) off_dst += dims[u];
            for (int i = 0; i < static_cast<int>(total); ++i) {
                if (exp[off_src + i] == 0) continue;
                // Digit s of position i picks the target variable.
                int rest = i;
                int digit = 0;
                for (int u = static_cast<int>(dims.size()) - 1; u >= 0; --u) {
                    int d = rest % dims[u];
                    rest /= dims[u];
                    if (u == static_cast<int>(s)) digit = d;
                }
                e[off_dst + digit] += exp[off_src + i];
            }
        }
        out.add_term(e, coeff);
    }
    return out;
}

bool equivariance_check(const SymPoly& p, int n, int m, const Permutation& sigma,
                        const Permutation& sigma_p) {
    require(is_invariant_simultaneous(p),
            "equivariance_check: polynomial is not simultaneously invariant");
    SymPoly image = phi_substitute(p, n, m);
    SymPoly permuted = image.permute_family(0, sigma).permute_family(1, sigma_p);
    if (!(permuted == image)) return false;
    // Intermediate identity phi(tau . p) = phi(p).
    Permutation t = tau(n, m, sigma, sigma_p);
    SymPoly tp = p.permute_simultaneous(t);
    return phi_substitute(tp, n, m) == image;
}

std::vector<std::complex<double>> char_poly_invariants(const Mat& a) {
    require(a.rows() == a.cols(), "char_poly_invariants: matrix not square");
    const int d = static_cast<int>(a.rows());
    std::vector<std::complex<double>> e(d);
    if (d == 0) return e;
    if (d <= 6) {
        // Newton's identities over the power sums p_k = Tr(A^k):
        // e_k = (1/k) sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i.
        std::vector<std::complex<double>> p(d + 1), sym(d + 1);
        Mat power = a;
        for (int k = 1; k <= d; ++k) {
            p[k] = power.trace();
            if (k < d) power = power * a;
        }
        sym[0] = 1.0;
        for (int k = 1; k <= d; ++k) {
            std::complex<double> acc = 0.0;
            for (int i = 1; i <= k; ++i) acc += (i % 2 == 1 ? 1.0 : -1.0) * sym[k - i] * p[i];
            sym[k] = acc / static_cast<double>(k);
            e[k - 1] = sym[k];
        }
        return e;
    }
    Eigen::ComplexEigenSolver<Mat> es(a, false);
    Eigen::VectorXcd lambda = es.eigenvalues();
    // Vieta: expand prod (x-lambda_i), track elementary symmetric functions.
    std::vector<std::complex<double>> sym(d + 1, 0.0);
    sym[0] = 1.0;
    for (int i = 0; i < d; ++i)
        for (int k = std::min(i + 1, d); k >= 1; --k) sym[k] += lambda(i) * sym[k - 1];
    for (int k = 1; k <= d; ++k) e[k - 1] = sym[k];
    return e;
}

std::vector<std::vector<std::complex<double>>> joint_spectrum(const std::vector<Mat>& mats,
                                                              double tol, std::uint64_t seed) {
    require(!mats.empty(), "joint_spectrum: no matrices");
    const int d = static_cast<int>(mats[0].rows());
    for (const Mat& m : mats)
        require(m.rows() == d && m.cols() == d, "joint_spectrum: shape mismatch");
    double scale = 1.0;
    for (const Mat& m : mats) scale = std::max(scale, m.norm());
    for (std::size_t i = 0; i < mats.size(); ++i)
        for (std::size_t j = i + 1; j < mats.size(); ++j) {
            double comm = (mats[i] * mats[j] - mats[j] * mats[i]).norm();
            require(comm <= tol * scale * scale,
                    "joint_spectrum: matrices do not commute (||[A_i,A_j]|| = " +
                        std::to_string(comm) + ")");
        }

    for (int attempt = 0; attempt < 5; ++attempt) {
        std::mt19937_64 rng(seed + attempt);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        Mat combo = Mat::Zero(d, d);
        for (const Mat& m : mats) combo += Complex(unif(rng), unif(rng)) * m;

        Eigen::ComplexEigenSolver<Mat> es(combo, true);
        if (es.info() != Eigen::Success) continue;
        Mat v = es.eigenvectors();
        Eigen::FullPivLU<Mat> lu(v);
        if (!lu.isInvertible()) continue;
        Mat vinv = lu.inverse();

        // Accept only if the eigenbasis diagonalizes every input.
        bool ok = true;
        std::vector<Mat> diag;
        for (const Mat& m : mats) {
            Mat t = vinv * m * v;
            Mat off = t;
            off.diagonal().setZero();
            if (off.norm() > 1e-7 * scale * std::max(1.0, t.norm() / scale)) {
                ok = false;
                break;
            }
            diag.push_back(t);
        }
        if (!ok) continue;

        std::vector<std::vector<std::complex<double>>> tuples(d);
        for (int i = 0; i < d; ++i) {
            tuples[i].reserve(mats.size());
            for (const Mat& t : diag) tuples[i].push_back(t(i, i));
        }
        auto lex_less = [](const std::vector<std::complex<double>>& a,
                           const std::vector<std::complex<double>>& b) {
            for (std::size_t k = 0; k < a.size(); ++k) {
                if (a[k].real() != b[k].real()) return a[k].real() < b[k].real();
                if (a[k].imag() != b[k].imag()) return a[k].imag() < b[k].imag();
            }
            return false;
        };
        std::sort(tuples.begin(), tuples.end(), lex_less);
        return tuples;
    }
    throw PreconditionError(
        "joint_spectrum: defective generic combination (no simultaneous eigenbasis found)");
}

namespace {

using Cd = std::complex<double>;
using Tuple = std::vector<Cd>;

bool tuple_lex_less(const Tuple& a, const Tuple& b) {
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k].real() != b[k].real()) return a[k].real() < b[k].real();
        if (a[k].imag() != b[k].imag()) return a[k].imag() < b[k].imag();
    }
    return false;
}

/// Multiset equality of tuple lists: sort both lexicographically, then match
/// coordinate-wise at tolerance. Adequate for tolerance-separated data.
bool tuple_multiset_equal(std::vector<Tuple> a, std::vector<Tuple> b, double tol) {
    if (a.size() != b.size()) return false;
    std::sort(a.begin(), a.end(), tuple_lex_less);
    std::sort(b.begin(), b.end(), tuple_lex_less);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < a[i].size(); ++k)
            if (std::abs(a[i][k] - b[i][k]) > tol) return false;
    return true;
}

GridTestResult grid_test_impl(const std::vector<Tuple>& tuples, const std::vector<int>& dims,
                              double tol) {
    GridTestResult fail;
    long long expected = 1;
    for (int d : dims) expected *= d;
    if (static_cast<long long>(tuples.size()) != expected) return fail;

    for (const auto& t : tuples)
        for (const Cd& c : t)
            require(std::abs(c) > tol, "grid_test: zero eigenvalue (not in GL)");

    if (dims.size() == 1) {
        GridTestResult ok;
        ok.ok = true;
        ok.factors.resize(1);
        for (const auto& t : tuples) ok.factors[0].push_back(t[0]);
        auto less = [](const Cd& x, const Cd& y) {
            return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
        };
        std::sort(ok.factors[0].begin(), ok.factors[0].end(), less);
        return ok;
    }

    // Cluster by first coordinate at tolerance.
    std::vector<std::pair<Cd, std::vector<Tuple>>> clusters;
    for (const auto& t : tuples) {
        bool placed = false;
        for (auto& [rep, members] : clusters)
            if (std::abs(t[0] - rep) <= tol) {
                members.push_back(Tuple(t.begin() + 1, t.end()));
                placed = true;
                break;
            }
        if (!placed) clusters.push_back({t[0], {Tuple(t.begin() + 1, t.end())}});
    }

    // A grid assigns each distinct first coordinate a multiplicity mult_k with
    // cluster size mult_k * block, and the cluster's residual tuples are
    // mult_k copies of one common sub-grid.
    const long long block = expected / dims[0];
    std::vector<Cd> first_factor;
    std::vector<Tuple> reference;
    for (auto& [rep, members] : clusters) {
        if (members.size() % block != 0) return fail;
        long long mult = static_cast<long long>(members.size()) / block;
        for (long long k = 0; k < mult; ++k) first_factor.push_back(rep);
        if (reference.empty()) {
            // Sorted members list mult copies of each sub-grid element
            // consecutively; take every mult-th entry.
            std::vector<Tuple> sorted = members;
            std::sort(sorted.begin(), sorted.end(), tuple_lex_less);
            for (long long k = 0; k < block; ++k) reference.push_back(sorted[k * mult]);
        }
    }
    if (static_cast<int>(first_factor.size()) != dims[0]) return fail;

    for (auto& [rep, members] : clusters) {
        long long mult = static_cast<long long>(members.size()) / block;
        std::vector<Tuple> expected_members;
        for (long long k = 0; k < mult; ++k)
            expected_members.insert(expected_members.end(), reference.begin(), reference.end());
        if (!tuple_multiset_equal(members, expected_members, tol)) return fail;
    }

    std::vector<int> rest_dims(dims.begin() + 1, dims.end());
    GridTestResult sub = grid_test_impl(reference, rest_dims, tol);
    if (!sub.ok) return fail;

    GridTestResult ok;
    ok.ok = true;
    ok.factors.push_back(std::move(first_factor));
    for (auto& f : sub.factors) ok.factors.push_back(std::move(f));
    return ok;
}

}  // namespace

GridTestResult grid_test_r(const std::vector<std::vector<std::complex<double>>>& tuples,
                           const std::vector<int>& dims, double tol) {
    require(!dims.empty(), "grid_test: no dimensions");
    for (int d : dims) require(d >= 1, "grid_test: dimensions must be >= 1");
    for (const auto& t : tuples)
        require(t.size() == dims.size(), "grid_test: tuple length mismatch");
    return grid_test_impl(tuples, dims, tol);
}

GridTestResult grid_test(
    const std::vector<std::pair<std::complex<double>, std::complex<double>>>& pairs, int n, int m,
    double tol) {
    std::vector<std::vector<Cd>> tuples;
    tuples.reserve(pairs.size());
    for (const auto& [a, b] : pairs) tuples.push_back({a, b});
    return grid_test_r(tuples, {n, m}, tol);
}

}  // namespace quiverforge
