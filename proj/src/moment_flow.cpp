#include "quiverforge/moment_flow.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quiverforge {

Bracket bracket(const Representation& rep) {
    Bracket b;
    b.per_vertex.reserve(rep.dims().size());
    for (std::size_t v = 0; v < rep.dims().size(); ++v) {
        int d = rep.dim(static_cast<int>(v));
        b.per_vertex.push_back(Mat::Zero(d, d));
    }
    for (const Edge& e : rep.quiver()->edges()) {
        const Mat& m = rep.matrix(e.id);
        b.per_vertex[e.head] += m * m.adjoint();
        b.per_vertex[e.tail] -= m.adjoint() * m;
    }
    return b;
}

std::complex<double> inner_product(const Representation& a, const Representation& b) {
    require(*a.quiver() == *b.quiver() && a.dims() == b.dims(),
            "inner_product: dimension mismatch");
    std::complex<double> acc = 0.0;
    for (int e = 0; e < a.quiver()->num_edges(); ++e)
        acc += (a.matrix(e) * b.matrix(e).adjoint()).trace();
    return acc;
}

namespace {

void check_balanced(const Representation& rep, const std::vector<double>& theta_prime) {
    require(theta_prime.size() == rep.dims().size(), "vortex: theta' length mismatch");
    double dot = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < theta_prime.size(); ++i) {
        dot += theta_prime[i] * rep.dims()[i];
        scale += std::abs(theta_prime[i]) * rep.dims()[i];
    }
    require(std::abs(dot) <= 1e-9 * scale,
            "vortex: theta'.d != 0, no solutions can exist (trace obstruction)");
}

}  // namespace

std::vector<Mat> vortex_residual(const Representation& rep,
                                 const std::vector<double>& theta_prime, int kappa) {
    require(kappa == 1 || kappa == -1, "vortex: kappa must be +1 or -1");
    check_balanced(rep, theta_prime);
    std::vector<Mat> res = bracket(rep).per_vertex;
    for (std::size_t v = 0; v < res.size(); ++v) {
        int d = rep.dim(static_cast<int>(v));
        res[v] -= kappa * theta_prime[v] * Mat::Identity(d, d);
    }
    return res;
}

double max_residual_norm(const std::vector<Mat>& residuals) {
    double worst = 0.0;
    for (const Mat& r : residuals) worst = std::max(worst, r.norm());
    return worst;
}

const char* to_string(FlowStatus s) {
    switch (s) {
        case FlowStatus::converged: return "converged";
        case FlowStatus::max_iters: return "max_iters";
        case FlowStatus::collapsed_to_zero: return "collapsed_to_zero";
    }
    return "?";
}

const char* to_string(PolystabilityVerdict v) {
    switch (v) {
        case PolystabilityVerdict::polystable: return "polystable";
        case PolystabilityVerdict::not_polystable_evidence: return "not_polystable_evidence";
        case PolystabilityVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

double energy_of(const std::vector<Mat>& residuals) {
    double f = 0.0;
    for (const Mat& r : residuals) f += r.squaredNorm();
    return f;
}

std::vector<Mat> residuals_of(const std::vector<Mat>& mats, const Representation& shape,
                              const std::vector<double>& theta_prime, int kappa) {
    std::vector<Mat> res;
    res.reserve(shape.dims().size());
    for (std::size_t v = 0; v < shape.dims().size(); ++v) {
        int d = shape.dim(static_cast<int>(v));
        res.push_back((-kappa * theta_prime[v]) * Mat::Identity(d, d));
    }
    for (const Edge& e : shape.quiver()->edges()) {
        const Mat& m = mats[e.id];
        res[e.head] += m * m.adjoint();
        res[e.tail] -= m.adjoint() * m;
    }
    return res;
}

double squared_norm_of(const std::vector<Mat>& mats) {
    double acc = 0.0;
    for (const Mat& m : mats) acc += m.squaredNorm();
    return acc;
}

/// Eigendecompositions of the Hermitian residuals, reused for every trial
/// step of one iteration.
struct VertexExp {
    Eigen::VectorXd eigenvalues;
    Mat eigenvectors;

    Mat exp_scaled(double factor) const {
        if (eigenvalues.size() == 0) return Mat(0, 0);
        Eigen::VectorXcd d = (factor * eigenvalues.array()).exp();
        return eigenvectors * d.asDiagonal() * eigenvectors.adjoint();
    }
};

std::vector<Path> cycles_up_to(const QuiverPtr& q, int max_len) {
    std::vector<Path> cycles;
    for (int v = 0; v < q->num_vertices(); ++v) {
        std::vector<Path> paths;
        try {
            paths = enumerate_paths(q, v, v, max_len);
        } catch (const PreconditionError&) {
            continue;  // too many cycles to track; drift check skips this vertex
        }
        for (Path& p : paths)
            if (!p.is_trivial()) cycles.push_back(std::move(p));
    }
    return cycles;
}

std::vector<std::complex<double>> cycle_traces(const std::vector<Mat>& mats,
                                               const std::vector<Path>& cycles) {
    std::vector<std::complex<double>> traces;
    traces.reserve(cycles.size());
    for (const Path& p : cycles) {
        Mat acc = mats[p.edges().front()];
        for (std::size_t k = 1; k < p.edges().size(); ++k) acc = acc * mats[p.edges()[k]];
        traces.push_back(acc.trace());
    }
    return traces;
}

}  // namespace

std::pair<Representation, FlowReport> kempf_ness_flow(const Representation& rep,
                                                      const std::vector<double>& theta_prime,
                                                      const FlowConfig& cfg, int kappa) {
    require(cfg.step > 0.0, "flow: step must be positive");
    require(cfg.backtrack > 0.0 && cfg.backtrack < 1.0, "flow: backtrack must be in (0,1)");
    require(cfg.tol > 0.0, "flow: tol must be positive");
    require(kappa == 1 || kappa == -1, "flow: kappa must be +1 or -1");
    check_balanced(rep, theta_prime);

    const Quiver& q = *rep.quiver();
    std::vector<Mat> mats = rep.matrices();

    FlowReport report;
    report.kappa = kappa;

    const std::vector<Path> cycles = cycles_up_to(rep.quiver(), 4);
    const std::vector<std::complex<double>> traces0 = cycle_traces(mats, cycles);

    bool theta_nonzero = false;
    for (double t : theta_prime)
        if (t != 0.0) theta_nonzero = true;

    const long history_stride = std::max<long>(1, cfg.max_iters / 1000);
    double current_step = cfg.step;
    int consecutive_accepts = 0;

    std::vector<Mat> residuals = residuals_of(mats, rep, theta_prime, kappa);
    double f = energy_of(residuals);
    report.energy_history.push_back(f);

    long iter = 0;
    for (; iter < cfg.max_iters; ++iter) {
        double res_norm = max_residual_norm(residuals);
        if (!std::isfinite(f) || !std::isfinite(res_norm))
            throw std::runtime_error("flow: non-finite values encountered at iteration " +
                                     std::to_string(iter));
        if (res_norm <= cfg.tol) {
            report.status = FlowStatus::converged;
            break;
        }
        if (theta_nonzero && squared_norm_of(mats) < 1e-14) {
            report.status = FlowStatus::collapsed_to_zero;
            break;
        }

        // Gradient of f along the group directions; zero means a critical
        // point that is not a solution (the flow can make no progress).
        double grad_sq = 0.0;
        for (const Edge& e : q.edges())
            grad_sq += (residuals[e.head] * mats[e.id] - mats[e.id] * residuals[e.tail])
                           .squaredNorm();
        if (grad_sq <= 1e-30 * std::max(1.0, f)) {
            report.status = FlowStatus::max_iters;
            report.stagnated = true;
            break;
        }

        std::vector<VertexExp> decomp(q.num_vertices());
        for (int v = 0; v < q.num_vertices(); ++v) {
            Mat h = 0.5 * (residuals[v] + residuals[v].adjoint());
            Eigen::SelfAdjointEigenSolver<Mat> es(h);
            decomp[v].eigenvalues = es.eigenvalues();
            decomp[v].eigenvectors = es.eigenvectors();
        }

        double eps = current_step;
        bool accepted = false;
        bool backtracked = false;
        std::vector<Mat> trial(q.num_edges());
        while (eps >= 1e-18) {
            std::vector<Mat> exp_neg(q.num_vertices()), exp_pos(q.num_vertices());
            for (int v = 0; v < q.num_vertices(); ++v) {
                exp_neg[v] = decomp[v].exp_scaled(-eps);
                exp_pos[v] = decomp[v].exp_scaled(eps);
            }
            for (const Edge& e : q.edges())
                trial[e.id] = exp_neg[e.head] * mats[e.id] * exp_pos[e.tail];
            std::vector<Mat> trial_res = residuals_of(trial, rep, theta_prime, kappa);
            double f_trial = energy_of(trial_res);
            if (f_trial <= f) {
                mats.swap(trial);
                residuals.swap(trial_res);
                f = f_trial;
                accepted = true;
                break;
            }
            eps *= cfg.backtrack;
            backtracked = true;
        }
        if (!accepted) {
            report.status = FlowStatus::max_iters;
            report.stagnated = true;
            break;
        }
        current_step = eps;
        consecutive_accepts = backtracked ? 0 : consecutive_accepts + 1;
        if (consecutive_accepts >= 5) {
            current_step *= 1.2;
            consecutive_accepts = 0;
        }
        if ((iter + 1) % history_stride == 0) report.energy_history.push_back(f);
    }
    if (iter == cfg.max_iters) report.status = FlowStatus::max_iters;
    report.iterations = iter;
    report.energy_history.push_back(f);
    report.residual = max_residual_norm(residuals_of(mats, rep, theta_prime, kappa));

    double drift = 0.0;
    const std::vector<std::complex<double>> traces1 = cycle_traces(mats, cycles);
    for (std::size_t k = 0; k < traces0.size(); ++k) {
        double rel = std::abs(traces1[k] - traces0[k]) / std::max(1.0, std::abs(traces0[k]));
        drift = std::max(drift, rel);
    }
    report.cycle_trace_drift = drift;

    return {Representation::make(rep.quiver(), rep.dims(), std::move(mats)), report};
}

int dim_hom_space(const Representation& a, const Representation& b, double rel_cutoff,
                  double abs_cutoff) {
    require(*a.quiver() == *b.quiver(), "dim_hom_space: quiver mismatch");
    const Quiver& q = *a.quiver();
    std::vector<int> col_offset(q.num_vertices() + 1, 0);
    for (int v = 0; v < q.num_vertices(); ++v)
        col_offset[v + 1] = col_offset[v] + a.dim(v) * b.dim(v);
    int cols = col_offset[q.num_vertices()];
    if (cols == 0) return 0;

    int rows = 0;
    for (const Edge& e : q.edges()) rows += b.dim(e.head) * a.dim(e.tail);
    if (rows == 0) return cols;

    // Equations T_{ha} A_a - B_a T_{ta} = 0, unknowns vec(T_v) column-major.
    Mat system = Mat::Zero(rows, cols);
    int row0 = 0;
    for (const Edge& e : q.edges()) {
        const Mat& A = a.matrix(e.id);
        const Mat& B = b.matrix(e.id);
        int bh = b.dim(e.head), at = a.dim(e.tail);
        // (T_{h} A)_{p,q} = sum_r T_{h}(p,r) A(r,q)
        for (int p = 0; p < bh; ++p)
            for (int qc = 0; qc < at; ++qc) {
                int row = row0 + qc * bh + p;
                for (int r = 0; r < a.dim(e.head); ++r)
                    system(row, col_offset[e.head] + r * bh + p) += A(r, qc);
                for (int r = 0; r < b.dim(e.tail); ++r)
                    system(row, col_offset[e.tail] + qc * b.dim(e.tail) + r) -= B(p, r);
            }
        row0 += bh * at;
    }
    Eigen::JacobiSVD<Mat> svd(system);
    const auto& sv = svd.singularValues();
    double top = sv.size() > 0 ? sv(0) : 0.0;
    double cutoff = std::max(rel_cutoff * top, abs_cutoff);
    int rank = 0;
    for (int k = 0; k < sv.size(); ++k)
        if (sv(k) > cutoff) ++rank;
    return cols - rank;
}

CertifyResult certify_polystable(const Representation& rep, const std::vector<double>& theta,
                                 const FlowConfig& cfg, int kappa) {
    std::vector<double> theta_prime = balance_theta(theta, rep.dims());
    auto [limit, report] = kempf_ness_flow(rep, theta_prime, cfg, kappa);

    CertifyResult out{PolystabilityVerdict::inconclusive, report, limit, 0, 0};
    switch (report.status) {
        case FlowStatus::collapsed_to_zero:
            out.verdict = PolystabilityVerdict::not_polystable_evidence;
            break;
        case FlowStatus::max_iters: {
            if (report.stagnated) {
                out.verdict = PolystabilityVerdict::not_polystable_evidence;
                break;
            }
            // Compare energy across the tail of the recorded history.
            const auto& h = report.energy_history;
            double tail_drop = h.size() >= 2
                                   ? (h[h.size() - 2] - h.back()) / std::max(1e-300, h.back())
                                   : 1.0;
            out.verdict = tail_drop <= 1e-10 ? PolystabilityVerdict::not_polystable_evidence
                                             : PolystabilityVerdict::inconclusive;
            break;
        }
        case FlowStatus::converged: {
            // The flow output is always in the GL(d)-orbit of the input; the
            // input is polystable exactly when the ideal limit stays in that
            // orbit rather than its boundary, where the endomorphism algebra
            // jumps up (orbit-dimension semicontinuity). The computed limit
            // sits within O(sqrt(tol) * ||input||) of the ideal one, so its
            // algebra is measured with an absolute cutoff at that resolution.
            double resolution = 10.0 * std::sqrt(cfg.tol) * std::max(1.0, rep.norm());
            out.end_dim_input = dim_hom_space(rep, rep, 1e-7, resolution);
            out.end_dim_limit = dim_hom_space(limit, limit, 1e-7, resolution);
            out.verdict = out.end_dim_input == out.end_dim_limit
                              ? PolystabilityVerdict::polystable
                              : PolystabilityVerdict::not_polystable_evidence;
            break;
        }
    }
    return out;
}

int moduli_tangent_dim(const Representation& rep, const std::vector<double>& theta_prime,
                       int kappa, double precheck_tol, double sv_cutoff) {
    std::vector<Mat> res = vortex_residual(rep, theta_prime, kappa);
    require(max_residual_norm(res) <= precheck_tol,
            "moduli_tangent_dim: representation is not a vortex solution at the given tolerance");

    const Quiver& q = *rep.quiver();
    std::vector<int> edge_offset(q.num_edges() + 1, 0);
    for (int e = 0; e < q.num_edges(); ++e)
        edge_offset[e + 1] = edge_offset[e] + 2 * rep.matrix(e).size();
    const int unknowns = edge_offset[q.num_edges()];
    if (unknowns == 0) return 0;

    int vrows = 0;
    for (std::size_t v = 0; v < rep.dims().size(); ++v)
        vrows += rep.dim(static_cast<int>(v)) * rep.dim(static_cast<int>(v));
    const int rows = 4 * vrows;  // d_1 and d_0*, real and imaginary parts each
    if (rows == 0) return unknowns;

    auto apply = [&](const std::vector<Mat>& A) {
        // d_1: sum_{ha=i} (phi A* + A phi*) - sum_{ta=i} (phi* A + A* phi)
        // d_0*: sum_{ha=i} A phi* - sum_{ta=i} phi* A
        std::vector<Mat> d1, d0s;
        for (std::size_t v = 0; v < rep.dims().size(); ++v) {
            int d = rep.dim(static_cast<int>(v));
            d1.push_back(Mat::Zero(d, d));
            d0s.push_back(Mat::Zero(d, d));
        }
        for (const Edge& e : q.edges()) {
            const Mat& phi = rep.matrix(e.id);
            const Mat& a = A[e.id];
            d1[e.head] += phi * a.adjoint() + a * phi.adjoint();
            d1[e.tail] -= phi.adjoint() * a + a.adjoint() * phi;
            d0s[e.head] += a * phi.adjoint();
            d0s[e.tail] -= phi.adjoint() * a;
        }
        Eigen::VectorXd out(rows);
        int at = 0;
        for (std::size_t v = 0; v < d1.size(); ++v) {
            for (int c = 0; c < d1[v].cols(); ++c)
                for (int r = 0; r < d1[v].rows(); ++r) {
                    out(at++) = d1[v](r, c).real();
                    out(at++) = d1[v](r, c).imag();
                    out(at++) = d0s[v](r, c).real();
                    out(at++) = d0s[v](r, c).imag();
                }
        }
        return out;
    };

    Eigen::MatrixXd system(rows, unknowns);
    std::vector<Mat> basis(q.num_edges());
    for (int e = 0; e < q.num_edges(); ++e)
        basis[e] = Mat::Zero(rep.matrix(e).rows(), rep.matrix(e).cols());
    for (int e = 0; e < q.num_edges(); ++e) {
        for (int c = 0; c < basis[e].cols(); ++c)
            for (int r = 0; r < basis[e].rows(); ++r)
                for (int part = 0; part < 2; ++part) {
                    basis[e](r, c) = part == 0 ? Complex(1, 0) : Complex(0, 1);
                    int col = edge_offset[e] + 2 * (c * basis[e].rows() + r) + part;
                    system.col(col) = apply(basis);
                    basis[e](r, c) = 0.0;
                }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(system);
    const auto& sv = svd.singularValues();
    double top = sv.size() > 0 ? sv(0) : 0.0;
    int rank = 0;
    for (int k = 0; k < sv.size(); ++k)
        if (sv(k) > sv_cutoff * top) ++rank;
    return unknowns - rank;
}

TensorPolystabilityReport verify_tensor_polystability(const Representation& a,
                                                      const std::vector<double>& theta_prime_a,
                                                      const Representation& b,
                                                      const std::vector<double>& theta_prime_b,
                                                      double tol, int kappa) {
    TensorPolystabilityReport report;
    report.residual_a = max_residual_norm(vortex_residual(a, theta_prime_a, kappa));
    report.residual_b = max_residual_norm(vortex_residual(b, theta_prime_b, kappa));
    report.precondition_ok = report.residual_a <= tol && report.residual_b <= tol;

    TensorRepresentation t = tensor(a, b);
    const int n2 = t.map->factor2.num_vertices();
    std::vector<double> theta(t.rep.dims().size());
    for (int i = 0; i < t.map->factor1.num_vertices(); ++i)
        for (int j = 0; j < n2; ++j) theta[i * n2 + j] = theta_prime_a[i] + theta_prime_b[j];

    report.tensor_residual = max_residual_norm(vortex_residual(t.rep, theta, kappa));
    report.bound = 2.0 * std::max({a.norm(), b.norm(), 1.0}) * tol;
    report.ok = report.precondition_ok && report.tensor_residual <= report.bound;
    return report;
}

}  // namespace quiverforge
