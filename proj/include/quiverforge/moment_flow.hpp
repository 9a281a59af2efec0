#pragma once

#include "quiverforge/representation.hpp"
#include "quiverforge/tensor_rep.hpp"

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace quiverforge {

/// Moment-map bracket [phi,phi*]_i = sum_{ha=i} phi phi* - sum_{ta=i} phi* phi.
/// Each matrix is Hermitian and the global trace vanishes.
struct Bracket {
    std::vector<Mat> per_vertex;
};

Bracket bracket(const Representation& rep);

/// H(phi, psi) = sum_a Tr(phi_a psi_a*); conjugate-linear in the second slot.
std::complex<double> inner_product(const Representation& a, const Representation& b);

/// R_i = [phi,phi*]_i - kappa theta'_i Id. kappa = -1 is the convention under
/// which the Kronecker example with theta' = (1,-1) has solutions on the unit
/// sphere. Rejects unbalanced theta' (trace obstruction).
std::vector<Mat> vortex_residual(const Representation& rep,
                                 const std::vector<double>& theta_prime, int kappa = -1);

double max_residual_norm(const std::vector<Mat>& residuals);

struct FlowConfig {
    double step = 0.05;
    double backtrack = 0.5;
    double tol = 1e-8;
    long max_iters = 50'000;
    std::uint64_t seed = 0;
};

enum class FlowStatus { converged, max_iters, collapsed_to_zero };
const char* to_string(FlowStatus s);

struct FlowReport {
    FlowStatus status = FlowStatus::max_iters;
    long iterations = 0;
    double residual = 0.0;  // final max_i ||R_i||_F
    std::vector<double> energy_history;  // downsampled, nonincreasing
    double cycle_trace_drift = 0.0;      // max relative drift of cycle traces, length <= 4
    int kappa = -1;
    bool stagnated = false;  // line search found no descent while residual > tol
};

/// Discrete Kempf-Ness flow phi_a <- exp(-eps R_{ha}) phi_a exp(eps R_{ta})
/// with monotone backtracking on f = sum_i ||R_i||_F^2. Stays in the GL(d)
/// orbit of the input by construction.
std::pair<Representation, FlowReport> kempf_ness_flow(const Representation& rep,
                                                      const std::vector<double>& theta_prime,
                                                      const FlowConfig& cfg = {}, int kappa = -1);

enum class PolystabilityVerdict { polystable, not_polystable_evidence, inconclusive };
const char* to_string(PolystabilityVerdict v);

struct CertifyResult {
    PolystabilityVerdict verdict;
    FlowReport report;
    Representation limit;
    /// Endomorphism-algebra dimensions of input and flow limit; a converged
    /// flow certifies the input itself only when they agree (the limit lies in
    /// the open orbit rather than its boundary).
    int end_dim_input = 0;
    int end_dim_limit = 0;
};

CertifyResult certify_polystable(const Representation& rep, const std::vector<double>& theta,
                                 const FlowConfig& cfg = {}, int kappa = -1);

/// Complex dimension of Hom(a, b) in the category of quiver representations,
/// computed as an SVD nullity. Singular values below
/// max(rel_cutoff * sigma_max, abs_cutoff) count as zero; the absolute cutoff
/// lets callers measure a near-boundary point at a chosen resolution.
int dim_hom_space(const Representation& a, const Representation& b, double rel_cutoff = 1e-7,
                  double abs_cutoff = 0.0);

/// Real dimension of ker(d_1) \cap ker(d_0*) at a vortex solution: the tangent
/// space of the moduli space at [phi]. Requires the vortex residual of rep to
/// be <= precheck_tol.
int moduli_tangent_dim(const Representation& rep, const std::vector<double>& theta_prime,
                       int kappa = -1, double precheck_tol = 1e-6, double sv_cutoff = 1e-7);

struct TensorPolystabilityReport {
    bool precondition_ok = false;
    double residual_a = 0.0;
    double residual_b = 0.0;
    double tensor_residual = 0.0;
    double bound = 0.0;
    bool ok = false;
};

/// Checks that the tensor of two vortex solutions solves the vortex equation
/// at theta_(i,j) = theta'_i + theta''_j, within bound c tol for
/// c = 2 max(||a||, ||b||, 1).
TensorPolystabilityReport verify_tensor_polystability(const Representation& a,
                                                      const std::vector<double>& theta_prime_a,
                                                      const Representation& b,
                                                      const std::vector<double>& theta_prime_b,
                                                      double tol, int kappa = -1);

}  // namespace quiverforge
