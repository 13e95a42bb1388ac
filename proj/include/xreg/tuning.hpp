#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "xreg/dataset.hpp"
#include "xreg/kernels.hpp"

namespace xreg {

struct TuningRound {
    std::size_t round = 0;
    double r = 0.0;
    double q = 0.0;
    double explained_fraction = 1.0;
    double randomness_index = 0.0;
    double noise_share = 0.0;  // s_t; 0 for single-shot tuning
};

struct TuningResult {
    KernelSpec kernel;
    double variance_ratio = 0.0;  // Var(e) / Var(Y) at the selected parameters
    double randomness_index = 0.0;
    double explained_fraction = 1.0;
    double objective = 0.0;  // value of the minimized objective
    std::vector<TuningRound> rounds;
    bool converged = false;
};

// Search interval for the exponential base r; both ends must exceed 1.
struct RBounds {
    double lo = 1.000001;
    double hi = 1e300;
};

struct RandomnessIndex {
    double value = 0.0;
    std::size_t excluded = 0;  // samples with |y_i| < 1e-9
};

/// Mean of |e_i / y_i - 1| over samples with |y_i| >= 1e-9.
/// Throws DegenerateError when every sample is excluded.
RandomnessIndex randomness_index(std::span<const double> e, std::span<const double> y);

struct VarianceMatch {
    double loss = 0.0;            // (Var(Y)/Var(e) - 1)^2, +inf when degenerate
    double variance_ratio = 0.0;  // Var(e)/Var(Y)
    bool degenerate = false;
    std::string reason;
};

/// Leave-one-out variance match for `family` with its base replaced by r.
VarianceMatch evaluate_variance_match(double r, const Dataset& dataset, const KernelSpec& family,
                                      unsigned threads = 1);

/// (Var(Y)/Var(e) - 1)^2 with e the leave-one-out predictions; returns +inf
/// when Var(e) == 0 (see evaluate_variance_match for the explanation).
double variance_match_loss(double r, const Dataset& dataset, const KernelSpec& family, unsigned threads = 1);

/// Chooses r minimizing (Var(e) / (EF * Var(Y)) - 1)^2: a 32-point grid
/// uniform in log(ln r), then golden-section refinement around the best grid
/// point until r_hi / r_lo - 1 <= 1e-4. Ties resolve toward smaller r.
TuningResult tune_r(const Dataset& dataset, const KernelSpec& family, RBounds bounds = {},
                    double explained_fraction = 1.0, unsigned threads = 1);

struct NoiseShare {
    double share = 0.0;      // clamped to [0, 0.95]
    double raw = 0.0;        // before clamping
    std::size_t excluded = 0;
};

/// Noise share implied by residual ratios rho_i = y_i / e_i (|e_i| < 1e-9
/// excluded): Var_w(rho) * mean(e^2) / Var(y), where Var_w weights each
/// ratio by e_i^2. Equivalently mean((y - c e)^2) / Var(y) with
/// c = sum(e y) / sum(e^2).
NoiseShare noise_share(std::span<const double> e, std::span<const double> y);

/// Damped fixed-point search for the explained fraction EF:
/// EF_{t+1} = (1 - damping) EF_t + damping (1 - s_t), starting at EF = 1,
/// stopping when |EF_{t+1} - EF_t| <= 1e-3 or after max_rounds.
TuningResult iterate_randomness(const Dataset& dataset, const KernelSpec& family, std::size_t max_rounds = 20,
                                double damping = 0.5, RBounds bounds = {}, unsigned threads = 1);

struct TwoParamOptions {
    RBounds r_bounds{};
    double q_lo = 0.0;
    double q_hi = 100.0;
    double lambda_var = 0.7;
    double lambda_fit = 0.3;
    unsigned threads = 1;
};

/// J(r, q) = lambda_var * variance_match_loss + lambda_fit * SSE(e, Y) / Var(Y) / n
/// for the exp_base_shifted kernel with base r and shift q.
double two_param_objective(const Dataset& dataset, double r, double q, double lambda_var, double lambda_fit,
                           MultidimMode mode = MultidimMode::sum, unsigned threads = 1);

/// Minimizes two_param_objective. A 16 x 16 grid (uniform in log(ln r) and
/// log(1 + q)) seeds the four best starts; each start is refined by
/// alternating finite-difference gradient descent per coordinate.
TuningResult tune_two_param(const Dataset& dataset, const TwoParamOptions& options = {},
                            MultidimMode mode = MultidimMode::sum);

}  // namespace xreg
