#pragma once

#include <span>
#include <string>

namespace xreg {

enum class KernelFamily { inverse_power, inverse_power_shifted, exp_base, exp_base_shifted, uniform };

// How per-dimension differences combine into one squared distance s.
enum class MultidimMode { product, sum };

/// Weight-function family applied to predictor differences.
///
/// With s the combined squared distance (sum: sum of delta_a^2, product:
/// product of delta_a^2):
///
///   inverse_power          1 / s^(p/2)
///   inverse_power_shifted  1 / (s^(p/2) + shift)
///   exp_base               r^(-s)
///   exp_base_shifted       1 / (r^s + shift)
///   uniform                1
///
/// `shift` plays the role of k for inverse_power_shifted and q for
/// exp_base_shifted; the unshifted families require shift == 0.
struct KernelSpec {
    KernelFamily family = KernelFamily::exp_base;
    double power = 2.0;
    double shift = 0.0;
    double base = 2.0;
    MultidimMode multidim_mode = MultidimMode::sum;

    static KernelSpec exp_base(double r, MultidimMode mode = MultidimMode::sum);
    static KernelSpec exp_base_shifted(double r, double q, MultidimMode mode = MultidimMode::sum);
    static KernelSpec inverse_power(double p = 2.0, MultidimMode mode = MultidimMode::sum);
    static KernelSpec inverse_power_shifted(double p, double k, MultidimMode mode = MultidimMode::sum);
    static KernelSpec uniform();

    // Throws ValidationError on out-of-range parameters.
    void validate() const;

    // True when the weight is unbounded at s == 0.
    bool singular() const noexcept;

    bool uses_base() const noexcept {
        return family == KernelFamily::exp_base || family == KernelFamily::exp_base_shifted;
    }

    friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

std::string to_string(KernelFamily f);
KernelFamily kernel_family_from_string(const std::string& name);
std::string to_string(MultidimMode m);
MultidimMode multidim_mode_from_string(const std::string& name);

// Combined squared distance between two predictor vectors of equal length.
double combined_sq_distance(MultidimMode mode, std::span<const double> a, std::span<const double> b) noexcept;

/// Evaluates one kernel at many combined distances; caches ln r.
class KernelEvaluator {
public:
    explicit KernelEvaluator(const KernelSpec& spec);

    /// Weight at combined squared distance s >= 0. Throws SingularityError for
    /// a singular kernel at s == 0. Very large exponents saturate to 0.
    double operator()(double s) const;

    const KernelSpec& spec() const noexcept { return spec_; }

private:
    KernelSpec spec_;
    double log_base_ = 0.0;
};

/// w(delta) for a delta vector of the predictor dimension.
double weight(const KernelSpec& spec, std::span<const double> delta);

/// Canonical one-line form, e.g. "exp_base(r=1.2,mode=sum)".
std::string describe(const KernelSpec& spec);

}  // namespace xreg
