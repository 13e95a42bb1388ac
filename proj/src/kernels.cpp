#include "xreg/kernels.hpp"

#include <cmath>

#include "xreg/error.hpp"
#include "xreg/numeric.hpp"

namespace xreg {

KernelSpec KernelSpec::exp_base(double r, MultidimMode mode) {
    return KernelSpec{KernelFamily::exp_base, 2.0, 0.0, r, mode};
}

KernelSpec KernelSpec::exp_base_shifted(double r, double q, MultidimMode mode) {
    return KernelSpec{KernelFamily::exp_base_shifted, 2.0, q, r, mode};
}

KernelSpec KernelSpec::inverse_power(double p, MultidimMode mode) {
    return KernelSpec{KernelFamily::inverse_power, p, 0.0, 2.0, mode};
}

KernelSpec KernelSpec::inverse_power_shifted(double p, double k, MultidimMode mode) {
    return KernelSpec{KernelFamily::inverse_power_shifted, p, k, 2.0, mode};
}

KernelSpec KernelSpec::uniform() { return KernelSpec{KernelFamily::uniform, 2.0, 0.0, 2.0, MultidimMode::sum}; }

void KernelSpec::validate() const {
    if (!std::isfinite(power) || !(power > 0.0)) throw ValidationError("kernel power p must be > 0");
    if (!std::isfinite(shift) || shift < 0.0) throw ValidationError("kernel shift must be finite and >= 0");
    if (uses_base() && !(std::isfinite(base) && base > 1.0))
        throw ValidationError("kernel base r must exceed 1, got " + format_double(base));
    if ((family == KernelFamily::inverse_power || family == KernelFamily::exp_base) && shift != 0.0)
        throw ValidationError(to_string(family) + " takes no shift; use the _shifted family");
}

bool KernelSpec::singular() const noexcept {
    return (family == KernelFamily::inverse_power || family == KernelFamily::inverse_power_shifted) &&
           shift == 0.0;
}

std::string to_string(KernelFamily f) {
    switch (f) {
        case KernelFamily::inverse_power: return "inverse_power";
        case KernelFamily::inverse_power_shifted: return "inverse_power_shifted";
        case KernelFamily::exp_base: return "exp_base";
        case KernelFamily::exp_base_shifted: return "exp_base_shifted";
        case KernelFamily::uniform: return "uniform";
    }
    return "unknown";
}

KernelFamily kernel_family_from_string(const std::string& name) {
    if (name == "inverse_power") return KernelFamily::inverse_power;
    if (name == "inverse_power_shifted") return KernelFamily::inverse_power_shifted;
    if (name == "exp_base") return KernelFamily::exp_base;
    if (name == "exp_base_shifted") return KernelFamily::exp_base_shifted;
    if (name == "uniform") return KernelFamily::uniform;
    throw ValidationError("unknown kernel family \"" + name + "\"");
}

std::string to_string(MultidimMode m) { return m == MultidimMode::sum ? "sum" : "product"; }

MultidimMode multidim_mode_from_string(const std::string& name) {
    if (name == "sum") return MultidimMode::sum;
    if (name == "product") return MultidimMode::product;
    throw ValidationError("unknown multidim mode \"" + name + "\" (expected sum or product)");
}

double combined_sq_distance(MultidimMode mode, std::span<const double> a, std::span<const double> b) noexcept {
    if (mode == MultidimMode::sum) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[i];
            s += d * d;
        }
        return s;
    }
    double s = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s *= d * d;
    }
    return s;
}

KernelEvaluator::KernelEvaluator(const KernelSpec& spec) : spec_(spec) {
    spec_.validate();
    if (spec_.uses_base()) log_base_ = std::log(spec_.base);
}

double KernelEvaluator::operator()(double s) const {
    switch (spec_.family) {
        case KernelFamily::uniform: return 1.0;
        case KernelFamily::exp_base:
        case KernelFamily::exp_base_shifted: {
            // r^(-s) = exp(-s ln r); below -745 the result is 0 in double anyway.
            const double arg = -s * log_base_;
            if (arg < -746.0) return 0.0;
            const double t = std::exp(arg);
            return spec_.family == KernelFamily::exp_base ? t : t / (1.0 + spec_.shift * t);
        }
        case KernelFamily::inverse_power:
        case KernelFamily::inverse_power_shifted: {
            if (s == 0.0 && spec_.shift == 0.0)
                throw SingularityError(describe(spec_) + " is singular at zero distance");
            const double mag = spec_.power == 2.0 ? s : std::pow(s, spec_.power / 2.0);
            return 1.0 / (mag + spec_.shift);
        }
    }
    return 0.0;
}

double weight(const KernelSpec& spec, std::span<const double> delta) {
    double s = 0.0;
    if (spec.multidim_mode == MultidimMode::sum) {
        for (double d : delta) s += d * d;
    } else {
        s = 1.0;
        for (double d : delta) s *= d * d;
    }
    return KernelEvaluator(spec)(s);
}

std::string describe(const KernelSpec& spec) {
    const std::string mode = ",mode=" + to_string(spec.multidim_mode) + ")";
    switch (spec.family) {
        case KernelFamily::uniform: return "uniform";
        case KernelFamily::exp_base: return "exp_base(r=" + format_double(spec.base) + mode;
        case KernelFamily::exp_base_shifted:
            return "exp_base(r=" + format_double(spec.base) + ",q=" + format_double(spec.shift) + mode;
        case KernelFamily::inverse_power: return "inverse_power(p=" + format_double(spec.power) + mode;
        case KernelFamily::inverse_power_shifted:
            return "inverse_power(p=" + format_double(spec.power) + ",k=" + format_double(spec.shift) + mode;
    }
    return "unknown";
}

}  // namespace xreg
