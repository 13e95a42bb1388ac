#include "xreg/serialization.hpp"

#include <algorithm>

#include "xreg/error.hpp"

namespace xreg {

namespace detail {

void require_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& what) {
    if (!j.is_object()) throw ValidationError(what + " must be a JSON object");
    for (const auto& item : j.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* k) { return item.key() == k; });
        if (!known) throw ValidationError(what + ": unknown field \"" + item.key() + "\"");
    }
}

}  // namespace detail

namespace {

template <class T>
T get_field(const json& j, const char* key, const std::string& what) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(what + ": field \"" + key + "\" is missing or has the wrong type");
    }
}

template <class T>
T get_field_or(const json& j, const char* key, T fallback, const std::string& what) {
    if (!j.contains(key)) return fallback;
    return get_field<T>(j, key, what);
}

}  // namespace

json parse_json(std::string_view text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(what + " is not valid JSON: " + e.what());
    }
}

void to_json(json& j, const KernelSpec& k) {
    j = json{{"family", to_string(k.family)},
             {"power", k.power},
             {"shift", k.shift},
             {"base", k.base},
             {"multidim_mode", to_string(k.multidim_mode)}};
}

void from_json(const json& j, KernelSpec& k) {
    const std::string what = "KernelSpec";
    detail::require_keys(j, {"family", "power", "shift", "base", "multidim_mode"}, what);
    k = KernelSpec{};
    k.family = kernel_family_from_string(get_field<std::string>(j, "family", what));
    k.power = get_field_or<double>(j, "power", 2.0, what);
    k.shift = get_field_or<double>(j, "shift", 0.0, what);
    k.base = get_field_or<double>(j, "base", 2.0, what);
    k.multidim_mode = multidim_mode_from_string(get_field_or<std::string>(j, "multidim_mode", "sum", what));
    k.validate();
}

void to_json(json& j, const SynthSpec& s) {
    json domain = json::array();
    for (const auto& d : s.domain) domain.push_back({d.lo, d.hi});
    j = json{{"target_function", to_string(s.target_function)},
             {"coefficients", s.coefficients},
             {"n", s.n},
             {"domain", domain},
             {"noise_low", s.noise_low},
             {"noise_high", s.noise_high},
             {"seed", s.seed}};
}

void from_json(const json& j, SynthSpec& s) {
    const std::string what = "SynthSpec";
    detail::require_keys(j, {"target_function", "coefficients", "n", "domain", "noise_low", "noise_high", "seed"},
                         what);
    s = SynthSpec{};
    s.target_function = target_function_from_string(get_field<std::string>(j, "target_function", what));
    s.coefficients = get_field_or<std::vector<double>>(j, "coefficients", {}, what);
    s.n = get_field<std::size_t>(j, "n", what);
    s.domain.clear();
    const json& domain = j.at("domain");
    if (!domain.is_array() || domain.empty()) throw ValidationError("SynthSpec: domain must be a non-empty array");
    // Accept a single [lo, hi] pair as shorthand for one dimension.
    if (domain.size() == 2 && domain[0].is_number()) {
        s.domain.push_back({domain[0].get<double>(), domain[1].get<double>()});
    } else {
        for (const auto& d : domain) {
            if (!d.is_array() || d.size() != 2 || !d[0].is_number() || !d[1].is_number())
                throw ValidationError("SynthSpec: each domain entry must be [lo, hi]");
            s.domain.push_back({d[0].get<double>(), d[1].get<double>()});
        }
    }
    s.noise_low = get_field<double>(j, "noise_low", what);
    s.noise_high = get_field<double>(j, "noise_high", what);
    s.seed = get_field<std::uint64_t>(j, "seed", what);
    s.validate();
}

void to_json(json& j, const Normalization& n) {
    json cols = json::array();
    for (const auto& c : n.columns)
        cols.push_back({{"column", c.column}, {"name", c.name}, {"offset", c.offset}, {"scale", c.scale}});
    j = json{{"mode", to_string(n.mode)}, {"columns", cols}};
}

void to_json(json& j, const TuningRound& r) {
    j = json{{"round", r.round},
             {"r", r.r},
             {"q", r.q},
             {"explained_fraction", r.explained_fraction},
             {"randomness_index", r.randomness_index},
             {"noise_share", r.noise_share}};
}

void to_json(json& j, const TuningResult& t) {
    j = json{{"kernel", t.kernel},
             {"kernel_description", describe(t.kernel)},
             {"variance_ratio", t.variance_ratio},
             {"randomness_index", t.randomness_index},
             {"explained_fraction", t.explained_fraction},
             {"objective", t.objective},
             {"rounds", t.rounds},
             {"converged", t.converged}};
}

void from_json(const json& j, TuningResult& t) {
    const std::string what = "TuningResult";
    detail::require_keys(j,
                         {"kernel", "kernel_description", "variance_ratio", "randomness_index",
                          "explained_fraction", "objective", "rounds", "converged"},
                         what);
    t = TuningResult{};
    t.kernel = j.at("kernel").get<KernelSpec>();
    t.variance_ratio = get_field<double>(j, "variance_ratio", what);
    t.randomness_index = get_field<double>(j, "randomness_index", what);
    t.explained_fraction = get_field<double>(j, "explained_fraction", what);
    t.objective = get_field<double>(j, "objective", what);
    t.converged = get_field<bool>(j, "converged", what);
    for (const auto& r : j.at("rounds")) {
        detail::require_keys(r, {"round", "r", "q", "explained_fraction", "randomness_index", "noise_share"},
                             "TuningRound");
        t.rounds.push_back({get_field<std::size_t>(r, "round", what), get_field<double>(r, "r", what),
                            get_field<double>(r, "q", what), get_field<double>(r, "explained_fraction", what),
                            get_field<double>(r, "randomness_index", what),
                            get_field<double>(r, "noise_share", what)});
    }
}

void to_json(json& j, const LassoModel& m) {
    j = json{{"degree", m.degree},
             {"lambda", m.lambda},
             {"coefficients", m.coefficients},
             {"feature_means", m.feature_means},
             {"feature_scales", m.feature_scales},
             {"standardized_slopes", m.standardized_slopes},
             {"response_mean", m.response_mean},
             {"converged", m.converged},
             {"iterations", m.iterations},
             {"underdetermined", m.underdetermined}};
}

void to_json(json& j, const SolveResult& s) {
    j = json{{"z", s.z}, {"iterations", s.iterations}, {"residual", s.residual}, {"converged", s.converged}};
}

}  // namespace xreg
