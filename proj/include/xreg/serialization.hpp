#pragma once

// JSON forms of the public value types (nlohmann::json ADL hooks).
// Parsing is strict: unknown keys and wrong types raise ValidationError.

#include "json.hpp"
#include "xreg/dataset.hpp"
#include "xreg/distance_solver.hpp"
#include "xreg/kernels.hpp"
#include "xreg/lasso.hpp"
#include "xreg/tuning.hpp"

namespace xreg {

using json = nlohmann::json;

void to_json(json& j, const KernelSpec& k);
void from_json(const json& j, KernelSpec& k);

void to_json(json& j, const SynthSpec& s);
void from_json(const json& j, SynthSpec& s);

void to_json(json& j, const Normalization& n);

void to_json(json& j, const TuningRound& r);
void to_json(json& j, const TuningResult& t);
void from_json(const json& j, TuningResult& t);

void to_json(json& j, const LassoModel& m);
void to_json(json& j, const SolveResult& s);

/// Parses text into a json value, mapping parse errors to ValidationError.
json parse_json(std::string_view text, const std::string& what);

namespace detail {
// Throws ValidationError if `j` is not an object or has keys outside `allowed`.
void require_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& what);
}  // namespace detail

}  // namespace xreg
