#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "toda_kdq/iso_flow.hpp"
#include "toda_kdq/kdq.hpp"
#include "toda_kdq/moment.hpp"
#include "toda_kdq/pseudo_toda.hpp"
#include "toda_kdq/toda.hpp"

namespace toda_kdq::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

// Throws InvalidArgument on unreadable files or malformed JSON.
json read_json_file(const std::string& path);

// {"a": [...], "b": [...]} or physical {"x": [...], "y": [...]}.
toda::FlaschkaState flaschka_state_from_json(const json& j);
json to_json(const toda::FlaschkaState& s);

// {"atoms": [...], "weights": [...], "half_line": bool}
moment::DiscreteMeasure measure_from_json(const json& j);
json to_json(const moment::DiscreteMeasure& mu);

// {"n": 2|3, "k_max": int, "components": [{"k", "ell", "atoms", "weights"}]}
kdq::PseudoPositiveMeasure pseudo_positive_measure_from_json(const json& j);
json to_json(const kdq::PseudoPositiveMeasure& mu);

// {"n", "N", "components": [{"k", "ell", "lambdas", "masses_tilde"}], "t"}
pseudo_toda::PseudoTodaState pseudo_toda_state_from_json(const json& j);
json to_json(const pseudo_toda::PseudoTodaState& s);

// Same schema as the pseudo-positive measure: atoms are lambdas, weights r^2.
iso_flow::IsoFlowState iso_flow_state_from_json(const json& j);
json to_json(const iso_flow::IsoFlowState& s);

// Complex numbers travel as [re, im]; a bare number is real.
std::complex<double> complex_from_json(const json& j);
json to_json(std::complex<double> z);

// Writes one CSV row; fields are already formatted.
void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);

}  // namespace toda_kdq::io
