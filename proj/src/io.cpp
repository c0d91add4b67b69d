#include "toda_kdq/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "toda_kdq/errors.hpp"

namespace toda_kdq::io {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidArgument(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw InvalidArgument(std::string(what) + " must be a number");
  return j.get<double>();
}

int integer(const json& j, const char* what) {
  if (!j.is_number_integer()) throw InvalidArgument(std::string(what) + " must be an integer");
  return j.get<int>();
}

std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) throw InvalidArgument(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

sphere::HarmonicIndex index_of(const json& c) {
  return {integer(field(c, "k"), "k"), integer(field(c, "ell"), "ell")};
}

int dimension(const json& j) {
  return integer(field(j, "n"), "n");
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open input file " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument("malformed JSON in " + path + ": " + e.what());
  }
}

toda::FlaschkaState flaschka_state_from_json(const json& j) {
  if (j.is_object() && j.contains("x")) {
    toda::PhysicalState p{numbers(field(j, "x"), "x"), numbers(field(j, "y"), "y")};
    if (p.x.size() != p.y.size() || p.x.empty()) {
      throw InvalidArgument("x and y must be nonempty and of equal length");
    }
    return toda::flaschka_map(p);
  }
  toda::FlaschkaState s{numbers(field(j, "a"), "a"), numbers(field(j, "b"), "b")};
  toda::validate(s);
  return s;
}

json to_json(const toda::FlaschkaState& s) {
  return {{"a", s.a}, {"b", s.b}};
}

moment::DiscreteMeasure measure_from_json(const json& j) {
  const bool half = j.is_object() && j.contains("half_line") && j.at("half_line").get<bool>();
  return moment::DiscreteMeasure(numbers(field(j, "atoms"), "atoms"),
                                 numbers(field(j, "weights"), "weights"), half);
}

json to_json(const moment::DiscreteMeasure& mu) {
  return {{"atoms", std::vector<double>(mu.atoms().begin(), mu.atoms().end())},
          {"weights", std::vector<double>(mu.weights().begin(), mu.weights().end())},
          {"half_line", mu.half_line()}};
}

kdq::PseudoPositiveMeasure pseudo_positive_measure_from_json(const json& j) {
  const int n = dimension(j);
  kdq::PseudoPositiveMeasure::ComponentMap comps;
  int kmax = 0;
  for (const auto& c : field(j, "components")) {
    const auto idx = index_of(c);
    kmax = std::max(kmax, idx.k);
    if (comps.contains(idx)) throw InvalidArgument("duplicate component index");
    comps.emplace(idx, moment::DiscreteMeasure(numbers(field(c, "atoms"), "atoms"),
                                               numbers(field(c, "weights"), "weights"), true));
  }
  if (j.contains("k_max")) kmax = integer(j.at("k_max"), "k_max");
  return kdq::PseudoPositiveMeasure(n, kmax, std::move(comps));
}

json to_json(const kdq::PseudoPositiveMeasure& mu) {
  json comps = json::array();
  for (const auto& [idx, m] : mu.components()) {
    comps.push_back({{"k", idx.k},
                     {"ell", idx.ell},
                     {"atoms", std::vector<double>(m.atoms().begin(), m.atoms().end())},
                     {"weights", std::vector<double>(m.weights().begin(), m.weights().end())}});
  }
  return {{"n", mu.n()}, {"k_max", mu.k_max()}, {"components", comps}};
}

pseudo_toda::PseudoTodaState pseudo_toda_state_from_json(const json& j) {
  const int n = dimension(j);
  pseudo_toda::PseudoTodaState::ComponentMap comps;
  for (const auto& c : field(j, "components")) {
    const auto idx = index_of(c);
    if (comps.contains(idx)) throw InvalidArgument("duplicate component index");
    comps.emplace(idx, pseudo_toda::Component{numbers(field(c, "lambdas"), "lambdas"),
                                              numbers(field(c, "masses_tilde"), "masses_tilde")});
  }
  const double t = j.contains("t") ? number(j.at("t"), "t") : 0.0;
  pseudo_toda::PseudoTodaState s(n, std::move(comps), t);
  if (j.contains("N")) {
    const int N = integer(j.at("N"), "N");
    for (const auto& [idx, c] : s.components()) {
      if (c.size() != N) throw InvalidArgument("component size differs from N");
    }
  }
  return s;
}

json to_json(const pseudo_toda::PseudoTodaState& s) {
  json comps = json::array();
  for (const auto& [idx, c] : s.components()) {
    comps.push_back({{"k", idx.k}, {"ell", idx.ell}, {"lambdas", c.lambdas},
                     {"masses_tilde", c.masses_tilde}});
  }
  json out = {{"n", s.n()}, {"components", comps}, {"t", s.time()}};
  if (s.common_size() >= 0) out["N"] = s.common_size();
  return out;
}

iso_flow::IsoFlowState iso_flow_state_from_json(const json& j) {
  const int n = dimension(j);
  iso_flow::IsoFlowState::ComponentMap comps;
  for (const auto& c : field(j, "components")) {
    const auto idx = index_of(c);
    if (comps.contains(idx)) throw InvalidArgument("duplicate component index");
    comps.emplace(idx, iso_flow::Component{numbers(field(c, "atoms"), "atoms"),
                                           numbers(field(c, "weights"), "weights")});
  }
  return iso_flow::IsoFlowState(n, std::move(comps));
}

json to_json(const iso_flow::IsoFlowState& s) {
  json comps = json::array();
  for (const auto& [idx, c] : s.components()) {
    comps.push_back({{"k", idx.k}, {"ell", idx.ell}, {"atoms", c.lambdas}, {"weights", c.masses}});
  }
  return {{"n", s.n()}, {"components", comps}, {"t", s.time()}};
}

std::complex<double> complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) {
    return {number(j[0], "real part"), number(j[1], "imaginary part")};
  }
  throw InvalidArgument("complex value must be a number or [re, im]");
}

json to_json(std::complex<double> z) {
  return json::array({z.real(), z.imag()});
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) os << ',';
    os << fields[i];
  }
  os << '\n';
}

}  // namespace toda_kdq::io
