#pragma once

// JSON forms of states, intervals and unitaries.
//
//   cylinder state:   {"a": "p/q", "depth": n, "weights": {"<bits>": "p/q"}}
//   suspension state: {"a": "p/q", "base_depth": n, "time_depth": m,
//                      "weights": {"<bits>:<cell>": "p/q"}}
//   interval:         {"lo": "p/q", "hi": "p/q", "decimal_lo": "...", "decimal_hi": "..."}
//   unitary:          {"order": q, "exponents": {"<j>": e_j}}
//
// Omitted words carry weight 0. Bit strings list x_1 first.

#include <dyadic/eigen.hpp>
#include <dyadic/measure.hpp>
#include <dyadic/rational.hpp>
#include <dyadic/suspension.hpp>

#include <json.hpp>

#include <string>
#include <variant>

namespace dyadic {

using Json = nlohmann::json;

class malformed_input : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline Rational rational_field(Json const& j, char const* what) {
  if (!j.is_string()) throw malformed_input(std::string(what) + " must be a \"p/q\" string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (std::invalid_argument const& e) {
    throw malformed_input(std::string(what) + ": " + e.what());
  }
}

inline std::size_t depth_field(Json const& doc, char const* key) {
  if (!doc.contains(key) || !doc.at(key).is_number_unsigned()) {
    throw malformed_input(std::string("missing or invalid \"") + key + "\"");
  }
  auto const d = doc.at(key).get<std::size_t>();
  if (d > kMaxDenseDepth) throw malformed_input(std::string("\"") + key + "\" too large");
  return d;
}

inline BitWord word_key(std::string const& key, std::size_t depth) {
  BitWord w;
  try {
    w = BitWord::parse(key);
  } catch (std::invalid_argument const& e) {
    throw malformed_input(e.what());
  }
  if (w.depth() != depth) throw malformed_input("word '" + key + "' does not have the declared depth");
  return w;
}

inline BernoulliParam param_field(Json const& doc) {
  if (!doc.contains("a")) throw malformed_input("missing \"a\"");
  try {
    return BernoulliParam(rational_field(doc.at("a"), "a"));
  } catch (std::domain_error const& e) {
    throw malformed_input(e.what());
  }
}

}  // namespace detail

inline Json interval_to_json(TVInterval const& iv, int precision) {
  return Json{{"lo", to_string(iv.lo)},
              {"hi", to_string(iv.hi)},
              {"decimal_lo", to_decimal(iv.lo, precision)},
              {"decimal_hi", to_decimal(iv.hi, precision)}};
}

inline TVInterval interval_from_json(Json const& doc) {
  return {detail::rational_field(doc.at("lo"), "lo"), detail::rational_field(doc.at("hi"), "hi")};
}

inline Json state_to_json(CylinderState const& phi) {
  Json weights = Json::object();
  for (std::uint64_t j = 0; j < phi.weights().size(); ++j) {
    if (sgn(phi.weights()[j]) != 0) weights[index_to_word(phi.depth(), j).str()] = to_string(phi.weights()[j]);
  }
  return Json{{"a", to_string(phi.param().a())}, {"depth", phi.depth()}, {"weights", weights}};
}

inline Json state_to_json(SuspensionState const& phi) {
  Json weights = Json::object();
  for (std::uint64_t w = 0; w < atoms_at(phi.base_depth()); ++w) {
    for (std::uint64_t i = 0; i < phi.cells(); ++i) {
      if (sgn(phi.weight(w, i)) == 0) continue;
      weights[index_to_word(phi.base_depth(), w).str() + ":" + std::to_string(i)] = to_string(phi.weight(w, i));
    }
  }
  return Json{{"a", to_string(phi.param().a())},
              {"base_depth", phi.base_depth()},
              {"time_depth", phi.time_depth()},
              {"weights", weights}};
}

/// Throws malformed_input for schema errors (including an out-of-range "a")
/// and invalid_state for weights that are negative or do not sum to 1.
inline CylinderState cylinder_state_from_json(Json const& doc) {
  if (!doc.is_object()) throw malformed_input("state must be a JSON object");
  auto param = detail::param_field(doc);
  auto const depth = detail::depth_field(doc, "depth");
  if (!doc.contains("weights") || !doc.at("weights").is_object()) throw malformed_input("missing \"weights\" object");
  std::vector<Rational> weights(atoms_at(depth));
  for (auto const& [key, value] : doc.at("weights").items()) {
    weights[detail::word_key(key, depth).index()] = detail::rational_field(value, "weight");
  }
  return {std::move(param), depth, std::move(weights)};
}

inline SuspensionState suspension_state_from_json(Json const& doc) {
  if (!doc.is_object()) throw malformed_input("state must be a JSON object");
  auto param = detail::param_field(doc);
  auto const base_depth = detail::depth_field(doc, "base_depth");
  auto const time_depth = detail::depth_field(doc, "time_depth");
  if (base_depth + time_depth > kMaxDenseDepth) throw malformed_input("suspension state too large");
  if (!doc.contains("weights") || !doc.at("weights").is_object()) throw malformed_input("missing \"weights\" object");
  std::uint64_t const cells = std::uint64_t{1} << time_depth;
  std::vector<Rational> weights(atoms_at(base_depth + time_depth));
  for (auto const& [key, value] : doc.at("weights").items()) {
    auto const colon = key.find(':');
    if (colon == std::string::npos) throw malformed_input("suspension weight key must be '<bits>:<cell>'");
    auto const word = detail::word_key(key.substr(0, colon), base_depth);
    std::uint64_t cell = 0;
    try {
      std::size_t used = 0;
      cell = std::stoull(key.substr(colon + 1), &used);
      if (used != key.size() - colon - 1) throw std::invalid_argument("junk");
    } catch (std::exception const&) {
      throw malformed_input("bad cell index in key '" + key + "'");
    }
    if (cell >= cells) throw malformed_input("cell index out of range in key '" + key + "'");
    weights[word.index() * cells + cell] = detail::rational_field(value, "weight");
  }
  return {std::move(param), base_depth, time_depth, std::move(weights)};
}

using AnyState = std::variant<CylinderState, SuspensionState>;

/// Dispatches on the schema: "base_depth" marks a suspension state.
inline AnyState state_from_json(Json const& doc) {
  if (doc.is_object() && doc.contains("base_depth")) return suspension_state_from_json(doc);
  return cylinder_state_from_json(doc);
}

inline Json unitary_to_json(RootOfUnityFunction const& u) {
  Json exponents = Json::object();
  for (std::uint64_t j = 0; j < u.exponents.size(); ++j) exponents[std::to_string(j)] = u.exponents[j];
  return Json{{"order", u.order}, {"exponents", exponents}};
}

}  // namespace dyadic
