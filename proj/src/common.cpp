#include "mslab/common.hpp"

#include <numbers>

namespace mslab {

namespace {

std::string_view strip_prefix(std::string_view name) {
  if (name.starts_with("tol_")) name.remove_prefix(4);
  return name;
}

}  // namespace

void Tolerances::set(std::string_view name, double value) {
  if (!(value > 0.0)) {
    throw Error(ErrorKind::invalid_input, "tolerance must be positive: " + std::string(name));
  }
  auto key = strip_prefix(name);
  if (key == "pair") pair = value;
  else if (key == "rank") rank = value;
  else if (key == "op") op = value;
  else if (key == "gram") gram = value;
  else if (key == "eval") eval = value;
  else if (key == "fr") fr = value;
  else if (key == "match") match = value;
  else if (key == "root") root = value;
  else if (key == "annihilate") annihilate = value;
  else if (key == "lemma") lemma = value;
  else if (key == "kernel") kernel = value;
  else if (key == "oracle") oracle = value;
  else if (key == "span") span = value;
  else throw Error(ErrorKind::invalid_input, "unknown tolerance: " + std::string(name));
}

double Tolerances::get(std::string_view name) const {
  auto key = strip_prefix(name);
  if (key == "pair") return pair;
  if (key == "rank") return rank;
  if (key == "op") return op;
  if (key == "gram") return gram;
  if (key == "eval") return eval;
  if (key == "fr") return fr;
  if (key == "match") return match;
  if (key == "root") return root;
  if (key == "annihilate") return annihilate;
  if (key == "lemma") return lemma;
  if (key == "kernel") return kernel;
  if (key == "oracle") return oracle;
  if (key == "span") return span;
  throw Error(ErrorKind::invalid_input, "unknown tolerance: " + std::string(name));
}

const std::vector<std::string>& Tolerances::names() {
  static const std::vector<std::string> all{"annihilate", "eval",  "fr",   "gram",  "kernel", "lemma", "match",
                                            "op",         "oracle", "pair", "rank", "root",   "span"};
  return all;
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::degenerate_input: return "degenerate-input";
    case ErrorKind::numerical_failure: return "numerical-failure";
    case ErrorKind::not_factorable: return "not-factorable";
    case ErrorKind::pole: return "pole";
    case ErrorKind::divisibility: return "divisibility";
    case ErrorKind::boundary_zero: return "boundary-zero";
    case ErrorKind::not_in_hardy: return "not-in-H2";
    case ErrorKind::index_out_of_range: return "index-out-of-range";
    case ErrorKind::out_of_disk: return "out-of-disk";
    case ErrorKind::near_pole: return "near-pole";
    case ErrorKind::not_applicable: return "not-applicable";
    case ErrorKind::not_c0: return "not-C0";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::interpolation_undefined: return "interpolation-undefined";
    case ErrorKind::match_failure: return "match-failure";
    case ErrorKind::spanning_failure: return "spanning-failure";
    case ErrorKind::witness_failure: return "witness-failure";
    case ErrorKind::size_mismatch: return "size-mismatch";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

Vector circle_points(int count) {
  Vector pts(count);
  for (int k = 0; k < count; ++k) {
    pts[k] = std::polar(1.0, 2.0 * std::numbers::pi * k / count);
  }
  return pts;
}

}  // namespace mslab
