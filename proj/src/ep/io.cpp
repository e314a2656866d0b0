#include "epkit/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "epkit/errors.hpp"
#include "epkit/models.hpp"

namespace epkit::io {

namespace {

double finite_number(const Json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(std::string(what) + ": non-finite value");
  return v;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {finite_number(j, "complex"), 0.0};
  if (!j.is_array() || j.size() != 2) throw ParseError("complex: expected [re, im]");
  return {finite_number(j[0], "complex re"), finite_number(j[1], "complex im")};
}

Json vector_to_json(std::span<const Complex> v) {
  Json out = Json::array();
  for (const auto& z : v) out.push_back(complex_to_json(z));
  return out;
}

Json matrix_to_json(const ComplexMatrix& m) {
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", vector_to_json(m.entries())}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  const Json& jr = field(j, "rows");
  const Json& jc = field(j, "cols");
  if (!jr.is_number_unsigned() || !jc.is_number_unsigned()) {
    throw ParseError("matrix: rows and cols must be positive integers");
  }
  const auto rows = jr.get<std::size_t>();
  const auto cols = jc.get<std::size_t>();
  if (rows == 0 || cols == 0) throw ParseError("matrix: rows and cols must be positive integers");
  const Json& je = field(j, "entries");
  if (!je.is_array()) throw ParseError("matrix: entries must be an array");
  if (je.size() != rows * cols) {
    throw ParseError("matrix: expected " + std::to_string(rows * cols) + " entries, got " +
                     std::to_string(je.size()));
  }
  std::vector<Complex> entries;
  entries.reserve(je.size());
  for (const auto& e : je) entries.push_back(complex_from_json(e));
  return ComplexMatrix(rows, cols, std::move(entries));
}

Json report_to_json(const EpReport& r) {
  Json out{{"dim", r.dim},
           {"order", r.order ? Json(*r.order) : Json(nullptr)},
           {"ep_eigenvalue", complex_to_json(r.ep_eigenvalue)},
           {"response_strength", r.response_strength ? Json(*r.response_strength) : Json(nullptr)},
           {"partial", r.partial()}};
  return out;
}

Json chain_to_json(const JordanChain& c) {
  Json vectors = Json::array();
  for (const auto& v : c.vectors) vectors.push_back(vector_to_json(v));
  return Json{{"n", c.length()},
              {"vectors", vectors},
              {"response_strength", response_from_chain(c)},
              {"residuals",
               {{"kernel", c.residuals.kernel},
                {"chain", c.residuals.chain},
                {"normalization", c.residuals.normalization},
                {"orthogonality", c.residuals.orthogonality}}}};
}

Json composite_to_json(const CompositeSystem& s) {
  return Json{{"h_a", matrix_to_json(s.h_a)},
              {"h_b", matrix_to_json(s.h_b)},
              {"k", matrix_to_json(s.k)},
              {"h", matrix_to_json(s.h)},
              {"ep_eigenvalue", complex_to_json(s.ep_eigenvalue)}};
}

Json fit_to_json(const SlopeFit& f) {
  return Json{{"slope", f.slope},
              {"intercept", f.intercept},
              {"window", {f.eps_lo, f.eps_hi}},
              {"residual", f.residual},
              {"points", f.points}};
}

LoadedSystem system_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("system: expected a JSON object");
  LoadedSystem out;
  if (!j.contains("model")) {
    out.h = matrix_from_json(j);
    return out;
  }
  const Json& jm = j.at("model");
  if (!jm.is_string()) throw ParseError("system: model must be a string");
  out.model = jm.get<std::string>();
  const double omega0 = j.contains("omega0") ? finite_number(j.at("omega0"), "omega0") : 0.0;
  if (out.model == "dimer") {
    out.h = models::pt_dimer(omega0, finite_number(field(j, "g_a"), "g_a"));
  } else if (out.model == "trimer") {
    out.h = models::pt_trimer(omega0, finite_number(field(j, "g_b"), "g_b"));
  } else if (out.model == "dimer_trimer") {
    out.composite = models::dimer_trimer_system(omega0, finite_number(field(j, "g_a"), "g_a"),
                                                finite_number(field(j, "g_b"), "g_b"),
                                                complex_from_json(field(j, "k")));
    out.h = out.composite->h;
  } else {
    throw ParseError("system: unknown model '" + out.model + "'");
  }
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

LoadedSystem load_system(const std::string& path) {
  try {
    return system_from_json(read_json_file(path));
  } catch (const ParseError& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

ComplexMatrix load_matrix(const std::string& path) { return load_system(path).h; }

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRecord> records) {
  os << "epsilon,trial,max_splitting\n";
  for (const auto& r : records) os << format_double(r.eps) << ',' << r.trial << ',' << format_double(r.max_splitting) << '\n';
}

}  // namespace epkit::io
