#pragma once

// JSON and CSV formats.
//
//   matrix        {"rows": R, "cols": C, "entries": [[re, im], ...]}  row-major
//   named system  {"model": "dimer_trimer", "omega0": w, "g_a": ga, "g_b": gb, "k": [re, im]}
//                 {"model": "dimer", "omega0": w, "g_a": ga}
//                 {"model": "trimer", "omega0": w, "g_b": gb}
//   sweep CSV     epsilon,trial,max_splitting

#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "epkit/cmatrix.hpp"
#include "epkit/compose.hpp"
#include "epkit/ep_core.hpp"
#include "epkit/jordan.hpp"
#include "epkit/perturb.hpp"

namespace epkit::io {

using Json = nlohmann::json;

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);

Json vector_to_json(std::span<const Complex> v);

Json matrix_to_json(const ComplexMatrix& m);
/// Throws ParseError on missing fields, length mismatches or non-finite values.
ComplexMatrix matrix_from_json(const Json& j);

Json report_to_json(const EpReport& r);
Json chain_to_json(const JordanChain& c);
Json composite_to_json(const CompositeSystem& s);
Json fit_to_json(const SlopeFit& f);

/// A Hamiltonian read from disk: either a raw matrix or a named model. Named
/// composite models also carry their block structure.
struct LoadedSystem {
  ComplexMatrix h;
  std::optional<CompositeSystem> composite;
  std::string model;  // empty for raw matrices
};

LoadedSystem system_from_json(const Json& j);

Json read_json_file(const std::string& path);
LoadedSystem load_system(const std::string& path);
ComplexMatrix load_matrix(const std::string& path);

void write_sweep_csv(std::ostream& os, std::span<const SweepRecord> records);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

}  // namespace epkit::io
