#pragma once

#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "xyzness/gate.hpp"
#include "xyzness/helix.hpp"

namespace xyzness::cli {

using nlohmann::json;

struct GridSpec {
  double start = 0;
  double stop = 0;
  int points = 0;
  bool operator==(const GridSpec&) const = default;
};

struct RunConfig {
  ModelParams params;
  std::optional<GridSpec> grid;
  NessEngine engine = NessEngine::Mpa;
  int oracle_every = 8;
  double tol = 1e-12;
  int max_iter = 20000;
  int ring_sites = 4;
  int alpha_samples = 8;
  std::uint64_t seed = 12345;
  StepParity parity = StepParity::EvenTop;
  bool profile_both_parities = false;
  std::string out;

  bool operator==(const RunConfig& o) const;
};

// Complex numbers are serialized as [re, im]. eta accepts the closure
// shorthands {"mod2_over": M} -> 2/M and {"mod2tau_over": M} -> 2 tau/M,
// both with an optional integer "multiple". alpha_r accepts
// "alpha_l_plus_u" and {"helix": {"chirality": ..., "kinks": ...}}.
RunConfig parse_config(const json& j);
RunConfig load_config(const std::string& path);
json config_to_json(const RunConfig& c);

// Grid of eta values along the regime's axis (real for CaseB, imaginary
// for CaseA).
std::vector<Cplx> grid_etas(const RunConfig& c);

// Deterministic float formatting shared by all CSV output.
std::string fmt_double(double v);
std::string fmt_cplx(Cplx v);  // "re,im" column pair

int env_thread_count();

}  // namespace xyzness::cli
