#pragma once

#include <string>
#include <vector>

#include "cyclefill/chains.hpp"
#include "cyclefill/harness.hpp"
#include "cyclefill/models.hpp"
#include "cyclefill/transport.hpp"
#include "cyclefill/witness.hpp"

namespace cyclefill {

// Serializers emit compact JSON whose decimals parse back to the identical
// double. Shapes:
//   cycle      {"n":, "k":, "cells":[{"verts":[[x,..],..], "coef":+-1},..]}
//   complex    {"num_vertices":, "k":, "cells":[{"verts":[id,..], "coef":+-1},..]}
//   0-cycle    {"ambient":{"kind":"cube"|"sphere","d":}, "points":[{"pos":[..],"sign":+-1,"src":i},..]}
//   planes     {"n":, "k":, "planes":[{"basis":[[col],..], "offset":[..]},..]}
//   subspaces  {"n":, "k":, "subspaces":[{"basis":[[col],..]},..]}
// Basis matrices are stored column by column. "src" appears only when the
// 0-cycle carries per-point provenance.
std::string to_json(const PolyCycle& z);
std::string to_json(const Pseudomanifold& m);
std::string to_json(const ZeroCycle& z);
std::string to_json(const std::vector<AffineKPlane>& planes, int n, int k);
std::string to_json(const std::vector<OrientedSubspace>& subspaces, int n, int k);
std::string to_json(const ExperimentConfig& config);
std::string to_json(const ConcentrationReport& report);
std::string to_json(const CorrelationReport& report);

// Parsers are strict: unknown keys, wrong arity, bad coefficients, and
// out-of-range coordinates all throw std::invalid_argument. The config
// parser throws config_error instead and fills absent optional fields
// (master_seed, quadrature_m, winding_h, perturbation_trials, solve,
// witness) with their defaults.
PolyCycle polycycle_from_json(const std::string& text);
Pseudomanifold pseudomanifold_from_json(const std::string& text);
ZeroCycle zerocycle_from_json(const std::string& text);
std::vector<AffineKPlane> planes_from_json(const std::string& text);
std::vector<OrientedSubspace> subspaces_from_json(const std::string& text);
ExperimentConfig config_from_json(const std::string& text);

// {"fv":, "plan":} where the plan lists pairings, boundary assignments, and
// the total cost, or is null when the method reports none. The second
// overload is for raster estimates: {"fv":, "error_bound":, "plan":null}.
std::string fv_report_json(double fv, const TransportPlan* plan);
std::string fv_report_json(double fv, double error_bound);

// {"integral":, "lip":, "bound":}, plus the atom list when requested.
std::string witness_report_json(const WitnessFunction& w, const ZeroCycle& z,
                                bool with_atoms);

// {"fits":[{"observable":, "power":, "sqrtlog":},..], "notes":[..]}.
std::string fits_json(const std::vector<ObservableFits>& fits,
                      const std::vector<std::string>& notes);

// Whole-file helpers; failures surface as std::runtime_error.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace cyclefill
