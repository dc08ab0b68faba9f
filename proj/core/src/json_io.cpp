#include "cyclefill/json_io.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace cyclefill {

namespace {

// ordered_json keeps insertion order, so dumps match the documented shapes
// key for key.
using json = nlohmann::ordered_json;

void expect_keys(const json& j, std::initializer_list<const char*> keys, const char* what) {
  if (!j.is_object()) throw std::invalid_argument(std::string(what) + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* key : keys) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) throw std::invalid_argument("unexpected key \"" + it.key() + "\" in " + what);
  }
}

const json& need(const json& j, const char* key, const char* what) {
  const auto it = j.find(key);
  if (it == j.end())
    throw std::invalid_argument(std::string(what) + " is missing \"" + key + "\"");
  return *it;
}

int get_int(const json& j, const char* what) {
  if (!j.is_number_integer())
    throw std::invalid_argument(std::string(what) + " must be an integer");
  return j.get<int>();
}

bool get_bool(const json& j, const char* what) {
  if (!j.is_boolean()) throw std::invalid_argument(std::string(what) + " must be a boolean");
  return j.get<bool>();
}

double get_double(const json& j, const char* what) {
  if (!j.is_number()) throw std::invalid_argument(std::string(what) + " must be a number");
  return j.get<double>();
}

int get_sign(const json& j, const char* what) {
  const int s = get_int(j, what);
  if (s != 1 && s != -1) throw std::invalid_argument(std::string(what) + " must be +1 or -1");
  return s;
}

Vec get_vec(const json& j, std::size_t len, const char* what) {
  if (!j.is_array() || j.size() != len)
    throw std::invalid_argument(std::string(what) + " must be an array of " +
                                std::to_string(len) + " numbers");
  Vec v;
  v.reserve(len);
  for (const auto& x : j) v.push_back(get_double(x, what));
  return v;
}

json columns_to_json(const Eigen::MatrixXd& m) {
  json cols = json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    json col = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) col.push_back(m(r, c));
    cols.push_back(std::move(col));
  }
  return cols;
}

Eigen::MatrixXd columns_from_json(const json& j, int rows, int cols, const char* what) {
  if (!j.is_array() || int(j.size()) != cols)
    throw std::invalid_argument(std::string(what) + " needs " + std::to_string(cols) +
                                " columns");
  Eigen::MatrixXd m(rows, cols);
  for (int c = 0; c < cols; ++c) {
    const json& col = j[std::size_t(c)];
    if (!col.is_array() || int(col.size()) != rows)
      throw std::invalid_argument(std::string(what) + " columns need " +
                                  std::to_string(rows) + " entries");
    for (int r = 0; r < rows; ++r) m(r, c) = get_double(col[std::size_t(r)], what);
  }
  return m;
}

json parse_document(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("unparsable ") + what + ": " + e.what());
  }
}

}  // namespace

std::string to_json(const PolyCycle& z) {
  json cells = json::array();
  for (const auto& cell : z.cells) {
    json verts = json::array();
    for (const auto& v : cell.verts) verts.push_back(v);
    cells.push_back(json{{"verts", std::move(verts)}, {"coef", cell.coef}});
  }
  return json{{"n", z.n}, {"k", z.k}, {"cells", std::move(cells)}}.dump();
}

PolyCycle polycycle_from_json(const std::string& text) {
  const json j = parse_document(text, "cycle JSON");
  try {
    expect_keys(j, {"n", "k", "cells"}, "a cycle document");
    PolyCycle z;
    z.n = get_int(need(j, "n", "a cycle document"), "n");
    z.k = get_int(need(j, "k", "a cycle document"), "k");
    if (z.n < 1 || z.k < 0 || z.k > z.n)
      throw std::invalid_argument("cycle dimensions need n >= 1 and 0 <= k <= n");
    const json& cells = need(j, "cells", "a cycle document");
    if (!cells.is_array()) throw std::invalid_argument("\"cells\" must be an array");
    for (const auto& cj : cells) {
      expect_keys(cj, {"verts", "coef"}, "a cell");
      Cell cell;
      cell.coef = get_sign(need(cj, "coef", "a cell"), "coef");
      const json& verts = need(cj, "verts", "a cell");
      if (!verts.is_array() || int(verts.size()) != z.k + 1)
        throw std::invalid_argument("a k-cell needs k+1 vertices");
      for (const auto& vj : verts) {
        Vec v = get_vec(vj, std::size_t(z.n), "a vertex");
        for (double x : v)
          if (!(x >= -1e-9 && x <= 1.0 + 1e-9))
            throw std::invalid_argument("vertex coordinates must lie in [0,1]");
        cell.verts.push_back(std::move(v));
      }
      z.cells.push_back(std::move(cell));
    }
    return z;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad cycle JSON: ") + e.what());
  }
}

std::string to_json(const Pseudomanifold& m) {
  json cells = json::array();
  for (const auto& s : m.simplices)
    cells.push_back(json{{"verts", s.vertices}, {"coef", s.coef}});
  return json{{"num_vertices", m.num_vertices}, {"k", m.k}, {"cells", std::move(cells)}}
      .dump();
}

Pseudomanifold pseudomanifold_from_json(const std::string& text) {
  const json j = parse_document(text, "complex JSON");
  try {
    expect_keys(j, {"num_vertices", "k", "cells"}, "a complex document");
    Pseudomanifold m;
    m.num_vertices = get_int(need(j, "num_vertices", "a complex document"), "num_vertices");
    m.k = get_int(need(j, "k", "a complex document"), "k");
    if (m.num_vertices < 1 || m.k < 0)
      throw std::invalid_argument("a complex needs num_vertices >= 1 and k >= 0");
    const json& cells = need(j, "cells", "a complex document");
    if (!cells.is_array()) throw std::invalid_argument("\"cells\" must be an array");
    for (const auto& cj : cells) {
      expect_keys(cj, {"verts", "coef"}, "a cell");
      OrientedSimplex s;
      s.coef = get_sign(need(cj, "coef", "a cell"), "coef");
      const json& verts = need(cj, "verts", "a cell");
      if (!verts.is_array() || int(verts.size()) != m.k + 1)
        throw std::invalid_argument("a k-cell needs k+1 vertex ids");
      for (const auto& vj : verts) s.vertices.push_back(get_int(vj, "a vertex id"));
      m.simplices.push_back(std::move(s));
    }
    validate_pseudomanifold(m);
    return m;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad complex JSON: ") + e.what());
  }
}

std::string to_json(const ZeroCycle& z) {
  json points = json::array();
  const bool with_src = !z.points.empty() && z.source.size() == z.points.size();
  for (std::size_t i = 0; i < z.points.size(); ++i) {
    json p{{"pos", z.points[i].position}, {"sign", z.points[i].sign}};
    if (with_src) p["src"] = z.source[i];
    points.push_back(std::move(p));
  }
  json ambient{{"kind", z.ambient.kind == AmbientKind::Cube ? "cube" : "sphere"},
               {"d", z.ambient.d}};
  return json{{"ambient", std::move(ambient)}, {"points", std::move(points)}}.dump();
}

ZeroCycle zerocycle_from_json(const std::string& text) {
  const json j = parse_document(text, "0-cycle JSON");
  try {
    expect_keys(j, {"ambient", "points"}, "a 0-cycle document");
    const json& aj = need(j, "ambient", "a 0-cycle document");
    expect_keys(aj, {"kind", "d"}, "the ambient");
    const json& kj = need(aj, "kind", "the ambient");
    if (!kj.is_string()) throw std::invalid_argument("ambient \"kind\" must be a string");
    const std::string kind = kj.get<std::string>();
    const int d = get_int(need(aj, "d", "the ambient"), "d");
    if (d < 1) throw std::invalid_argument("the ambient dimension must be >= 1");
    ZeroCycle z;
    if (kind == "cube")
      z.ambient = Ambient::cube(d);
    else if (kind == "sphere")
      z.ambient = Ambient::sphere(d);
    else
      throw std::invalid_argument("ambient \"kind\" must be \"cube\" or \"sphere\"");
    const json& points = need(j, "points", "a 0-cycle document");
    if (!points.is_array()) throw std::invalid_argument("\"points\" must be an array");
    bool any_src = false;
    bool all_src = true;
    for (const auto& pj : points) {
      expect_keys(pj, {"pos", "sign", "src"}, "a point");
      SignedPoint p;
      p.position =
          get_vec(need(pj, "pos", "a point"), std::size_t(z.ambient.coords()), "a position");
      p.sign = get_sign(need(pj, "sign", "a point"), "sign");
      if (pj.contains("src")) {
        any_src = true;
        z.source.push_back(get_int(pj.at("src"), "src"));
      } else {
        all_src = false;
      }
      z.points.push_back(std::move(p));
    }
    if (any_src && !all_src)
      throw std::invalid_argument("either every point carries \"src\" or none does");
    validate(z);
    return z;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad 0-cycle JSON: ") + e.what());
  }
}

std::string to_json(const std::vector<AffineKPlane>& planes, int n, int k) {
  json arr = json::array();
  for (const auto& p : planes) {
    const Vec offset(p.offset.data(), p.offset.data() + p.offset.size());
    arr.push_back(json{{"basis", columns_to_json(p.basis)}, {"offset", offset}});
  }
  return json{{"n", n}, {"k", k}, {"planes", std::move(arr)}}.dump();
}

std::vector<AffineKPlane> planes_from_json(const std::string& text) {
  const json j = parse_document(text, "plane list JSON");
  try {
    expect_keys(j, {"n", "k", "planes"}, "a plane list");
    const int n = get_int(need(j, "n", "a plane list"), "n");
    const int k = get_int(need(j, "k", "a plane list"), "k");
    if (n < 1 || k < 1 || k >= n) throw std::invalid_argument("plane lists need 1 <= k < n");
    const json& arr = need(j, "planes", "a plane list");
    if (!arr.is_array()) throw std::invalid_argument("\"planes\" must be an array");
    std::vector<AffineKPlane> out;
    for (const auto& pj : arr) {
      expect_keys(pj, {"basis", "offset"}, "a plane");
      AffineKPlane p;
      p.basis = columns_from_json(need(pj, "basis", "a plane"), n, k, "a plane basis");
      const Vec off = get_vec(need(pj, "offset", "a plane"), std::size_t(n), "a plane offset");
      p.offset = Eigen::Map<const Eigen::VectorXd>(off.data(), Eigen::Index(off.size()));
      validate(p);
      out.push_back(std::move(p));
    }
    return out;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad plane list JSON: ") + e.what());
  }
}

std::string to_json(const std::vector<OrientedSubspace>& subspaces, int n, int k) {
  json arr = json::array();
  for (const auto& s : subspaces) arr.push_back(json{{"basis", columns_to_json(s.basis)}});
  return json{{"n", n}, {"k", k}, {"subspaces", std::move(arr)}}.dump();
}

std::vector<OrientedSubspace> subspaces_from_json(const std::string& text) {
  const json j = parse_document(text, "subspace list JSON");
  try {
    expect_keys(j, {"n", "k", "subspaces"}, "a subspace list");
    const int n = get_int(need(j, "n", "a subspace list"), "n");
    const int k = get_int(need(j, "k", "a subspace list"), "k");
    if (n < 1 || k < 0 || k > n) throw std::invalid_argument("subspace lists need 0 <= k <= n");
    const json& arr = need(j, "subspaces", "a subspace list");
    if (!arr.is_array()) throw std::invalid_argument("\"subspaces\" must be an array");
    std::vector<OrientedSubspace> out;
    for (const auto& sj : arr) {
      expect_keys(sj, {"basis"}, "a subspace");
      OrientedSubspace s;
      s.basis =
          columns_from_json(need(sj, "basis", "a subspace"), n + 1, k + 1, "a subspace basis");
      validate(s);
      out.push_back(std::move(s));
    }
    return out;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad subspace list JSON: ") + e.what());
  }
}

std::string to_json(const ExperimentConfig& config) {
  json solve{{"prune", config.solve.prune},
             {"certify", config.solve.certify},
             {"tolerance", config.solve.tolerance}};
  json witness{{"interval_R", config.witness.interval_R},
               {"interval_C", config.witness.interval_C},
               {"max_scale", config.witness.max_scale},
               {"cap", config.witness.cap},
               {"grid_r", config.witness.grid_r}};
  return json{{"model", model_name(config.model)},
              {"n", config.n},
              {"k", config.k},
              {"N_grid", config.N_grid},
              {"trials", config.trials},
              {"master_seed", config.master_seed},
              {"quadrature_m", config.quadrature_m},
              {"winding_h", config.winding_h},
              {"perturbation_trials", config.perturbation_trials},
              {"solve", std::move(solve)},
              {"witness", std::move(witness)}}
      .dump();
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw config_error(std::string("unparsable config JSON: ") + e.what());
  }
  try {
    expect_keys(j,
                {"model", "n", "k", "N_grid", "trials", "master_seed", "quadrature_m",
                 "winding_h", "perturbation_trials", "solve", "witness"},
                "a config");
    ExperimentConfig config;
    const json& mj = need(j, "model", "a config");
    if (!mj.is_string()) throw std::invalid_argument("\"model\" must be a string");
    config.model = model_from_name(mj.get<std::string>());
    config.n = get_int(need(j, "n", "a config"), "n");
    config.k = get_int(need(j, "k", "a config"), "k");
    const json& grid = need(j, "N_grid", "a config");
    if (!grid.is_array()) throw std::invalid_argument("\"N_grid\" must be an array");
    for (const auto& nj : grid) config.N_grid.push_back(get_int(nj, "an N_grid entry"));
    config.trials = get_int(need(j, "trials", "a config"), "trials");
    if (j.contains("master_seed")) {
      const json& sj = j.at("master_seed");
      if (!sj.is_number_integer())
        throw std::invalid_argument("\"master_seed\" must be an integer");
      if (!sj.is_number_unsigned() && sj.get<std::int64_t>() < 0)
        throw std::invalid_argument("\"master_seed\" must be nonnegative");
      config.master_seed = sj.get<std::uint64_t>();
    }
    if (j.contains("quadrature_m"))
      config.quadrature_m = get_int(j.at("quadrature_m"), "quadrature_m");
    if (j.contains("winding_h")) config.winding_h = get_double(j.at("winding_h"), "winding_h");
    if (j.contains("perturbation_trials"))
      config.perturbation_trials = get_int(j.at("perturbation_trials"), "perturbation_trials");
    if (j.contains("solve")) {
      const json& s = j.at("solve");
      expect_keys(s, {"prune", "certify", "tolerance"}, "solver options");
      if (s.contains("prune")) config.solve.prune = get_bool(s.at("prune"), "prune");
      if (s.contains("certify")) config.solve.certify = get_bool(s.at("certify"), "certify");
      if (s.contains("tolerance"))
        config.solve.tolerance = get_double(s.at("tolerance"), "tolerance");
    }
    if (j.contains("witness")) {
      const json& w = j.at("witness");
      expect_keys(w, {"interval_R", "interval_C", "max_scale", "cap", "grid_r"},
                  "witness options");
      if (w.contains("interval_R"))
        config.witness.interval_R = get_int(w.at("interval_R"), "interval_R");
      if (w.contains("interval_C"))
        config.witness.interval_C = get_double(w.at("interval_C"), "interval_C");
      if (w.contains("max_scale"))
        config.witness.max_scale = get_int(w.at("max_scale"), "max_scale");
      if (w.contains("cap")) config.witness.cap = get_double(w.at("cap"), "cap");
      if (w.contains("grid_r")) config.witness.grid_r = get_double(w.at("grid_r"), "grid_r");
    }
    validate(config);
    return config;
  } catch (const json::exception& e) {
    throw config_error(std::string("bad config JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
}

std::string to_json(const ConcentrationReport& report) {
  json per_n = json::array();
  for (const auto& s : report.per_n)
    per_n.push_back(json{{"N", s.N},
                         {"mean", s.mean},
                         {"std_dev", s.std_dev},
                         {"exceed_1", s.exceed_1},
                         {"exceed_2", s.exceed_2},
                         {"exceed_3", s.exceed_3},
                         {"std_over_sqrt_n", s.std_over_sqrt_n}});
  json perturbation{{"N", report.perturbation.N},
                    {"instances", report.perturbation.instances},
                    {"violations", report.perturbation.violations},
                    {"max_excess", report.perturbation.max_excess}};
  return json{{"per_n", std::move(per_n)}, {"perturbation", std::move(perturbation)}}.dump();
}

std::string to_json(const CorrelationReport& report) {
  json points = json::array();
  for (const auto& p : report.points)
    points.push_back(json{{"ell", p.ell},
                          {"conditioning_events", p.conditioning_events},
                          {"joint_events", p.joint_events},
                          {"conditional", p.conditional},
                          {"ci_half_width", p.ci_half_width},
                          {"low_events", p.low_events}});
  return json{{"points", std::move(points)},
              {"fitted_exponent", report.fitted_exponent},
              {"exponent_std_error", report.exponent_std_error},
              {"flagged", report.flagged}}
      .dump();
}

std::string fv_report_json(double fv, const TransportPlan* plan) {
  json out{{"fv", fv}};
  if (plan) {
    json pairings = json::array();
    for (const auto& p : plan->pairings)
      pairings.push_back(json{{"pos", p.pos_index}, {"neg", p.neg_index}, {"cost", p.cost}});
    json boundary = json::array();
    for (const auto& b : plan->boundary_assignments)
      boundary.push_back(json{{"point", b.point_index}, {"distance", b.distance}});
    out["plan"] = json{{"pairings", std::move(pairings)},
                       {"boundary", std::move(boundary)},
                       {"total_cost", plan->total_cost}};
  } else {
    out["plan"] = nullptr;
  }
  return out.dump();
}

std::string fv_report_json(double fv, double error_bound) {
  return json{{"fv", fv}, {"error_bound", error_bound}, {"plan", nullptr}}.dump();
}

std::string witness_report_json(const WitnessFunction& w, const ZeroCycle& z,
                                bool with_atoms) {
  json out{{"integral", integrate_witness(w, z)},
           {"lip", lip_bound(w)},
           {"bound", witness_lower_bound(w, z)}};
  if (with_atoms) {
    json atoms = json::array();
    for (std::size_t i = 0; i < w.atoms.size(); ++i) {
      const auto& a = w.atoms[i];
      atoms.push_back(json{{"corner", a.corner},
                           {"side", a.side},
                           {"coef", a.coefficient},
                           {"scale", i < w.scale_tags.size() ? w.scale_tags[i] : 0}});
    }
    out["atoms"] = std::move(atoms);
  }
  return out.dump();
}

std::string fits_json(const std::vector<ObservableFits>& fits,
                      const std::vector<std::string>& notes) {
  json arr = json::array();
  for (const auto& f : fits)
    arr.push_back(json{{"observable", f.observable},
                       {"power",
                        {{"exponent", f.power.exponent},
                         {"std_error", f.power.std_error},
                         {"r_squared", f.power.r_squared},
                         {"excluded", f.power.excluded}}},
                       {"sqrtlog",
                        {{"slope", f.sqrtlog.slope},
                         {"intercept", f.sqrtlog.intercept},
                         {"r_squared", f.sqrtlog.r_squared},
                         {"excluded", f.sqrtlog.excluded}}}});
  return json{{"fits", std::move(arr)}, {"notes", notes}}.dump();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::runtime_error("cannot read " + path);
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("cannot write " + path);
}

}  // namespace cyclefill
