#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclefill/chains.hpp"
#include "cyclefill/harness.hpp"
#include "cyclefill/json_io.hpp"
#include "cyclefill/models.hpp"
#include "cyclefill/rng.hpp"
#include "cyclefill/slicing.hpp"
#include "cyclefill/transport.hpp"
#include "cyclefill/winding.hpp"
#include "cyclefill/witness.hpp"

namespace {

// "-" or empty means stdin; unreadable paths count as usage errors so they
// exit with the config code.
std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  try {
    return cyclefill::read_text_file(path);
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument(e.what());
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text << '\n';
  else
    cyclefill::write_text_file(path, text + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"filling volumes of random cycles: sampling, slicing, transport, experiments"};
  app.require_subcommand(1);

  std::string gen_model = "jump", gen_out;
  int gen_n = 2, gen_k = 1, gen_num = 16;
  std::uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("generate", "sample a random cycle or ensemble as JSON");
  gen->add_option("--model", gen_model, "jump, planes, or spheres")
      ->check(CLI::IsMember({"jump", "planes", "spheres"}));
  gen->add_option("--n", gen_n, "ambient dimension");
  gen->add_option("--k", gen_k, "cycle dimension (planes and spheres)");
  gen->add_option("--num", gen_num, "vertices (jump) or ensemble size");
  gen->add_option("--seed", gen_seed, "master seed");
  gen->add_option("--out", gen_out, "output file (default stdout)");

  std::string slice_in, slice_out;
  std::vector<int> slice_axes;
  std::vector<double> slice_at;
  auto* slice = app.add_subcommand("slice", "cut a cycle by fixing coordinate axes");
  slice->add_option("--axes", slice_axes, "fixed axes, comma separated")
      ->delimiter(',')
      ->required();
  slice->add_option("--at", slice_at, "values, one per fixed axis")->delimiter(',')->required();
  slice->add_option("--in", slice_in, "cycle JSON (default stdin)");
  slice->add_option("--out", slice_out, "output file (default stdout)");

  std::string fv_in, fv_out, fv_method = "auto";
  double fv_h = 1.0 / 64;
  auto* fv = app.add_subcommand("fv", "filling volume of a 0-cycle");
  fv->set_help_flag("--help", "print help");  // frees h for the raster step
  fv->add_option("--method", fv_method, "auto, interval, flow, brute, or winding")
      ->check(CLI::IsMember({"auto", "interval", "flow", "brute", "winding"}));
  fv->add_option("--h", fv_h, "raster step for --method winding");
  fv->add_option("--in", fv_in, "0-cycle JSON; winding reads a planar 1-cycle instead");
  fv->add_option("--out", fv_out, "output file (default stdout)");

  std::string wit_in, wit_out, wit_kind = "grid";
  double wit_cap = 1.0, wit_C = 1.0, wit_r = 0.0;
  int wit_scales = 0, wit_R = 8;
  bool wit_atoms = false;
  auto* wit = app.add_subcommand("witness", "dual lower bound from a pyramid witness");
  wit->add_option("--kind", wit_kind, "grid, multiscale, or interval")
      ->check(CLI::IsMember({"grid", "multiscale", "interval"}));
  wit->add_option("--cap", wit_cap, "multiscale coefficient cap");
  wit->add_option("--scales", wit_scales, "multiscale scale count (0: automatic)");
  wit->add_option("--R", wit_R, "interval count");
  wit->add_option("--C", wit_C, "interval truncation constant");
  wit->add_option("--r", wit_r, "grid cell side (0: automatic)");
  wit->add_flag("--atoms", wit_atoms, "include the atom list in the report");
  wit->add_option("--in", wit_in, "0-cycle JSON (default stdin)");
  wit->add_option("--out", wit_out, "output file (default stdout)");

  auto* exp = app.add_subcommand("experiment", "scaling, concentration, and correlation runs");
  exp->require_subcommand(1);
  std::string run_config, run_out, run_fits, run_kind = "scaling";
  auto* run = exp->add_subcommand("run", "execute the experiment described by a config");
  run->add_option("config", run_config, "config JSON file")->required();
  run->add_option("--kind", run_kind, "scaling, concentration, or correlation")
      ->check(CLI::IsMember({"scaling", "concentration", "correlation"}));
  run->add_option("--out", run_out, "rows CSV (scaling) or report JSON (default stdout)");
  run->add_option("--fits", run_fits, "also write the scaling fit report here");
  std::string fit_rows, fit_out;
  auto* fitcmd = exp->add_subcommand("fit", "refit exponents from a rows CSV");
  fitcmd->add_option("rows", fit_rows, "rows CSV file")->required();
  fitcmd->add_option("--out", fit_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  using namespace cyclefill;
  try {
    if (gen->parsed()) {
      RngStream rng(gen_seed, 0);
      std::string text;
      if (gen_model == "jump") {
        if (gen_k != 1) throw std::invalid_argument("the jump model is a 1-cycle; use --k 1");
        text = to_json(sample_random_jump(gen_num, gen_n, rng));
      } else if (gen_model == "planes") {
        text = to_json(sample_cube_planes(gen_num, gen_n, gen_k, rng), gen_n, gen_k);
      } else {
        text = to_json(sample_great_spheres(gen_num, gen_n, gen_k, rng), gen_n, gen_k);
      }
      write_output(gen_out, text);
    } else if (slice->parsed()) {
      const PolyCycle Z = polycycle_from_json(read_input(slice_in));
      SliceSpec spec;
      spec.fixed_axes = slice_axes;
      spec.values = slice_at;
      write_output(slice_out, to_json(slice_polycycle(Z, spec).first));
    } else if (fv->parsed()) {
      const std::string input = read_input(fv_in);
      if (fv_method == "winding") {
        const WindingEstimate est = fv_winding(polycycle_from_json(input), fv_h);
        write_output(fv_out, fv_report_json(est.value, est.error_bound));
      } else {
        const ZeroCycle z = zerocycle_from_json(input);
        if (fv_method == "flow") {
          const auto [value, plan] =
              z.ambient.kind == AmbientKind::Sphere ? fv_sphere(z) : fv_cube(z);
          write_output(fv_out, fv_report_json(value, &plan));
        } else if (fv_method == "interval") {
          write_output(fv_out, fv_report_json(fv_interval(z), nullptr));
        } else if (fv_method == "brute") {
          write_output(fv_out, fv_report_json(fv_bruteforce(z), nullptr));
        } else {
          write_output(fv_out, fv_report_json(fv_auto(z), nullptr));
        }
      }
    } else if (wit->parsed()) {
      const ZeroCycle z = zerocycle_from_json(read_input(wit_in));
      const WitnessFunction w = wit_kind == "grid" ? build_grid_witness(z, wit_r)
                                : wit_kind == "multiscale"
                                    ? build_multiscale_witness(z, wit_scales, wit_cap)
                                    : build_interval_witness(z, wit_R, wit_C);
      write_output(wit_out, witness_report_json(w, z, wit_atoms));
    } else if (run->parsed()) {
      const ExperimentConfig config = config_from_json(read_input(run_config));
      if (run_kind == "scaling") {
        const ScalingResult result = run_scaling_experiment(config);
        const std::string csv = rows_to_csv(result.rows);
        if (run_out.empty() || run_out == "-")
          std::cout << csv;
        else
          write_text_file(run_out, csv);
        for (const auto& note : result.notes) std::cerr << "note: " << note << '\n';
        if (!run_fits.empty())
          write_text_file(run_fits, fits_json(result.fits, result.notes) + "\n");
      } else if (run_kind == "concentration") {
        write_output(run_out, to_json(run_concentration_experiment(config)));
      } else {
        write_output(run_out, to_json(run_correlation_test(config)));
      }
    } else if (fitcmd->parsed()) {
      const auto rows = rows_from_csv(read_input(fit_rows));
      std::vector<std::string> notes;
      const auto fits = fit_observables(rows, notes);
      write_output(fit_out, fits_json(fits, notes));
    }
    return 0;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const solver_error& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 3;
  } catch (const degenerate_slice_error& e) {
    std::cerr << "degenerate slice: " << e.what() << '\n';
    return 3;
  } catch (const sampling_error& e) {
    std::cerr << "sampling failed: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
