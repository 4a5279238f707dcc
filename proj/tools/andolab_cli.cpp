// andolab: generate commuting-contraction fixtures, build their block-shift
// dilation artifacts, and run the verification suites.
//
// Report files are deterministic for a fixed config (no timestamps in
// content); wall-clock timing goes to stdout only.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <andolab/experiment.hpp>

using namespace andolab;

namespace {

double default_tol() {
  if (const char* env = std::getenv("ANDOLAB_TOL")) {
    try {
      const double v = std::stod(env);
      if (v > 0) return v;
    } catch (...) {
    }
    std::cerr << "warning: ignoring malformed ANDOLAB_TOL\n";
  }
  return 1e-10;
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : csv) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

double parse_p(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "INF")
    return std::numeric_limits<double>::infinity();
  return std::stod(s);
}

int finish(const std::vector<VerificationReport>& reps,
           const std::string& out_path,
           std::chrono::steady_clock::time_point t0) {
  write_text_file(out_path, reports_to_jsonl(reps));
  const json summary = summarize(reps);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::cout << summary.dump() << "\n"
            << "wrote " << out_path << " (" << reps.size() << " checks, "
            << secs << "s)\n";
  return summary.at("summary").at("ok").get<bool>() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for minimal block-shift isometric "
               "dilations of commuting contraction pairs"};
  app.require_subcommand(1);

  GenConfig gen;
  std::string gen_norms = "0.9,0.9", gen_method = "polynomial";
  std::string gen_out = "fixture.json";
  auto* cgen = app.add_subcommand("gen", "generate a commuting strict pair");
  cgen->add_option("--seed", gen.seed, "deterministic seed");
  cgen->add_option("--n", gen.n, "ambient dimension");
  cgen->add_option("--method", gen_method, "polynomial|codiagonal|jordan");
  cgen->add_option("--norms", gen_norms, "target norms r1,r2");
  cgen->add_flag("--lp-safe", gen.lp_safe,
                 "rescale so every l_p operator norm stays strict");
  cgen->add_option("--out", gen_out, "output fixture path")->required();

  std::string dil_fixture, dil_out = "artifacts.json";
  auto* cdil = app.add_subcommand("dilate", "build S, U4, bases, residuals");
  cdil->add_option("--fixture", dil_fixture)->required();
  cdil->add_option("--out", dil_out)->required();

  std::string ver_fixture, ver_artifacts, ver_out = "reports.jsonl";
  std::string ver_suites = "isometry,commutation,dilation,minimality";
  VerifyOptions opts;
  opts.tol = default_tol();
  opts.dilation_tol = 10 * opts.tol;
  opts.banach_tol = 10 * opts.tol;
  auto* cver = app.add_subcommand("verify", "run verification suites");
  cver->add_option("--fixture", ver_fixture)->required();
  cver->add_option("--artifacts", ver_artifacts)->required();
  cver->add_option("--suite", ver_suites,
                   "comma list: isometry,commutation,dilation,minimality,"
                   "negative,banach");
  cver->add_option("--deg", opts.degree_cap, "total-degree cap");
  cver->add_option("--depth", opts.rank_depth, "orbit truncation depth");
  cver->add_option("--trials", opts.trials, "sampled trials per check");
  double tol_flag = -1;
  cver->add_option("--tol", tol_flag, "isometry/commutation tolerance");
  cver->add_option("--out", ver_out)->required();

  std::string ban_fixture, ban_out = "banach.jsonl", ban_p = "2", ban_s;
  auto* cban = app.add_subcommand("banach", "normed-space layer checks");
  cban->add_option("--fixture", ban_fixture)->required();
  cban->add_option("--p", ban_p, "l_p exponent (>= 1, or inf)");
  cban->add_option("--s-matrix", ban_s,
                   "JSON file holding a mixed-norm unitary to verify");
  cban->add_option("--trials", opts.trials, "sampled trials per check");
  cban->add_option("--out", ban_out)->required();

  CLI11_PARSE(app, argc, argv);
  const auto t0 = std::chrono::steady_clock::now();

  try {
    if (*cgen) {
      const auto norms = split_list(gen_norms);
      if (norms.size() != 2)
        throw Error(Err::BadParams, "--norms wants r1,r2");
      gen.r1 = std::stod(norms[0]);
      gen.r2 = std::stod(norms[1]);
      gen.method = pair_method_from_name(gen_method);
      const json fixture = run_gen(gen);
      write_text_file(gen_out, fixture.dump(2) + "\n");
      std::cout << "wrote " << gen_out << " (hash " << content_hash(fixture)
                << ")\n";
      return 0;
    }
    if (*cdil) {
      const json fixture = load_json_file(dil_fixture);
      json artifacts;
      try {
        artifacts = run_dilate(fixture);
      } catch (const Error& e) {
        std::cerr << "dilate failed for " << dil_fixture << ": " << e.what()
                  << "\n";
        return 1;
      }
      write_text_file(dil_out, artifacts.dump(2) + "\n");
      const auto& res = artifacts.at("residuals");
      std::cout << "wrote " << dil_out
                << " s_unitarity=" << res.at("s_unitarity")
                << " s_interpolation=" << res.at("s_interpolation") << "\n";
      return 0;
    }
    if (*cver) {
      if (tol_flag > 0) {
        opts.tol = tol_flag;
        opts.dilation_tol = 10 * tol_flag;
        opts.banach_tol = 10 * tol_flag;
      }
      const json fixture = load_json_file(ver_fixture);
      const json artifacts = load_json_file(ver_artifacts);
      const auto reps =
          run_verify(fixture, artifacts, split_list(ver_suites), opts);
      return finish(reps, ver_out, t0);
    }
    if (*cban) {
      const json fixture = load_json_file(ban_fixture);
      json s_json;
      const json* s_ptr = nullptr;
      if (!ban_s.empty()) {
        s_json = load_json_file(ban_s);
        s_ptr = &s_json;
      }
      const auto reps = run_banach(fixture, parse_p(ban_p), s_ptr, opts);
      return finish(reps, ban_out, t0);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
