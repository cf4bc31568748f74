// Runs the acceptance criteria end to end and prints one PASS/FAIL line per criterion.
// Experiment outputs land under argv[1] (default ./acceptance_out).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "semidisp/cli.hpp"
#include "semidisp/fit.hpp"
#include "semidisp/nls.hpp"
#include "semidisp/propagator.hpp"
#include "semidisp/rng.hpp"

using namespace semidisp;
using namespace semidisp::cli;
namespace fs = std::filesystem;

namespace {

fs::path g_root = "acceptance_out";

// criteria whose failure is a recorded result rather than a regression
const std::set<int> kKnownFailures{12};

struct Pipeline {
  RunConfig cfg;
  Outcome out;
  bool pass() const {
    for (const auto& [name, ok] : out.verdicts)
      if (!ok) return false;
    return !out.verdicts.empty();
  }
};

Pipeline pipeline(const std::string& command, const std::string& config, const std::string& dir) {
  Overrides over;
  over.output_dir = g_root / dir;
  Pipeline p;
  p.cfg = load_config(command, nlohmann::json::parse(config), over);
  const auto t0 = std::chrono::steady_clock::now();
  p.out = execute(p.cfg);
  write_outputs(p.cfg, p.out, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return p;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double rel(const Eigen::ArrayXcd& a, const Eigen::ArrayXcd& b) {
  return std::sqrt((a - b).abs2().sum() / b.abs2().sum());
}

struct Verdict {
  bool pass;
  std::string detail;
};

Verdict unitarity() {
  double worst = 0;
  const std::vector<DomainPtr> doms{build_domain(1, 1, {16}, {1}, {128, 16}),
                                    build_domain(2, 1, {8, 8}, {std::sqrt(2.0)}, {64, 64, 16})};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const DomainPtr& dom = doms[seed % 2];
    const SpectralField f = random_spectrum(dom, 2, seed);
    const double n0 = l2_norm(f);
    // Plancherel through the physical grid
    const Field u = from_spectral(f);
    worst = std::max(worst, std::abs(l2_norm(u) - n0) / n0);
    worst = std::max(worst, rel(to_spectral(u).coeffs, f.coeffs));
    SplitMix64 rng(seed + 1000);
    Field noise = zero_field(dom);
    for (Eigen::Index i = 0; i < noise.values.size(); ++i) noise.values[i] = rng.complex_normal();
    worst = std::max(worst, std::abs(l2_norm(to_spectral(noise)) - l2_norm(noise)) / l2_norm(noise));
    for (double t : {0.1, 1.0, 10.0}) worst = std::max(worst, std::abs(l2_norm(evolve(f, t)) - n0) / n0);
    worst = std::max(worst, rel(evolve(evolve(f, 0.3), 1.7).coeffs, evolve(f, 2.0).coeffs));
    worst = std::max(worst, rel(evolve(evolve(f, 0.8), -0.8).coeffs, f.coeffs));
  }
  return {worst <= 1e-12, "max relative error " + fmt("%.2e", worst) + " over 100 fields (limit 1e-12)"};
}

Verdict littlewood_paley() {
  const DomainPtr dom = build_domain(1, 1, {16}, {1}, {512, 64});
  double tele = 0, recon = 0, ortho = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SpectralField f = random_spectrum(dom, 7, seed);
    Eigen::ArrayXcd sum = lp_project(f, 1, LpMode::leq).coeffs;
    for (double M = 2; M <= 8; M *= 2) sum += lp_project(f, M, LpMode::annulus).coeffs;
    tele = std::max(tele, rel(sum, lp_project(f, 8, LpMode::leq).coeffs));

    const SpectralField g = random_spectrum(dom, 4, seed);
    const auto caps = cap_cover(*dom, 4);
    std::vector<SpectralField> parts;
    Eigen::ArrayXcd acc = Eigen::ArrayXcd::Zero(g.coeffs.size());
    for (const Cap& c : caps) {
      parts.push_back(cap_project(g, c));
      acc += parts.back().coeffs;
    }
    recon = std::max(recon, rel(acc, g.coeffs));
    const double g2 = l2_norm(g) * l2_norm(g);
    for (std::size_t i = 0; i < caps.size(); ++i)
      for (std::size_t j = i + 1; j < caps.size(); ++j)
        if (caps[i].m != caps[j].m) ortho = std::max(ortho, std::abs(inner_product(parts[i], parts[j])) / g2);
  }
  const bool ok = tele <= 1e-12 && recon <= 1e-12 && ortho <= 1e-12;
  return {ok, "telescoping " + fmt("%.2e", tele) + ", cap reconstruction " + fmt("%.2e", recon) +
                  ", cross-mode overlap " + fmt("%.2e", ortho)};
}

std::string slope_of(const Json& r) { return fmt("%.4f", r["fit"]["slope"].get<double>()); }

Verdict strichartz_focusing() {
  const Pipeline p = pipeline("strichartz-scan", R"({"schema":"semidisp-config/1",
      "domain":{"n":1,"d":1,"box_lengths":[128],"torus_weights":[1]},
      "family":"focusing","p":6,"q":6,"values":[4,8,16,32],"tolerance":0.15,"plot":true})",
                              "c03_strichartz_focusing");
  return {p.pass(), "slope " + slope_of(p.out.results[0]) + " (target 0.3333 +/- 0.15)"};
}

Verdict strichartz_random() {
  std::string seeds;
  for (int s = 0; s < 20; ++s) seeds += (s ? "," : "") + std::to_string(s);
  const Pipeline p = pipeline("strichartz-scan", R"({"schema":"semidisp-config/1",
      "domain":{"n":1,"d":1,"box_lengths":[128],"torus_weights":[1]},
      "family":"random","p":6,"q":6,"values":[4,8,16,32],"tolerance":0.15,
      "sampling":{"samples":64,"richardson":true,"richardson_tol":1e-3},
      "seeds":[)" + seeds + "]}",
                              "c04_strichartz_random");
  double worst = -INFINITY;
  for (const auto& r : p.out.results) worst = std::max(worst, r["fit"]["slope"].get<double>());
  return {p.pass(), "largest slope over 20 seeds " + fmt("%.4f", worst) + " (limit 0.4833)"};
}

Verdict sharpness() {
  const Pipeline below = pipeline("sharpness-scan", R"({"schema":"semidisp-config/1",
      "domain":{"n":1,"d":1,"box_lengths":[1024],"torus_weights":[1]},"p":6,"q":4,"values":[1,2,4,8],"plot":true})",
                                  "c05_sharpness_q4");
  const Pipeline at = pipeline("sharpness-scan", R"({"schema":"semidisp-config/1",
      "domain":{"n":1,"d":1,"box_lengths":[1024],"torus_weights":[1]},"p":6,"values":[1,2,4,8],"plot":true})",
                               "c05_sharpness_qp");
  return {below.pass() && at.pass(), "q=4 slope " + slope_of(below.out.results[0]) + " (>= 0.0833), q=q(p) slope " +
                                         slope_of(at.out.results[0]) + " (<= 0.05)"};
}

Verdict kernel_decay() {
  const Pipeline p = pipeline("kernel-decay", R"({"schema":"semidisp-config/1","n":1,"d":1,"box_length":512,"N":8,
      "gamma_range":[2,64],"exponents":["inf",4],"tolerance":0.1,"plot":true})",
                              "c06_kernel_decay");
  const Json& r = p.out.results;
  return {p.pass(), "sup slope " + slope_of(r[0]) + " (-0.5 +/- 0.1), L4 slope " + slope_of(r[1]) +
                        " (-0.25 +/- 0.1), gamma clipped at " + std::to_string(r[0]["gamma_last"].get<int>())};
}

Verdict weyl_major_arcs() {
  const Pipeline p = pipeline("weyl-check", R"({"schema":"semidisp-config/1","d":1,"cutoffs":[16,32,64],"max_q":8,
      "samples":24,"gauss_max_q":200,"gauss_tol":1e-12,"spread_limit":2})",
                              "c07_weyl");
  const Json& r = p.out.results;
  return {p.pass(), "Gauss law error " + fmt("%.2e", r[0]["max_error"].get<double>()) + ", max-ratio spread " +
                        fmt("%.4f", r[1]["spread"].get<double>()) + " (< 2)"};
}

Verdict decoupling() {
  const Pipeline p = pipeline("decoupling-check", R"({"schema":"semidisp-config/1",
      "domain":{"n":1,"d":1,"box_lengths":[128],"torus_weights":[1]},"family":"focusing","p":6,
      "values":[4,8,16,32],"tolerance":0.15,"plot":true})",
                              "c08_decoupling");
  const Json& r = p.out.results[0];
  return {p.pass(), "slope " + slope_of(r) + " (<= 0.4833), single-cap ratio " +
                        fmt("%.6f", r["diagnostics"]["single_cap_ratio_max"].get<double>()) + " (<= 1 + 1e-6)"};
}

Verdict mixed_derivative() {
  const Pipeline p = pipeline("mixed-derivative-scan", R"({"schema":"semidisp-config/1",
      "domain":{"n":1,"d":1,"box_lengths":[128],"torus_weights":[1]},"family":"focusing","p":6,"N":32,
      "values":[2,4,8,16],"plot":true})",
                              "c09_mixed_derivative");
  const Json& r = p.out.results[0];
  return {p.pass(), "gain slope " + slope_of(r) + " (>= 0.0833), |G(N)/R(N) - 1| " +
                        fmt("%.2e", std::abs(r["diagnostics"]["g_over_r_at_N"].get<double>() - 1)) + " (<= 1e-6)"};
}

Verdict nls_solver() {
  // plane wave on R^2 x T, cubic: exact phase rotation
  const DomainPtr pw = build_domain(2, 1, {8, 8}, {1}, {16, 16, 8});
  const double A = 0.3;
  const Field w0 = from_spectral(plane_wave_spectrum(pw, {1, 0}, {1}, A));
  NlsConfig cubic;
  cubic.sigma = 3;
  cubic.dt = 1e-3;
  cubic.T = 1.0;
  double pw_err = 0;
  const double D = 1.0 / 64 + 1.0;
  for (int sign : {1, -1}) {
    cubic.sign = sign;
    const Field u = split_step_evolve(w0, cubic).fields.back();
    Field exact = w0;
    exact.values *= unit_phase(D) * std::polar(1.0, -sign * A * A);
    pw_err = std::max(pw_err, (u.values - exact.values).abs().maxCoeff());
  }

  // Strang order and mass on a quintic packet over R x T
  const DomainPtr dom = build_domain(1, 1, {32}, {1}, {512, 16});
  SpectralField s = packet_spectrum(dom, 1.0, 1.0, {{{0}, 1.0}, {{1}, 0.5}, {{-1}, std::complex<double>(0, 0.3)}});
  s.coeffs *= 0.3 / hs_norm(s, 0.5);
  const Field u0 = from_spectral(s);
  auto quintic = [](double dt, bool dealias) {
    NlsConfig c;
    c.sigma = 5;
    c.dt = dt;
    c.T = 1.0;
    c.dealias = dealias;
    return c;
  };
  const Field ref = split_step_evolve(u0, quintic(1e-3 / 8, false)).fields.back();
  std::vector<double> x, y;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    x.push_back(std::log2(dt));
    y.push_back(std::log2(rel(split_step_evolve(u0, quintic(dt, false)).fields.back().values, ref.values)));
  }
  const double order = fit_line(x, y).slope;
  const NlsConfig mc = quintic(0.01, true);
  const double m0 = conserved(u0, mc).mass;
  const double drift = std::abs(conserved(split_step_evolve(u0, mc).fields.back(), mc).mass - m0) / m0;

  const bool ok = pw_err < 1e-8 && std::abs(order - 2) <= 0.2 && drift <= 1e-10;
  return {ok, "plane-wave error " + fmt("%.2e", pw_err) + " (< 1e-8), Strang order " + fmt("%.3f", order) +
                  " (2 +/- 0.2), mass drift " + fmt("%.2e", drift) + " (<= 1e-10)"};
}

const char* kPicard = R"({"schema":"semidisp-config/1",
    "domain":{"n":1,"d":1,"box_lengths":[256],"torus_weights":[1],"grid_sizes":[4096,16]},
    "data":{"kind":"packet","width":1,"band":2,
            "modes":[{"m":[0],"re":1},{"m":[1],"re":0.5},{"m":[-1],"im":0.3}],"h_half":0.05},
    "nls":{"sigma":5,"sign":1,"dt":0.01,"T":1,"checkpoints":[0.25,0.5,0.75,1]},
    "picard_iterations":6,"picard_tol":1e-3,"contraction_limit":0.5})";

Verdict picard() {
  const Pipeline p = pipeline("nls-run", kPicard, "c11_picard");
  bool ok = true;
  for (const auto& [name, pass] : p.out.verdicts)
    if (name.rfind("picard", 0) == 0) ok = ok && pass;
  const Json& r = p.out.results[1];
  return {ok, "relative L2 difference " + fmt("%.2e", r["relative_l2_difference"].get<double>()) +
                  " (<= 1e-3), contraction ratio " + fmt("%.2e", r["max_contraction_ratio"].get<double>()) +
                  " (<= 0.5)"};
}

Verdict scattering() {
  const Pipeline p = pipeline("nls-scatter", R"({"schema":"semidisp-config/1",
      "domain":{"n":1,"d":1,"box_lengths":[1024],"torus_weights":[1],"grid_sizes":[16384,16]},
      "data":{"kind":"packet","width":1,"band":2,
              "modes":[{"m":[0],"re":1},{"m":[1],"re":0.5},{"m":[-1],"im":0.3}]},
      "nls":{"sigma":5,"sign":1,"dt":0.01,"T":8,"checkpoints":[1,2,4,8]},
      "amplitudes":[0.05,0.025],"decay_factor":4,"scaling_band":1})",
                              "c12_scattering");
  const Json& r = p.out.results;
  std::string ex;
  for (const auto& res : r)
    if (res["experiment"] == "amplitude-scaling")
      for (const auto& e : res["exponents"]) ex += (ex.empty() ? "" : ", ") + fmt("%.3f", e.get<double>());
  return {p.pass(), "drifts decreasing " + std::string(r[0]["decreasing"].get<bool>() ? "yes" : "no") +
                        ", final/first " + fmt("%.4f", r[0]["final_over_first"].get<double>()) +
                        " (< 0.25), halving exponents " + ex + " (5 +/- 1)"};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Verdict determinism() {
  // rerun the cheaper experiments and compare every output except timings
  const std::vector<std::tuple<std::string, std::string, std::string>> reruns{
      {"sharpness-scan", R"({"schema":"semidisp-config/1",
          "domain":{"n":1,"d":1,"box_lengths":[1024],"torus_weights":[1]},"p":6,"q":4,"values":[1,2,4,8],"plot":true})",
       "c05_sharpness_q4"},
      {"kernel-decay", R"({"schema":"semidisp-config/1","n":1,"d":1,"box_length":512,"N":8,
          "gamma_range":[2,64],"exponents":["inf",4],"tolerance":0.1,"plot":true})",
       "c06_kernel_decay"},
      {"weyl-check", R"({"schema":"semidisp-config/1","d":1,"cutoffs":[16,32,64],"max_q":8,
          "samples":24,"gauss_max_q":200,"gauss_tol":1e-12,"spread_limit":2})",
       "c07_weyl"},
      {"nls-run", kPicard, "c11_picard"}};
  int files = 0;
  std::string mismatch;
  for (const auto& [cmd, cfg, dir] : reruns) {
    pipeline(cmd, cfg, dir + "_rerun");
    for (const auto& entry : fs::directory_iterator(g_root / dir)) {
      const std::string name = entry.path().filename().string();
      if (name == "timings.json") continue;
      ++files;
      if (slurp(entry.path()) != slurp(g_root / (dir + "_rerun") / name)) mismatch += " " + dir + "/" + name;
    }
  }
  return {mismatch.empty() && files > 0,
          std::to_string(files) + " files compared" + (mismatch.empty() ? ", all identical" : "; differ:" + mismatch)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_root = argv[1];
  fs::create_directories(g_root);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"unitarity, Plancherel and group law", unitarity},
      {"Littlewood-Paley telescoping and caps", littlewood_paley},
      {"Strichartz saturation, focusing family", strichartz_focusing},
      {"Strichartz upper bound, random family", strichartz_random},
      {"sharpness of q(p)", sharpness},
      {"kernel decay", kernel_decay},
      {"Gauss sums and major arcs", weyl_major_arcs},
      {"decoupling ratio", decoupling},
      {"mixed-derivative gain", mixed_derivative},
      {"NLS solver", nls_solver},
      {"Picard and split-step agreement", picard},
      {"scattering diagnostic", scattering},
      {"determinism", determinism},
  };

  int passed = 0, regressions = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool known = kKnownFailures.count(id) > 0;
    std::printf("%s %2d %s: %s [%.1f s]%s\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                v.detail.c_str(), secs, !v.pass && known ? " (known failure)" : "");
    std::fflush(stdout);
    if (v.pass) ++passed;
    // a known failure that starts passing also needs a look
    if (v.pass == known) ++regressions;
  }
  std::printf("%d/%zu criteria passed\n", passed, criteria.size());
  return regressions == 0 ? 0 : 1;
}
