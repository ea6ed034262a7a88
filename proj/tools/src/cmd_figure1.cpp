#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <sbflow/cloud.hpp>
#include <sbflow/metrics.hpp>
#include <sbflow/rng.hpp>
#include <sbflow/scheme.hpp>

#include "commands.hpp"
#include "svg.hpp"

namespace sbflow_tools {

namespace {

using namespace sbflow;

constexpr double kXLo = -8.0, kXHi = 8.0;
constexpr int kBins = 40;

// Normalized histogram over kBins equal bins on [kXLo, kXHi]; out-of-range
// points are dropped (none occur at the default law, which has essentially
// no mass beyond +-8).
std::vector<double> histogram_density(const ParticleCloud& cloud) {
  std::vector<double> density(kBins, 0.0);
  double width = (kXHi - kXLo) / kBins;
  for (int i = 0; i < cloud.size(); ++i) {
    double x = cloud.point(i)[0];
    if (x < kXLo || x >= kXHi) continue;
    density[static_cast<int>((x - kXLo) / width)] += 1.0;
  }
  for (double& d : density) d /= cloud.size() * width;
  return density;
}

std::string render_overlay(const std::vector<double>& hist,
                           const MixtureSpec& spec, double t, double ymax,
                           const std::string& annotation) {
  const int w = 480, h = 340;
  const double left = 46, right = 12, top = 20, bottom = 32;
  const double plot_w = w - left - right, plot_h = h - top - bottom;
  auto px = [&](double x) { return left + (x - kXLo) / (kXHi - kXLo) * plot_w; };
  auto py = [&](double y) { return top + (1.0 - y / ymax) * plot_h; };

  SvgCanvas svg(w, h);
  svg.comment("generated " + timestamp_utc());

  double bin_w = (kXHi - kXLo) / kBins;
  for (int b = 0; b < kBins; ++b) {
    if (hist[b] <= 0.0) continue;
    double x0 = kXLo + b * bin_w;
    svg.rect(px(x0), py(hist[b]), px(x0 + bin_w) - px(x0), py(0) - py(hist[b]),
             "#9ecae1");
  }

  std::vector<std::pair<double, double>> curve;
  for (int k = 0; k <= 320; ++k) {
    double x = kXLo + (kXHi - kXLo) * k / 320.0;
    curve.emplace_back(px(x), py(spec.density1d(x, t)));
  }
  svg.polyline(curve, "#de2d26", 1.5);

  svg.line(px(kXLo), py(0), px(kXHi), py(0), "#333333");
  svg.line(px(kXLo), py(0), px(kXLo), top, "#333333");
  for (double x : {-8.0, -4.0, 0.0, 4.0, 8.0}) {
    svg.line(px(x), py(0), px(x), py(0) + 4, "#333333");
    svg.text(px(x), h - 14, fmt_double(x), 10, "middle");
  }
  for (int k = 1; k <= 2; ++k) {
    double y = ymax * k / 2;
    svg.line(px(kXLo) - 4, py(y), px(kXLo), py(y), "#333333");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", y);
    svg.text(left - 7, py(y) + 4, buf, 10, "end");
  }
  svg.text(left + 6, top + 12, annotation, 11);
  svg.text(left + 6, top + 27, "bars: particle run, line: exact density", 10);
  return svg.str();
}

}  // namespace

int cmd_figure1(const RawOptions& raw) {
  int n = raw.n.value_or(500);
  double epsilon = raw.epsilon.value_or(0.1);
  double horizon = raw.horizon.value_or(5.0);
  std::uint64_t seed = raw.seed.value_or(42);
  int trials = raw.trials.value_or(20);
  std::string out_dir = raw.out.value_or(".");

  SchemeConfig config;
  config.epsilon = epsilon;
  config.horizon = horizon;
  config.functional = {FunctionalKind::Entropy, 0.0};
  config.method = SchemeMethod::SchrodingerBridge;
  config.validate();

  MixtureSpec spec = benchmark_mixture();
  ParticleCloud initial = sample_mixture(spec, n, derive_seed(seed, 0));

  std::printf("figure1: n=%d epsilon=%s horizon=%s seed=%llu trials=%d steps=%d\n", n,
              fmt_double(epsilon).c_str(), fmt_double(horizon).c_str(),
              static_cast<unsigned long long>(seed), trials, config.n_steps());

  FlowTrajectory<ParticleCloud> traj;
  try {
    traj = run_scheme_particles(config, initial);
  } catch (const std::exception& e) {
    std::cerr << "figure1: solver failure: " << e.what() << "\n";
    return 1;
  }

  std::vector<double> times;
  for (int t = 1; t <= static_cast<int>(horizon + 1e-9); ++t) times.push_back(t);
  if (times.empty()) times.push_back(horizon);

  ErrorReport report =
      compare_trajectories(traj, spec, config.functional, times, trials,
                           derive_seed(seed, 1));

  bool pass = true;
  double worst_ratio = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    double ratio = report.errors[i] / report.noise_floors[i];
    worst_ratio = std::max(worst_ratio, ratio);
    if (report.errors[i] > 3.0 * report.noise_floors[i]) pass = false;
    std::printf("  t=%-4s w2=%.4e floor=%.4e ratio=%.3f\n",
                fmt_double(times[i]).c_str(), report.errors[i],
                report.noise_floors[i], ratio);
  }

  // Snapshots at t=0 and at each reported time, all on one density scale.
  std::vector<double> snap_times{0.0};
  snap_times.insert(snap_times.end(), times.begin(), times.end());
  std::vector<std::vector<double>> hists;
  double ymax = 0.0;
  for (double t : snap_times) {
    hists.push_back(histogram_density(traj.eval_at(t)));
    for (double d : hists.back()) ymax = std::max(ymax, d);
    for (int k = 0; k <= 320; ++k)
      ymax = std::max(ymax, spec.density1d(kXLo + (kXHi - kXLo) * k / 320.0, t));
  }
  ymax *= 1.12;

  for (std::size_t i = 0; i < snap_times.size(); ++i) {
    double t = snap_times[i];
    char ann[128];
    if (i == 0) {
      std::snprintf(ann, sizeof(ann), "t=0 initial sample (n=%d)", n);
    } else {
      std::snprintf(ann, sizeof(ann), "t=%s  W2=%.3e  floor=%.3e",
                    fmt_double(t).c_str(), report.errors[i - 1],
                    report.noise_floors[i - 1]);
    }
    write_file(out_dir, "figure1_t" + fmt_double(t) + ".svg",
               render_overlay(hists[i], spec, t, ymax, ann));
  }

  std::ostringstream csv;
  write_error_report_csv(report, csv);
  write_file(out_dir, "figure1_report.csv", csv.str());

  nlohmann::json config_echo{
      {"n", n},           {"epsilon", epsilon}, {"horizon", horizon},
      {"seed", seed},     {"trials", trials},   {"functional", "entropy"},
      {"mode", "particle"},
  };
  nlohmann::json meta = run_metadata("figure1", config_echo);
  meta["results"] = nlohmann::json{
      {"times", report.times},
      {"w2", report.errors},
      {"noise_floor", report.noise_floors},
      {"sup_error", report.sup_error},
      {"worst_ratio", worst_ratio},
      {"pass", pass},
  };
  meta["seeds"] = nlohmann::json{
      {"cloud", derive_seed(seed, 0)},
      {"comparison", derive_seed(seed, 1)},
      {"used", report.seeds_used},
  };
  write_file(out_dir, "figure1.json", meta.dump(2) + "\n");

  std::printf("figure1: sup_error=%.4e worst_ratio=%.3f (gate 3) -> %s\n",
              report.sup_error, worst_ratio, pass ? "PASS" : "FAIL");
  return pass ? 0 : 1;
}

}  // namespace sbflow_tools
