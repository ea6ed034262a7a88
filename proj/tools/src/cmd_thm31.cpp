#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <sbflow/gaussian.hpp>

#include "commands.hpp"

namespace sbflow_tools {

int cmd_thm31(const RawOptions& raw) {
  using namespace sbflow;

  std::string out_dir = raw.out.value_or(".");
  double var = raw.var.value_or(1.0);
  std::vector<double> epsilons =
      raw.epsilons.value_or(std::vector<double>{1.0, 0.5, 0.2, 0.1, 0.05});

  if (!(var > 0.0)) {
    std::cerr << "thm31: --var must be positive\n";
    return 64;
  }
  if (epsilons.empty()) {
    std::cerr << "thm31: --epsilons list is empty\n";
    return 64;
  }

  struct Row {
    double epsilon, lhs, rhs, lhs_over_eps4, rhs_over_eps3;
  };
  std::vector<Row> rows;

  std::printf("thm31: var=%s\n", fmt_double(var).c_str());
  std::printf("  %-10s %-14s %-14s %-14s %-14s\n", "epsilon", "sym_kl", "rhs",
              "sym_kl/eps^4", "rhs/eps^3");
  for (double eps : epsilons) {
    if (!(eps > 0.0)) {
      std::cerr << "thm31: epsilon values must be positive\n";
      return 64;
    }
    double lhs, rhs;
    try {
      CouplingPair pair = couplings(var, eps);
      lhs = sym_kl(pair.ou, pair.sb);
      rhs = thm31_rhs(var, eps, 1);
    } catch (const std::exception& e) {
      std::cerr << "thm31: epsilon=" << fmt_double(eps) << " failed: " << e.what()
                << "\n";
      return 1;
    }
    rows.push_back({eps, lhs, rhs, lhs / std::pow(eps, 4), rhs / std::pow(eps, 3)});
    std::printf("  %-10s %-14.6e %-14.6e %-14.6e %-14.6e\n", fmt_double(eps).c_str(),
                lhs, rhs, rows.back().lhs_over_eps4, rows.back().rhs_over_eps3);
  }

  // Three checks: the divergence never exceeds the bound; at the smallest
  // epsilon the divergence matches its quartic expansion
  // (eps/var)^4 / 1152 within 5%; and rhs/eps^3 has settled (consecutive
  // drift at most 10%, meaningful for a monotone epsilon grid).
  std::string failure;
  for (const Row& r : rows) {
    if (r.lhs > r.rhs) {
      failure = "sym_kl exceeds the bound at epsilon=" + fmt_double(r.epsilon);
      break;
    }
  }
  std::size_t smallest = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].epsilon < rows[smallest].epsilon) smallest = i;
  double quartic_dev = 0.0;
  if (failure.empty()) {
    const Row& r = rows[smallest];
    double reduced = r.epsilon / var;
    quartic_dev = std::abs(1152.0 * r.lhs / std::pow(reduced, 4) - 1.0);
    if (quartic_dev > 0.05) {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "1152 sym_kl (var/eps)^4 = %.6f off by %.4f (gate 0.05) at "
                    "epsilon=%s",
                    1152.0 * r.lhs / std::pow(reduced, 4), quartic_dev,
                    fmt_double(r.epsilon).c_str());
      failure = buf;
    }
  }
  double max_drift = 0.0;
  if (failure.empty()) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
      double drift = std::abs(rows[i].rhs_over_eps3 / rows[i - 1].rhs_over_eps3 - 1.0);
      max_drift = std::max(max_drift, drift);
      if (drift > 0.10) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "rhs/eps^3 drift %.4f (gate 0.10) between epsilon=%s and %s",
                      drift, fmt_double(rows[i - 1].epsilon).c_str(),
                      fmt_double(rows[i].epsilon).c_str());
        failure = buf;
        break;
      }
    }
  }

  std::string csv = "epsilon,sym_kl,thm31_rhs,sym_kl_over_eps4,rhs_over_eps3\n";
  for (const Row& r : rows) {
    csv += fmt_double(r.epsilon) + "," + fmt_double(r.lhs) + "," + fmt_double(r.rhs) +
           "," + fmt_double(r.lhs_over_eps4) + "," + fmt_double(r.rhs_over_eps3) + "\n";
  }
  write_file(out_dir, "thm31.csv", csv);

  nlohmann::json config_echo{{"var", var}, {"epsilons", epsilons}};
  nlohmann::json meta = run_metadata("thm31", config_echo);
  nlohmann::json jrows = nlohmann::json::array();
  for (const Row& r : rows) {
    jrows.push_back({{"epsilon", r.epsilon},
                     {"sym_kl", r.lhs},
                     {"thm31_rhs", r.rhs},
                     {"sym_kl_over_eps4", r.lhs_over_eps4},
                     {"rhs_over_eps3", r.rhs_over_eps3}});
  }
  meta["rows"] = jrows;
  meta["checks"] = nlohmann::json{{"quartic_dev_at_smallest_eps", quartic_dev},
                                  {"max_rhs_cubic_drift", max_drift},
                                  {"pass", failure.empty()}};
  if (!failure.empty()) meta["checks"]["failure"] = failure;
  write_file(out_dir, "thm31.json", meta.dump(2) + "\n");

  if (!failure.empty()) {
    std::printf("thm31: FAIL (%s)\n", failure.c_str());
    return 1;
  }
  std::printf("thm31: ok (quartic dev %.4f at epsilon=%s, max rhs/eps^3 drift %.4f)\n",
              quartic_dev, fmt_double(rows[smallest].epsilon).c_str(), max_drift);
  return 0;
}

}  // namespace sbflow_tools
