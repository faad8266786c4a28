#pragma once

// Shared test utilities: deterministic random states/spectra, brute-force
// oracles for passive states and ergotropy, a small phase-1 simplex for
// convex-hull membership, and a CLI runner.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "ergoflow/core.hpp"

namespace testutil {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t d) {
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> p(d);
  double total = 0.0;
  for (double& x : p) {
    x = exp1(rng);
    total += x;
  }
  for (double& x : p) x /= total;
  return p;
}

inline ergoflow::Spectrum random_spectrum(std::mt19937_64& rng, std::size_t d,
                                          double max_gap = 2.0) {
  std::uniform_real_distribution<double> gap(0.05, max_gap);
  std::vector<double> levels(d, 0.0);
  for (std::size_t i = 1; i < d; ++i) levels[i] = levels[i - 1] + gap(rng);
  return ergoflow::Spectrum(std::move(levels));
}

inline ergoflow::DiagonalState random_state(std::mt19937_64& rng, std::size_t d,
                                            double max_gap = 2.0) {
  return ergoflow::DiagonalState(random_spectrum(rng, d, max_gap), random_simplex(rng, d));
}

// Minimum energy over all permutations of the populations (d <= 8).
inline double brute_force_passive_energy(const ergoflow::DiagonalState& state) {
  std::vector<double> p = state.probs();
  std::sort(p.begin(), p.end());
  double best = 1e300;
  do {
    double e = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) e += p[i] * state.spectrum().level(i);
    best = std::min(best, e);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

inline double brute_force_ergotropy(const ergoflow::DiagonalState& state) {
  double e = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) e += state.prob(i) * state.spectrum().level(i);
  return e - brute_force_passive_energy(state);
}

// Phase-1 simplex feasibility: is `point` a convex combination of `vertices`
// within `tol` per coordinate? Solves min sum(artificials) subject to
// V*lambda = point, sum(lambda) = 1, lambda >= 0 with Bland's rule.
inline bool in_convex_hull(const std::vector<std::vector<double>>& vertices,
                           const std::vector<double>& point, double tol) {
  const std::size_t m = vertices.size();
  const std::size_t k = point.size() + 1;  // coordinate rows plus sum-to-one
  const std::size_t cols = m + k;          // lambdas plus artificials

  // tableau rows 0..k-1 are constraints (rhs in last column), row k is the
  // phase-1 objective (negated reduced costs of sum of artificials).
  std::vector<std::vector<double>> t(k + 1, std::vector<double>(cols + 1, 0.0));
  for (std::size_t r = 0; r < k - 1; ++r) {
    for (std::size_t j = 0; j < m; ++j) t[r][j] = vertices[j][r];
    t[r][cols] = point[r];
  }
  for (std::size_t j = 0; j < m; ++j) t[k - 1][j] = 1.0;
  t[k - 1][cols] = 1.0;
  for (std::size_t r = 0; r < k; ++r) t[r][m + r] = 1.0;

  std::vector<std::size_t> basis(k);
  for (std::size_t r = 0; r < k; ++r) {
    basis[r] = m + r;
    for (std::size_t j = 0; j <= cols; ++j) t[k][j] += t[r][j];
  }

  const double pivot_eps = 1e-11;
  for (int iter = 0; iter < 20000; ++iter) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j) {
      if (t[k][j] > pivot_eps) {  // Bland: first improving column
        enter = j;
        break;
      }
    }
    if (enter == cols) break;
    std::size_t leave = k;
    double best_ratio = 0.0;
    for (std::size_t r = 0; r < k; ++r) {
      if (t[r][enter] > pivot_eps) {
        const double ratio = t[r][cols] / t[r][enter];
        if (leave == k || ratio < best_ratio - 1e-15 ||
            (ratio < best_ratio + 1e-15 && basis[r] < basis[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
    }
    if (leave == k) break;  // unbounded: cannot happen for this LP
    const double pivot = t[leave][enter];
    for (std::size_t j = 0; j <= cols; ++j) t[leave][j] /= pivot;
    for (std::size_t r = 0; r <= k; ++r) {
      if (r == leave) continue;
      const double f = t[r][enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols; ++j) t[r][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  return t[k][cols] < tol;
}

struct CliResult {
  int exit_code;
  std::string output;
};

#ifdef ERGOFLOW_CLI_PATH
// Runs the built CLI binary with the given argument string, capturing stdout.
inline CliResult run_cli(const std::string& args) {
  const std::string capture = std::string(ERGOFLOW_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(capture.c_str(), "r");
  if (pipe == nullptr) return {-1, ""};
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}
#endif  // ERGOFLOW_CLI_PATH

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find(',', start);
    if (end == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  return fields;
}

}  // namespace testutil
