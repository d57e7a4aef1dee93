#pragma once
// Multi-level studies: Cauchy behaviour of Galerkin solutions against the
// finest level N (the surrogate for the unavailable limit), the Hirano
// pairing h_n and weak-limit evidence w_n.

#include <iosfwd>
#include <vector>

#include "galerkin/solver.hpp"

namespace galerkin {

struct LevelStudy {
  std::vector<int> levels;  // strictly increasing; reference N = levels.back()
  std::vector<Trajectory> trajectories;
  std::vector<double> e_V;  // |u_n - u_N|_{L^p(0,T;V)}
  std::vector<double> e_H;  // sup_t |u_n - u_N|_H
  double p = 2.0;
  int reference() const { return levels.back(); }
};

/// Levels are solved concurrently, capped by GALERKIN_THREADS (default: the
/// hardware concurrency). Throws LevelError for a non-increasing ladder.
LevelStudy cauchy_study(const ProblemConfig& config, const std::vector<int>& levels);

/// h_n = sum_k tau_k <A(t^k) u_n^k, u_n^k - u_N^k> (left endpoint rule).
std::vector<double> hirano_diagnostic(const LevelStudy& study, const OperatorFamily& A);

/// w_n[j] = sum_k tau_k <A(t^k) u_n^k - A(t^k) u_N^k, phi_j>, with phi_j the
/// basis fields `test_modes` (0-based) held fixed in time.
std::vector<std::vector<double>> weak_limit_check(const LevelStudy& study, const OperatorFamily& A,
                                                  const std::vector<std::size_t>& test_modes);

/// n, e_V, e_H, h, w_1, ... with 17 significant digits.
void write_study_csv(std::ostream& os, const LevelStudy& study, const std::vector<double>& h,
                     const std::vector<std::vector<double>>& w);

/// GALERKIN_THREADS if set to a positive integer, else hardware concurrency.
unsigned worker_threads();

}  // namespace galerkin
