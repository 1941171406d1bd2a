#ifndef MINIMAX_GRID_HPP
#define MINIMAX_GRID_HPP

#include <stdexcept>

namespace minimax {

/// Sampling and search parameters shared by the engine, swap sections and
/// the diagnostics.
struct GridSpec {
  double step = 0.5;               ///< base grid spacing inside the truncation window
  int refinement_depth = 40;       ///< halvings of the bracket around each seed (and bisections at boundaries)
  double truncation_radius = 64.0; ///< width of the base window on unbounded parts
  double growth_cap = 1.0;         ///< per-doubling improvement that counts as divergence
  int tail_doublings = 8;          ///< geometric tail bands probed past the window
  int tail_points = 32;            ///< samples per tail band
  double eps_arg = 1e-6;           ///< tolerance defining the eps-arg witness set
  int max_seeds = 4;               ///< local optima refined; 1 when seedless
  bool seeded = true;              ///< refine every local optimum of the coarse grid, not only the best

  void validate() const {
    if (!(step > 0) || !(truncation_radius > 0) || !(growth_cap > 0) || refinement_depth < 0 ||
        tail_doublings < 0 || tail_points < 1 || !(eps_arg >= 0) || max_seeds < 1)
      throw std::invalid_argument("GridSpec: all parameters must be positive");
  }

  double probed_radius() const {
    double r = truncation_radius;
    for (int k = 0; k < tail_doublings; ++k) r *= 2.0;
    return r;
  }
};

}  // namespace minimax

#endif  // MINIMAX_GRID_HPP
