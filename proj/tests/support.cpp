#include "support.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace testing {

const Solved& solved(int dim, double alpha, double p, double r_max, std::size_t n, Spacing spacing,
                     InitKind init) {
  using Key = std::tuple<int, double, double, double, std::size_t, Spacing, InitKind>;
  static std::map<Key, std::unique_ptr<Solved>> cache;
  static std::mutex m;
  std::lock_guard lock(m);
  auto& slot = cache[Key{dim, alpha, p, r_max, n, spacing, init}];
  if (!slot) {
    const ProblemParams pp(dim, alpha, p);
    auto grid = make_grid(dim, r_max, n, spacing);
    auto kernel = assemble_kernel(grid, pp);
    SolverConfig cfg;
    cfg.init = init;
    auto result = solve_groundstate(pp, kernel, cfg);
    slot = std::make_unique<Solved>(Solved{grid, std::move(kernel), std::move(result)});
  }
  return *slot;
}

}  // namespace testing
