#include "hym/disc_solver.hpp"

namespace hym {

template DiscSolution<long double> solve_disc<long double>(double, const DiscConfig&);

}  // namespace hym
