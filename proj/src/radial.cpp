#include "hym/radial_profile.hpp"
#include "hym/radial_solver.hpp"

namespace hym {

template VectorX<Real> residual_radial<Real>(const VectorX<Real>&, const RadialMesh<Real>&, double);
template void reconstruct_derivatives<Real>(RadialSolution<Real>&);
template RadialSolution<Real> solve_radial<Real>(double, const RadialSolverConfig&);

template std::vector<ProfilePoint<Real>> v_profile<Real>(const RadialSolution<Real>&);
template MReport<Real> m_functions<Real>(const RadialSolution<Real>&, double);
template Real sinh_moment<Real>(const RadialSolution<Real>&, bool);
template InequalityReport verify_inequalities<Real>(const RadialSolution<Real>&);

}  // namespace hym
