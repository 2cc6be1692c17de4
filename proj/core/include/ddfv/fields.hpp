#pragma once

#include "ddfv/mesh.hpp"

#include <functional>
#include <ostream>
#include <vector>

namespace ddfv {

/// Values on interior primal and dual volumes (same order as the mesh).
struct DiscreteFunction {
  std::vector<double> primal;
  std::vector<double> dual;
};

/// Values on all primal and dual volumes; boundary entries follow the interior ones.
struct DiscreteFunctionBar {
  std::vector<double> primal;
  std::vector<double> dual;

  DiscreteFunction interior(const DdfvMesh& m) const;
  bool in_zero_space(const DdfvMesh& m) const;
};

/// One vector per diamond.
struct DiscreteField {
  std::vector<Vec3> values;
};

/// Slices u^0..u^N; slice n lives on the time slab [(n-1)dt, n dt).
struct SpaceTimeFunction {
  std::vector<DiscreteFunctionBar> slices;
  double dt = 0.0;
  int N = 0;
};

using SpaceFn = std::function<double(const Vec3&)>;
using SpaceTimeFn = std::function<double(double, const Vec3&)>;
using ScalarFn1 = std::function<double(double)>;

DiscreteFunction zeros(const DdfvMesh& m);
DiscreteFunctionBar zeros_bar(const DdfvMesh& m);
DiscreteFunctionBar extend_by_zero(const DdfvMesh& m, const DiscreteFunction& f);
void check_compatible(const DdfvMesh& m, const DiscreteFunction& f);
void check_compatible(const DdfvMesh& m, const DiscreteFunctionBar& f);

/// [[w, v]] = (1/d) sum_K m_K w_K v_K + ((d-1)/d) sum_K* m_K* w_K* v_K*.
double inner_functions(const DdfvMesh& m, const DiscreteFunction& w, const DiscreteFunction& v);
/// Same pairing on the interior entries of two bar functions.
double inner_functions(const DdfvMesh& m, const DiscreteFunctionBar& w, const DiscreteFunctionBar& v);
/// {{F, G}} = sum_D m_D F_D . G_D.
double inner_fields(const DdfvMesh& m, const DiscreteField& F, const DiscreteField& G);

double integrate_primal(const DdfvMesh& m, int K, const SpaceFn& f, int degree);
double integrate_dual(const DdfvMesh& m, int Ks, const SpaceFn& f, int degree);

/// Cell averages over interior primal and dual volumes.
DiscreteFunction project_cells(const DdfvMesh& m, const SpaceFn& s, int degree = 3);

/// Projection of a test function with interface averages and cell averages of its gradient.
/// The gradient averages are obtained from the interface averages by the divergence theorem.
struct ProjectedTest {
  DiscreteFunctionBar values;
  std::vector<double> interface_avg;       ///< psi_{K|L} per primal interface
  std::vector<double> dual_interface_avg;  ///< psi_{K*|L*} per dual interface
  std::vector<Vec3> grad_primal;           ///< interior primal volumes
  std::vector<Vec3> grad_dual;             ///< interior dual volumes
};

ProjectedTest project_bar(const DdfvMesh& m, const SpaceFn& psi, int degree = 3);

/// Slab averages of s projected on the cells, n = 1..N (index 0 unused and zero).
std::vector<DiscreteFunction> time_average(const DdfvMesh& m, const SpaceTimeFn& s, double dt, int N,
                                           int degree = 3, int time_points = 4);
/// Same, with each slab split at the given time breakpoints (jumps of s in time).
std::vector<DiscreteFunction> time_average(const DdfvMesh& m, const SpaceTimeFn& s, double dt, int N, int degree,
                                           int time_points, const std::vector<double>& breaks);

/// Slab averages of a test function, n = 1..N (index 0 unused).
std::vector<ProjectedTest> project_space_time(const DdfvMesh& m, const SpaceTimeFn& psi, double dt, int N,
                                              int degree = 3, int time_points = 4);

DiscreteFunctionBar compose(const DiscreteFunctionBar& u, const ScalarFn1& g);
DiscreteFunction compose(const DiscreteFunction& u, const ScalarFn1& g);

enum class LiftKind { Primal, Dual, Combined };

struct LiftValue {
  double primal = 0.0;
  double dual = 0.0;
  double combined = 0.0;
};

/// Piecewise-constant reconstruction on Q; throws std::out_of_range outside the domain.
class Lift {
 public:
  Lift(const DdfvMesh& m, const SpaceTimeFunction& u) : m_(m), u_(u) {}
  int slab(double t) const;
  LiftValue operator()(double t, const Vec3& x) const;

 private:
  const DdfvMesh& m_;
  const SpaceTimeFunction& u_;
};

LiftValue lift_at(const DdfvMesh& m, const DiscreteFunctionBar& u, const Vec3& x);

/// ||lift of u||_{L^q(Omega)} computed exactly from cell and overlap measures.
double lift_norm(const DdfvMesh& m, const DiscreteFunctionBar& u, LiftKind kind, double q);
/// ||lift||_{L^q(Q)} over slices 1..N.
double lift_norm(const DdfvMesh& m, const SpaceTimeFunction& u, LiftKind kind, double q);

/// ||lift of u - exact||_{L^q(Omega)} by quadrature on simplices / dual pieces.
double lift_error(const DdfvMesh& m, const DiscreteFunctionBar& u, const SpaceFn& exact, LiftKind kind,
                  double q, int degree = 5);
/// Same over Q with Gauss points in time on each slab.
double lift_error(const DdfvMesh& m, const SpaceTimeFunction& u, const SpaceTimeFn& exact, LiftKind kind,
                  double q, int degree = 3, int time_points = 2);

void write_csv(std::ostream& os, const DdfvMesh& m, const DiscreteFunctionBar& u);
void write_csv(std::ostream& os, const DdfvMesh& m, const SpaceTimeFunction& u);

}  // namespace ddfv
