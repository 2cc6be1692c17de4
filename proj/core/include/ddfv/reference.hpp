#pragma once

#include "ddfv/fields.hpp"

#include <array>
#include <functional>
#include <limits>
#include <vector>

namespace ddfv {

struct ProblemSpec;

struct ReferenceSolution {
  enum class Kind { ExactClosedForm, FineGrid1d, Manufactured };
  Kind kind = Kind::ExactClosedForm;
  SpaceTimeFn u;
  int dim = 2;
  std::array<double, 6> box{0, 1, 0, 1, 0, 1};
  double t_max = std::numeric_limits<double>::infinity();
};

/// u*(t,x) = exp(-lambda t) prod_i sin(k_i pi (x_i - a_i) / L_i) on a box.
ReferenceSolution heat_exact(int dim, const std::array<double, 6>& box, std::array<int, 3> modes = {1, 1, 1});

/// Entropy-solution oracle for x.dir-aligned data: explicit monotone upwind scheme plus
/// eps central diffusion on fine_n cells of [a, b], zero Dirichlet data at both ends.
struct ViscosityOracleOptions {
  double a = 0.0;
  double b = 1.0;
  double T = 1.0;
  int snapshots = 256;
  double cfl = 0.45;
};

ReferenceSolution vanishing_viscosity_1d(const std::function<double(double)>& flux,
                                         const std::function<double(double)>& dflux,
                                         const std::function<double(double)>& u0, double eps, int fine_n,
                                         const Vec3& direction, const ViscosityOracleOptions& opt = {});

/// Source making u* an exact solution: S = dt u* + div f(u*) - div a(grad A(u*)),
/// by nested central differences with one Richardson step.
struct Manufactured {
  ReferenceSolution ref;
  SpaceTimeFn source;
};

Manufactured manufactured(const ProblemSpec& spec, const SpaceTimeFn& ustar, double length_scale = 1.0);

/// spec with source, initial data, exact solution and source bound taken from u*.
ProblemSpec manufactured_problem(const ProblemSpec& spec, const SpaceTimeFn& ustar);

/// Front of a 1D profile: the largest abscissa where the value is at least `level`.
double front_position(const std::function<double(double)>& profile, double a, double b, double level, int samples);

}  // namespace ddfv
