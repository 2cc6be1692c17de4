#pragma once

#include "ddfv/entropy.hpp"
#include "ddfv/solver.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace ddfv {

/// Legacy ASCII VTK of the primal mesh: one cell per simplex carrying the value of its volume.
void write_vtk_primal(std::ostream& os, const DdfvMesh& m, const DiscreteFunctionBar& u, const std::string& name = "u");
/// Legacy ASCII VTK of the dual mesh: polygons in 2D, tetrahedral pieces in 3D.
void write_vtk_dual(std::ostream& os, const DdfvMesh& m, const DiscreteFunctionBar& u, const std::string& name = "u");

void write_step_csv(std::ostream& os, const std::vector<StepReport>& steps);

/// key,value lines; extra entries are appended in the given order.
void write_diagnostics(std::ostream& os, const RunDiagnostics& d,
                       const std::vector<std::pair<std::string, double>>& extra = {});

void write_entropy_csv(std::ostream& os, const std::vector<EntropyResidual>& rows);

/// Creates the directory (and parents) and returns its path joined with name.
std::string output_path(const std::string& dir, const std::string& name);

}  // namespace ddfv
