#pragma once

#include "avgdyn/augmentation.hpp"
#include "avgdyn/dynamics.hpp"
#include "avgdyn/generators.hpp"
#include "avgdyn/matrix.hpp"
#include "avgdyn/models.hpp"
#include "avgdyn/steady_state.hpp"

#include <string>
#include <vector>

namespace avgdyn {

/// Reals are written with 17 significant digits ('%.17g', '.' decimal) so
/// golden files round-trip losslessly.
std::string fmt_real(double v);

// --- matrix exchange -------------------------------------------------------

/// Plain-text CSV, one row per line. Node ordering is the file ordering.
std::string matrix_to_csv(const MatrixXd& m);
MatrixXd matrix_from_csv(const std::string& text);

/// JSON envelope {n, d, entries, row_stochastic}.
std::string matrix_to_json(const StochasticMatrix& m);
StochasticMatrix matrix_from_json(const std::string& text);

/// Envelope plus a "blocks" section naming the original and ghost row ranges.
std::string augmented_to_json(const AugmentedSystem& sys);

// --- reports ---------------------------------------------------------------

std::string trajectory_to_csv(const Trajectory& traj);
std::string outcome_to_json(const OutcomeReport& outcome);
std::string topology_to_json(const TopologyReport& topo);
std::string theorem2_to_json(const Theorem2Report& report);
std::string absorption_to_json(const AbsorptionReport& report);

std::string edge_list_to_csv(const Graph& graph, const MatrixXd* weights = nullptr);

std::string curtain_cells_to_csv(const std::vector<CurtainCell>& cells,
                                 std::uint64_t seed);
std::string transitivity_rows_to_csv(const std::vector<TransitivityRow>& rows,
                                     std::uint64_t seed);

// --- files -----------------------------------------------------------------

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace avgdyn
