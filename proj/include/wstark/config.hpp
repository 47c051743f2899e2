#ifndef WSTARK_CONFIG_HPP
#define WSTARK_CONFIG_HPP

#include <cstdint>
#include <string>

#include "wstark/ep_search.hpp"
#include "wstark/gpe.hpp"

namespace wstark {

/// Every tunable of every module, with the documented defaults.
struct RunConfig {
    LatticeParams lattice{1.0, 0.0, 0.0, 0.25, 0.0};
    GridSpec grid;
    SolverOptions solver;
    CertificationThresholds certification;
    GpeOptions gpe;
    double shell_radius = 0.1;   ///< EP-curve continuation step
    double loop_continuity = 0.8;
    std::uint64_t seed = 1;      ///< RNG seed for perturbed-seed robustness runs
    std::string output_dir = ".";

    void validate() const; ///< throws std::invalid_argument naming key and constraint
};

/// Parse a structured key-value text ("section.key = value", '#' comments).
/// Unknown keys are rejected, not ignored. Empty text yields full defaults.
RunConfig parse_config(const std::string& text);

/// Serialize every field; parse(serialize(c)) == c exactly.
std::string serialize_config(const RunConfig& c);

bool operator==(const RunConfig& a, const RunConfig& b);

} // namespace wstark

#endif
