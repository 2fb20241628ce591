#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tinregion/outer.hpp"
#include "tinregion/regions.hpp"

namespace tin::cli {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNotConverged = 3;

class ChannelFileError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Coefficients h11..h22 as [re, im] or {"mag", "phase_rad"}; noise1, noise2 > 0.
ChannelRealization parse_channel(const nlohmann::json& doc);
ChannelRealization load_channel(const std::string& path);
nlohmann::json channel_to_json(const ChannelRealization& ch);

/// Shortest round-trip decimal form, independent of the locale.
std::string format_number(double value);

void write_region_csv(std::ostream& os, const RegionBoundary& boundary);

nlohmann::json solution_document(const TimeSharingSolution& sol, const RateProfile& profile);

/// Rebuilds R from a solution document: min_k sum_l tau_l r_k(p_l) / rho_k.
double evaluate_solution_document(const ChannelRealization& ch, const nlohmann::json& doc);

/// Entry point without the program name; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tin::cli
