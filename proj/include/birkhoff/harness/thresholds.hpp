#pragma once

#include <span>
#include <string_view>

namespace birkhoff::harness {

/// Version of the threshold table; echoed into every report.
inline constexpr std::string_view kThresholdVersion = "1";

struct Threshold {
  std::string_view name;
  double value;
  std::string_view description;
};

/// Every finite-n acceptance threshold used by the experiments. The
/// asymptotic statements being tested carry no finite-n constants, so each
/// number here is a choice and lives in this one table.
std::span<const Threshold> thresholds();

/// Throws PreconditionError for an unknown name.
const Threshold& threshold(std::string_view name);

}  // namespace birkhoff::harness
