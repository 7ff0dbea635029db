#pragma once

// Randomised property suites for every identity the library relies on.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qhb/mobius.hpp"

namespace qhb::verify {

struct PropertyOutcome {
  std::string module;
  std::string name;
  double max_error{0};
  double tolerance{0};
  std::size_t trials{0};
  bool passed{true};
  std::string note;
};

struct Report {
  std::vector<PropertyOutcome> outcomes;
  std::vector<std::string> warnings;
  double seconds{0};

  bool passed() const;
  const PropertyOutcome* find(const std::string& name) const;
};

using HuaApply = std::function<HVec(const HuaInvolution<double>&, const HVec&)>;

struct Options {
  std::uint64_t seed{20240601};
  std::size_t trials{10000};
  /// The map checked by the involution and norm-relation suites.  Tests
  /// swap in a deliberately broken one to make sure the harness notices.
  HuaApply hua_apply = [](const HuaInvolution<double>& phi, const HVec& z) { return phi(z); };
};

Report run(const Options& options);

std::string format_text(const Report& report);
nlohmann::json to_json(const Report& report);

}  // namespace qhb::verify
