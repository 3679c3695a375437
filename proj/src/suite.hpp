#pragma once

#include <optional>
#include <string>
#include <vector>

#include "problem.hpp"

namespace pathloop {

/// The ten handcrafted problems, easiest first.
const std::vector<Problem>& handcrafted_suite();

std::optional<Problem> find_suite_problem(const std::string& name);

}  // namespace pathloop
