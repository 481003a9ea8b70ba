#pragma once

#include <vector>

#include "wfresil/model.hpp"

namespace wfresil::detail {

// Users u, v share a class when swapping them maps the policy onto itself.
// Returns the smallest member of each user's class.
std::vector<UserIndex> interchangeable_users(const WorkflowPolicy& policy);

} // namespace wfresil::detail
