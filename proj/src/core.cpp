#include "sgl/core.hpp"

#include <cmath>
#include <sstream>

namespace sgl {

GroupPartition::GroupPartition(std::vector<int> assignment, int num_groups)
    : assignment_(std::move(assignment)) {
  int max_idx = -1;
  for (int g : assignment_) max_idx = std::max(max_idx, g);
  const int count = num_groups >= 0 ? num_groups : max_idx + 1;
  indices_.resize(std::max(count, 0));
  for (int i = 0; i < static_cast<int>(assignment_.size()); ++i) {
    const int g = assignment_[i];
    if (g >= 0 && g < count) indices_[g].push_back(i);
  }
  weights_.resize(indices_.size());
  for (std::size_t g = 0; g < indices_.size(); ++g)
    weights_[g] = std::sqrt(static_cast<double>(indices_[g].size()));
}

std::vector<std::string> GroupPartition::violations() const {
  std::vector<std::string> out;
  const int count = num_groups();
  for (std::size_t i = 0; i < assignment_.size(); ++i) {
    if (assignment_[i] < 0 || assignment_[i] >= count) {
      out.push_back("group index out of range at feature " + std::to_string(i));
    }
  }
  for (int g = 0; g < count; ++g) {
    if (indices_[g].empty()) out.push_back("empty group " + std::to_string(g));
  }
  return out;
}

std::vector<std::string> problem_errors(const ProblemData& data) {
  std::vector<std::string> out;
  if (data.x.rows() < 1) out.push_back("design matrix has no rows");
  if (data.x.cols() < 1) out.push_back("design matrix has no columns");
  if (data.y.size() != data.x.rows()) out.push_back("response length != N");
  if (data.groups.num_features() != data.x.cols())
    out.push_back("group assignment length != p");
  if (!data.x.allFinite()) out.push_back("non-finite entry in design matrix");
  if (!data.y.allFinite()) out.push_back("non-finite entry in response");
  for (auto& v : data.groups.violations()) out.push_back(v);
  return out;
}

const ProblemData& validate_problem(const ProblemData& data) {
  auto errors = problem_errors(data);
  if (errors.empty()) return data;
  std::ostringstream msg;
  msg << "invalid problem:";
  for (auto& e : errors) msg << "\n  - " << e;
  throw std::invalid_argument(msg.str());
}

}  // namespace sgl
