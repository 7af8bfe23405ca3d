#include "loihi/errors.hpp"

#include <sstream>
#include <utility>

namespace loihi {

namespace {

std::string with_context(const std::string& what, const std::string& group, std::int64_t unit,
                         std::int64_t step) {
    if (group.empty() && unit < 0 && step < 0) {
        return what;
    }
    std::ostringstream out;
    out << what << " (";
    bool first = true;
    if (!group.empty()) {
        out << "group '" << group << "'";
        first = false;
    }
    if (unit >= 0) {
        out << (first ? "" : ", ") << "unit " << unit;
        first = false;
    }
    if (step >= 0) {
        out << (first ? "" : ", ") << "step " << step;
    }
    out << ")";
    return out.str();
}

std::string join_problems(const std::vector<std::string>& problems) {
    std::ostringstream out;
    out << "network validation failed with " << problems.size() << " problem"
        << (problems.size() == 1 ? "" : "s");
    for (const auto& p : problems) {
        out << "\n  - " << p;
    }
    return out.str();
}

}  // namespace

OverflowError::OverflowError(const std::string& what, std::string group, std::int64_t unit,
                             std::int64_t step)
    : Error(with_context(what, group, unit, step)),
      group_(std::move(group)),
      unit_(unit),
      step_(step) {}

ValidationError::ValidationError(std::vector<std::string> problems)
    : Error(join_problems(problems)), problems_(std::move(problems)) {}

}  // namespace loihi
