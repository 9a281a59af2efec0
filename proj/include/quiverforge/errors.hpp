#pragma once

#include <stdexcept>
#include <string>

namespace quiverforge {

/// Violated precondition of a library operation (bad shapes, foreign paths,
/// unbalanced stability parameters, ...). The CLI maps this to exit code 2.
class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw PreconditionError(what);
}

}  // namespace quiverforge
