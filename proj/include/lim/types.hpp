#pragma once

#include <Eigen/Dense>

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lim {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec3 = Eigen::Vector3d;

inline std::string format_state(const Vec& y) {
    std::ostringstream os;
    os.precision(17);
    os << "(";
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (i > 0) os << ", ";
        os << y[i];
    }
    os << ")";
    return os.str();
}

/// A model was evaluated outside its valid domain (e.g. the dipole field at
/// the origin). Carries the offending state so long runs fail with context.
class DomainError : public std::runtime_error {
public:
    DomainError(const std::string& what, Vec state)
        : std::runtime_error(what + " at state " + format_state(state)),
          state_(std::move(state)) {}

    const Vec& state() const { return state_; }

private:
    Vec state_;
};

/// Invalid run configuration. Collects every violated field at once.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> issues)
        : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

    const std::vector<std::string>& issues() const { return issues_; }

private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string s = "invalid configuration:";
        for (const auto& i : issues) s += "\n  - " + i;
        return s;
    }
    std::vector<std::string> issues_;
};

}  // namespace lim
