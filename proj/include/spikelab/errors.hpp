#pragma once

#include <stdexcept>
#include <string>

namespace spikelab {

struct NonConvergence : std::runtime_error {
    explicit NonConvergence(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SingularPoint : std::runtime_error {
    explicit SingularPoint(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidK : std::runtime_error {
    explicit InvalidK(const std::string& msg) : std::runtime_error(msg) {}
};

struct RegimeError : std::runtime_error {
    explicit RegimeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NoRoot : std::runtime_error {
    explicit NoRoot(const std::string& msg) : std::runtime_error(msg) {}
};

struct CoincidentSpikes : std::runtime_error {
    explicit CoincidentSpikes(const std::string& msg) : std::runtime_error(msg) {}
};

struct StepError : std::runtime_error {
    explicit StepError(const std::string& msg) : std::runtime_error(msg) {}
};

struct GridError : std::runtime_error {
    explicit GridError(const std::string& msg) : std::runtime_error(msg) {}
};

struct PositivityLoss : std::runtime_error {
    explicit PositivityLoss(const std::string& msg) : std::runtime_error(msg) {}
};

struct LinearSolveFailure : std::runtime_error {
    explicit LinearSolveFailure(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace spikelab
