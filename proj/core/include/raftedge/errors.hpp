#pragma once

#include <stdexcept>
#include <string>

namespace raftedge {

/// Bad user-supplied configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// The simulated cluster failed to elect a leader for too long (CLI exit code 3).
class LivenessError : public std::runtime_error {
public:
    explicit LivenessError(const std::string& what) : std::runtime_error(what) {}
};

/// A computed quantity violated an internal invariant (e.g. probability outside [0,1]).
class InvariantError : public std::logic_error {
public:
    explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace raftedge
