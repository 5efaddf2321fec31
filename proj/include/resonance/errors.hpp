#pragma once

#include "resonance/types.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace resonance {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input: wrong shapes, NaN entries, unknown kinds.
class ModelError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    DomainError(const std::string& what, int nearest_interval, double distance)
        : Error(what), nearest_interval(nearest_interval), distance(distance) {}
    int nearest_interval;
    double distance;
};

class GeometryError : public Error {
public:
    explicit GeometryError(const std::string& what, int interval = -1) : Error(what), interval(interval) {}
    int interval;
};

class UnsupportedModelError : public Error {
public:
    using Error::Error;
};

class GuardBandError : public Error {
public:
    GuardBandError(const std::string& what, double distance) : Error(what), distance(distance) {}
    double distance;
};

class PairingError : public Error {
public:
    using Error::Error;
};

class ResolventSingularityError : public Error {
public:
    ResolventSingularityError(const std::string& what, Complex mu) : Error(what), mu(mu) {}
    Complex mu;
};

class ClusteringError : public Error {
public:
    using Error::Error;
};

class InconsistencyError : public Error {
public:
    using Error::Error;
};

class RootFindingError : public Error {
public:
    RootFindingError(const std::string& what, std::vector<Complex> trajectory)
        : Error(what), trajectory(std::move(trajectory)) {}
    std::vector<Complex> trajectory;
};

}  // namespace resonance
