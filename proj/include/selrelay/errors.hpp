#pragma once

#include <stdexcept>
#include <string>

namespace selrelay {

/// Invalid numeric argument (negative level, nonpositive frequency, ...).
class domain_error : public std::invalid_argument {
public:
    explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Inconsistent or malformed configuration (mismatched traces, bad scheme/threshold combo, ...).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Sample rate too low for the Doppler bandwidth of a hop.
class resolution_error : public config_error {
public:
    explicit resolution_error(const std::string& what) : config_error(what) {}
};

/// Not enough samples to estimate the requested statistic.
class insufficient_data_error : public std::runtime_error {
public:
    explicit insufficient_data_error(const std::string& what) : std::runtime_error(what) {}
};

/// Operation defined only for a specific relay count (typically L = 2).
class unsupported_topology_error : public std::runtime_error {
public:
    explicit unsupported_topology_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace selrelay
