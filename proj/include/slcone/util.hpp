#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace slc {

// Error taxonomy shared across modules. Every failure mode callers are
// expected to branch on gets its own type; anything else is a plain
// std::runtime_error.

struct invalid_level_error : std::domain_error {
    explicit invalid_level_error(const std::string& what) : std::domain_error(what) {}
};

struct finite_escape_error : std::runtime_error {
    finite_escape_error(const std::string& what, double where)
        : std::runtime_error(what), escape_param(where) {}
    double escape_param;
};

struct coverage_error : std::out_of_range {
    explicit coverage_error(const std::string& what) : std::out_of_range(what) {}
};

struct pole_error : std::runtime_error {
    explicit pole_error(const std::string& what) : std::runtime_error(what) {}
};

struct degenerate_alpha_error : std::domain_error {
    explicit degenerate_alpha_error(const std::string& what) : std::domain_error(what) {}
};

struct singular_density_error : std::runtime_error {
    explicit singular_density_error(const std::string& what) : std::runtime_error(what) {}
};

struct degenerate_lattice_error : std::domain_error {
    explicit degenerate_lattice_error(const std::string& what) : std::domain_error(what) {}
};

struct constancy_violation_error : std::runtime_error {
    explicit constancy_violation_error(const std::string& what) : std::runtime_error(what) {}
};

struct cannot_normalize_error : std::domain_error {
    explicit cannot_normalize_error(const std::string& what) : std::domain_error(what) {}
};

// Worker count: SLCONE_THREADS if set, else hardware concurrency.
std::size_t worker_count();

// Runs fn(i) for i in [0, n). Splits into contiguous chunks, one per worker.
// fn must be safe to call concurrently for distinct i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace slc
