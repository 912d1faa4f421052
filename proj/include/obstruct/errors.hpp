#pragma once

#include <stdexcept>
#include <string>

namespace obstruct {

struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// p-adic precision ran out after the configured number of doublings.
// Loud failure; never a silently wrong answer.
struct precision_exhausted : error {
    explicit precision_exhausted(const std::string& msg) : error(msg) {}
};

// An operation required a complete integer factorization but got a cofactor.
struct incomplete_factorization : error {
    explicit incomplete_factorization(const std::string& msg) : error(msg) {}
};

// An element offered as Algorithm input does not have square norm.
struct non_square_norm : error {
    explicit non_square_norm(const std::string& msg) : error(msg) {}
};

// A search/node budget was exceeded.
struct budget_exceeded : error {
    explicit budget_exceeded(const std::string& msg) : error(msg) {}
};

namespace detail {
// Internal signal: the current working precision cannot decide something.
// Drivers catch it, double precision and retry; it never escapes a module API.
struct need_more_precision {};
}  // namespace detail

}  // namespace obstruct
