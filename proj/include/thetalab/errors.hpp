// Error taxonomy.  Each failure mode carries a kind that maps onto the CLI
// exit-code contract: validation errors exit 2, budget/cap overruns exit 3.
#pragma once

#include <stdexcept>
#include <string>

namespace thetalab {

enum class errc {
    not_symmetric,
    not_positive_definite,
    unsupported_dimension,
    index_out_of_range,
    pole_region,
    regime_invalid,
    zero_form,
    zero_section,
    degree_zero,
    invalid_argument,
    rank_cap_exceeded,
    budget_exceeded,
    cap_exceeded,
    precision_unreachable,
    factorization_budget,
    screen_incomplete,
};

class error : public std::runtime_error {
public:
    error(errc kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    errc kind() const { return kind_; }

    // 2 = validation, 3 = budget/cap exceeded.
    int exit_code() const {
        switch (kind_) {
            case errc::rank_cap_exceeded:
            case errc::budget_exceeded:
            case errc::cap_exceeded:
            case errc::precision_unreachable:
            case errc::factorization_budget:
            case errc::screen_incomplete:
                return 3;
            default:
                return 2;
        }
    }

private:
    errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& what) {
    throw error(kind, what);
}

}  // namespace thetalab
