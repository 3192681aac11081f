#pragma once

#include <cstdint>

namespace sgmres {

/// Operation counts for one solve context. `outer_mv` is the primary cost
/// metric; `audit_mv` holds matrix-vector products spent on true-residual
/// verification so they never pollute the outer count. `vector_updates`
/// counts length-n vector writes (new basis columns, iterate/residual
/// updates, compressed restart columns).
struct CostCounters {
    std::int64_t outer_mv = 0;
    std::int64_t inner_mv = 0;
    std::int64_t prec_applications = 0;
    std::int64_t dot_products = 0;
    std::int64_t vector_updates = 0;
    std::int64_t gevp_solves = 0;
    std::int64_t audit_mv = 0;
};

}  // namespace sgmres
