#pragma once

#include "errors.hpp"

namespace pcqe {

enum class RelOp { EQ, NE, LE, LT };

inline RelOp negate_rel(RelOp r) {
    switch (r) {
        case RelOp::EQ: return RelOp::NE;
        case RelOp::NE: return RelOp::EQ;
        // not (t <= 0) is (0 < t); callers negate the term side as well.
        case RelOp::LE: return RelOp::LT;
        case RelOp::LT: return RelOp::LE;
    }
    throw Error("unreachable relation");
}

} // namespace pcqe
