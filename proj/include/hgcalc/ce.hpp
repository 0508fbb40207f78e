#pragma once

#include <map>
#include <vector>

#include "hgcalc/complex.hpp"

namespace hgcalc {

struct CEOptions {
    int degree_bound = 8;  // cohomological degrees 0..bound reported
};

struct CEResult {
    std::map<int, int> ranks;       // cohomological degree -> rank
    std::map<int, int> dims;        // dimension of the CE complex per degree
    bool truncation_approximate = true;
    bool d_squared_zero = true;     // false when the truncated table is not closed
};

// Cohomological Chevalley-Eilenberg complex of a finite L-infinity table:
// free graded-commutative algebra on the dual generators with the
// differential dual to the brackets.  Ranks are exact for the given table.
CEResult ce_cohomology(const LinfTable& table, const CEOptions& opt);

}  // namespace hgcalc
