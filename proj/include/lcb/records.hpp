#pragma once

#include <cstdint>
#include <string>

namespace lcb {

// One operator's inspection tally within a product group.
struct OperatorRecord {
    std::string operator_id;
    std::int64_t n_total = 0;    // total welds, >= 1
    std::int64_t x_repaired = 0; // failed-inspection welds, 0 <= x <= n
};

// Throws std::domain_error when the tally violates 0 <= x <= n, n >= 1.
void validate_record(const OperatorRecord& record);

}  // namespace lcb
