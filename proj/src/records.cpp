#include "lcb/records.hpp"

#include <stdexcept>

namespace lcb {

void validate_record(const OperatorRecord& record) {
    if (record.n_total < 1) {
        throw std::domain_error("operator '" + record.operator_id
                                + "': total welds must be >= 1, got "
                                + std::to_string(record.n_total));
    }
    if (record.x_repaired < 0 || record.x_repaired > record.n_total) {
        throw std::domain_error("operator '" + record.operator_id
                                + "': repaired welds must lie in [0, n], got "
                                + std::to_string(record.x_repaired) + " of "
                                + std::to_string(record.n_total));
    }
}

}  // namespace lcb
