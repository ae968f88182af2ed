// Ride datasets as JSON lines, one ride per line. Field order:
// ride_index, psi_index, grid_index, round, times, E, d, tau, model, psi, mode,
// zeta, and shots (shot mode only). Doubles use the shortest decimal form that
// parses back to the same bits.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rodeo/harness.hpp"

namespace rodeo::dataset {

using harness::RideRecord;

std::string to_line(const RideRecord& record);

/// Throws std::runtime_error naming `line_number` and the offending field.
RideRecord from_line(const std::string& line, std::size_t line_number = 1);

void write_dataset(const std::vector<RideRecord>& records, std::ostream& out);

/// Blank lines are skipped.
std::vector<RideRecord> read_dataset(std::istream& in);

/// Writes records to a stream as they arrive; suitable as a harness::RecordSink.
class DatasetWriter {
  public:
    explicit DatasetWriter(std::ostream& out) : out_(out) {}
    void operator()(const RideRecord& record);

  private:
    std::ostream& out_;
};

}  // namespace rodeo::dataset
