#ifndef STG2_INSTANCE_IO_H
#define STG2_INSTANCE_IO_H

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stg2/core_model.h"
#include "stg2/solution.h"

namespace stg2 {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& reason);
  int line() const { return line_; }

 private:
  int line_;
};

// Instance text format (.stg2), one record per line, '#' starts a comment:
//
//   NETWORK <nodes> <links> <demands> <wavelengths> <capacity> <reach_km>
//   LINK <id> <a> <b> <length_km>
//   DEMAND <id> <source> <target> <volume>
NetworkInstance parse_instance(std::string_view text);
std::string serialize_instance(const NetworkInstance& instance);

// Solution text format (.stg2sol):
//
//   LIGHTPATHS <count>
//   LP <id> <wavelength> <link>...
//   WORK <demand> <lp>...
//   L1 <demand> <e1> <lp>...
//   L2 <demand> <e1> <e2> <lp>...
//
// Routes implied by consistent routing are not written.
std::string write_solution(const Solution& solution);
Solution read_solution(std::string_view text, const NetworkInstance& instance);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

struct GeneratorConfig {
  uint64_t seed = 1;
  int nodes = 50;
  int links = 100;
  int demands = 300;
  std::vector<int64_t> volumes = {10, 25, 40, 50, 75, 100};
  int64_t reach_km = 1200;
  int wavelengths = 8;
  int64_t capacity = 100;
};

struct GeneratedInstance {
  NetworkInstance instance;
  // False when some demand's terminals can be separated by two link
  // failures; `fragile_demands` counts them.
  bool survivable = true;
  int fragile_demands = 0;
};

// Deterministic for a fixed config. Throws std::invalid_argument for
// configurations that cannot yield a connected graph of the requested size.
GeneratedInstance generate_instance(const GeneratorConfig& config);

}  // namespace stg2

#endif  // STG2_INSTANCE_IO_H
