#pragma once

// Built-in codes: the four table codes C1..C4 and the small subcodes that the
// examples refer to. Each is also shipped as a text spec under data/codes.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pirlab/lincode.hpp"

namespace pirlab {

struct CorpusEntry {
  std::string name;  ///< "C1", "rep2_1", ...
  std::string spec;  ///< code_parse input
  std::string note;
};

const std::vector<CorpusEntry>& corpus();
std::optional<LinearCode> corpus_code(std::string_view name);
/// The four codes of the rate table, in order.
std::vector<std::string> table_code_names();

}  // namespace pirlab
