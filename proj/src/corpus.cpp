#include "pirlab/corpus.hpp"

namespace pirlab {

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = {
      {"C1", "field q=2\nrows: 10010 / 01010 / 00101\n", "[5,3], decomposable"},
      {"C2", "field q=2\nrows: 100000001 / 010000001 / 001000110 / 000101011 / 000011111\n", "[9,5]"},
      {"C3", "field q=2\ndec k=4: 1,2,4,8,8,14,5\n", "[7,4]"},
      {"C4", "field q=2\ndec k=6: 1,2,4,8,16,32,48,40,24,56,55\n", "[11,6]"},
      {"rep2_1", "field q=2\nrows: 11\n", "[2,1] repetition"},
      {"spc3_2", "field q=2\nrows: 101 / 011\n", "[3,2] single parity check"},
      {"spc5_4", "field q=2\nrows: 10001 / 01001 / 00101 / 00011\n", "[5,4] single parity check"},
  };
  return entries;
}

std::optional<LinearCode> corpus_code(std::string_view name) {
  for (const auto& e : corpus())
    if (e.name == name) return code_parse(e.spec);
  return std::nullopt;
}

std::vector<std::string> table_code_names() { return {"C1", "C2", "C3", "C4"}; }

}  // namespace pirlab
