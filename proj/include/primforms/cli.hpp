#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace pf::cli {

enum ExitCode { ok = 0, verification_failed = 1, usage_error = 2, consistency_error = 3 };

enum class Format { text, json, csv };

struct RunConfig {
  std::vector<int> levels;  // empty: every supported level
  int min_weight = 2;
  int max_weight = 24;
  std::string cls;          // empty: all classes; "P0" at level 9 means "0" and "*"
  size_t precision = 0;     // 0: derived from the Sturm bound
  size_t margin = 0;        // extra coefficients on top of the derived precision
  size_t terms = 12;        // a_1 .. a_terms in listings
  Format format = Format::text;
  std::string dataset;      // empty: default_dataset_path()
  std::vector<std::string> entries;
  std::string report_path = "primforms-verify.jsonl";
  long prime = 0;
  unsigned threads = 0;     // 0: hardware concurrency
};

// Throws DomainError on levels outside {1,2,3,4,6,8,9} or a bad weight range.
void validate(const RunConfig& cfg);
std::vector<int> selected_levels(const RunConfig& cfg);
std::vector<int> selected_weights(const RunConfig& cfg);

struct DimsRow {
  int level = 1;
  int weight = 0;
  std::string cls;
  int predicted = 0;
  int computed = 0;
  size_t precision = 0;
  bool mismatch() const { return predicted != computed; }
};
// Level 9 rows are "P0" (classes "0" and "*") and "tw".
std::vector<DimsRow> dims_table(const RunConfig& cfg);

// Each returns an ExitCode.
int cmd_dims(const RunConfig& cfg, std::ostream& out);
int cmd_newforms(const RunConfig& cfg, std::ostream& out);
int cmd_charpoly(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_export(const RunConfig& cfg, std::ostream& out);

// Full command line (argv[0] is the program name). Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pf::cli
