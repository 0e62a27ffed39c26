#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "helpdesk/cli.hpp"

#include "helpdesk/labeling.hpp"
#include "helpdesk/synth.hpp"

namespace helpdesk::support {

inline std::vector<LabeledEmail> synthetic_labeled(std::uint64_t seed, std::vector<std::size_t> counts = {}) {
  const auto cats = default_categories();
  auto spec = default_synth_spec(seed);
  if (!counts.empty()) spec.counts = std::move(counts);
  std::vector<CleanEmail> cleaned;
  for (const auto& s : generate_corpus(spec, cats)) cleaned.push_back(clean(s.email));
  return build_labeled_corpus(cleaned, cats).emails;
}

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "helpdesk");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("helpdesk-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace helpdesk::support
