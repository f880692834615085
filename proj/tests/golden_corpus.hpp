#pragma once

#include <string>
#include <vector>

namespace hfix::test {

using Argv = std::vector<std::string>;

/// Fixed CLI invocations covering every analysis subcommand. `format` is
/// appended to each one.
inline std::vector<Argv> golden_corpus(const std::string& format) {
  const std::vector<std::string> maps = {
      "z^2",
      "z^2 + 0.25",
      "z^3",
      "i*z + z^2",
      "1/z^2",
      "(2*z)/(z^2 + z + 1)",
      "z^3 - 2*z + 1",
      "z^2 - 1",
      "z^4 + (0.3+0.2i)*z - 0.5i",
      "(z^2 + 1)/(z - 1)",
      "(z^3 + 2)/(z^2 - 3*z + 0.5)",
      "z/(z + 1)",
      "z + z^3",
      "0.5*z^5 - z^2 + 0.1",
      "(1 - 2i)*z^2 + (0.25+0.1i)",
  };
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"z^3", "z^3"},
      {"z^2", "z^2"},
      {"1/z^2", "1/z^2"},
      {"(2*z)/(z^2+z+1)", "(2*z)/(z^2+z+1)"},
      {"z^2 + 0.25", "z^3 - z"},
      {"i*z + z^2", "z^2"},
      {"z^2/(2*z - 1)", "(z^3 + z^2)/(3*z - 1)"},
      {"z^4 - 1", "z^2 + i"},
      {"1/z^3", "z^2"},
      {"z^3", "2*z"},
      {"z^5 + 0.1*z", "z^2 - 0.75"},
      {"z + z^3", "z^2 + 0.25"},
  };
  const std::vector<std::string> cs = {"-1", "0", "0.24", "0.25", "0.26", "1", "10", "1+2i"};

  std::vector<Argv> out;
  for (const auto& m : maps) out.push_back({"analyze", "--f", m, "--format", format});
  for (std::size_t k = 0; k < 10; ++k) out.push_back({"verify", "--f", maps[k], "--format", format});
  for (const auto& [h, g] : pairs) out.push_back({"harmonic", "--h", h, "--g", g, "--format", format});
  out.push_back({"harmonic", "--h", "z^3", "--g", "z^3", "--check", "conjecture", "--format", format});
  out.push_back({"harmonic", "--h", "z^3", "--g", "z^3", "--check", "remark", "--format", format});
  for (const auto& c : cs) out.push_back({"quadratic", "--c", c, "--format", format});
  out.push_back({"batch", "--random", "6", "--seed", "1", "--degree", "3", "--format", format});
  out.push_back({"batch", "--random", "4", "--seed", "2", "--degree", "4", "--rational", "--format", format});
  out.push_back({"analyze", "--f", "z^2", "--tol-root", "1e-10", "--tol-cluster", "1e-5", "--format", format});
  return out;
}

}  // namespace hfix::test
