// Acceptance runner: one PASS/FAIL line per criterion, exit 1 if any failed.
//   acceptance [--out DIR] [--extended] [name ...]
// With no names, runs every scenario except irrelevant_d3 (add --extended for it).

#include <iostream>
#include <string>
#include <vector>

#include "chasym/errors.hpp"
#include "chasym/scenarios.hpp"

int main(int argc, char** argv) {
  std::filesystem::path out = "acceptance";
  bool extended = false;
  std::vector<std::string> names;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--out" && i + 1 < argc) {
      out = argv[++i];
    } else if (a == "--extended") {
      extended = true;
    } else {
      names.push_back(a);
    }
  }
  if (names.empty()) {
    for (const auto& n : chasym::scenario_names()) {
      if (n != "irrelevant_d3" || extended) names.push_back(n);
    }
  }
  bool ok = true;
  for (const auto& n : names) {
    try {
      const auto r = chasym::run_scenario(n, out / n);
      std::cout << r.line() << std::endl;
      ok &= r.pass();
    } catch (const std::exception& e) {
      std::cout << "FAIL  -  " << n << ": " << e.what() << std::endl;
      ok = false;
    }
  }
  return ok ? 0 : 1;
}
