// Acceptance gate: one line per criterion, nonzero exit if any fails.
#include <cstdio>

#include "warpspec/verify.hpp"

int main() {
  const warpspec::AcceptanceReport report = warpspec::run_acceptance();
  for (const auto &c : report.criteria) {
    const warpspec::CheckRow *shown = nullptr;
    for (const auto &row : report.rows)
      if (row.criterion == c.id && (!shown || (!row.passed && shown->passed)))
        shown = &row;
    std::printf("[%s] criterion %2d: %-48s checks=%zu failures=%zu time=%.2fs", c.passed ? "PASS" : "FAIL", c.id,
                c.title.c_str(), c.checks, c.failures, c.seconds);
    if (!c.error.empty())
      std::printf("  error: %s", c.error.c_str());
    else if (shown)
      std::printf("  %s: %.9g %s %.9g (tol %.3g)", shown->name.c_str(), shown->measured, shown->relation.c_str(),
                  shown->expected, shown->tol);
    std::printf("\n");
  }
  const bool ok = report.all_passed();
  std::printf("%s\n", ok ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED");
  return ok ? 0 : 1;
}
