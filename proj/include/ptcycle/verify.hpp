#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ptcycle {

// One measured quantity of an acceptance criterion. Boolean properties are
// recorded as computed = 1 (holds) or 0, expected = 1, tolerance = 0.
struct Check {
  int criterion = 0;
  std::string name;
  double computed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool informational = false;  // reported, never gates the result
};

struct CriterionSummary {
  int criterion = 0;
  std::string title;
  bool pass = true;
};

struct VerificationReport {
  std::vector<Check> checks;
  std::vector<CriterionSummary> criteria;

  bool all_pass() const;
  // Derived lambda2 and its two cross-checks, for the report header.
  double lambda2 = 0.0;
  double common_entropy = 0.0;
  double stirling = 0.0;
};

struct VerifyOptions {
  // Shifts the expected value of the named check; used to self-test the
  // harness.
  std::string perturb_check;
  double perturb_amount = 0.0;
};

VerificationReport run_verification(const VerifyOptions& options = {});

void print_report(std::ostream& os, const VerificationReport& report);

// Truncated ladder sum of exp(-(n+ W+ + n- W-)/T) for real W+- with the
// cutoff chosen so that the neglected tail is below `tail_bound`.
double spectral_sum_partition(double w_plus, double w_minus, double T, double tail_bound = 1e-12);

}  // namespace ptcycle
