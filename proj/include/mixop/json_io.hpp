#pragma once

#include <string>
#include <vector>

#include "mixop/error.hpp"
#include "mixop/harness.hpp"

namespace mixop {

/// Input text is not valid JSON or does not follow the expected schema.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Measure: {"dim": d, "points": [[...], ...], "weights": [...]}.
DiscreteMeasure parse_measure(const std::string& text);
/// MetaMeasure: {"weights": [...], "atoms": [<measure>, ...]}; "dim" is required only when atoms is empty.
MetaMeasure parse_meta_measure(const std::string& text);
/// ThetaMeasure: {"thetas": [{"mean": m, "sd": s}, ...], "weights": [...]}.
ThetaMeasure parse_theta_measure(const std::string& text);
/// {"kind": "box", "lo": [...], "hi": [...]} | {"kind": "ball", "center": [...], "r": r}
/// | {"kind": "halfspace", "n": [...], "c": c}.
TestSet parse_test_set(const std::string& text);

/// A convergence experiment: the sequence recipe, the test sets and harness options.
struct ConvergenceConfig {
  SequenceSpec spec;
  std::vector<NamedSet> sets;
  HarnessOptions options;
};
ConvergenceConfig parse_convergence_config(const std::string& text);

/// Canonical serializations; every real is written with 17 significant digits.
std::string to_json(const DiscreteMeasure& mu);
std::string to_json(const MetaMeasure& nu);
std::string to_json(const ThetaMeasure& lambda);
std::string to_json(const TestSet& a);

/// JSON summary of a convergence run: verdicts, boundary masses, certificate.
std::string summary_json(const ConvergenceRun& run);

/// Reads a whole file; throws FormatError when it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace mixop
