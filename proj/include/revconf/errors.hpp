#ifndef REVCONF_ERRORS_HPP
#define REVCONF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace revconf {

// Ingestion failures: corpus, lexicon, rule table or labeled-data files.
struct IngestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Model failures: training preconditions, serialization, feature-spec mismatch.
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Statistics failures: degenerate inputs, rank deficiency.
struct AnalyticsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad command-line or config usage.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace revconf

#endif  // REVCONF_ERRORS_HPP
