#pragma once

#include <string>

#include "facetlab/harness.hpp"

namespace facetlab {

// CSV with one row per completed cell, fixed column order:
//   experiment,model,trial,alpha,space,test_accuracy,n_test,seed
// Failed cells carry no row; they appear in the summary's failures list.
std::string report_csv(const ExperimentReport& report);

// Ordered-key JSON: plan echo, completeness, per-model pooled accuracies
// (per alpha for ambiguity, similarity/analogy baselines for multifacet),
// and the failure list. Byte-stable for identical results.
std::string report_summary_json(const ExperimentReport& report);

// Accuracy-versus-alpha line chart (ambiguity only).
std::string report_curve_svg(const ExperimentReport& report);

// Writes report.csv + summary.json (+ curve.svg for ambiguity) into dir.
void emit_report(const ExperimentReport& report, const std::string& dir);

// Rebuilds a skeleton report (no per-word predictions) from report_csv
// output, enough to regenerate the summary and curve.
ExperimentReport parse_report_csv(const std::string& csv_text);

}  // namespace facetlab
