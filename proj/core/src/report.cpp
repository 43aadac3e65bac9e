#include "facetlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>

#include <json.hpp>

#include "facetlab/util.hpp"

namespace facetlab {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kCsvHeader =
    "experiment,model,trial,alpha,space,test_accuracy,n_test,seed";

int64_t cell_correct(const CellResult& c) {
  if (!c.predictions.empty()) {
    int64_t n = 0;
    for (const auto& p : c.predictions)
      if (p.gold == p.predicted) ++n;
    return n;
  }
  return std::llround(c.accuracy * c.n_test);
}

struct Pooled {
  int64_t correct = 0, total = 0;
  double lo = 2.0, hi = -1.0;
  void add(double acc, int64_t corr, int64_t tot) {
    correct += corr;
    total += tot;
    lo = std::min(lo, acc);
    hi = std::max(hi, acc);
  }
  double accuracy() const {
    return total ? static_cast<double>(correct) / static_cast<double>(total)
                 : 0.0;
  }
};

struct MeanTracker {
  double sum = 0.0, lo = 2.0, hi = -1.0;
  int64_t n = 0;
  void add(double v) {
    sum += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    ++n;
  }
  bool any() const { return n > 0; }
  ordered_json json() const {
    return {{"mean", sum / n}, {"min", lo}, {"max", hi}};
  }
};

}  // namespace

std::string report_csv(const ExperimentReport& report) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& c : report.cells) {
    if (c.failed()) continue;
    out += std::string(to_string(report.plan.criterion)) + "," + c.model +
           "," + std::to_string(c.trial) + ",";
    if (!std::isnan(c.alpha)) out += format_double(c.alpha);
    out += "," + c.space + "," + format_double(c.accuracy) + "," +
           std::to_string(c.n_test) + "," + std::to_string(c.seed) + "\n";
  }
  return out;
}

std::string report_summary_json(const ExperimentReport& report) {
  const ExperimentPlan& plan = report.plan;
  const bool ambiguity = plan.criterion == Criterion::kAmbiguity;

  ordered_json root;
  root["schema"] = "facetlab.summary.v1";
  root["experiment"] = std::string(to_string(plan.criterion));
  if (!report.regenerated) root["master_seed"] = plan.master_seed;
  root["complete"] = report.complete();

  ordered_json jplan;
  jplan["models"] = plan.models;
  jplan["trials"] = plan.trials;
  if (ambiguity) jplan["alphas"] = plan.alphas;
  if (report.regenerated) {
    jplan["regenerated_from_csv"] = true;
  } else {
    jplan["sentences"] = plan.sentences;
    jplan["dim"] = plan.dim;
    jplan["negatives"] = plan.negatives;
    jplan["epochs"] = plan.epochs;
    jplan["learning_rate"] = plan.learning_rate;
    jplan["subsample"] = plan.subsample;
    jplan["space"] = plan.space;
    jplan["eval_target_space"] = plan.eval_target_space;
  }
  root["plan"] = jplan;

  size_t failed = 0;
  for (const auto& c : report.cells)
    if (c.failed()) ++failed;
  root["cells"] = {{"total", report.cells.size()}, {"failed", failed}};

  ordered_json jmodels;
  for (const auto& model : plan.models) {
    Pooled pooled;
    std::map<double, Pooled> by_alpha;
    MeanTracker target_space, nn, analogy;
    std::string space;
    for (const auto& c : report.cells) {
      if (c.model != model || c.failed()) continue;
      space = c.space;
      int64_t corr = cell_correct(c);
      pooled.add(c.accuracy, corr, c.n_test);
      if (ambiguity) by_alpha[c.alpha].add(c.accuracy, corr, c.n_test);
      if (!std::isnan(c.target_accuracy)) target_space.add(c.target_accuracy);
      if (!std::isnan(c.nn_accuracy)) nn.add(c.nn_accuracy);
      if (!std::isnan(c.analogy_accuracy)) analogy.add(c.analogy_accuracy);
    }
    ordered_json jm;
    jm["space"] = space;
    jm["accuracy"] = {{"pooled", pooled.accuracy()},
                      {"correct", pooled.correct},
                      {"total", pooled.total},
                      {"min", pooled.total ? pooled.lo : 0.0},
                      {"max", pooled.total ? pooled.hi : 0.0}};
    if (ambiguity) {
      ordered_json arr = ordered_json::array();
      // plan order, not map order, so the grid sequence is preserved
      for (double a : plan.alphas) {
        auto it = by_alpha.find(a);
        if (it == by_alpha.end()) continue;
        arr.push_back({{"alpha", a},
                       {"accuracy", it->second.accuracy()},
                       {"correct", it->second.correct},
                       {"total", it->second.total}});
      }
      jm["by_alpha"] = arr;
    }
    if (target_space.any()) jm["target_space_accuracy"] = target_space.json();
    if (nn.any()) jm["nn_accuracy"] = nn.json();
    if (analogy.any()) jm["analogy_accuracy"] = analogy.json();
    jmodels[model] = jm;
  }
  root["models"] = jmodels;

  ordered_json jfail = ordered_json::array();
  for (const auto& c : report.cells) {
    if (!c.failed()) continue;
    ordered_json f;
    f["model"] = c.model;
    f["trial"] = c.trial;
    if (!std::isnan(c.alpha)) f["alpha"] = c.alpha;
    f["error"] = c.error;
    jfail.push_back(f);
  }
  root["failures"] = jfail;
  return root.dump(2) + "\n";
}

std::string report_curve_svg(const ExperimentReport& report) {
  const ExperimentPlan& plan = report.plan;
  if (plan.criterion != Criterion::kAmbiguity)
    throw Error("curve.svg is only defined for the ambiguity experiment");
  if (plan.alphas.empty()) throw Error("curve.svg: empty alpha grid");

  static const std::map<std::string, const char*> kPalette = {
      {"ppmi", "#1f77b4"}, {"lbl", "#ff7f0e"},  {"cbow", "#2ca02c"},
      {"cwin", "#d62728"}, {"skip", "#9467bd"}, {"sskip", "#8c564b"}};

  const double left = 64, top = 32, width = 480, height = 384;
  const double amin = *std::min_element(plan.alphas.begin(), plan.alphas.end());
  const double amax = *std::max_element(plan.alphas.begin(), plan.alphas.end());
  const double span = amax > amin ? amax - amin : 1.0;
  auto xpos = [&](double a) { return left + (a - amin) / span * width; };
  auto ypos = [&](double acc) { return top + (1.0 - acc) * height; };

  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"760\" "
      "height=\"480\" viewBox=\"0 0 760 480\">\n"
      "<rect width=\"760\" height=\"480\" fill=\"white\"/>\n";
  auto num = [](double v) { return format_fixed(v, 2); };

  // frame + gridlines
  for (int i = 0; i <= 4; ++i) {
    double acc = i / 4.0;
    double y = ypos(acc);
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(y) + "\" x2=\"" +
           num(left + width) + "\" y2=\"" + num(y) +
           "\" stroke=\"#dddddd\"/>\n";
    svg += "<text x=\"" + num(left - 10) + "\" y=\"" + num(y + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"12\">" + format_fixed(acc, 2) + "</text>\n";
  }
  for (double a : plan.alphas) {
    double x = xpos(a);
    svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(top + height) +
           "\" x2=\"" + num(x) + "\" y2=\"" + num(top + height + 5) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(x) + "\" y=\"" + num(top + height + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">" + format_double(a) + "</text>\n";
  }
  svg += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" +
         num(width) + "\" height=\"" + num(height) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  svg += "<text x=\"" + num(left + width / 2) + "\" y=\"470\" "
         "text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">alpha (beta = 2^-alpha)</text>\n";
  svg += "<text x=\"16\" y=\"" + num(top + height / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 16 " +
         num(top + height / 2) + ")\">test accuracy</text>\n";

  double legend_y = top + 8;
  for (const auto& model : plan.models) {
    std::map<double, std::pair<int64_t, int64_t>> by_alpha;  // correct/total
    for (const auto& c : report.cells) {
      if (c.model != model || c.failed()) continue;
      auto& agg = by_alpha[c.alpha];
      agg.first += cell_correct(c);
      agg.second += c.n_test;
    }
    if (by_alpha.empty()) continue;
    auto pal = kPalette.find(model);
    const char* color = pal != kPalette.end() ? pal->second : "#333333";

    std::string points;
    for (double a : plan.alphas) {
      auto it = by_alpha.find(a);
      if (it == by_alpha.end() || it->second.second == 0) continue;
      double acc = static_cast<double>(it->second.first) /
                   static_cast<double>(it->second.second);
      points += num(xpos(a)) + "," + num(ypos(acc)) + " ";
      svg += "<circle cx=\"" + num(xpos(a)) + "\" cy=\"" + num(ypos(acc)) +
             "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }
    if (!points.empty()) points.pop_back();
    svg += "<polyline points=\"" + points + "\" fill=\"none\" stroke=\"" +
           color + "\" stroke-width=\"1.5\"/>\n";

    svg += "<rect x=\"" + num(left + width + 24) + "\" y=\"" +
           num(legend_y - 9) + "\" width=\"18\" height=\"4\" fill=\"" + color +
           "\"/>\n";
    svg += "<text x=\"" + num(left + width + 48) + "\" y=\"" + num(legend_y) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + model +
           "</text>\n";
    legend_y += 18;
  }
  svg += "</svg>\n";
  return svg;
}

void emit_report(const ExperimentReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_text_file(dir + "/report.csv", report_csv(report));
  write_text_file(dir + "/summary.json", report_summary_json(report));
  if (report.plan.criterion == Criterion::kAmbiguity)
    write_text_file(dir + "/curve.svg", report_curve_svg(report));
}

ExperimentReport parse_report_csv(const std::string& csv_text) {
  std::vector<std::string_view> lines;
  size_t pos = 0;
  while (pos < csv_text.size()) {
    size_t eol = csv_text.find('\n', pos);
    if (eol == std::string::npos) eol = csv_text.size();
    std::string_view line(csv_text.data() + pos, eol - pos);
    if (!trim(line).empty()) lines.push_back(line);
    pos = eol + 1;
  }
  if (lines.empty()) throw Error("report CSV: empty file");
  if (trim(lines[0]) != kCsvHeader)
    throw Error("report CSV: unexpected header '" + std::string(lines[0]) +
                "'");

  struct Row {
    std::string model;
    int trial;
    double alpha;
    std::string space;
    double accuracy;
    int n_test;
    uint64_t seed;
  };
  std::vector<Row> rows;
  std::string experiment;
  std::vector<std::string> models;
  std::vector<double> alphas;
  int max_trial = -1;

  for (size_t li = 1; li < lines.size(); ++li) {
    std::string_view line = lines[li];
    std::vector<std::string_view> f;
    size_t start = 0;
    for (size_t i = 0; i <= line.size(); ++i)
      if (i == line.size() || line[i] == ',') {
        f.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    if (f.size() != 8)
      throw Error("report CSV line " + std::to_string(li + 1) +
                  ": expected 8 fields");
    std::string exp(f[0]);
    if (experiment.empty()) experiment = exp;
    else if (exp != experiment)
      throw Error("report CSV: mixed experiments in one file");
    Row r;
    r.model = std::string(f[1]);
    r.trial = static_cast<int>(parse_int(f[2], "trial"));
    r.alpha = f[3].empty() ? std::numeric_limits<double>::quiet_NaN()
                           : parse_double(f[3], "alpha");
    r.space = std::string(f[4]);
    r.accuracy = parse_double(f[5], "test_accuracy");
    r.n_test = static_cast<int>(parse_int(f[6], "n_test"));
    r.seed = parse_uint(f[7], "seed");
    if (std::find(models.begin(), models.end(), r.model) == models.end())
      models.push_back(r.model);
    if (!std::isnan(r.alpha) &&
        std::find(alphas.begin(), alphas.end(), r.alpha) == alphas.end())
      alphas.push_back(r.alpha);
    max_trial = std::max(max_trial, r.trial);
    rows.push_back(std::move(r));
  }

  ExperimentReport report;
  report.regenerated = true;
  report.plan.criterion = parse_criterion(experiment);
  report.plan.models = models;
  report.plan.trials = max_trial + 1;
  report.plan.alphas = alphas;
  if (report.plan.criterion == Criterion::kAmbiguity && alphas.empty())
    throw Error("report CSV: ambiguity rows lack alpha values");

  size_t grid = report.plan.criterion == Criterion::kAmbiguity
                    ? alphas.size()
                    : 1;
  report.cells.resize(models.size() * size_t(report.plan.trials) * grid);
  for (auto& c : report.cells) c.error = "cell missing from report CSV";
  for (const Row& r : rows) {
    size_t mi =
        std::find(models.begin(), models.end(), r.model) - models.begin();
    size_t ai = 0;
    if (grid > 1)
      ai = std::find(alphas.begin(), alphas.end(), r.alpha) - alphas.begin();
    CellResult& c =
        report.cells[(mi * report.plan.trials + r.trial) * grid + ai];
    c.model = r.model;
    c.trial = r.trial;
    c.alpha = r.alpha;
    c.space = r.space;
    c.accuracy = r.accuracy;
    c.n_test = r.n_test;
    c.seed = r.seed;
    c.error.clear();
  }
  return report;
}

}  // namespace facetlab
