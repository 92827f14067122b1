#include "fakewatch/evaluation/comparison.hpp"

#include <algorithm>
#include <cstdio>
#include <json.hpp>

#include "fakewatch/corpus/io.hpp"

namespace fakewatch::evaluation {
namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

template <typename Get, typename Set>
void flag_max(std::vector<ComparisonRow>& rows, Get get, Set set) {
  double best = -1.0;
  bool any = false;
  for (const auto& r : rows) {
    if (auto v = get(r)) {
      best = any ? std::max(best, *v) : *v;
      any = true;
    }
  }
  if (!any) return;
  for (auto& r : rows) {
    if (auto v = get(r); v && *v == best) set(r);
  }
}

}  // namespace

std::vector<ComparisonRow> model_comparison_table(std::vector<ComparisonInput> inputs) {
  std::vector<ComparisonRow> rows;
  rows.reserve(inputs.size());
  for (auto& in : inputs) {
    ComparisonRow row;
    row.name = std::move(in.name);
    row.report = std::move(in.report);
    row.auc = in.auc;
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
    if (a.report.f1 != b.report.f1) return a.report.f1 > b.report.f1;
    if (a.report.accuracy != b.report.accuracy) return a.report.accuracy > b.report.accuracy;
    return a.name < b.name;
  });
  using Opt = std::optional<double>;
  flag_max(rows, [](const ComparisonRow& r) { return Opt(r.report.accuracy); },
           [](ComparisonRow& r) { r.best_accuracy = true; });
  flag_max(rows, [](const ComparisonRow& r) { return Opt(r.report.precision); },
           [](ComparisonRow& r) { r.best_precision = true; });
  flag_max(rows, [](const ComparisonRow& r) { return Opt(r.report.recall); },
           [](ComparisonRow& r) { r.best_recall = true; });
  flag_max(rows, [](const ComparisonRow& r) { return Opt(r.report.f1); }, [](ComparisonRow& r) { r.best_f1 = true; });
  flag_max(rows, [](const ComparisonRow& r) { return r.auc; }, [](ComparisonRow& r) { r.best_auc = true; });
  return rows;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::string out = "model,accuracy,precision,recall,f1,auc\n";
  for (const auto& r : rows) {
    out += corpus::csv_escape(r.name) + "," + fixed(r.report.accuracy, 6) + "," + fixed(r.report.precision, 6) + "," +
           fixed(r.report.recall, 6) + "," + fixed(r.report.f1, 6) + "," + (r.auc ? fixed(*r.auc, 6) : "") + "\n";
  }
  return out;
}

std::string comparison_json(const std::vector<ComparisonRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["model"] = r.name;
    j["accuracy"] = r.report.accuracy;
    j["precision"] = r.report.precision;
    j["recall"] = r.report.recall;
    j["f1"] = r.report.f1;
    j["auc"] = r.auc ? nlohmann::ordered_json(*r.auc) : nlohmann::ordered_json(nullptr);
    j["undefined"] = r.report.undefined;
    nlohmann::ordered_json best = nlohmann::ordered_json::array();
    if (r.best_accuracy) best.push_back("accuracy");
    if (r.best_precision) best.push_back("precision");
    if (r.best_recall) best.push_back("recall");
    if (r.best_f1) best.push_back("f1");
    if (r.best_auc) best.push_back("auc");
    j["best"] = best;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

std::string comparison_text(const std::vector<ComparisonRow>& rows) {
  std::size_t width = 5;
  for (const auto& r : rows) width = std::max(width, r.name.size());
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  auto cell = [&](double v, bool best) { return pad(fixed(v, 2) + (best ? "*" : ""), 10); };
  std::string out = pad("Model", width) + "  " + pad("Accuracy", 10) + pad("Precision", 10) + pad("Recall", 10) +
                    "F1 Score\n";
  out += std::string(width + 2 + 38, '-') + "\n";
  for (const auto& r : rows) {
    std::string line = pad(r.name, width) + "  " + cell(r.report.accuracy, r.best_accuracy) +
                       cell(r.report.precision, r.best_precision) + cell(r.report.recall, r.best_recall) +
                       fixed(r.report.f1, 2) + (r.best_f1 ? "*" : "");
    out += line + "\n";
  }
  return out;
}

}  // namespace fakewatch::evaluation
