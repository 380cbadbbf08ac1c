// regimes: batch CLI for time-series regime segmentation.
//
// Subcommands wire ingestion -> volatility -> clustering -> thresholds ->
// smoothing -> validation -> reports. Every command writes a run manifest
// with all effective parameters; `pipeline --manifest` replays one exactly.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "regimes.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace regimes;

namespace {

std::string fmtd(double v) { return regimes::detail::fmt_double(v); }

std::string stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

void write_text(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write " + path.string());
  out << body;
}

void write_json_file(const fs::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

fs::path ensure_out_dir(const std::string& out) {
  if (out.empty()) throw config_error("--out directory is required");
  fs::path p(out);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw data_error("cannot create output directory '" + out + "'");
  return p;
}

void write_manifest(const fs::path& out, const std::string& command, const json& params) {
  write_json_file(out / "run-manifest.json", json{{"command", command}, {"parameters", params}});
}

// Loose CSV table for label files: header plus string cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t col(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw data_error("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  }
  std::vector<std::string> column(const std::string& name) const {
    const std::size_t j = col(name);
    std::vector<std::string> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(r.at(j));
    return v;
  }
};

CsvTable read_csv_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw data_error("empty file '" + path + "'");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);
  t.header = regimes::detail::split_csv_line(line);
  while (std::getline(in, line)) {
    if (regimes::detail::trim(line).empty()) continue;
    auto f = regimes::detail::split_csv_line(line);
    if (f.size() < t.header.size())
      throw data_error("short row in '" + path + "'");
    t.rows.push_back(std::move(f));
  }
  return t;
}

std::vector<int> int_column(const CsvTable& t, const std::string& name) {
  std::vector<int> v;
  for (const auto& cell : t.column(name)) {
    try {
      v.push_back(std::stoi(cell));
    } catch (const std::exception&) {
      throw data_error("non-integer label '" + cell + "' in column '" + name + "'");
    }
  }
  return v;
}

json curve_json(const KSelectionCurve& c) {
  json j{{"criterion", c.criterion}, {"k", c.k}, {"metric", c.metric}, {"selected_k", c.selected_k}};
  if (!c.se.empty()) {
    j["se"] = c.se;
    j["B"] = c.B;
    j["reference"] = "uniform-range";
  }
  return j;
}

json regression_json(const RegimeRegression& r) {
  json coef = json::array();
  for (int j = 0; j < r.n_params; ++j)
    coef.push_back(json{{"name", r.names[static_cast<std::size_t>(j)]},
                        {"estimate", r.beta[j]},
                        {"std_error", r.se[j]},
                        {"t", r.t_stat[j]},
                        {"p", r.p_value[j]},
                        {"stars", stars(r.p_value[j])}});
  return json{{"coefficients", coef}, {"dropped", r.dropped},  {"n", r.n},
              {"ssr", r.ssr},         {"r2", r.r2},            {"adj_r2", r.adj_r2},
              {"loglik", r.loglik},   {"aic", r.aic},          {"bic", r.bic},
              {"rmse", r.rmse}};
}

json letters_json(const GroupLetters& g, const std::vector<std::string>& names) {
  json by_regime = json::object();
  for (std::size_t i = 0; i < g.letters.size(); ++i) by_regime[names[i]] = g.letters[i];
  return json{{"alpha", g.alpha}, {"letters", by_regime}};
}

int count_changes(const std::vector<std::string>& labels) {
  LabelSeries s;
  s.labels = labels;
  return count_regime_changes(s);
}

json label_summary(const std::vector<std::string>& labels) {
  std::map<std::string, int> counts;
  for (const auto& l : labels) ++counts[l];
  return json{{"counts", counts}, {"regime_changes", count_changes(labels)}};
}

// ---------------------------------------------------------------------------
// cluster/pipeline shared machinery

struct ClusterOutputs {
  SeriesMatrix X;                 // original units
  Eigen::MatrixXd Xc;             // clustering matrix (maybe standardized)
  RegimeAssignment kmeans_assign;
  RegimeAssignment dct_assign;
  KMeansResult kmeans_raw;
  double pcoa_negative_mass = 0.0;
  bool standardized = false;
};

Eigen::MatrixXd maybe_standardize(const SeriesMatrix& X, const std::string& mode,
                                  bool& applied) {
  applied = mode == "on" || (mode == "auto" && X.cols() >= 2);
  if (!applied) return X.values;
  return standardize(X).values;
}

ClusterOutputs run_clustering(const SeriesMatrix& X, int k, double lambda, int restarts,
                              std::uint64_t seed, const std::string& standardize_mode) {
  ClusterOutputs co;
  co.X = X;
  co.Xc = maybe_standardize(X, standardize_mode, co.standardized);

  co.kmeans_raw = kmeans(co.Xc, k, restarts, seed);
  co.kmeans_assign = order_regimes(co.kmeans_raw, X.values);

  if (lambda > 0.0) {
    const DissimMatrix D = dct_matrix(co.Xc, lambda);
    const Embedding emb = pcoa_embed(D, static_cast<int>(X.rows()) - 1);
    co.pcoa_negative_mass = emb.negative_mass;
    const Eigen::MatrixXd coords = emb.coords.leftCols(std::max(emb.retained, 1));
    const KMeansResult dct_res = kmeans(coords, k, restarts, derive_seed(seed, 0x9e3779b9u));
    co.dct_assign = order_regimes(dct_res, X.values);
  } else {
    co.dct_assign = co.kmeans_assign;  // lambda = 0 reduces DCT to Euclidean
  }
  return co;
}

void write_labels_csv(const fs::path& path, const SeriesMatrix& X,
                      const std::vector<std::pair<std::string, const RegimeAssignment*>>& variants,
                      const std::vector<std::pair<std::string, const std::vector<std::string>*>>&
                          name_variants = {}) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write " + path.string());
  out << X.time_name;
  for (const auto& [name, a] : variants) out << ',' << name << "_index," << name << "_name";
  for (const auto& [name, labels] : name_variants) out << ',' << name << "_name";
  out << '\n';
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    out << X.times[static_cast<std::size_t>(i)].str();
    for (const auto& [name, a] : variants)
      out << ',' << a->regime_of[static_cast<std::size_t>(i)] << ','
          << a->regime_names[static_cast<std::size_t>(a->regime_of[static_cast<std::size_t>(i)])];
    for (const auto& [name, labels] : name_variants)
      out << ',' << (*labels)[static_cast<std::size_t>(i)];
    out << '\n';
  }
}

json thresholds_json(const ThresholdFit& tf, const std::vector<std::string>& names) {
  json intervals = json::array();
  for (std::size_t r = 0; r <= tf.thresholds.size(); ++r) {
    json iv{{"regime", r}, {"name", names.at(r)}};
    iv["min"] = r == 0 ? json(nullptr) : json(tf.thresholds.cuts[r - 1]);
    iv["max"] = r == tf.thresholds.size() ? json(nullptr) : json(tf.thresholds.cuts[r]);
    intervals.push_back(iv);
  }
  return json{{"cuts", tf.thresholds.cuts}, {"purity", tf.purity}, {"intervals", intervals}};
}

// ---------------------------------------------------------------------------
// subcommand parameter blocks

struct IngestParams {
  std::string input, date_column = "date", impute = "none";
  std::vector<std::string> columns;
  std::string out;
};

int cmd_ingest(const IngestParams& p) {
  const fs::path out = ensure_out_dir(p.out);
  const SeriesMatrix X = load_series(p.input, p.columns, p.date_column, p.impute == "linear");
  write_series_csv((out / "series.csv").string(), X);
  write_json_file(out / "ingest.json",
                  json{{"rows", X.rows()},
                       {"variables", X.variable_names},
                       {"start", X.times.front().str()},
                       {"end", X.times.back().str()}});
  write_manifest(out, "ingest",
                 json{{"input", p.input},
                      {"date_column", p.date_column},
                      {"columns", p.columns},
                      {"impute", p.impute}});
  return 0;
}

struct VolatilityParams {
  std::string input, date_column = "date", column, impute = "none", units = "fraction";
  int lags = 5;
  std::string out;
};

int cmd_volatility(const VolatilityParams& p) {
  const fs::path out = ensure_out_dir(p.out);
  std::vector<std::string> cols;
  if (!p.column.empty()) cols.push_back(p.column);
  SeriesMatrix X = load_series(p.input, cols, p.date_column, p.impute == "linear");
  if (p.units == "percent") X.values /= 100.0;
  std::vector<double> x = X.column_vector(0);

  const GarchFit fit = garch11_fit(x);
  const ArchTestReport pre = arch_lm_test(x, p.lags);

  // Standardized residuals should carry no remaining ARCH effect.
  std::vector<double> std_resid(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    std_resid[i] = fit.residuals[i] / std::sqrt(fit.cond_var[i]);
  const ArchTestReport post = arch_lm_test(std_resid, p.lags);

  json coef = json::array();
  const char* names[4] = {"mu", "omega", "alpha1", "beta1"};
  const double est[4] = {fit.mu, fit.omega, fit.alpha1, fit.beta1};
  for (int i = 0; i < 4; ++i) {
    json row{{"name", names[i]}, {"estimate", est[i]}};
    const double se = fit.std_errors[static_cast<std::size_t>(i)];
    if (std::isfinite(se) && se > 0.0) {
      const double z = est[i] / se;
      const double pv = 2.0 * (1.0 - normal_cdf(std::fabs(z)));
      row["std_error"] = se;
      row["p"] = pv;
      row["stars"] = stars(pv);
    } else {
      row["std_error"] = nullptr;
    }
    coef.push_back(row);
  }
  write_json_file(out / "volatility.json",
                  json{{"model", "GARCH(1,1)"},
                       {"coefficients", coef},
                       {"loglik", fit.loglik},
                       {"aic_norm", fit.aic_norm},
                       {"n", fit.n},
                       {"arch_test", json{{"input", json{{"lm_stat", pre.lm_stat},
                                                         {"lm_p", pre.lm_p},
                                                         {"q_stat", pre.q_stat},
                                                         {"q_p", pre.q_p}}},
                                          {"standardized_residuals",
                                           json{{"lm_stat", post.lm_stat},
                                                {"lm_p", post.lm_p},
                                                {"q_stat", post.q_stat},
                                                {"q_p", post.q_p}}},
                                          {"lags", p.lags}}}});
  SeriesMatrix V;
  V.times = X.times;
  V.time_name = X.time_name;
  V.variable_names = {"cond_var"};
  V.values.resize(X.rows(), 1);
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    V.values(i, 0) = fit.cond_var[static_cast<std::size_t>(i)];
  write_series_csv((out / "cond-var.csv").string(), V);
  write_manifest(out, "volatility",
                 json{{"input", p.input},
                      {"date_column", p.date_column},
                      {"column", p.column},
                      {"impute", p.impute},
                      {"units", p.units},
                      {"lags", p.lags}});
  return 0;
}

struct ClusterParams {
  std::string input, date_column = "date", impute = "none", standardize_mode = "auto";
  std::vector<std::string> columns;
  int k = 4;
  double lambda = 0.1;
  int restarts = 25;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_cluster(const ClusterParams& p) {
  const fs::path out = ensure_out_dir(p.out);
  const SeriesMatrix X = load_series(p.input, p.columns, p.date_column, p.impute == "linear");
  const ClusterOutputs co =
      run_clustering(X, p.k, p.lambda, p.restarts, p.seed, p.standardize_mode);

  write_labels_csv(out / "labels.csv", X,
                   {{"kmeans", &co.kmeans_assign}, {"dct", &co.dct_assign}});

  std::ofstream centers((out / "centers.csv").string(), std::ios::binary);
  centers << "regime,name";
  for (const auto& n : X.variable_names) centers << ",mean_" << n;
  centers << '\n';
  for (int r = 0; r < p.k; ++r) {
    centers << r << ',' << co.kmeans_assign.regime_names[static_cast<std::size_t>(r)];
    // Report per-regime means of the original variables, not standardized.
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      double sum = 0.0;
      int n = 0;
      for (Eigen::Index i = 0; i < X.rows(); ++i)
        if (co.kmeans_assign.regime_of[static_cast<std::size_t>(i)] == r) {
          sum += X.values(i, j);
          ++n;
        }
      centers << ',' << fmtd(n > 0 ? sum / n : 0.0);
    }
    centers << '\n';
  }
  centers.close();

  std::map<std::string, int> sizes;
  for (int i = 0; i < static_cast<int>(X.rows()); ++i)
    ++sizes[co.kmeans_assign.regime_names[static_cast<std::size_t>(
        co.kmeans_assign.regime_of[static_cast<std::size_t>(i)])]];
  write_json_file(out / "cluster.json",
                  json{{"k", p.k},
                       {"lambda", p.lambda},
                       {"wss", co.kmeans_raw.wss},
                       {"iterations", co.kmeans_raw.iterations},
                       {"sizes", sizes},
                       {"standardized", co.standardized},
                       {"pcoa_negative_mass", co.pcoa_negative_mass}});
  write_manifest(out, "cluster",
                 json{{"input", p.input},
                      {"date_column", p.date_column},
                      {"columns", p.columns},
                      {"impute", p.impute},
                      {"standardize", p.standardize_mode},
                      {"k", p.k},
                      {"lambda", p.lambda},
                      {"restarts", p.restarts},
                      {"seed", p.seed}});
  return 0;
}

struct ThresholdsParams {
  std::string input, date_column = "date", column, impute = "none";
  std::string labels, label_column = "kmeans_index";
  int k = 0;  // 0: infer from labels
  std::string out;
};

int cmd_thresholds(const ThresholdsParams& p) {
  const fs::path out = ensure_out_dir(p.out);
  std::vector<std::string> cols;
  if (!p.column.empty()) cols.push_back(p.column);
  const SeriesMatrix X = load_series(p.input, cols, p.date_column, p.impute == "linear");
  const CsvTable t = read_csv_table(p.labels);
  const std::vector<int> labels = int_column(t, p.label_column);
  if (labels.size() != static_cast<std::size_t>(X.rows()))
    throw data_error("label file and input have different lengths");
  int k = p.k;
  if (k == 0) {
    for (int l : labels) k = std::max(k, l + 1);
  }
  const std::vector<double> x = X.column_vector(0);
  const ThresholdFit tf = fit_thresholds(x, labels, k);
  json j = thresholds_json(tf, default_regime_names(k));
  j["k"] = k;
  j["variable"] = X.variable_names[0];
  write_json_file(out / "thresholds.json", j);
  write_manifest(out, "thresholds",
                 json{{"input", p.input},
                      {"date_column", p.date_column},
                      {"column", p.column},
                      {"impute", p.impute},
                      {"labels", p.labels},
                      {"label_column", p.label_column},
                      {"k", p.k}});
  return 0;
}

struct SmoothParams {
  std::string labels, label_column = "kmeans_name";
  int h = 4;
  std::string out;
};

int cmd_smooth(const SmoothParams& p) {
  const fs::path out = ensure_out_dir(p.out);
  const CsvTable t = read_csv_table(p.labels);
  LabelSeries in;
  in.labels = t.column(p.label_column);
  const LabelSeries sm = majority_smooth(in, p.h);

  std::string date_col = t.header.empty() ? "date" : t.header[0];
  const std::vector<std::string> dates = t.column(date_col);
  std::string body = date_col + ",original,smoothed\n";
  for (std::size_t i = 0; i < dates.size(); ++i)
    body += dates[i] + "," + in.labels[i] + "," + sm.labels[i] + "\n";
  write_text(out / "smoothed.csv", body);

  write_json_file(out / "smooth.json",
                  json{{"changes_before", count_regime_changes(in)},
                       {"changes_after", count_regime_changes(sm)},
                       {"replaced", diff_vs_reference(in, sm)},
                       {"h", p.h}});
  write_manifest(out, "smooth",
                 json{{"labels", p.labels}, {"label_column", p.label_column}, {"h", p.h}});
  return 0;
}

struct ValidateParams {
  std::string input, date_column = "date", impute = "none", standardize_mode = "auto";
  std::vector<std::string> columns;
  std::string labels, label_column = "kmeans_index";
  double lambda = 0.1;
  double alpha = 0.01;
  std::string out;
};

int cmd_validate(const ValidateParams& p) {
  const fs::path out = ensure_out_dir(p.out);
  const SeriesMatrix X = load_series(p.input, p.columns, p.date_column, p.impute == "linear");
  const CsvTable t = read_csv_table(p.labels);
  const std::vector<int> labels = int_column(t, p.label_column);
  if (labels.size() != static_cast<std::size_t>(X.rows()))
    throw data_error("label file and input have different lengths");
  int k = 0;
  for (int l : labels) k = std::max(k, l + 1);

  bool standardized = false;
  const Eigen::MatrixXd Xc = maybe_standardize(X, p.standardize_mode, standardized);
  const DissimMatrix De = euclidean_matrix(Xc);
  const SilhouetteResult sil = silhouette(De, labels, k);

  const std::vector<double> x = X.column_vector(0);
  const AnovaTable anova = anova_oneway(x, labels, k);
  const GroupLetters lsd = fisher_lsd(x, labels, k, p.alpha);
  const GroupLetters hsd = tukey_hsd(x, labels, k, p.alpha);
  const std::vector<std::string> names = default_regime_names(k);

  json j{{"k", k},
         {"anova", json{{"df_between", anova.df_between},
                        {"df_within", anova.df_within},
                        {"ss_between", anova.ss_between},
                        {"ss_within", anova.ss_within},
                        {"ms_between", anova.ms_between},
                        {"ms_within", anova.ms_within},
                        {"F", anova.F},
                        {"p", anova.p_value}}},
         {"fisher_lsd", letters_json(lsd, names)},
         {"tukey_hsd", letters_json(hsd, names)},
         {"silhouette", json{{"mean", sil.mean}}}};
  if (p.lambda > 0.0) {
    // Internal indices lose their usual reading under DCT; diagnostic only.
    const SilhouetteResult sil_dct = silhouette(dct_matrix(Xc, p.lambda), labels, k);
    j["silhouette_dct"] = json{{"mean", sil_dct.mean}, {"diagnostic_only", true}};
  }
  write_json_file(out / "validation.json", j);
  svg::write_silhouette_plot((out / "silhouette.svg").string(), "Silhouette by regime",
                             sil.values, labels, names, sil.mean);
  write_manifest(out, "validate",
                 json{{"input", p.input},
                      {"date_column", p.date_column},
                      {"columns", p.columns},
                      {"impute", p.impute},
                      {"standardize", p.standardize_mode},
                      {"labels", p.labels},
                      {"label_column", p.label_column},
                      {"lambda", p.lambda},
                      {"alpha", p.alpha}});
  return 0;
}

struct DiagnoseParams {
  std::string input, date_column = "date", impute = "none", standardize_mode = "auto";
  std::vector<std::string> columns;
  int kmax = 8;
  int B = 100;
  int restarts = 25;
  std::uint64_t seed = 1;
  std::string out;
};

void write_diagnostics(const fs::path& out, const KSelectionCurve& elbow,
                       const KSelectionCurve& silc, const KSelectionCurve& gap) {
  write_json_file(out / "diagnostics.json", json{{"elbow", curve_json(elbow)},
                                                 {"silhouette", curve_json(silc)},
                                                 {"gap", curve_json(gap)}});
  std::string csv = "k,wss,mean_silhouette,gap,gap_se\n";
  for (std::size_t i = 0; i < elbow.k.size(); ++i) {
    const int k = elbow.k[i];
    csv += std::to_string(k) + "," + fmtd(elbow.metric[i]) + ",";
    const auto sit = std::find(silc.k.begin(), silc.k.end(), k);
    if (sit != silc.k.end())
      csv += fmtd(silc.metric[static_cast<std::size_t>(sit - silc.k.begin())]);
    csv += "," + fmtd(gap.metric[i]) + "," + fmtd(gap.se[i]) + "\n";
  }
  write_text(out / "diagnostics.csv", csv);
  svg::write_line_chart((out / "elbow.svg").string(), "Elbow rule", "k",
                        "within-cluster sum of squares", elbow.k, elbow.metric, {},
                        elbow.selected_k);
  svg::write_line_chart((out / "silhouette-curve.svg").string(), "Average silhouette", "k",
                        "mean silhouette width", silc.k, silc.metric, {}, silc.selected_k);
  svg::write_line_chart((out / "gap.svg").string(), "Gap statistic", "k", "gap", gap.k,
                        gap.metric, gap.se, gap.selected_k);
}

int cmd_diagnose(const DiagnoseParams& p) {
  const fs::path out = ensure_out_dir(p.out);
  const SeriesMatrix X = load_series(p.input, p.columns, p.date_column, p.impute == "linear");
  bool standardized = false;
  const Eigen::MatrixXd Xc = maybe_standardize(X, p.standardize_mode, standardized);
  const KSelectionCurve elbow = elbow_curve(Xc, p.kmax, p.seed, p.restarts);
  const KSelectionCurve silc = silhouette_curve(Xc, p.kmax, p.seed, p.restarts);
  const KSelectionCurve gap = gap_statistic(Xc, p.kmax, p.B, p.seed, p.restarts);
  write_diagnostics(out, elbow, silc, gap);
  write_manifest(out, "diagnose",
                 json{{"input", p.input},
                      {"date_column", p.date_column},
                      {"columns", p.columns},
                      {"impute", p.impute},
                      {"standardize", p.standardize_mode},
                      {"kmax", p.kmax},
                      {"B", p.B},
                      {"restarts", p.restarts},
                      {"seed", p.seed}});
  return 0;
}

struct RegressParams {
  std::string input, date_column = "date", impute = "none", units = "fraction";
  std::string vpr_column, inf_column;
  std::string weights, sector_inflation;  // optional Eq. 2 inputs
  std::string labels, label_column = "kmeans_index";
  std::string out;
};

std::string regression_text(const RegimeRegression& base, const RegimeRegression& full,
                            const ChowTest& chow) {
  std::string s;
  s += "Relative price variability and inflation\n";
  s += "=========================================\n\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-24s %18s %18s\n", "", "Base", "Regimes");
  s += buf;
  auto row_of = [](const RegimeRegression& r, const std::string& name) -> std::optional<int> {
    for (int j = 0; j < r.n_params; ++j)
      if (r.names[static_cast<std::size_t>(j)] == name) return j;
    return std::nullopt;
  };
  for (int j = 0; j < full.n_params; ++j) {
    const std::string& name = full.names[static_cast<std::size_t>(j)];
    std::string b = "";
    if (auto bj = row_of(base, name))
      b = fmtd(base.beta[*bj]) + stars(base.p_value[*bj]);
    const std::string f = fmtd(full.beta[j]) + stars(full.p_value[j]);
    std::snprintf(buf, sizeof buf, "%-24s %18s %18s\n", name.c_str(), b.c_str(), f.c_str());
    s += buf;
  }
  for (const auto& d : full.dropped) s += "  dropped: " + d + "\n";
  s += "\n";
  std::snprintf(buf, sizeof buf, "%-24s %18d %18d\n", "N", base.n, full.n);
  s += buf;
  std::snprintf(buf, sizeof buf, "%-24s %18s %18s\n", "adj R^2", fmtd(base.adj_r2).c_str(),
                fmtd(full.adj_r2).c_str());
  s += buf;
  std::snprintf(buf, sizeof buf, "%-24s %18s %18s\n", "AIC", fmtd(base.aic).c_str(),
                fmtd(full.aic).c_str());
  s += buf;
  std::snprintf(buf, sizeof buf, "%-24s %18s %18s\n", "BIC", fmtd(base.bic).c_str(),
                fmtd(full.bic).c_str());
  s += buf;
  std::snprintf(buf, sizeof buf, "%-24s %18s %18s\n", "RMSE", fmtd(base.rmse).c_str(),
                fmtd(full.rmse).c_str());
  s += buf;
  s += "\nChow test: F = " + fmtd(chow.F) + stars(chow.p) + " (q = " + std::to_string(chow.q) +
       ", df = " + std::to_string(chow.df2) + ", p = " + fmtd(chow.p) + ")\n";
  s += "*, **, *** mark significance at the 5, 1 and 0.1 percent levels.\n";
  return s;
}

int cmd_regress(const RegressParams& p) {
  const fs::path out = ensure_out_dir(p.out);
  if (p.inf_column.empty()) throw config_error("--inf-column is required");
  const bool compute_vpr = !p.weights.empty();
  if (!compute_vpr && p.vpr_column.empty())
    throw config_error("provide --vpr-column or --weights/--sector-inflation");

  std::vector<std::string> cols{p.inf_column};
  if (!compute_vpr) cols.push_back(p.vpr_column);
  const SeriesMatrix X = load_series(p.input, cols, p.date_column, p.impute == "linear");
  std::vector<double> inf = X.column_vector(0);
  if (p.units == "percent")
    for (double& v : inf) v /= 100.0;

  std::vector<double> y;
  if (compute_vpr) {
    if (p.sector_inflation.empty()) throw config_error("--sector-inflation is required with --weights");
    const SeriesMatrix W = load_series(p.weights, {}, p.date_column, p.impute == "linear");
    const SeriesMatrix S = load_series(p.sector_inflation, {}, p.date_column, p.impute == "linear");
    if (W.rows() != X.rows() || S.rows() != X.rows())
      throw data_error("weights/sector files not aligned with input");
    Eigen::MatrixXd sect = S.values;
    if (p.units == "percent") sect /= 100.0;
    const VprSeries v = vpr(W.values, sect, inf);
    y = v.vpr;
    SeriesMatrix VS;
    VS.times = X.times;
    VS.time_name = X.time_name;
    VS.variable_names = {"vpr"};
    VS.values.resize(X.rows(), 1);
    for (Eigen::Index i = 0; i < X.rows(); ++i) VS.values(i, 0) = y[static_cast<std::size_t>(i)];
    write_series_csv((out / "vpr.csv").string(), VS);
  } else {
    y = X.column_vector(1);
  }

  const CsvTable t = read_csv_table(p.labels);
  const std::vector<int> labels = int_column(t, p.label_column);
  if (labels.size() != y.size()) throw data_error("label file and input have different lengths");
  int k = 0;
  for (int l : labels) k = std::max(k, l + 1);

  const std::vector<int> pooled(labels.size(), 0);
  const RegimeRegression base = regime_regression(y, inf, pooled, 1);
  const RegimeRegression full = regime_regression(y, inf, labels, k);
  const ChowTest chow = chow_test(base, full);

  write_json_file(out / "regress.json", json{{"base", regression_json(base)},
                                             {"full", regression_json(full)},
                                             {"chow", json{{"F", chow.F},
                                                           {"p", chow.p},
                                                           {"q", chow.q},
                                                           {"df2", chow.df2}}}});
  write_text(out / "regress.txt", regression_text(base, full, chow));
  write_manifest(out, "regress",
                 json{{"input", p.input},
                      {"date_column", p.date_column},
                      {"impute", p.impute},
                      {"units", p.units},
                      {"vpr_column", p.vpr_column},
                      {"inf_column", p.inf_column},
                      {"weights", p.weights},
                      {"sector_inflation", p.sector_inflation},
                      {"labels", p.labels},
                      {"label_column", p.label_column}});
  return 0;
}

struct CompareParams {
  std::string a, a_column, b, b_column;
  std::string rules, input, date_column = "date", column, impute = "none";
  std::string out;
};

int cmd_compare(const CompareParams& p) {
  const fs::path out = ensure_out_dir(p.out);
  const CsvTable ta = read_csv_table(p.a);
  const CsvTable tb = read_csv_table(p.b);
  const std::vector<std::string> la = ta.column(p.a_column);
  const std::vector<std::string> lb = tb.column(p.b_column);
  if (la.size() != lb.size()) throw data_error("label files have different lengths");
  if (!ta.rows.empty() && !tb.rows.empty() && !ta.header.empty() && !tb.header.empty()) {
    for (std::size_t i = 0; i < ta.rows.size(); ++i)
      if (ta.rows[i][0] != tb.rows[i][0])
        throw data_error("time indexes disagree at row " + std::to_string(i + 2));
  }

  LabelSeries sa, sb;
  sa.labels = la;
  sb.labels = lb;
  json j{{"n", la.size()},
         {"a", label_summary(la)},
         {"b", label_summary(lb)},
         {"diff_a_b", diff_vs_reference(sa, sb)}};

  if (!p.rules.empty()) {
    if (p.input.empty() || p.column.empty())
      throw config_error("--rules needs --input and --column to classify");
    std::ifstream rf(p.rules);
    if (!rf) throw data_error("cannot open '" + p.rules + "'");
    json rules;
    try {
      rf >> rules;
    } catch (const std::exception& e) {
      throw data_error("invalid rules file: " + std::string(e.what()));
    }
    ThresholdSet ts;
    ts.cuts = rules.at("cuts").get<std::vector<double>>();
    if (!std::is_sorted(ts.cuts.begin(), ts.cuts.end()))
      throw config_error("rule cuts must be ascending");
    const auto names = rules.at("names").get<std::vector<std::string>>();
    if (names.size() != ts.cuts.size() + 1)
      throw config_error("rules need one more name than cuts");
    const SeriesMatrix X = load_series(p.input, {p.column}, p.date_column, p.impute == "linear");
    if (static_cast<std::size_t>(X.rows()) != la.size())
      throw data_error("rules input not aligned with label files");
    LabelSeries ext;
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      ext.labels.push_back(names[static_cast<std::size_t>(ts.classify(X.values(i, 0)))]);
    j["external"] = label_summary(ext.labels);
    j["diff_a_external"] = diff_vs_reference(sa, ext);
    j["diff_b_external"] = diff_vs_reference(sb, ext);
  }
  write_json_file(out / "compare.json", j);
  write_manifest(out, "compare",
                 json{{"a", p.a},
                      {"a_column", p.a_column},
                      {"b", p.b},
                      {"b_column", p.b_column},
                      {"rules", p.rules},
                      {"input", p.input},
                      {"date_column", p.date_column},
                      {"column", p.column},
                      {"impute", p.impute}});
  return 0;
}

struct PipelineParams {
  std::string input, date_column = "date", impute = "none", units = "fraction";
  std::vector<std::string> columns;
  std::string standardize_mode = "auto";
  int k = 4;
  double lambda = 0.1;
  int h = 4;
  std::string smooth = "majority";  // or "none"
  int restarts = 25;
  std::uint64_t seed = 1;
  double alpha = 0.01;
  bool with_volatility = false;
  int lags = 5;
  int kmax = 8;
  int B = 50;
  std::string out;
};

json pipeline_params_json(const PipelineParams& p) {
  return json{{"input", p.input},
              {"date_column", p.date_column},
              {"columns", p.columns},
              {"impute", p.impute},
              {"units", p.units},
              {"standardize", p.standardize_mode},
              {"k", p.k},
              {"lambda", p.lambda},
              {"h", p.h},
              {"smooth", p.smooth},
              {"restarts", p.restarts},
              {"seed", p.seed},
              {"alpha", p.alpha},
              {"with_volatility", p.with_volatility},
              {"lags", p.lags},
              {"kmax", p.kmax},
              {"B", p.B}};
}

PipelineParams pipeline_params_from_json(const json& j) {
  PipelineParams p;
  p.input = j.at("input").get<std::string>();
  p.date_column = j.at("date_column").get<std::string>();
  p.columns = j.at("columns").get<std::vector<std::string>>();
  p.impute = j.at("impute").get<std::string>();
  p.units = j.at("units").get<std::string>();
  p.standardize_mode = j.at("standardize").get<std::string>();
  p.k = j.at("k").get<int>();
  p.lambda = j.at("lambda").get<double>();
  p.h = j.at("h").get<int>();
  p.smooth = j.at("smooth").get<std::string>();
  p.restarts = j.at("restarts").get<int>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.alpha = j.at("alpha").get<double>();
  p.with_volatility = j.at("with_volatility").get<bool>();
  p.lags = j.at("lags").get<int>();
  p.kmax = j.at("kmax").get<int>();
  p.B = j.at("B").get<int>();
  return p;
}

int cmd_pipeline(const PipelineParams& p) {
  const fs::path out = ensure_out_dir(p.out);
  SeriesMatrix X = load_series(p.input, p.columns, p.date_column, p.impute == "linear");

  json vol_section;
  if (p.with_volatility) {
    std::vector<double> x = X.column_vector(0);
    if (p.units == "percent")
      for (double& v : x) v /= 100.0;
    const GarchFit fit = garch11_fit(x);
    SeriesMatrix joined;
    joined.times = X.times;
    joined.time_name = X.time_name;
    joined.variable_names = X.variable_names;
    joined.variable_names.push_back("cond_var");
    joined.values.resize(X.rows(), X.cols() + 1);
    joined.values.leftCols(X.cols()) = X.values;
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      joined.values(i, X.cols()) = fit.cond_var[static_cast<std::size_t>(i)];
    X = std::move(joined);
    vol_section = json{{"mu", fit.mu},
                       {"omega", fit.omega},
                       {"alpha1", fit.alpha1},
                       {"beta1", fit.beta1},
                       {"loglik", fit.loglik},
                       {"aic_norm", fit.aic_norm}};
  }

  const ClusterOutputs co =
      run_clustering(X, p.k, p.lambda, p.restarts, p.seed, p.standardize_mode);

  // Majority smoothing always votes on the plain k-means labels.
  LabelSeries km_names;
  for (int i = 0; i < static_cast<int>(X.rows()); ++i)
    km_names.labels.push_back(co.kmeans_assign.regime_names[static_cast<std::size_t>(
        co.kmeans_assign.regime_of[static_cast<std::size_t>(i)])]);
  const LabelSeries ms =
      p.smooth == "none" ? km_names : majority_smooth(km_names, p.h);

  write_labels_csv(out / "labels.csv", X,
                   {{"kmeans", &co.kmeans_assign}, {"dct", &co.dct_assign}},
                   {{"ms", &ms.labels}});

  // CART thresholds live on the original units of the first variable.
  const std::vector<double> x0 = X.column_vector(0);
  const ThresholdFit tf = fit_thresholds(x0, co.kmeans_assign.regime_of, p.k);
  json tj = thresholds_json(tf, co.kmeans_assign.regime_names);
  tj["k"] = p.k;
  tj["variable"] = X.variable_names[0];
  write_json_file(out / "thresholds.json", tj);

  // Validation block on the first variable grouped by k-means regime.
  const DissimMatrix De = euclidean_matrix(co.Xc);
  const SilhouetteResult sil = silhouette(De, co.kmeans_assign.regime_of, p.k);
  const AnovaTable anova = anova_oneway(x0, co.kmeans_assign.regime_of, p.k);
  const GroupLetters lsd = fisher_lsd(x0, co.kmeans_assign.regime_of, p.k, p.alpha);
  const GroupLetters hsd = tukey_hsd(x0, co.kmeans_assign.regime_of, p.k, p.alpha);
  json vj{{"k", p.k},
          {"anova", json{{"df_between", anova.df_between},
                         {"df_within", anova.df_within},
                         {"ss_between", anova.ss_between},
                         {"ss_within", anova.ss_within},
                         {"ms_between", anova.ms_between},
                         {"ms_within", anova.ms_within},
                         {"F", anova.F},
                         {"p", anova.p_value}}},
          {"fisher_lsd", letters_json(lsd, co.kmeans_assign.regime_names)},
          {"tukey_hsd", letters_json(hsd, co.kmeans_assign.regime_names)},
          {"silhouette", json{{"mean", sil.mean}}},
          {"smoothing", json{{"changes_before", count_regime_changes(km_names)},
                             {"changes_after", count_regime_changes(ms)},
                             {"replaced", diff_vs_reference(km_names, ms)}}}};
  if (p.lambda > 0.0) {
    const SilhouetteResult sil_dct =
        silhouette(dct_matrix(co.Xc, p.lambda), co.kmeans_assign.regime_of, p.k);
    vj["silhouette_dct"] = json{{"mean", sil_dct.mean}, {"diagnostic_only", true}};
  }
  if (!vol_section.is_null()) vj["volatility"] = vol_section;
  write_json_file(out / "validation.json", vj);
  svg::write_silhouette_plot((out / "silhouette.svg").string(), "Silhouette by regime",
                             sil.values, co.kmeans_assign.regime_of,
                             co.kmeans_assign.regime_names, sil.mean);

  // Cluster-count diagnostics on the same clustering matrix.
  const int kmax = std::min<int>(p.kmax, static_cast<int>(X.rows()) - 1);
  const KSelectionCurve elbow = elbow_curve(co.Xc, kmax, p.seed, p.restarts);
  const KSelectionCurve silc = silhouette_curve(co.Xc, kmax, p.seed, p.restarts);
  const KSelectionCurve gap = gap_statistic(co.Xc, kmax, p.B, p.seed, p.restarts);
  write_diagnostics(out, elbow, silc, gap);

  // Timeline over the smoothed labels.
  std::vector<int> ms_idx;
  for (const auto& name : ms.labels) {
    const auto it = std::find(co.kmeans_assign.regime_names.begin(),
                              co.kmeans_assign.regime_names.end(), name);
    ms_idx.push_back(static_cast<int>(it - co.kmeans_assign.regime_names.begin()));
  }
  svg::write_timeline((out / "timeline.svg").string(), "Regime timeline", X.times, ms_idx,
                      co.kmeans_assign.regime_names);

  write_manifest(out, "pipeline", pipeline_params_json(p));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-series regime segmentation toolkit"};
  app.require_subcommand(1);
  // `--h` is a real option below, so help must not claim the short `-h`.
  app.set_help_flag("--help", "Print help and exit");
  auto subcommand = [&app](const std::string& name, const std::string& desc) {
    CLI::App* s = app.add_subcommand(name, desc);
    s->set_help_flag("--help", "Print help and exit");
    return s;
  };

  IngestParams ing;
  auto* c_ing = subcommand("ingest", "Load, validate and normalize a CSV series");
  c_ing->add_option("--input", ing.input, "input CSV")->required();
  c_ing->add_option("--date-column", ing.date_column, "time index column");
  c_ing->add_option("--columns", ing.columns, "value columns (default: all)")->delimiter(',');
  c_ing->add_option("--impute", ing.impute, "none|linear")->check(CLI::IsMember({"none", "linear"}));
  c_ing->add_option("--out", ing.out, "output directory")->required();

  VolatilityParams vol;
  auto* c_vol = subcommand("volatility", "ARCH tests and GARCH(1,1) conditional variance");
  c_vol->add_option("--input", vol.input)->required();
  c_vol->add_option("--date-column", vol.date_column);
  c_vol->add_option("--column", vol.column, "series column (default: first)");
  c_vol->add_option("--impute", vol.impute)->check(CLI::IsMember({"none", "linear"}));
  c_vol->add_option("--units", vol.units)->check(CLI::IsMember({"percent", "fraction"}));
  c_vol->add_option("--lags", vol.lags)->check(CLI::PositiveNumber);
  c_vol->add_option("--out", vol.out)->required();

  ClusterParams clu;
  auto* c_clu = subcommand("cluster", "k-means regimes with the DCT variant");
  c_clu->add_option("--input", clu.input)->required();
  c_clu->add_option("--date-column", clu.date_column);
  c_clu->add_option("--columns", clu.columns)->delimiter(',');
  c_clu->add_option("--impute", clu.impute)->check(CLI::IsMember({"none", "linear"}));
  c_clu->add_option("--standardize", clu.standardize_mode)
      ->check(CLI::IsMember({"auto", "on", "off"}));
  c_clu->add_option("--k", clu.k)->check(CLI::PositiveNumber);
  c_clu->add_option("--lambda", clu.lambda);
  c_clu->add_option("--restarts", clu.restarts)->check(CLI::PositiveNumber);
  c_clu->add_option("--seed", clu.seed);
  c_clu->add_option("--out", clu.out)->required();

  ThresholdsParams thr;
  auto* c_thr = subcommand("thresholds", "CART regime thresholds from labels");
  c_thr->add_option("--input", thr.input)->required();
  c_thr->add_option("--date-column", thr.date_column);
  c_thr->add_option("--column", thr.column, "variable column (default: first)");
  c_thr->add_option("--impute", thr.impute)->check(CLI::IsMember({"none", "linear"}));
  c_thr->add_option("--labels", thr.labels, "labels CSV")->required();
  c_thr->add_option("--label-column", thr.label_column);
  c_thr->add_option("--k", thr.k, "regime count (default: infer)");
  c_thr->add_option("--out", thr.out)->required();

  SmoothParams smo;
  auto* c_smo = subcommand("smooth", "Simple-majority trailing-window smoothing");
  c_smo->add_option("--labels", smo.labels)->required();
  c_smo->add_option("--label-column", smo.label_column);
  c_smo->add_option("--h", smo.h, "window lags")->check(CLI::NonNegativeNumber);
  c_smo->add_option("--out", smo.out)->required();

  ValidateParams val;
  auto* c_val = subcommand("validate", "Silhouette, ANOVA and mean-difference letters");
  c_val->add_option("--input", val.input)->required();
  c_val->add_option("--date-column", val.date_column);
  c_val->add_option("--columns", val.columns)->delimiter(',');
  c_val->add_option("--impute", val.impute)->check(CLI::IsMember({"none", "linear"}));
  c_val->add_option("--standardize", val.standardize_mode)
      ->check(CLI::IsMember({"auto", "on", "off"}));
  c_val->add_option("--labels", val.labels)->required();
  c_val->add_option("--label-column", val.label_column);
  c_val->add_option("--lambda", val.lambda);
  c_val->add_option("--alpha", val.alpha);
  c_val->add_option("--out", val.out)->required();

  DiagnoseParams dia;
  auto* c_dia = subcommand("diagnose", "Elbow, silhouette and gap selection curves");
  c_dia->add_option("--input", dia.input)->required();
  c_dia->add_option("--date-column", dia.date_column);
  c_dia->add_option("--columns", dia.columns)->delimiter(',');
  c_dia->add_option("--impute", dia.impute)->check(CLI::IsMember({"none", "linear"}));
  c_dia->add_option("--standardize", dia.standardize_mode)
      ->check(CLI::IsMember({"auto", "on", "off"}));
  c_dia->add_option("--kmax", dia.kmax)->check(CLI::PositiveNumber);
  c_dia->add_option("--B", dia.B)->check(CLI::PositiveNumber);
  c_dia->add_option("--restarts", dia.restarts)->check(CLI::PositiveNumber);
  c_dia->add_option("--seed", dia.seed);
  c_dia->add_option("--out", dia.out)->required();

  RegressParams reg;
  auto* c_reg = subcommand("regress", "Regime regression and Chow structural test");
  c_reg->add_option("--input", reg.input)->required();
  c_reg->add_option("--date-column", reg.date_column);
  c_reg->add_option("--impute", reg.impute)->check(CLI::IsMember({"none", "linear"}));
  c_reg->add_option("--units", reg.units)->check(CLI::IsMember({"percent", "fraction"}));
  c_reg->add_option("--vpr-column", reg.vpr_column);
  c_reg->add_option("--inf-column", reg.inf_column)->required();
  c_reg->add_option("--weights", reg.weights, "sector weights CSV (Eq. 2 mode)");
  c_reg->add_option("--sector-inflation", reg.sector_inflation);
  c_reg->add_option("--labels", reg.labels)->required();
  c_reg->add_option("--label-column", reg.label_column);
  c_reg->add_option("--out", reg.out)->required();

  CompareParams cmp;
  auto* c_cmp = subcommand("compare", "Compare two regime label sequences");
  c_cmp->add_option("--a", cmp.a)->required();
  c_cmp->add_option("--a-column", cmp.a_column)->required();
  c_cmp->add_option("--b", cmp.b)->required();
  c_cmp->add_option("--b-column", cmp.b_column)->required();
  c_cmp->add_option("--rules", cmp.rules, "fixed-threshold rule JSON");
  c_cmp->add_option("--input", cmp.input);
  c_cmp->add_option("--date-column", cmp.date_column);
  c_cmp->add_option("--column", cmp.column);
  c_cmp->add_option("--impute", cmp.impute)->check(CLI::IsMember({"none", "linear"}));
  c_cmp->add_option("--out", cmp.out)->required();

  PipelineParams pip;
  std::string manifest_path;
  auto* c_pip = subcommand("pipeline", "Full segmentation pipeline");
  c_pip->add_option("--input", pip.input);
  c_pip->add_option("--date-column", pip.date_column);
  c_pip->add_option("--columns", pip.columns)->delimiter(',');
  c_pip->add_option("--impute", pip.impute)->check(CLI::IsMember({"none", "linear"}));
  c_pip->add_option("--units", pip.units)->check(CLI::IsMember({"percent", "fraction"}));
  c_pip->add_option("--standardize", pip.standardize_mode)
      ->check(CLI::IsMember({"auto", "on", "off"}));
  c_pip->add_option("--k", pip.k)->check(CLI::PositiveNumber);
  c_pip->add_option("--lambda", pip.lambda);
  c_pip->add_option("--h", pip.h)->check(CLI::NonNegativeNumber);
  c_pip->add_option("--smooth", pip.smooth)->check(CLI::IsMember({"majority", "none"}));
  c_pip->add_option("--restarts", pip.restarts)->check(CLI::PositiveNumber);
  c_pip->add_option("--seed", pip.seed);
  c_pip->add_option("--alpha", pip.alpha);
  c_pip->add_flag("--with-volatility", pip.with_volatility,
                  "join GARCH conditional variance as a second variable");
  c_pip->add_option("--lags", pip.lags)->check(CLI::PositiveNumber);
  c_pip->add_option("--kmax", pip.kmax)->check(CLI::PositiveNumber);
  c_pip->add_option("--B", pip.B)->check(CLI::PositiveNumber);
  c_pip->add_option("--manifest", manifest_path, "replay a previous run-manifest.json");
  c_pip->add_option("--out", pip.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << json{{"error", {{"type", "config"}, {"message", e.what()}}}}.dump() << "\n";
    return 2;
  }

  try {
    if (*c_ing) return cmd_ingest(ing);
    if (*c_vol) return cmd_volatility(vol);
    if (*c_clu) return cmd_cluster(clu);
    if (*c_thr) return cmd_thresholds(thr);
    if (*c_smo) return cmd_smooth(smo);
    if (*c_val) return cmd_validate(val);
    if (*c_dia) return cmd_diagnose(dia);
    if (*c_reg) return cmd_regress(reg);
    if (*c_cmp) return cmd_compare(cmp);
    if (*c_pip) {
      if (!manifest_path.empty()) {
        std::ifstream mf(manifest_path);
        if (!mf) throw data_error("cannot open manifest '" + manifest_path + "'");
        json m;
        try {
          mf >> m;
        } catch (const std::exception& e) {
          throw data_error("invalid manifest: " + std::string(e.what()));
        }
        if (m.value("command", "") != "pipeline")
          throw config_error("manifest does not describe a pipeline run");
        PipelineParams replay = pipeline_params_from_json(m.at("parameters"));
        replay.out = pip.out;
        return cmd_pipeline(replay);
      }
      if (pip.input.empty()) throw config_error("--input is required (or --manifest)");
      return cmd_pipeline(pip);
    }
  } catch (const config_error& e) {
    std::cerr << json{{"error", {{"type", "config"}, {"message", e.what()}}}}.dump() << "\n";
    return 2;
  } catch (const data_error& e) {
    std::cerr << json{{"error", {{"type", "data"}, {"message", e.what()}}}}.dump() << "\n";
    return 3;
  } catch (const numerical_error& e) {
    std::cerr << json{{"error", {{"type", "numerical"}, {"message", e.what()}}}}.dump() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"type", "internal"}, {"message", e.what()}}}}.dump() << "\n";
    return 1;
  }
  return 0;
}
