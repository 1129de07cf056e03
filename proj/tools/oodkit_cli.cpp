// Copyright 2026 The oodkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// oodkit command-line tool: one subcommand per pipeline stage.
//
//   synth     write synthetic mixture data (+ optional outliers) and labels
//   train-ae  train an autoencoder on a dataset
//   encode    write latent features of a dataset
//   score     fit scorers on training features and score a query set
//   eval      ROC curve and AUC from a scores CSV and a labels CSV
//   rank      ids of the k highest scores
//
// Exit status: 0 success, 1 usage/config error, 2 runtime/data error.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oodkit/oodkit.hpp"

namespace fs = std::filesystem;

namespace
{

using oodkit::Matrix;

struct UsageError : oodkit::ParameterError
{
  using oodkit::ParameterError::ParameterError;
};

struct Common
{
  std::uint64_t seed = 0;
  std::string out = ".";
};

// Echo lines embedded in every output. Input files are recorded by name and
// content hash rather than by path so reruns in other directories match.
class Echo
{
public:
  explicit Echo(std::string command) { lines_.push_back("oodkit " + std::move(command)); }

  template <typename T>
  void add(const std::string & key, const T & value)
  {
    std::ostringstream os;
    os << value;
    lines_.push_back(key + "=" + os.str());
  }

  void real(const std::string & key, double v)
  {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    lines_.push_back(key + "=" + buf);
  }

  void file(const std::string & key, const fs::path & p)
  {
    std::string hash;
    if (fs::is_regular_file(p)) {
      hash = oodkit::hex64(oodkit::fnv1a64(oodkit::read_file(p)));
    } else {
      hash = "dir";
    }
    lines_.push_back(key + "=" + p.filename().string() + " (fnv1a64 " + hash + ")");
  }

  void params(const oodkit::ParamList & ps)
  {
    for (const auto & [k, v] : ps) lines_.push_back(k + "=" + v);
  }

  const std::vector<std::string> & lines() const { return lines_; }

  std::string joined() const
  {
    std::string s;
    for (const auto & l : lines_) s += l + "\n";
    return s;
  }

private:
  std::vector<std::string> lines_;
};

std::string comment_block(const Echo & e)
{
  std::string s;
  for (const auto & l : e.lines()) s += "# " + l + "\n";
  return s;
}

fs::path out_dir(const Common & c)
{
  fs::path p(c.out);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) {
    throw oodkit::DataError("cannot create output directory '" + p.string() + "'");
  }
  return p;
}

std::string shortest_real(double v)
{
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string format_real17(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---- id,value CSV files -----------------------------------------------------

struct IdColumn
{
  std::vector<std::string> ids;
  std::vector<std::string> values;
};

IdColumn read_id_csv(const fs::path & path, const std::string & value_name)
{
  const auto text = oodkit::read_file(path);
  IdColumn out;
  bool header_seen = false;
  std::string_view sv(text);
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= sv.size()) {
    const auto nl = sv.find('\n', start);
    auto line = sv.substr(start, nl == std::string_view::npos ? nl : nl - start);
    ++line_no;
    start = nl == std::string_view::npos ? sv.size() + 1 : nl + 1;
    line = oodkit::detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto cells = oodkit::detail::split_commas(line);
    if (cells.size() != 2) {
      throw oodkit::DataError(
        "'" + path.string() + "' line " + std::to_string(line_no) + ": expected 2 cells");
    }
    if (!header_seen) {
      header_seen = true;
      if (cells[0] != "id" || cells[1] != value_name) {
        throw oodkit::DataError(
          "'" + path.string() + "': expected header 'id," + value_name + "'");
      }
      continue;
    }
    out.ids.emplace_back(cells[0]);
    out.values.emplace_back(cells[1]);
  }
  if (out.ids.empty()) {
    throw oodkit::DataError("'" + path.string() + "' has no rows");
  }
  return out;
}

std::vector<double> parse_reals(const IdColumn & c, const fs::path & path)
{
  std::vector<double> v;
  v.reserve(c.values.size());
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    const auto r = oodkit::detail::parse_real(c.values[i]);
    if (!r) {
      throw oodkit::DataError(
        "'" + path.string() + "': non-numeric value for id " + c.ids[i]);
    }
    v.push_back(*r);
  }
  return v;
}

std::string format_id_csv(
  const Echo & echo, const std::string & value_name, std::span<const std::string> values)
{
  std::string s = comment_block(echo);
  s += "id," + value_name + "\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    s += std::to_string(i) + "," + values[i] + "\n";
  }
  return s;
}

// ---- synth --------------------------------------------------------------------

struct SynthOpts
{
  std::size_t dim = 16;
  std::size_t components = 3;
  std::size_t train = 2000;
  std::size_t test = 0;
  std::size_t outliers = 0;
  double deviation = 0.05;
  std::string outlier_kind = "uniform_noise";
  std::string source;
  std::vector<std::size_t> shape;  // c,h,w for external image sources
};

std::vector<oodkit::MixtureComponent> split_counts(
  std::vector<oodkit::MixtureComponent> layout, std::size_t total)
{
  const std::size_t n = layout.size();
  for (std::size_t c = 0; c < n; ++c) {
    layout[c].count = total / n + (c < total % n ? 1 : 0);
  }
  std::erase_if(layout, [](const auto & c) { return c.count == 0; });
  return layout;
}

void cmd_synth(const Common & common, const SynthOpts & o)
{
  if (o.train == 0) throw UsageError("--train must be >= 1");
  if (o.components == 0) throw UsageError("--components must be >= 1");
  if (o.dim == 0) throw UsageError("--dim must be >= 1");
  if (!(o.deviation > 0.0)) throw UsageError("--deviation must be > 0");

  Echo echo("synth");
  echo.add("seed", common.seed);
  echo.add("dim", o.dim);
  echo.add("components", o.components);
  echo.real("deviation", o.deviation);
  echo.add("train", o.train);
  echo.add("test", o.test);
  echo.add("outliers", o.outliers);

  const auto layout =
    oodkit::random_mixture_layout(o.dim, o.components, 0, o.deviation, common.seed);
  const Matrix train = oodkit::synth_gaussian_mixture(split_counts(layout, o.train), common.seed + 1);

  std::optional<Matrix> test;
  std::size_t n_in = 0;
  if (o.test > 0) {
    test = oodkit::synth_gaussian_mixture(split_counts(layout, o.test), common.seed + 2);
    n_in = o.test;
  }
  if (o.outliers > 0) {
    oodkit::OutlierSpec spec;
    spec.kind = oodkit::parse_outlier_kind(o.outlier_kind);
    spec.count = o.outliers;
    spec.seed = common.seed + 3;
    spec.source = o.source;
    auto shape = oodkit::OutlierShape::flat(o.dim);
    if (!o.shape.empty()) {
      if (o.shape.size() != 3) throw UsageError("--shape takes channels,height,width");
      shape = {o.shape[0], o.shape[1], o.shape[2]};
      if (shape.dim() != o.dim) {
        throw UsageError("--shape does not multiply out to --dim");
      }
    }
    echo.add("outlier_kind", o.outlier_kind);
    if (spec.kind == oodkit::OutlierKind::external_dataset) echo.file("source", spec.source);
    auto rows = oodkit::synth_outliers(spec, shape);
    test = test ? oodkit::vstack(*test, rows) : std::move(rows);
  }

  const auto dir = out_dir(common);
  auto write_labels = [&](const fs::path & p, std::size_t n, std::size_t normal) {
    std::vector<std::string> v(n, "1");
    std::fill_n(v.begin(), normal, "0");
    oodkit::write_file_atomic(p, format_id_csv(echo, "label", v));
  };
  oodkit::write_file_atomic(dir / "train.csv", oodkit::format_csv_features(train, echo.lines()));
  write_labels(dir / "train_labels.csv", train.rows(), train.rows());
  if (test) {
    oodkit::write_file_atomic(dir / "test.csv", oodkit::format_csv_features(*test, echo.lines()));
    write_labels(dir / "test_labels.csv", test->rows(), n_in);
  }
  std::cout << "train_rows=" << train.rows() << "\n";
  if (test) std::cout << "test_rows=" << test->rows() << "\n";
}

// ---- train-ae -------------------------------------------------------------------

struct TrainOpts
{
  std::string data;
  std::string layers;
  std::size_t epochs = 100;
  std::size_t batch_size = 32;
  double lr = 1e-3;
  std::string optimizer = "adam";
  bool no_shuffle = false;
};

void cmd_train_ae(const Common & common, const TrainOpts & o)
{
  const Matrix data = oodkit::load_features(o.data);
  const auto layers =
    o.layers.empty() ? oodkit::default_layers(data.cols()) : oodkit::parse_layers(o.layers);

  oodkit::TrainConfig cfg;
  cfg.epochs = o.epochs;
  cfg.batch_size = o.batch_size;
  cfg.learning_rate = o.lr;
  if (o.optimizer == "adam") {
    cfg.optimizer = oodkit::Optimizer::adam;
  } else if (o.optimizer == "sgd") {
    cfg.optimizer = oodkit::Optimizer::sgd;
  } else {
    throw UsageError("--optimizer must be adam or sgd");
  }
  cfg.seed = common.seed;
  cfg.shuffle = !o.no_shuffle;
  if (cfg.epochs == 0) throw UsageError("--epochs must be >= 1");
  if (cfg.batch_size == 0) throw UsageError("--batch-size must be >= 1");
  if (!(cfg.learning_rate > 0.0)) throw UsageError("--lr must be > 0");

  Echo echo("train-ae");
  echo.add("seed", common.seed);
  echo.file("data", o.data);
  echo.add("layers", oodkit::format_layers(layers));
  echo.add("epochs", cfg.epochs);
  echo.add("batch_size", cfg.batch_size);
  echo.real("lr", cfg.learning_rate);
  echo.add("optimizer", o.optimizer);
  echo.add("shuffle", cfg.shuffle ? "true" : "false");

  auto model = oodkit::init_model(data.cols(), layers, common.seed);
  auto result = oodkit::train(std::move(model), data, cfg);

  const auto dir = out_dir(common);
  std::string loss = comment_block(echo) + "epoch,loss\n";
  for (std::size_t e = 0; e < result.loss_history.size(); ++e) {
    loss += std::to_string(e + 1) + "," + format_real17(result.loss_history[e]) + "\n";
  }
  oodkit::write_file_atomic(dir / "loss.csv", loss);
  oodkit::save_model(result.model, dir / "ae.model", echo.joined());
  std::cout << "final_loss=" << format_real17(result.loss_history.back()) << "\n";
}

// ---- encode / feature cache ---------------------------------------------------

/// Latent features of `data_path`, cached next to the model keyed by the
/// model and data content hashes.
Matrix cached_encode(const fs::path & model_path, const fs::path & data_path)
{
  const auto model_bytes = oodkit::read_file(model_path);
  const auto loaded = oodkit::deserialize_model(model_bytes);
  std::string data_key = fs::is_regular_file(data_path)
                           ? oodkit::hex64(oodkit::fnv1a64(oodkit::read_file(data_path)))
                           : std::string();
  fs::path cache;
  if (!data_key.empty()) {
    cache = model_path.parent_path() / "cache" /
            (model_path.stem().string() + "-" + oodkit::hex64(oodkit::fnv1a64(model_bytes)) + "-" +
             data_key + ".csv");
    std::error_code ec;
    if (fs::is_regular_file(cache, ec)) {
      auto m = oodkit::load_csv_features(cache);
      if (m.cols() == loaded.model.latent_width()) return m;
    }
  }
  Matrix latent = oodkit::encode(loaded.model, oodkit::load_features(data_path));
  if (!cache.empty()) {
    std::error_code ec;
    fs::create_directories(cache.parent_path(), ec);
    if (!ec) {
      try {
        oodkit::write_file_atomic(cache, oodkit::format_csv_features(latent));
      } catch (const oodkit::DataError &) {
        // cache is best effort
      }
    }
  }
  return latent;
}

struct EncodeOpts
{
  std::string model;
  std::string data;
  std::string name;
};

void cmd_encode(const Common & common, const EncodeOpts & o)
{
  const Matrix latent = cached_encode(o.model, o.data);
  Echo echo("encode");
  echo.file("model", o.model);
  echo.file("data", o.data);
  const auto name = o.name.empty() ? fs::path(o.data).stem().string() : o.name;
  const auto dir = out_dir(common);
  oodkit::write_file_atomic(
    dir / (name + "_latent.csv"), oodkit::format_csv_features(latent, echo.lines()));
  std::cout << "rows=" << latent.rows() << " latent_dim=" << latent.cols() << "\n";
}

// ---- score --------------------------------------------------------------------

struct ScoreOpts
{
  std::string model;
  std::string train;
  std::string query;
  std::vector<std::string> scorers{"lcp"};
  std::size_t k = oodkit::kDefaultK;
  std::optional<double> sigma;
  std::optional<double> perplexity;
  std::string weighting = "kernel";
  std::size_t subset = 0;
  bool save_scorer = false;
};

void cmd_score(const Common & common, const ScoreOpts & o)
{
  std::vector<oodkit::ScorerKind> kinds;
  for (const auto & s : o.scorers) {
    if (s == "all") {
      kinds.assign(std::begin(oodkit::kAllScorerKinds), std::end(oodkit::kAllScorerKinds));
      break;
    }
    kinds.push_back(oodkit::parse_scorer_kind(s));
  }

  Matrix train;
  Matrix query;
  if (o.model.empty()) {
    train = oodkit::load_features(o.train);
    query = oodkit::load_features(o.query);
  } else {
    train = cached_encode(o.model, o.train);
    query = cached_encode(o.model, o.query);
  }
  std::vector<std::size_t> subset;
  if (o.subset > 0) {
    if (o.model.empty()) throw UsageError("--subset requires --model");
    subset = oodkit::select_active_neurons(train, o.subset);
    train = [&] {
      Matrix m(train.rows(), subset.size());
      for (std::size_t r = 0; r < train.rows(); ++r)
        for (std::size_t j = 0; j < subset.size(); ++j) m(r, j) = train(r, subset[j]);
      return m;
    }();
    Matrix q(query.rows(), subset.size());
    for (std::size_t r = 0; r < query.rows(); ++r)
      for (std::size_t j = 0; j < subset.size(); ++j) q(r, j) = query(r, subset[j]);
    query = std::move(q);
  }

  oodkit::ScorerParams params;
  params.k = o.k;
  params.sigma = o.sigma;
  params.perplexity = o.perplexity;
  params.weighting = oodkit::parse_lcp_weighting(o.weighting);
  params.seed = common.seed;

  const auto dir = out_dir(common);
  for (auto kind : kinds) {
    const auto fitted = oodkit::fit_scorer(kind, train, params);
    const auto rep = oodkit::score(fitted, query);

    Echo echo("score");
    echo.add("seed", common.seed);
    echo.add("scorer", oodkit::to_string(kind));
    if (!o.model.empty()) echo.file("model", o.model);
    echo.file("train", o.train);
    echo.file("query", o.query);
    if (!subset.empty()) {
      std::string s;
      for (auto i : subset) s += (s.empty() ? "" : " ") + std::to_string(i);
      echo.add("subset", s);
    }
    echo.params(rep.params);

    std::vector<std::string> vals;
    vals.reserve(rep.scores.size());
    for (double v : rep.scores) vals.push_back(format_real17(v));
    const auto name = "scores_" + std::string(oodkit::to_string(kind));
    oodkit::write_file_atomic(dir / (name + ".csv"), format_id_csv(echo, "score", vals));
    if (o.save_scorer) {
      oodkit::save_scorer(fitted, dir / ("scorer_" + std::string(oodkit::to_string(kind)) + ".bin"));
    }
    std::cout << name << ".csv rows=" << rep.scores.size() << "\n";
  }
}

// ---- eval / rank ----------------------------------------------------------------

struct EvalOpts
{
  std::string scores;
  std::string labels;
  std::string roc;
};

void cmd_eval(const Common & common, const EvalOpts & o)
{
  const auto sc = read_id_csv(o.scores, "score");
  const auto lb = read_id_csv(o.labels, "label");
  const auto values = parse_reals(sc, o.scores);

  std::map<std::string, std::uint8_t> label_of;
  for (std::size_t i = 0; i < lb.ids.size(); ++i) {
    if (lb.values[i] != "0" && lb.values[i] != "1") {
      throw oodkit::DataError("label for id " + lb.ids[i] + " must be 0 or 1");
    }
    if (!label_of.emplace(lb.ids[i], lb.values[i] == "1" ? 1 : 0).second) {
      throw oodkit::DataError("duplicate id " + lb.ids[i] + " in labels");
    }
  }
  std::vector<std::uint8_t> labels;
  std::map<std::string, bool> seen;
  for (const auto & id : sc.ids) {
    const auto it = label_of.find(id);
    if (it == label_of.end()) {
      throw oodkit::DataError("id mismatch: score id " + id + " has no label");
    }
    if (!seen.emplace(id, true).second) {
      throw oodkit::DataError("duplicate id " + id + " in scores");
    }
    labels.push_back(it->second);
  }
  if (seen.size() != label_of.size()) {
    for (const auto & id : lb.ids) {
      if (!seen.count(id)) {
        throw oodkit::DataError("id mismatch: label id " + id + " has no score");
      }
    }
  }

  // Canonical order so the curve does not depend on input row order.
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sc.ids[a] < sc.ids[b];
  });
  std::vector<double> s2;
  std::vector<std::uint8_t> l2;
  for (auto i : order) {
    s2.push_back(values[i]);
    l2.push_back(labels[i]);
  }
  const auto curve = oodkit::roc_curve(s2, l2);

  Echo echo("eval");
  echo.file("scores", o.scores);
  echo.file("labels", o.labels);
  const auto dir = out_dir(common);
  const fs::path roc = o.roc.empty() ? dir / ("roc_" + fs::path(o.scores).stem().string() + ".csv")
                                     : fs::path(o.roc);
  oodkit::write_file_atomic(roc, oodkit::format_roc_csv(curve, echo.lines()));
  std::cout << "auc=" << shortest_real(curve.auc) << "\n";
}

struct RankOpts
{
  std::string scores;
  std::size_t k = 10;
};

void cmd_rank(const RankOpts & o)
{
  if (o.k == 0) throw UsageError("--k must be >= 1");
  const auto sc = read_id_csv(o.scores, "score");
  const auto values = parse_reals(sc, o.scores);
  const auto top = oodkit::top_k_outliers<std::string>(values, sc.ids, o.k);
  for (const auto & id : top) std::cout << id << "\n";
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"oodkit: out-of-distribution scoring toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI configuration file; command-line flags take precedence");
  Common common;
  app.add_option("--seed", common.seed, "Global seed")->capture_default_str();
  app.add_option("--out", common.out, "Output directory")->capture_default_str();
  app.fallthrough();

  SynthOpts so;
  auto * synth = app.add_subcommand("synth", "Write synthetic mixture data and labels");
  synth->add_option("--dim", so.dim)->capture_default_str();
  synth->add_option("--components", so.components)->capture_default_str();
  synth->add_option("--train", so.train, "Training rows")->capture_default_str();
  synth->add_option("--test", so.test, "In-distribution test rows")->capture_default_str();
  synth->add_option("--outliers", so.outliers, "Outlier rows appended to the test set")->capture_default_str();
  synth->add_option("--deviation", so.deviation, "Per-axis component deviation")->capture_default_str();
  synth->add_option("--outlier-kind", so.outlier_kind)
    ->check(CLI::IsMember({"uniform_noise", "gaussian_noise", "external_dataset"}))
    ->capture_default_str();
  synth->add_option("--source", so.source, "External outlier source (IDX, image folder, CSV)");
  synth->add_option("--shape", so.shape, "channels,height,width for image sources")->delimiter(',');

  TrainOpts to;
  auto * train = app.add_subcommand("train-ae", "Train an autoencoder");
  train->add_option("--data", to.data, "Training data (CSV, IDX or image folder)")
    ->required();
  train->add_option("--layers", to.layers, "width:activation,... (default: five-layer shape)");
  train->add_option("--epochs", to.epochs)->capture_default_str();
  train->add_option("--batch-size", to.batch_size)->capture_default_str();
  train->add_option("--lr", to.lr)->capture_default_str();
  train->add_option("--optimizer", to.optimizer)->capture_default_str();
  train->add_flag("--no-shuffle", to.no_shuffle);

  EncodeOpts eo;
  auto * enc = app.add_subcommand("encode", "Write latent features");
  enc->add_option("--model", eo.model)->required();
  enc->add_option("--data", eo.data)->required();
  enc->add_option("--name", eo.name, "Output name prefix (default: data file stem)");

  ScoreOpts sco;
  auto * sc = app.add_subcommand("score", "Fit scorers and score a query set");
  sc->add_option("--model", sco.model, "Autoencoder model; omit to score raw features")
    ;
  sc->add_option("--train", sco.train)->required();
  sc->add_option("--query", sco.query)->required();
  sc->add_option("--scorer", sco.scorers, "kd, md, knn, lof, lcp or all")
    ->check(CLI::IsMember({"kd", "md", "knn", "lof", "lcp", "all"}))
    ->capture_default_str();
  sc->add_option("--k", sco.k, "Neighborhood size")->capture_default_str();
  sc->add_option("--sigma", sco.sigma, "KD bandwidth (default: median heuristic)");
  sc->add_option("--perplexity", sco.perplexity, "LCP target perplexity (default: k/3)");
  sc->add_option("--lcp-weighting", sco.weighting)
    ->check(CLI::IsMember({"kernel", "literal"}))
    ->capture_default_str();
  sc->add_option("--subset", sco.subset, "Keep the m most active latent neurons");
  sc->add_flag("--save-scorer", sco.save_scorer, "Also write scorer_<kind>.bin");

  EvalOpts ev;
  auto * eval = app.add_subcommand("eval", "ROC curve and AUC");
  eval->add_option("--scores", ev.scores)->required();
  eval->add_option("--labels", ev.labels)->required();
  eval->add_option("--roc", ev.roc, "ROC output path (default: <out>/roc_<scores stem>.csv)");

  RankOpts ro;
  auto * rank = app.add_subcommand("rank", "Print the ids of the k highest scores");
  rank->add_option("--scores", ro.scores)->required();
  rank->add_option("--k", ro.k)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*synth) cmd_synth(common, so);
    else if (*train) cmd_train_ae(common, to);
    else if (*enc) cmd_encode(common, eo);
    else if (*sc) cmd_score(common, sco);
    else if (*eval) cmd_eval(common, ev);
    else if (*rank) cmd_rank(ro);
  } catch (const oodkit::ParameterError & e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
