#include "fuzzynet/model_io.hpp"

#include <fstream>
#include "json.hpp"
#include <stdexcept>

#include "overloaded.hpp"

namespace fuzzynet {

using detail::overloaded;
using nlohmann::json;

namespace {

constexpr const char* kFormat = "fuzzynet-model";

json matrix_json(const Matrix& m) { return {{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}}; }

Matrix matrix_from(const json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  m.data = j.at("data").get<Vector>();
  if (m.data.size() != m.rows * m.cols) throw std::runtime_error("model: matrix size mismatch");
  return m;
}

json layer_json(const Layer& layer) {
  return std::visit(
      overloaded{
          [](const IdentityLayer& l) -> json { return {{"type", "identity"}, {"width", l.width}}; },
          [](const NormalizerLayer& l) -> json {
            return {{"type", "normalizer"}, {"min", l.min}, {"max", l.max}};
          },
          [](const AllPairingsLayer& l) -> json {
            return {{"type", "allpairings"}, {"inputs", l.input_width()}};
          },
          [](const FuzzyLayer& l) -> json {
            return {{"type", "fuzzy"}, {"variant", std::string(to_string(l.variant))}, {"alpha", l.alpha}};
          },
          [](const FeatureSelectorLayer& l) -> json {
            return {{"type", "featureselector"}, {"weights", matrix_json(l.weights)}};
          },
          [](const TanhLayer& l) -> json { return {{"type", "tanh"}, {"width", l.width}}; },
          [](const LinearLayer& l) -> json {
            return {{"type", "linear"}, {"weights", matrix_json(l.weights)}, {"bias", l.bias}};
          },
          [](const MaxLayer& l) -> json { return {{"type", "max"}, {"width", l.width}}; },
      },
      layer);
}

Layer layer_from(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "identity") return IdentityLayer{j.at("width").get<std::size_t>()};
  if (type == "normalizer") {
    NormalizerLayer n{j.at("min").get<Vector>(), j.at("max").get<Vector>()};
    if (n.min.size() != n.max.size()) throw std::runtime_error("model: normalizer size mismatch");
    return n;
  }
  if (type == "allpairings") return AllPairingsLayer(j.at("inputs").get<std::size_t>());
  if (type == "fuzzy")
    return FuzzyLayer{j.at("alpha").get<Vector>(), variant_from_string(j.at("variant").get<std::string>())};
  if (type == "featureselector") return FeatureSelectorLayer{matrix_from(j.at("weights"))};
  if (type == "tanh") return TanhLayer{j.at("width").get<std::size_t>()};
  if (type == "linear") return LinearLayer{matrix_from(j.at("weights")), j.at("bias").get<Vector>()};
  if (type == "max") return MaxLayer{j.at("width").get<std::size_t>()};
  throw std::runtime_error("model: unknown layer type '" + type + "'");
}

json config_json(const TrainConfig& c) {
  return {{"learning_rate", c.learning_rate},
          {"l1_coefficient", c.l1_coefficient},
          {"epsilon", c.epsilon},
          {"epochs", c.epochs},
          {"seed", c.seed},
          {"hidden_width", c.hidden_width},
          {"logic_depth", c.logic_depth},
          {"rmsprop", c.rmsprop},
          {"kind", c.kind == ModelKind::Dnn ? "dnn" : "fuzzy"},
          {"variant", std::string(to_string(c.variant))}};
}

TrainConfig config_from(const json& j) {
  TrainConfig c;
  c.learning_rate = j.at("learning_rate").get<double>();
  c.l1_coefficient = j.at("l1_coefficient").get<double>();
  c.epsilon = j.at("epsilon").get<double>();
  c.epochs = j.at("epochs").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.hidden_width = j.at("hidden_width").get<std::size_t>();
  c.logic_depth = j.at("logic_depth").get<std::size_t>();
  c.rmsprop = j.at("rmsprop").get<bool>();
  const auto kind = j.at("kind").get<std::string>();
  if (kind != "dnn" && kind != "fuzzy") throw std::runtime_error("model: unknown model kind '" + kind + "'");
  c.kind = kind == "dnn" ? ModelKind::Dnn : ModelKind::Fuzzy;
  c.variant = variant_from_string(j.at("variant").get<std::string>());
  return c;
}

}  // namespace

void save_model(std::ostream& out, const Model& model) {
  json j;
  j["format"] = kFormat;
  j["version"] = kModelFormatVersion;
  j["config"] = config_json(model.config);
  j["class_names"] = model.class_names;
  j["feature_names"] = model.feature_names;
  if (model.label_column) {
    std::visit([&](const auto& v) { j["label_column"] = v; }, *model.label_column);
  } else {
    j["label_column"] = nullptr;
  }
  if (model.split) {
    j["split"] = {{"train_fraction", model.split->train_fraction},
                  {"seed", model.split->seed},
                  {"stratified", model.split->stratified}};
  } else {
    j["split"] = nullptr;
  }
  json layers = json::array();
  for (const Layer& l : model.network.layers()) layers.push_back(layer_json(l));
  j["layers"] = std::move(layers);
  out << j.dump(1) << '\n';
  if (!out) throw std::runtime_error("model: write failed");
}

void save_model(const std::filesystem::path& path, const Model& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  save_model(out, model);
}

Model load_model(std::istream& in) {
  try {
    const json j = json::parse(in);
    if (j.at("format").get<std::string>() != kFormat) throw std::runtime_error("model: not a model file");
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion)
      throw std::runtime_error("model: unsupported format version " + std::to_string(version));
    Model m;
    m.config = config_from(j.at("config"));
    m.class_names = j.at("class_names").get<std::vector<std::string>>();
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    const json& label = j.at("label_column");
    if (label.is_string())
      m.label_column = label.get<std::string>();
    else if (label.is_number_unsigned())
      m.label_column = label.get<std::size_t>();
    else if (!label.is_null())
      throw std::runtime_error("model: bad label column");
    const json& split = j.at("split");
    if (!split.is_null())
      m.split = SplitSpec{split.at("train_fraction").get<double>(), split.at("seed").get<std::uint64_t>(),
                          split.at("stratified").get<bool>()};
    std::vector<Layer> layers;
    for (const json& l : j.at("layers")) layers.push_back(layer_from(l));
    m.network = Network(std::move(layers));
    if (m.class_names.size() != m.network.output_width())
      throw std::runtime_error("model: class names do not match the output width");
    return m;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("model: malformed document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("model: ") + e.what());
  }
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return load_model(in);
}

}  // namespace fuzzynet
