#include "sic/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sic::io {

namespace {

Mat mat_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw InputError(std::string(what) + ": expected an array of rows");
  const std::size_t rows = j.size(), cols = j[0].size();
  Mat m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (j[r].size() != cols) throw InputError(std::string(what) + ": ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = j[r][c].get<double>();
  }
  return m;
}

std::vector<std::vector<std::size_t>> groups_from_json(const json& j) {
  std::vector<std::vector<std::size_t>> groups;
  for (const auto& g : j) groups.push_back(g.get<std::vector<std::size_t>>());
  return groups;
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  return j;
}

semantic::DiscreteDistribution distribution_from_json(const json& j) {
  if (!j.contains("probs")) throw InputError("distribution: missing \"probs\"");
  return semantic::DiscreteDistribution(j["probs"].get<std::vector<double>>());
}

semantic::SynonymousPartition partition_from_json(const json& j) {
  if (!j.contains("partition")) throw InputError("partition: missing \"partition\"");
  return semantic::SynonymousPartition(groups_from_json(j["partition"]));
}

semantic::JointDistribution joint_from_json(const json& j) {
  if (!j.contains("joint")) throw InputError("joint: missing \"joint\"");
  return semantic::JointDistribution(mat_from_json(j["joint"], "joint"));
}

SolverProblem problem_from_json(const json& j) {
  if (!j.contains("source")) throw InputError("problem: missing \"source\"");
  semantic::DiscreteDistribution source(j["source"].get<std::vector<double>>());
  solver::DistortionMatrix d =
      (!j.contains("distortion") ||
       (j["distortion"].is_string() && j["distortion"] == "hamming"))
          ? solver::DistortionMatrix::hamming(source.size())
          : solver::DistortionMatrix(mat_from_json(j["distortion"], "distortion"));
  std::optional<semantic::SynonymousPartition> part;
  if (j.contains("recon_partition"))
    part.emplace(groups_from_json(j["recon_partition"]));
  return SolverProblem{std::move(source), std::move(d), std::move(part)};
}

std::vector<std::pair<double, double>> sweep_from_json(const json& j) {
  if (!j.contains("points")) throw InputError("sweep: missing \"points\"");
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : j["points"])
    pts.emplace_back(p.at("lambda_d").get<double>(), p.at("lambda_p").get<double>());
  if (pts.empty()) throw InputError("sweep: no points");
  return pts;
}

codec::ContextModel context_model_from_json(const json& j) {
  if (j.value("schema_version", 1) != 1)
    throw InputError("context model: unsupported schema_version");
  const auto channels = j.at("channels").get<std::size_t>();
  const auto levels = j.at("levels").get<std::size_t>();
  const auto part = codec::partition_levels(channels, levels);
  const int smin = j.value("symbol_min", coding::QuantizedGaussian::kDefaultSymbolMin);
  const int smax = j.value("symbol_max", coding::QuantizedGaussian::kDefaultSymbolMax);

  std::vector<codec::GroupMode> modes(levels, codec::GroupMode::kStatic);
  auto parse_mode = [](const std::string& s) {
    if (s == "static") return codec::GroupMode::kStatic;
    if (s == "linear") return codec::GroupMode::kLinear;
    throw InputError("context model: unknown group mode \"" + s + "\"");
  };
  if (j.contains("group_modes")) {
    const auto& gm = j["group_modes"];
    if (gm.size() != levels)
      throw InputError("context model: group_modes must have one entry per level");
    for (std::size_t k = 0; k < levels; ++k) modes[k] = parse_mode(gm[k]);
  } else if (j.contains("mode")) {
    std::fill(modes.begin(), modes.end(), parse_mode(j["mode"]));
  }

  auto table = [&](const char* key, double fallback) {
    if (!j.contains(key)) return std::vector<double>(channels, fallback);
    auto v = j[key].get<std::vector<double>>();
    if (v.size() != channels)
      throw InputError(std::string("context model: ") + key + " must have length C");
    return v;
  };
  codec::ContextModel model(part, smin, smax, std::move(modes), table("mu", 0.0),
                            table("sigma", 1.0), table("mu_eps", 0.0));

  constexpr int kW = codec::ContextModel::kWindow;
  constexpr int kR = codec::ContextModel::kReach;
  auto dense = [&](const json& weights, const char* value_key) {
    std::vector<double> w(channels * channels * kW * kW, 0.0);
    for (const auto& e : weights) {
      const auto c = e.at("c").get<std::size_t>();
      const auto src = e.at("src").get<std::size_t>();
      const int dy = e.at("dy").get<int>();
      const int dx = e.at("dx").get<int>();
      if (c >= channels || src >= channels || std::abs(dy) > kR || std::abs(dx) > kR)
        throw InputError("context model: weight entry out of range");
      w[((c * channels + src) * kW + (dy + kR)) * kW + (dx + kR)] =
          e.at(value_key).get<double>();
    }
    return w;
  };
  if (j.contains("linear")) {
    const auto& lin = j["linear"];
    auto bias = [&](const char* key) {
      auto v = lin.value(key, std::vector<double>(channels, 0.0));
      if (v.size() != channels)
        throw InputError(std::string("context model: linear ") + key +
                         " must have length C");
      return v;
    };
    model.set_linear(dense(lin.value("weights", json::array()), "mu"),
                     dense(lin.value("weights", json::array()), "log_sigma"),
                     bias("bias_mu"), bias("bias_log_sigma"));
  }
  if (j.contains("detail_linear"))
    model.set_detail_linear(
        dense(j["detail_linear"].value("weights", json::array()), "w"));
  return model;
}

transform::TransformConfig transform_from_json(const json& j) {
  if (j.value("schema_version", 1) != 1)
    throw InputError("transform config: unsupported schema_version");
  transform::TransformConfig cfg;
  cfg.block = j.value("block", 8);
  if (cfg.block < 1) throw InputError("transform config: bad block size");
  if (j.contains("quant_step")) {
    cfg.quant_step = j["quant_step"].get<std::vector<double>>();
  } else {
    cfg.quant_step.assign(cfg.channels(), j.value("quant_ac", 2.0));
    if (!cfg.quant_step.empty()) cfg.quant_step[0] = j.value("quant_dc", 1.0);
  }
  if (cfg.quant_step.size() != cfg.channels())
    throw InputError("transform config: need one quant step per channel");
  return cfg;
}

loss::LossWeights weights_from_json(const json& j) {
  loss::LossWeights w = loss::table1_weights();
  if (j.contains("alpha")) w.alpha = j["alpha"].get<double>();
  if (j.contains("lambda_r")) w.lambda_r = j["lambda_r"].get<std::vector<double>>();
  if (j.contains("lambda_d")) w.lambda_d = j["lambda_d"].get<std::vector<double>>();
  if (j.contains("lambda_p")) w.lambda_p = j["lambda_p"].get<std::vector<double>>();
  if (j.contains("warming_a")) w.warming_a = j["warming_a"].get<double>();
  if (j.contains("warming_b")) w.warming_b = j["warming_b"].get<double>();
  w.validate();
  return w;
}

transform::Image load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::string magic;
  in >> magic;
  if (magic != "P5") throw InputError(path + ": not a binary PGM (P5)");
  auto next_int = [&]() {
    // skip whitespace and '#' comments
    int c;
    while ((c = in.get()) != EOF) {
      if (c == '#') {
        while ((c = in.get()) != EOF && c != '\n') {
        }
      } else if (!std::isspace(c)) {
        in.unget();
        break;
      }
    }
    long v;
    if (!(in >> v) || v < 0) throw InputError(path + ": malformed PGM header");
    return static_cast<std::size_t>(v);
  };
  const std::size_t width = next_int();
  const std::size_t height = next_int();
  const std::size_t maxval = next_int();
  if (maxval != 255) throw InputError(path + ": only maxval 255 supported");
  in.get();  // single whitespace before raster
  transform::Image img(height, width);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
    throw InputError(path + ": truncated pixel data");
  return img;
}

void save_pgm(const transform::Image& img, const std::string& path) {
  std::ostringstream head;
  head << "P5\n" << img.width << " " << img.height << "\n255\n";
  std::vector<std::uint8_t> bytes;
  const std::string h = head.str();
  bytes.insert(bytes.end(), h.begin(), h.end());
  bytes.insert(bytes.end(), img.pixels.begin(), img.pixels.end());
  write_file_atomic(path, bytes);
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

void write_file_atomic(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw InputError("short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw InputError("cannot rename " + tmp + " to " + path);
  }
}

void write_text_atomic(const std::string& path, const std::string& text) {
  write_file_atomic(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

}  // namespace sic::io
