#pragma once

// File formats: JSON documents for distributions, partitions, joints,
// solver problems, sweeps, context models, transform configs, and loss
// weights (schemas in docs/schemas.md); binary PGM (P5) images; atomic
// write-to-temp-then-rename for every output.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sic/codec.hpp"
#include "sic/loss.hpp"
#include "sic/semantic.hpp"
#include "sic/solver.hpp"
#include "sic/transform.hpp"

namespace sic::io {

using json = nlohmann::json;

json load_json_file(const std::string& path);

semantic::DiscreteDistribution distribution_from_json(const json& j);
semantic::SynonymousPartition partition_from_json(const json& j);
semantic::JointDistribution joint_from_json(const json& j);

struct SolverProblem {
  semantic::DiscreteDistribution source;
  solver::DistortionMatrix distortion;
  std::optional<semantic::SynonymousPartition> recon_partition;
};

// {"source": [...], "distortion": [[...]] | "hamming", "recon_partition": [[...]]}
// distortion defaults to Hamming over the source alphabet.
SolverProblem problem_from_json(const json& j);

// {"points": [{"lambda_d": x, "lambda_p": y}, ...]}
std::vector<std::pair<double, double>> sweep_from_json(const json& j);

codec::ContextModel context_model_from_json(const json& j);
transform::TransformConfig transform_from_json(const json& j);
loss::LossWeights weights_from_json(const json& j);

transform::Image load_pgm(const std::string& path);
void save_pgm(const transform::Image& img, const std::string& path);

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file_atomic(const std::string& path, const std::vector<std::uint8_t>& bytes);
void write_text_atomic(const std::string& path, const std::string& text);

}  // namespace sic::io
