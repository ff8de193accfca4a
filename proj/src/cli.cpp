#include "sic/cli.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "sic/io.hpp"

namespace sic::cli {

namespace {

// All floats serialize with 9 significant digits (docs/cli.md).
std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

struct CommonOpts {
  std::uint64_t seed = 0;
  bool quiet = false;
};

void add_common(CLI::App* app, CommonOpts& c) {
  app->add_option("--seed", c.seed, "deterministic seed (default 0)");
  app->add_flag("--quiet", c.quiet, "suppress diagnostics");
}

void note(const CommonOpts& c, std::ostream& err, const std::string& msg) {
  if (!c.quiet) err << msg << "\n";
}

solver::SolverConfig solver_config(int max_iters, double tol, double grid_res,
                                   int restarts, std::uint64_t seed) {
  solver::SolverConfig cfg;
  cfg.max_iterations = max_iters;
  cfg.convergence_tol = tol;
  cfg.grid_resolution = grid_res;
  cfg.random_restarts = restarts;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

void emit(const std::string& out_path, const std::string& text, std::ostream& out) {
  if (out_path.empty())
    out << text;
  else
    io::write_text_atomic(out_path, text);
}

std::string rate_point_json(const solver::RatePoint& pt) {
  std::ostringstream s;
  s << "{\n  \"rate_bits\": " << fmt(pt.rate)
    << ",\n  \"distortion\": " << fmt(pt.distortion)
    << ",\n  \"perception_bits\": " << fmt(pt.perception)
    << ",\n  \"converged\": " << (pt.converged ? "true" : "false")
    << ",\n  \"iterations\": " << pt.iterations << "\n}\n";
  return s.str();
}

std::string sweep_csv(const io::SolverProblem& prob,
                      const std::vector<std::pair<double, double>>& points,
                      const solver::SolverConfig& cfg, bool synonymous,
                      bool brute_force) {
  // rows are emitted in input order; each row is independent of the others
  std::ostringstream csv;
  csv << "lambda_d,lambda_p,rate_bits,distortion,perception_bits,converged\n";
  for (const auto& [ld, lp] : points) {
    solver::RatePoint pt;
    if (synonymous) {
      if (brute_force)
        pt = solver::brute_force_codec_search(prob.source, prob.distortion,
                                              *prob.recon_partition, 1.0, ld, lp);
      else
        pt = solver::synonymous_rdp(prob.source, prob.distortion,
                                    *prob.recon_partition, ld, lp, cfg);
    } else {
      pt = solver::rdp_lagrangian(prob.source, prob.distortion, ld, lp, cfg);
    }
    csv << fmt(ld) << "," << fmt(lp) << "," << fmt(pt.rate) << ","
        << fmt(pt.distortion) << "," << fmt(pt.perception) << ","
        << (pt.converged ? 1 : 0) << "\n";
  }
  return csv.str();
}

int cmd_measures(const std::string& dist_path, const std::string& part_path,
                 const std::string& out_path, std::ostream& out) {
  const auto dist = io::distribution_from_json(io::load_json_file(dist_path));
  const auto part = part_path.empty()
                        ? semantic::SynonymousPartition::singletons(dist.size())
                        : io::partition_from_json(io::load_json_file(part_path));
  const semantic::SemanticVariable sem(dist, part);
  const double h = semantic::shannon_entropy(dist);
  const double hs = semantic::semantic_entropy(sem);
  std::ostringstream s;
  s << "{\n  \"shannon_entropy_bits\": " << fmt(h)
    << ",\n  \"semantic_entropy_bits\": " << fmt(hs)
    << ",\n  \"entropy_gap_bits\": " << fmt(h - hs) << "\n}\n";
  emit(out_path, s.str(), out);
  return 0;
}

struct CodecBundle {
  codec::ContextModel model;
  transform::TransformConfig tcfg;
};

CodecBundle load_codec(const std::string& model_path, const std::string& transform_path) {
  codec::ContextModel model = io::context_model_from_json(io::load_json_file(model_path));
  transform::TransformConfig tcfg =
      transform_path.empty() ? transform::TransformConfig::defaults()
                             : io::transform_from_json(io::load_json_file(transform_path));
  if (tcfg.channels() != model.partition().channels)
    throw InputError("transform channels (" + std::to_string(tcfg.channels()) +
                     ") do not match the context model (" +
                     std::to_string(model.partition().channels) + ")");
  transform::validate_symbol_bound(tcfg, model.symbol_min(), model.symbol_max());
  return CodecBundle{std::move(model), std::move(tcfg)};
}

std::size_t payload_bits(const std::vector<std::uint8_t>& stream) {
  const auto header = codec::parse_header(stream);
  std::size_t pos = 22, bits = 0;
  for (std::size_t k = 0; k < header.coded_levels; ++k) {
    const std::size_t len = static_cast<std::size_t>(stream[pos]) |
                            (static_cast<std::size_t>(stream[pos + 1]) << 8) |
                            (static_cast<std::size_t>(stream[pos + 2]) << 16) |
                            (static_cast<std::size_t>(stream[pos + 3]) << 24);
    bits += 8 * len;
    pos += 4 + len;
  }
  return bits;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"synonymous-compression toolkit"};
  app.require_subcommand(1);

  // ---- measures ----
  auto* measures = app.add_subcommand("measures", "semantic information measures");
  std::string m_dist, m_part, m_out;
  CommonOpts m_common;
  measures->add_option("--dist", m_dist, "distribution JSON")->required();
  measures->add_option("--partition", m_part, "partition JSON (default singletons)");
  measures->add_option("--out", m_out, "output path (default stdout)");
  add_common(measures, m_common);

  // ---- rdp ----
  auto* rdp = app.add_subcommand("rdp", "rate-distortion(-perception) solvers");
  rdp->require_subcommand(1);
  std::string r_problem, r_sweep, r_out;
  double r_slope = 1.0, r_ld = 1.0, r_lp = 0.0;
  double r_max_d = -1.0, r_max_p = std::numeric_limits<double>::infinity();
  int r_iters = 20000, r_restarts = 8;
  double r_tol = 1e-10, r_grid = 1e-3;
  bool r_brute = false;
  CommonOpts r_common;
  auto add_solver_flags = [&](CLI::App* sub) {
    sub->add_option("--problem", r_problem, "problem JSON")->required();
    sub->add_option("--out", r_out, "output path (default stdout)");
    sub->add_option("--max-iters", r_iters, "iteration budget");
    sub->add_option("--tol", r_tol, "convergence tolerance (bits)");
    sub->add_option("--restarts", r_restarts, "random restarts");
    sub->add_option("--grid-res", r_grid, "grid resolution for constrained solves");
    add_common(sub, r_common);
  };
  auto* rdp_classical = rdp->add_subcommand("classical", "R(D) via Blahut-Arimoto");
  rdp_classical->add_option("--slope", r_slope, "Lagrange multiplier on distortion");
  add_solver_flags(rdp_classical);
  auto* rdp_perception = rdp->add_subcommand("perception", "R(D,P) solvers");
  rdp_perception->add_option("--lambda-d", r_ld, "distortion multiplier");
  rdp_perception->add_option("--lambda-p", r_lp, "perception multiplier");
  rdp_perception->add_option("--max-distortion", r_max_d,
                             "distortion bound (grid solver)");
  rdp_perception->add_option("--max-perception", r_max_p,
                             "perception bound (grid solver)");
  rdp_perception->add_option("--sweep", r_sweep, "sweep JSON -> CSV");
  add_solver_flags(rdp_perception);
  auto* rdp_synonymous = rdp->add_subcommand("synonymous", "synonymous RDP solver");
  rdp_synonymous->add_option("--lambda-d", r_ld, "distortion multiplier");
  rdp_synonymous->add_option("--lambda-p", r_lp, "perception multiplier");
  rdp_synonymous->add_option("--sweep", r_sweep, "sweep JSON -> CSV");
  rdp_synonymous->add_flag("--brute-force", r_brute,
                           "exhaustive oracle instead of the descent solver");
  add_solver_flags(rdp_synonymous);

  // ---- encode ----
  auto* encode = app.add_subcommand("encode", "image -> progressive .sic stream");
  std::string e_input, e_model, e_transform, e_out;
  int e_levels = 0;
  CommonOpts e_common;
  encode->add_option("--input", e_input, "PGM (P5) image")->required();
  encode->add_option("--model", e_model, "context model JSON")->required();
  encode->add_option("--transform", e_transform, "transform config JSON");
  encode->add_option("--levels", e_levels, "synonymous levels to code")->required();
  encode->add_option("--out", e_out, "output .sic path")->required();
  add_common(encode, e_common);

  // ---- decode ----
  auto* decode = app.add_subcommand("decode", ".sic stream -> sampled images");
  std::string d_in, d_model, d_transform, d_prefix, d_reference, d_metrics;
  int d_samples = 1;
  CommonOpts d_common;
  decode->add_option("--in", d_in, ".sic stream")->required();
  decode->add_option("--model", d_model, "context model JSON")->required();
  decode->add_option("--transform", d_transform, "transform config JSON");
  decode->add_option("--samples", d_samples, "detail samples to reconstruct");
  decode->add_option("--out-prefix", d_prefix, "writes <prefix>1.pgm..<prefix>M.pgm")
      ->required();
  decode->add_option("--reference", d_reference, "original image for metrics");
  decode->add_option("--metrics", d_metrics, "metrics JSON path (needs --reference)");
  add_common(decode, d_common);

  // ---- sweep ----
  auto* sweep = app.add_subcommand("sweep", "per-level rate/quality table");
  std::string s_input, s_model, s_transform, s_out;
  CommonOpts s_common;
  sweep->add_option("--input", s_input, "PGM (P5) image")->required();
  sweep->add_option("--model", s_model, "context model JSON")->required();
  sweep->add_option("--transform", s_transform, "transform config JSON");
  sweep->add_option("--out", s_out, "output CSV path")->required();
  add_common(sweep, s_common);

  std::vector<const char*> argv;
  argv.push_back("sic");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (*measures) return cmd_measures(m_dist, m_part, m_out, out);

    if (*rdp) {
      const auto prob = io::problem_from_json(io::load_json_file(r_problem));
      const auto cfg =
          solver_config(r_iters, r_tol, r_grid, r_restarts, r_common.seed);
      if (*rdp_classical) {
        const auto pt =
            solver::blahut_arimoto(prob.source, prob.distortion, r_slope, cfg);
        emit(r_out, rate_point_json(pt), out);
        return 0;
      }
      if (*rdp_perception) {
        if (!r_sweep.empty()) {
          const auto points = io::sweep_from_json(io::load_json_file(r_sweep));
          emit(r_out, sweep_csv(prob, points, cfg, false, false), out);
          return 0;
        }
        const auto pt =
            r_max_d >= 0.0
                ? solver::rdp_grid(prob.source, prob.distortion, r_max_d, r_max_p, cfg)
                : solver::rdp_lagrangian(prob.source, prob.distortion, r_ld, r_lp, cfg);
        emit(r_out, rate_point_json(pt), out);
        return 0;
      }
      // synonymous
      if (!prob.recon_partition)
        throw InputError("problem JSON needs \"recon_partition\" for the synonymous solver");
      if (!r_sweep.empty()) {
        const auto points = io::sweep_from_json(io::load_json_file(r_sweep));
        emit(r_out, sweep_csv(prob, points, cfg, true, r_brute), out);
        return 0;
      }
      const auto pt =
          r_brute ? solver::brute_force_codec_search(prob.source, prob.distortion,
                                                     *prob.recon_partition, 1.0, r_ld,
                                                     r_lp)
                  : solver::synonymous_rdp(prob.source, prob.distortion,
                                           *prob.recon_partition, r_ld, r_lp, cfg);
      emit(r_out, rate_point_json(pt), out);
      return 0;
    }

    if (*encode) {
      const auto bundle = load_codec(e_model, e_transform);
      const auto img = io::load_pgm(e_input);
      const auto latent = transform::analysis(img, bundle.tcfg);
      if (e_levels < 1 ||
          static_cast<std::size_t>(e_levels) > bundle.model.partition().levels)
        throw InputError("--levels must be in [1, " +
                         std::to_string(bundle.model.partition().levels) + "]");
      const auto stream = codec::encode_progressive(
          latent, static_cast<std::size_t>(e_levels), bundle.model, e_common.seed);
      io::write_file_atomic(e_out, stream);
      note(e_common, err,
           "encoded " + std::to_string(e_levels) + " level(s), " +
               std::to_string(stream.size()) + " bytes");
      return 0;
    }

    if (*decode) {
      if (!d_metrics.empty() && d_reference.empty())
        throw InputError("--metrics needs --reference");
      if (d_samples < 1) throw InputError("--samples must be >= 1");
      const auto bundle = load_codec(d_model, d_transform);
      const auto stream = io::read_file(d_in);
      const auto result = codec::decode_progressive(
          stream, bundle.model, static_cast<std::size_t>(d_samples));
      std::vector<transform::Image> images;
      for (const auto& latent : result.samples)
        images.push_back(transform::synthesis(latent, bundle.tcfg));
      for (std::size_t j = 0; j < images.size(); ++j)
        io::save_pgm(images[j], d_prefix + std::to_string(j + 1) + ".pgm");
      if (!d_metrics.empty()) {
        const auto ref = io::load_pgm(d_reference);
        std::ostringstream s;
        s << "{\n  \"coded_levels\": " << result.coded_levels << ",\n  \"samples\": [";
        for (std::size_t j = 0; j < images.size(); ++j) {
          s << (j ? "," : "") << "\n    {\"index\": " << (j + 1)
            << ", \"psnr_db\": " << fmt(transform::psnr(ref, images[j]))
            << ", \"stub\": " << fmt(transform::perceptual_stub(ref, images[j])) << "}";
        }
        s << "\n  ]\n}\n";
        io::write_text_atomic(d_metrics, s.str());
      }
      note(d_common, err,
           "decoded " + std::to_string(result.coded_levels) + " coded level(s) into " +
               std::to_string(images.size()) + " sample(s)");
      return 0;
    }

    if (*sweep) {
      const auto bundle = load_codec(s_model, s_transform);
      const auto img = io::load_pgm(s_input);
      const auto latent = transform::analysis(img, bundle.tcfg);
      const std::size_t levels = bundle.model.partition().levels;
      const auto full =
          codec::encode_progressive(latent, levels, bundle.model, s_common.seed);
      std::ostringstream csv;
      csv << "level,payload_bits,bits_per_pixel,psnr_db,stub\n";
      const double pixels = static_cast<double>(img.height) * img.width;
      for (std::size_t l = 1; l <= levels; ++l) {
        const auto stream = codec::truncate_stream(full, l);
        const auto result = codec::decode_progressive(stream, bundle.model, 1);
        const auto recon = transform::synthesis(result.samples[0], bundle.tcfg);
        const std::size_t bits = payload_bits(stream);
        csv << l << "," << bits << "," << fmt(static_cast<double>(bits) / pixels) << ","
            << fmt(transform::psnr(img, recon)) << ","
            << fmt(transform::perceptual_stub(img, recon)) << "\n";
      }
      emit(s_out, csv.str(), out);
      return 0;
    }
  } catch (const solver::ConvergenceError& e) {
    err << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace sic::cli
