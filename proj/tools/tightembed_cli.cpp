// SPDX-License-Identifier: Apache-2.0
//
// Batch front-end over the tightembed C API: construct embeddings of finite
// spaces, certify two-sided distance bounds, emit machine-readable reports.
//
// Exit codes: 0 pass, 2 invalid input, 3 certified failure, 4 internal error.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tightembed.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitFail = 3;
constexpr int kExitInternal = 4;

struct CliError {
  int exit_code;
  std::string message;
};

[[noreturn]] void bail(int code, const std::string& message) {
  throw CliError{code, message};
}

[[noreturn]] void bail_status(te_status status) {
  bail(status == TE_ERR_INTERNAL ? kExitInternal : kExitInvalid, te_last_error());
}

void check(te_status status) {
  if (status != TE_OK) bail_status(status);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bail(kExitInvalid, "cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Inline JSON is accepted wherever a file path is expected.
std::string read_spec(const std::string& path_or_json) {
  if (!path_or_json.empty() && path_or_json.front() == '{') return path_or_json;
  return read_file(path_or_json);
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) bail(kExitInvalid, "cannot open output file: " + tmp);
    out << content;
    if (!out) bail(kExitInternal, "write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) bail(kExitInternal, "rename failed: " + path + " (" + ec.message() + ")");
}

// RAII wrappers over the C handles
struct CurveDeleter {
  void operator()(te_curve* c) const { te_curve_free(c); }
};
struct SpaceDeleter {
  void operator()(te_space* s) const { te_space_free(s); }
};
struct LpDeleter {
  void operator()(te_lp_embedding* e) const { te_lp_embedding_free(e); }
};
struct StableDeleter {
  void operator()(te_stable_embedding* e) const { te_stable_embedding_free(e); }
};
using CurvePtr = std::unique_ptr<te_curve, CurveDeleter>;
using SpacePtr = std::unique_ptr<te_space, SpaceDeleter>;
using LpPtr = std::unique_ptr<te_lp_embedding, LpDeleter>;
using StablePtr = std::unique_ptr<te_stable_embedding, StableDeleter>;

std::string take_string(char* s) {
  std::string out = s ? s : "";
  te_string_free(s);
  return out;
}

SpacePtr load_space(const std::string& path) {
  te_space* raw = nullptr;
  check(te_space_parse(read_spec(path).c_str(), &raw));
  return SpacePtr(raw);
}

CurvePtr load_curve(const std::string& path) {
  te_curve* raw = nullptr;
  check(te_curve_parse(read_spec(path).c_str(), &raw));
  return CurvePtr(raw);
}

double parse_extended(const std::string& text, const char* what) {
  if (text == "inf") return HUGE_VAL;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (...) {
  }
  bail(kExitInvalid, std::string("cannot parse ") + what + ": '" + text + "'");
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    bail(kExitInvalid, "--range expects s1:s2 (s2 may be 'inf'): '" + text + "'");
  return {parse_extended(text.substr(0, colon), "range start"),
          parse_extended(text.substr(colon + 1), "range end")};
}

// ---- embed-lp ---------------------------------------------------------------

struct EmbedLpConfig {
  std::string input, modulus, out, csv, report;
  double eta = 0.0;  // 0 = pick the default
  double r = 0.06;
  std::string outer_s = "2";
};

int run_embed_lp(const EmbedLpConfig& cfg) {
  SpacePtr space = load_space(cfg.input);
  CurvePtr modulus = load_curve(cfg.modulus);

  double eta = cfg.eta;
  const double guidance = 2.0 / (1.0 - 16.0 * cfg.r);
  if (eta == 0.0) eta = std::max(100.0, guidance + 1.0);
  if (cfg.r < 1.0 / 16.0 && eta < guidance)
    std::cerr << "warning: eta = " << eta << " is below the guidance eta >= "
              << guidance << " for r = " << cfg.r
              << "; the certified lower bound may fail\n";

  te_lp_embedding* raw = nullptr;
  check(te_lp_embed(space.get(), modulus.get(), eta, cfg.r,
                    parse_extended(cfg.outer_s, "--outer-s"), &raw));
  LpPtr embedding(raw);

  int pass = 0;
  char *report_json = nullptr, *report_csv = nullptr;
  check(te_lp_embedding_verify(embedding.get(), &pass, &report_json,
                               cfg.csv.empty() ? nullptr : &report_csv));
  if (!cfg.out.empty()) {
    char* emb_json = nullptr;
    check(te_lp_embedding_to_json(embedding.get(), &emb_json));
    write_atomic(cfg.out, take_string(emb_json) + "\n");
  }
  const std::string report = take_string(report_json);
  if (!cfg.report.empty()) write_atomic(cfg.report, report + "\n");
  if (!cfg.csv.empty()) write_atomic(cfg.csv, take_string(report_csv));
  std::cout << (pass ? "PASS" : "FAIL") << " lp sandwich certification\n";
  return pass ? kExitPass : kExitFail;
}

// ---- embed-stable -----------------------------------------------------------

struct EmbedStableConfig {
  std::string input, rho, omega, out, csv, report;
  int basepoint = 0;
};

int run_embed_stable(const EmbedStableConfig& cfg) {
  SpacePtr space = load_space(cfg.input);
  CurvePtr rho_raw = load_curve(cfg.rho);
  CurvePtr omega_raw = load_curve(cfg.omega);

  te_curve* reg = nullptr;
  check(te_curve_regularize_rho(rho_raw.get(), &reg));
  CurvePtr rho(reg);
  reg = nullptr;
  check(te_curve_regularize_omega(omega_raw.get(), &reg));
  CurvePtr omega(reg);

  te_stable_embedding* raw = nullptr;
  check(te_stable_embed(space.get(), cfg.basepoint, rho.get(), omega.get(), &raw));
  StablePtr embedding(raw);

  int pass = 0;
  char *report_json = nullptr, *report_csv = nullptr;
  check(te_stable_embedding_verify(embedding.get(), &pass, &report_json,
                                   cfg.csv.empty() ? nullptr : &report_csv));
  if (!cfg.out.empty()) {
    char* emb_json = nullptr;
    check(te_stable_embedding_to_json(embedding.get(), &emb_json));
    write_atomic(cfg.out, take_string(emb_json) + "\n");
  }
  const std::string report = take_string(report_json);
  if (!cfg.report.empty()) write_atomic(cfg.report, report + "\n");
  if (!cfg.csv.empty()) write_atomic(cfg.csv, take_string(report_csv));
  std::cout << (pass ? "PASS" : "FAIL") << " stable sandwich certification\n";
  return pass ? kExitPass : kExitFail;
}

// ---- verify -----------------------------------------------------------------

struct VerifyConfig {
  std::string embedding, input, image, range, out, csv;
  double r = 1.0;
  double distortion = 1.0;
  std::optional<double> snowflake;
  std::optional<double> tau;
};

int reverify_embedding(const VerifyConfig& cfg) {
  const std::string doc = read_spec(cfg.embedding);
  int pass = 0;
  char* report_json = nullptr;
  char* report_csv = nullptr;
  char** csv_slot = cfg.csv.empty() ? nullptr : &report_csv;

  te_lp_embedding* lp = nullptr;
  if (te_lp_embedding_parse(doc.c_str(), &lp) == TE_OK) {
    LpPtr embedding(lp);
    check(te_lp_embedding_verify(embedding.get(), &pass, &report_json, csv_slot));
  } else {
    te_stable_embedding* stable = nullptr;
    if (te_stable_embedding_parse(doc.c_str(), &stable) != TE_OK)
      bail(kExitInvalid,
           std::string("not a recognized embedding document: ") + te_last_error());
    StablePtr embedding(stable);
    check(te_stable_embedding_verify(embedding.get(), &pass, &report_json, csv_slot));
  }
  if (!cfg.out.empty()) write_atomic(cfg.out, take_string(report_json) + "\n");
  else te_string_free(report_json);
  if (csv_slot) write_atomic(cfg.csv, take_string(report_csv));
  std::cout << (pass ? "PASS" : "FAIL") << " re-verification\n";
  return pass ? kExitPass : kExitFail;
}

int run_verify(const VerifyConfig& cfg) {
  if (!cfg.embedding.empty()) return reverify_embedding(cfg);
  if (cfg.input.empty() || cfg.image.empty())
    bail(kExitInvalid, "verify needs --embedding, or --input and --image");
  SpacePtr source = load_space(cfg.input);
  SpacePtr image = load_space(cfg.image);

  const int modes = (!cfg.range.empty() ? 1 : 0) + (cfg.snowflake ? 1 : 0) +
                    (cfg.tau ? 1 : 0);
  if (modes != 1)
    bail(kExitInvalid, "verify needs exactly one of --range, --snowflake, --tau");

  int pass = 1;
  char* report_json = nullptr;
  if (!cfg.range.empty()) {
    const auto [s1, s2] = parse_range(cfg.range);
    check(te_range_check(source.get(), image.get(), s1, s2, cfg.r,
                         cfg.distortion, &pass, &report_json));
  } else if (cfg.snowflake) {
    check(te_snowflake_check(source.get(), image.get(), *cfg.snowflake, &pass,
                             &report_json));
  } else {
    double alpha = 0.0, scale = 1.0;
    check(te_compression_exponent(source.get(), image.get(), *cfg.tau, &alpha,
                                  &scale, &report_json));
    std::cout << "alpha = " << alpha << ", C = " << scale << "\n";
  }
  if (!cfg.out.empty()) write_atomic(cfg.out, take_string(report_json) + "\n");
  else te_string_free(report_json);
  if (pass) {
    std::cout << "PASS\n";
    return kExitPass;
  }
  std::cout << "FAIL\n";
  return kExitFail;
}

// ---- moduli -----------------------------------------------------------------

struct ModuliConfig {
  std::string input, image, csv, out;
};

int run_moduli(const ModuliConfig& cfg) {
  SpacePtr source = load_space(cfg.input);
  SpacePtr image = load_space(cfg.image.empty() ? cfg.input : cfg.image);
  char* csv = nullptr;
  char* profile_json = nullptr;
  check(te_measure_moduli(source.get(), image.get(), &csv,
                          cfg.out.empty() ? nullptr : &profile_json));
  write_atomic(cfg.csv, take_string(csv));
  if (!cfg.out.empty()) write_atomic(cfg.out, take_string(profile_json) + "\n");
  return kExitPass;
}

// ---- fixtures ---------------------------------------------------------------

struct KaltonConfig {
  std::string p = "2";
  int truncation = 6;
  int count = 32;
  std::uint64_t seed = 0;
  std::string out;
};

int run_fixture_kalton(const KaltonConfig& cfg) {
  te_space* raw = nullptr;
  check(te_fixture_kalton(parse_extended(cfg.p, "--p"), cfg.truncation, nullptr,
                          0, cfg.count, cfg.seed, &raw));
  SpacePtr space(raw);
  char* doc = nullptr;
  check(te_space_to_json(space.get(), &doc));
  write_atomic(cfg.out, take_string(doc) + "\n");
  return kExitPass;
}

struct NetConfig {
  std::string input, out;
  double delta = 1.0;
};

int run_fixture_net(const NetConfig& cfg) {
  SpacePtr space = load_space(cfg.input);
  char* doc = nullptr;
  check(te_fixture_net(space.get(), cfg.delta, &doc));
  write_atomic(cfg.out, take_string(doc) + "\n");
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite metric embeddings with certified compression/expansion bounds"};
  app.require_subcommand(1);

  EmbedLpConfig lp_cfg;
  CLI::App* embed_lp = app.add_subcommand(
      "embed-lp", "Embed an l_p point set into a block l_s-sum and certify "
                  "the two-sided sandwich");
  embed_lp->add_option("--input", lp_cfg.input, "point-set JSON")->required();
  embed_lp->add_option("--modulus", lp_cfg.modulus,
                       "modulus spec (Phi curve or log-modulus)")->required();
  embed_lp->add_option("--eta", lp_cfg.eta, "slack factor > 2 (default max(100, 2/(1-16r)+1))");
  embed_lp->add_option("--r", lp_cfg.r, "compression factor in (0, 1/16)");
  embed_lp->add_option("--outer-s", lp_cfg.outer_s, "block-sum exponent (or 'inf')");
  embed_lp->add_option("--out", lp_cfg.out, "embedding JSON output");
  embed_lp->add_option("--csv", lp_cfg.csv, "per-pair report CSV output");
  embed_lp->add_option("--report", lp_cfg.report, "report JSON output");

  EmbedStableConfig st_cfg;
  CLI::App* embed_stable = app.add_subcommand(
      "embed-stable", "Embed a finite metric space through weighted "
                      "truncated-distance coordinates and certify the sandwich");
  embed_stable->add_option("--input", st_cfg.input, "space JSON (points or matrix)")
      ->required();
  embed_stable->add_option("--rho", st_cfg.rho, "compression modulus spec (class P)")
      ->required();
  embed_stable->add_option("--omega", st_cfg.omega, "expansion modulus spec (class Omega)")
      ->required();
  embed_stable->add_option("--basepoint", st_cfg.basepoint, "basepoint index (default 0)");
  embed_stable->add_option("--out", st_cfg.out, "embedding JSON output");
  embed_stable->add_option("--csv", st_cfg.csv, "per-pair report CSV output");
  embed_stable->add_option("--report", st_cfg.report, "report JSON output");

  VerifyConfig v_cfg;
  CLI::App* verify = app.add_subcommand(
      "verify", "Re-verify an embedding document, or check range / snowflake / "
                "compression-exponent properties of a paired correspondence");
  verify->add_option("--embedding", v_cfg.embedding, "embedding JSON to re-verify");
  verify->add_option("--input", v_cfg.input, "source space JSON");
  verify->add_option("--image", v_cfg.image, "image space JSON (paired by index)");
  verify->add_option("--range", v_cfg.range, "distance range s1:s2 (s2 may be 'inf')");
  verify->add_option("--r", v_cfg.r, "scaling factor (range mode, default 1)");
  verify->add_option("--D", v_cfg.distortion, "distortion bound (range mode, default 1)");
  verify->add_option("--snowflake", v_cfg.snowflake, "snowflake exponent in (0,1)");
  verify->add_option("--tau", v_cfg.tau, "compression-exponent threshold");
  verify->add_option("--out", v_cfg.out, "report JSON output");
  verify->add_option("--csv", v_cfg.csv, "report CSV output (re-verify mode)");

  ModuliConfig m_cfg;
  CLI::App* moduli = app.add_subcommand(
      "moduli", "Empirical compression/expansion moduli of a correspondence");
  moduli->add_option("--input", m_cfg.input, "source space JSON")->required();
  moduli->add_option("--image", m_cfg.image, "image space JSON (default: source)");
  moduli->add_option("--csv", m_cfg.csv, "profile CSV output (t, rho_hat, omega_hat)")
      ->required();
  moduli->add_option("--out", m_cfg.out, "profile JSON output");

  CLI::App* fixtures = app.add_subcommand("fixtures", "Deterministic seeded fixtures");
  fixtures->require_subcommand(1);
  KaltonConfig k_cfg;
  CLI::App* kalton = fixtures->add_subcommand(
      "kalton", "Samples of the compact diagonal-operator image in l_p^n");
  kalton->add_option("--p", k_cfg.p, "exponent in [1, inf]");
  kalton->add_option("--n", k_cfg.truncation, "coordinate truncation");
  kalton->add_option("--count", k_cfg.count, "random sample count");
  kalton->add_option("--seed", k_cfg.seed, "RNG seed")->required();
  kalton->add_option("--out", k_cfg.out, "point-set JSON output")->required();
  NetConfig n_cfg;
  CLI::App* net = fixtures->add_subcommand("net", "Greedy delta-net with assignment");
  net->add_option("--input", n_cfg.input, "space JSON")->required();
  net->add_option("--delta", n_cfg.delta, "net parameter > 0")->required();
  net->add_option("--out", n_cfg.out, "net JSON output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (embed_lp->parsed()) return run_embed_lp(lp_cfg);
    if (embed_stable->parsed()) return run_embed_stable(st_cfg);
    if (verify->parsed()) return run_verify(v_cfg);
    if (moduli->parsed()) return run_moduli(m_cfg);
    if (fixtures->parsed()) {
      if (kalton->parsed()) return run_fixture_kalton(k_cfg);
      if (net->parsed()) return run_fixture_net(n_cfg);
    }
    return kExitInvalid;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
