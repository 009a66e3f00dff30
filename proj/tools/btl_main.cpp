// Command-line front end for the block-tensor library. Everything goes
// through the C API in blocktensor.h.

#include <chrono>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "blocktensor.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitUsage = 2;

int api_failure(const std::string& what) {
  std::cerr << "error: " << what << ": " << btl_last_error() << '\n';
  return kExitUsage;
}

bool parse_mode_list(const std::string& text, std::vector<int64_t>& out) {
  out.clear();
  std::istringstream in(text);
  int64_t v = 0;
  while (in >> v) out.push_back(v);
  return in.eof();
}

std::string format_scalar(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

struct TensorHandle {
  btl_tensor* ptr = nullptr;
  ~TensorHandle() { btl_tensor_destroy(ptr); }
};

struct MatrixHandle {
  btl_matrix* ptr = nullptr;
  ~MatrixHandle() { btl_matrix_destroy(ptr); }
};

int write_matrix_file(const std::string& path, const btl_matrix* m,
                      const std::string& header) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot open " << path << " for writing\n";
    return kExitUsage;
  }
  out << header;
  const int64_t rows = btl_matrix_rows(m);
  const int64_t cols = btl_matrix_cols(m);
  const double* data = btl_matrix_data(m);
  for (int64_t i = 0; i < rows; ++i) {
    for (int64_t j = 0; j < cols; ++j) {
      if (j > 0) out << ' ';
      out << format_scalar(data[j * rows + i]);
    }
    out << '\n';
  }
  return out ? kExitOk : kExitUsage;
}

int cmd_verify(std::uint64_t seed, bool corrupt_pm) {
  char* report = nullptr;
  int32_t failures = 0;
  const uint32_t flags = corrupt_pm ? BTL_VERIFY_CORRUPT_PM : 0u;
  if (btl_verify(seed, flags, &report, &failures) != BTL_OK) {
    return api_failure("verify");
  }
  std::cout << report;
  btl_string_free(report);
  return failures == 0 ? kExitOk : kExitVerifyFailure;
}

int cmd_shuffle(int64_t q, int64_t r) {
  if (q < 1 || r < 1) {
    std::cerr << "error: shuffle factors must be positive\n";
    return kExitUsage;
  }
  std::vector<int64_t> w(static_cast<std::size_t>(q * r));
  if (btl_perfect_shuffle(q, r, w.data()) != BTL_OK) {
    return api_failure("shuffle");
  }
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k > 0) std::cout << ' ';
    std::cout << w[k];
  }
  std::cout << '\n';
  return kExitOk;
}

int cmd_unfold(const std::string& r_text, const std::string& c_text, const std::string& in_path,
               const std::string& out_path, bool blocked) {
  std::vector<int64_t> row_modes;
  std::vector<int64_t> col_modes;
  if (!parse_mode_list(r_text, row_modes) || !parse_mode_list(c_text, col_modes)) {
    std::cerr << "error: mode lists must be whitespace-separated integers\n";
    return kExitUsage;
  }
  TensorHandle tensor;
  if (btl_tensor_read(in_path.c_str(), &tensor.ptr) != BTL_OK) {
    return api_failure("reading " + in_path);
  }
  MatrixHandle matrix;
  const btl_status status =
      blocked ? btl_block_unfold(tensor.ptr, row_modes.data(), static_cast<int64_t>(row_modes.size()),
                                 col_modes.data(), static_cast<int64_t>(col_modes.size()), &matrix.ptr)
              : btl_unfold(tensor.ptr, row_modes.data(), static_cast<int64_t>(row_modes.size()),
                           col_modes.data(), static_cast<int64_t>(col_modes.size()), &matrix.ptr);
  if (status != BTL_OK) {
    return api_failure("unfolding " + in_path);
  }

  std::string header;
  if (blocked) {
    auto fetch = [&](bool rows) {
      int64_t count = 0;
      btl_status rc = rows ? btl_matrix_block_rows(matrix.ptr, nullptr, &count)
                           : btl_matrix_block_cols(matrix.ptr, nullptr, &count);
      std::vector<int64_t> sizes(static_cast<std::size_t>(count));
      if (rc == BTL_OK) {
        rc = rows ? btl_matrix_block_rows(matrix.ptr, sizes.data(), &count)
                  : btl_matrix_block_cols(matrix.ptr, sizes.data(), &count);
      }
      std::ostringstream line;
      line << (rows ? "rows:" : "cols:");
      for (int64_t s : sizes) line << ' ' << s;
      line << '\n';
      return line.str();
    };
    header = fetch(true) + fetch(false);
  }
  return write_matrix_file(out_path, matrix.ptr, header);
}

int cmd_contract(const std::string& p_text, const std::string& q_text, int64_t f,
                 const std::string& method_name, const std::string& f_path,
                 const std::string& g_path, const std::string& out_path) {
  std::vector<int64_t> p;
  std::vector<int64_t> q;
  if (!parse_mode_list(p_text, p) || !parse_mode_list(q_text, q)) {
    std::cerr << "error: --p/--q must be whitespace-separated integers\n";
    return kExitUsage;
  }
  btl_contract_method method = BTL_CONTRACT_NAIVE;
  if (method_name == "naive") {
    method = BTL_CONTRACT_NAIVE;
  } else if (method_name == "unfolded") {
    method = BTL_CONTRACT_UNFOLDED;
  } else if (method_name == "blocked") {
    method = BTL_CONTRACT_BLOCKED;
  } else {
    std::cerr << "error: unknown method '" << method_name << "' (naive|unfolded|blocked)\n";
    return kExitUsage;
  }
  TensorHandle lhs;
  TensorHandle rhs;
  if (btl_tensor_read(f_path.c_str(), &lhs.ptr) != BTL_OK) {
    return api_failure("reading " + f_path);
  }
  if (btl_tensor_read(g_path.c_str(), &rhs.ptr) != BTL_OK) {
    return api_failure("reading " + g_path);
  }
  TensorHandle result;
  if (btl_contract(lhs.ptr, rhs.ptr, p.data(), static_cast<int64_t>(p.size()), q.data(),
                   static_cast<int64_t>(q.size()), f, method, &result.ptr) != BTL_OK) {
    return api_failure("contracting");
  }
  if (btl_tensor_write(result.ptr, out_path.c_str()) != BTL_OK) {
    return api_failure("writing " + out_path);
  }
  return kExitOk;
}

int cmd_figure(int64_t mode, bool block_variant, const std::string& in_path) {
  TensorHandle tensor;
  if (btl_tensor_read(in_path.c_str(), &tensor.ptr) != BTL_OK) {
    return api_failure("reading " + in_path);
  }
  if (btl_tensor_has_blocking(tensor.ptr) == 0) {
    std::cerr << "error: " << in_path << " carries no blocking lines\n";
    return kExitUsage;
  }
  char* text = nullptr;
  if (btl_figure(tensor.ptr, mode, block_variant ? 1 : 0, &text) != BTL_OK) {
    return api_failure("rendering block map");
  }
  std::cout << text;
  btl_string_free(text);
  return kExitOk;
}

// One order-3 contraction benchmark case: n x n x n tensors contracted over
// the last mode of F and the first mode of G, blocked uniformly.
int bench_case(int64_t n, int64_t b, std::ostream& out) {
  if (n < 1 || b < 1 || n % b != 0) {
    std::cerr << "error: bench case needs positive n with b | n, got n=" << n << " b=" << b
              << '\n';
    return kExitUsage;
  }
  static std::uint64_t state = 0x9e3779b97f4a7c15ull;
  auto next_value = [&]() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5;
  };
  const int64_t dims[3] = {n, n, n};
  std::vector<double> data(static_cast<std::size_t>(n * n * n));

  TensorHandle lhs;
  for (auto& v : data) v = next_value();
  if (btl_tensor_create(dims, 3, data.data(), &lhs.ptr) != BTL_OK) return api_failure("bench");
  TensorHandle rhs;
  for (auto& v : data) v = next_value();
  if (btl_tensor_create(dims, 3, data.data(), &rhs.ptr) != BTL_OK) return api_failure("bench");

  const std::vector<int64_t> parts(static_cast<std::size_t>(n / b), b);
  for (int64_t mode = 1; mode <= 3; ++mode) {
    if (btl_tensor_set_blocking(lhs.ptr, mode, parts.data(), static_cast<int64_t>(parts.size())) !=
            BTL_OK ||
        btl_tensor_set_blocking(rhs.ptr, mode, parts.data(), static_cast<int64_t>(parts.size())) !=
            BTL_OK) {
      return api_failure("bench blocking");
    }
  }

  const int64_t p[3] = {1, 2, 3};
  const int64_t q[3] = {1, 2, 3};
  const struct {
    const char* name;
    btl_contract_method method;
  } methods[] = {{"naive", BTL_CONTRACT_NAIVE},
                 {"unfolded", BTL_CONTRACT_UNFOLDED},
                 {"blocked", BTL_CONTRACT_BLOCKED}};
  for (const auto& m : methods) {
    TensorHandle result;
    const auto start = std::chrono::steady_clock::now();
    if (btl_contract(lhs.ptr, rhs.ptr, p, 3, q, 3, 2, m.method, &result.ptr) != BTL_OK) {
      return api_failure("bench contraction");
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    out << n << ',' << m.name << ',' << format_scalar(elapsed.count()) << '\n';
  }
  return kExitOk;
}

int cmd_bench(const std::string& spec_path) {
  std::ifstream in(spec_path);
  if (!in) {
    std::cerr << "error: cannot open " << spec_path << '\n';
    return kExitUsage;
  }
  std::cout << "size,method,seconds\n";
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    int64_t n = 0;
    int64_t b = 0;
    if (!(ls >> n >> b)) {
      std::cerr << "error: bench spec lines are 'n b', got: " << line << '\n';
      return kExitUsage;
    }
    const int rc = bench_case(n, b, std::cout);
    if (rc != kExitOk) return rc;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"block tensor unfoldings, permutations, and contractions"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "run the randomized property suite");
  std::uint64_t seed = 0;
  bool corrupt_pm = false;
  verify->add_option("--seed", seed, "seed for the randomized suite");
  verify->add_flag("--corrupt-pm", corrupt_pm, "inject a P_M fault (negative control)")
      ->group("");  // hidden

  auto* shuffle = app.add_subcommand("shuffle", "print a perfect shuffle vector");
  int64_t shuffle_q = 0;
  int64_t shuffle_r = 0;
  shuffle->add_option("q", shuffle_q, "group count")->required();
  shuffle->add_option("r", shuffle_r, "group stride")->required();

  std::string r_text;
  std::string c_text;
  std::string in_path;
  std::string out_path;
  auto* unfold = app.add_subcommand("unfold", "write an r x c unfolding as rows of scalars");
  unfold->add_option("--r", r_text, "row modes, e.g. \"1 3\"");
  unfold->add_option("--c", c_text, "column modes, e.g. \"2\"");
  unfold->add_option("input", in_path, "tensor file")->required();
  unfold->add_option("output", out_path, "matrix file")->required();

  std::string br_text;
  std::string bc_text;
  std::string bin_path;
  std::string bout_path;
  auto* block_unfold =
      app.add_subcommand("block-unfold", "write a block unfolding with its block-grid header");
  block_unfold->add_option("--r", br_text, "row modes");
  block_unfold->add_option("--c", bc_text, "column modes");
  block_unfold->add_option("input", bin_path, "tensor file with blocking lines")->required();
  block_unfold->add_option("output", bout_path, "matrix file")->required();

  auto* contract = app.add_subcommand("contract", "contract two tensor files");
  std::string p_text;
  std::string q_text;
  int64_t f_modes = 0;
  std::string method = "unfolded";
  std::string f_path;
  std::string g_path;
  std::string h_path;
  contract->add_option("--p", p_text, "mode permutation of F")->required();
  contract->add_option("--q", q_text, "mode permutation of G")->required();
  contract->add_option("--f", f_modes, "number of free modes of F")->required();
  contract->add_option("--method", method, "naive|unfolded|blocked");
  contract->add_option("F", f_path, "left tensor file")->required();
  contract->add_option("G", g_path, "right tensor file")->required();
  contract->add_option("output", h_path, "result tensor file")->required();

  auto* figure = app.add_subcommand("figure", "print an ASCII block map of a mode unfolding");
  int64_t fig_mode = 1;
  bool fig_block = false;
  std::string fig_path;
  figure->add_option("--mode", fig_mode, "unfolding mode")->required();
  figure->add_flag("--block", fig_block, "show the block unfolding instead of the plain one");
  figure->add_option("input", fig_path, "tensor file with blocking lines")->required();

  auto* bench = app.add_subcommand("bench", "time the contraction methods over a size sweep");
  std::string bench_spec;
  bench->add_option("--spec", bench_spec, "file of 'n b' lines")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (verify->parsed()) return cmd_verify(seed, corrupt_pm);
  if (shuffle->parsed()) return cmd_shuffle(shuffle_q, shuffle_r);
  if (unfold->parsed()) return cmd_unfold(r_text, c_text, in_path, out_path, false);
  if (block_unfold->parsed()) return cmd_unfold(br_text, bc_text, bin_path, bout_path, true);
  if (contract->parsed()) {
    return cmd_contract(p_text, q_text, f_modes, method, f_path, g_path, h_path);
  }
  if (figure->parsed()) return cmd_figure(fig_mode, fig_block, fig_path);
  if (bench->parsed()) return cmd_bench(bench_spec);
  return kExitUsage;
}
