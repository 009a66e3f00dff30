#include "blocktensor.h"

#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include "btl/blocking.hpp"
#include "btl/contraction.hpp"
#include "btl/figure.hpp"
#include "btl/io.hpp"
#include "btl/permutation.hpp"
#include "btl/tensor.hpp"
#include "btl/verify.hpp"

struct btl_tensor {
  btl::DenseTensor tensor;
  std::optional<btl::Blocking> blocking;
};

struct btl_matrix {
  btl::DenseMatrix matrix;
  std::optional<btl::BlockLayout> layout;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* message) { g_last_error = message; }

template <typename Fn>
btl_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const btl::ShapeError& e) {
    g_last_error = e.what();
    return BTL_ERR_SHAPE;
  } catch (const btl::IndexError& e) {
    g_last_error = e.what();
    return BTL_ERR_INDEX;
  } catch (const btl::ParseError& e) {
    g_last_error = e.what();
    return BTL_ERR_PARSE;
  } catch (const btl::IoError& e) {
    g_last_error = e.what();
    return BTL_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BTL_ERR_ARGUMENT;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) {
    std::memcpy(out, s.c_str(), s.size() + 1);
  }
  return out;
}

std::vector<btl::Index> to_modes(const int64_t* modes, int64_t count) {
  if (count > 0 && modes == nullptr) {
    throw btl::ArgumentError("mode list pointer is null");
  }
  return std::vector<btl::Index>(modes, modes + count);
}

btl::Blocking blocking_or_trivial(const btl_tensor* t) {
  if (t->blocking) return *t->blocking;
  return btl::Blocking::trivial(t->tensor.shape());
}

btl_status copy_block_sizes(const btl_matrix* m, bool rows, int64_t* sizes_out, int64_t* count) {
  return guarded([&]() {
    if (m == nullptr || count == nullptr) {
      set_error("null pointer argument");
      return BTL_ERR_ARGUMENT;
    }
    if (!m->layout) {
      throw btl::ArgumentError("matrix does not carry a block grid");
    }
    const auto& sizes = rows ? m->layout->block_row_sizes : m->layout->block_col_sizes;
    if (sizes_out == nullptr) {
      *count = static_cast<int64_t>(sizes.size());
      return BTL_OK;
    }
    if (*count < static_cast<int64_t>(sizes.size())) {
      throw btl::ArgumentError("output buffer holds " + std::to_string(*count) +
                               " entries, need " + std::to_string(sizes.size()));
    }
    std::memcpy(sizes_out, sizes.data(), sizes.size() * sizeof(int64_t));
    *count = static_cast<int64_t>(sizes.size());
    return BTL_OK;
  });
}

}  // namespace

extern "C" {

const char* btl_version(void) { return "1.0.0"; }

const char* btl_last_error(void) { return g_last_error.c_str(); }

btl_status btl_tensor_create(const int64_t* dims, int64_t order, const double* data,
                             btl_tensor** out) {
  return guarded([&]() {
    if (dims == nullptr || out == nullptr) {
      set_error("null pointer argument");
      return BTL_ERR_ARGUMENT;
    }
    btl::Shape shape{std::vector<btl::Index>(dims, dims + order)};
    btl::DenseTensor tensor = data == nullptr
                                  ? btl::DenseTensor(shape)
                                  : btl::DenseTensor(shape, std::vector<double>(
                                                                data, data + shape.count()));
    *out = new btl_tensor{std::move(tensor), std::nullopt};
    return BTL_OK;
  });
}

btl_status btl_tensor_read(const char* path, btl_tensor** out) {
  return guarded([&]() {
    if (path == nullptr || out == nullptr) {
      set_error("null pointer argument");
      return BTL_ERR_ARGUMENT;
    }
    btl::TensorFile file = btl::read_tensor_file(path);
    *out = new btl_tensor{std::move(file.tensor), std::move(file.blocking)};
    return BTL_OK;
  });
}

btl_status btl_tensor_write(const btl_tensor* t, const char* path) {
  return guarded([&]() {
    if (t == nullptr || path == nullptr) {
      set_error("null pointer argument");
      return BTL_ERR_ARGUMENT;
    }
    btl::write_tensor_file(path, t->tensor, t->blocking ? &*t->blocking : nullptr);
    return BTL_OK;
  });
}

void btl_tensor_destroy(btl_tensor* t) { delete t; }

int64_t btl_tensor_order(const btl_tensor* t) { return t == nullptr ? 0 : t->tensor.order(); }

int64_t btl_tensor_size(const btl_tensor* t) { return t == nullptr ? 0 : t->tensor.size(); }

btl_status btl_tensor_dims(const btl_tensor* t, int64_t* dims_out) {
  return guarded([&]() {
    if (t == nullptr || dims_out == nullptr) {
      set_error("null pointer argument");
      return BTL_ERR_ARGUMENT;
    }
    const auto& dims = t->tensor.shape().dims();
    std::memcpy(dims_out, dims.data(), dims.size() * sizeof(int64_t));
    return BTL_OK;
  });
}

const double* btl_tensor_data(const btl_tensor* t) {
  return t == nullptr ? nullptr : t->tensor.raw().data();
}

btl_status btl_tensor_set_blocking(btl_tensor* t, int64_t mode, const int64_t* parts,
                                   int64_t count) {
  return guarded([&]() {
    if (t == nullptr || parts == nullptr) {
      set_error("null pointer argument");
      return BTL_ERR_ARGUMENT;
    }
    const btl::Shape& shape = t->tensor.shape();
    if (mode < 1 || mode > shape.order()) {
      throw btl::ArgumentError("mode " + std::to_string(mode) + " out of range 1.." +
                               std::to_string(shape.order()));
    }
    std::vector<std::vector<btl::Index>> all =
        t->blocking ? t->blocking->parts() : btl::Blocking::trivial(shape).parts();
    all[static_cast<std::size_t>(mode - 1)] = std::vector<btl::Index>(parts, parts + count);
    t->blocking = btl::Blocking(shape, std::move(all));
    return BTL_OK;
  });
}

int btl_tensor_has_blocking(const btl_tensor* t) {
  return (t != nullptr && t->blocking.has_value()) ? 1 : 0;
}

btl_status btl_tensor_block_counts(const btl_tensor* t, int64_t* counts_out) {
  return guarded([&]() {
    if (t == nullptr || counts_out == nullptr) {
      set_error("null pointer argument");
      return BTL_ERR_ARGUMENT;
    }
    if (!t->blocking) {
      throw btl::ArgumentError("tensor has no blocking attached");
    }
    const auto& counts = t->blocking->block_counts();
    std::memcpy(counts_out, counts.data(), counts.size() * sizeof(int64_t));
    return BTL_OK;
  });
}

btl_status btl_perfect_shuffle(int64_t q, int64_t r, int64_t* out) {
  return guarded([&]() {
    if (out == nullptr) {
      set_error("null pointer argument");
      return BTL_ERR_ARGUMENT;
    }
    const btl::PermutationVector w = btl::perfect_shuffle(q, r);
    std::memcpy(out, w.entries().data(), w.entries().size() * sizeof(int64_t));
    return BTL_OK;
  });
}

btl_status btl_unfold(const btl_tensor* t, const int64_t* row_modes, int64_t n_row,
                      const int64_t* col_modes, int64_t n_col, btl_matrix** out) {
  return guarded([&]() {
    if (t == nullptr || out == nullptr) {
      set_error("null pointer argument");
      return BTL_ERR_ARGUMENT;
    }
    btl::UnfoldSpec spec{to_modes(row_modes, n_row), to_modes(col_modes, n_col)};
    btl::UnfoldedMatrix u = btl::unfold(t->tensor, spec);
    *out = new btl_matrix{std::move(u.matrix), std::nullopt};
    return BTL_OK;
  });
}

btl_status btl_block_unfold(const btl_tensor* t, const int64_t* row_modes, int64_t n_row,
                            const int64_t* col_modes, int64_t n_col, btl_matrix** out) {
  return guarded([&]() {
    if (t == nullptr || out == nullptr) {
      set_error("null pointer argument");
      return BTL_ERR_ARGUMENT;
    }
    if (!t->blocking) {
      throw btl::ArgumentError("block unfolding requires a blocking on the tensor");
    }
    btl::UnfoldSpec spec{to_modes(row_modes, n_row), to_modes(col_modes, n_col)};
    btl::BlockUnfolding bu = btl::block_unfold(t->tensor, *t->blocking, spec);
    *out = new btl_matrix{std::move(bu.matrix), std::move(bu.layout)};
    return BTL_OK;
  });
}

int64_t btl_matrix_rows(const btl_matrix* m) { return m == nullptr ? 0 : m->matrix.rows(); }

int64_t btl_matrix_cols(const btl_matrix* m) { return m == nullptr ? 0 : m->matrix.cols(); }

const double* btl_matrix_data(const btl_matrix* m) {
  return m == nullptr ? nullptr : m->matrix.raw().data();
}

btl_status btl_matrix_block_rows(const btl_matrix* m, int64_t* sizes_out, int64_t* count) {
  return copy_block_sizes(m, true, sizes_out, count);
}

btl_status btl_matrix_block_cols(const btl_matrix* m, int64_t* sizes_out, int64_t* count) {
  return copy_block_sizes(m, false, sizes_out, count);
}

void btl_matrix_destroy(btl_matrix* m) { delete m; }

btl_status btl_contract(const btl_tensor* f, const btl_tensor* g, const int64_t* p, int64_t p_len,
                        const int64_t* q, int64_t q_len, int64_t f_modes,
                        btl_contract_method method, btl_tensor** out) {
  return guarded([&]() {
    if (f == nullptr || g == nullptr || out == nullptr) {
      set_error("null pointer argument");
      return BTL_ERR_ARGUMENT;
    }
    btl::ContractionPlan plan(btl::PermutationVector(to_modes(p, p_len)),
                              btl::PermutationVector(to_modes(q, q_len)), f_modes);
    plan.validate(f->tensor.shape(), g->tensor.shape());
    switch (method) {
      case BTL_CONTRACT_NAIVE:
        *out = new btl_tensor{btl::contract_naive(f->tensor, g->tensor, plan), std::nullopt};
        return BTL_OK;
      case BTL_CONTRACT_UNFOLDED:
        *out = new btl_tensor{btl::contract_unfolded(f->tensor, g->tensor, plan), std::nullopt};
        return BTL_OK;
      case BTL_CONTRACT_BLOCKED: {
        btl::BlockedContractionPlan bplan(plan, blocking_or_trivial(f), blocking_or_trivial(g));
        btl::DenseTensor h = btl::contract_blocked(f->tensor, g->tensor, bplan);
        *out = new btl_tensor{std::move(h), bplan.result_blocking()};
        return BTL_OK;
      }
    }
    throw btl::ArgumentError("unknown contraction method");
  });
}

btl_status btl_figure(const btl_tensor* t, int64_t mode, int block_variant, char** text_out) {
  return guarded([&]() {
    if (t == nullptr || text_out == nullptr) {
      set_error("null pointer argument");
      return BTL_ERR_ARGUMENT;
    }
    if (!t->blocking) {
      throw btl::ArgumentError("block map requires a blocking on the tensor");
    }
    const std::string text =
        btl::render_block_map(t->tensor.shape(), *t->blocking, mode, block_variant != 0);
    *text_out = dup_string(text);
    if (*text_out == nullptr) {
      set_error("out of memory");
      return BTL_ERR_ARGUMENT;
    }
    return BTL_OK;
  });
}

btl_status btl_verify(uint64_t seed, uint32_t flags, char** report_out, int32_t* failures_out) {
  return guarded([&]() {
    btl::VerifyOptions options;
    options.seed = seed;
    options.corrupt_pm = (flags & BTL_VERIFY_CORRUPT_PM) != 0;
    const std::vector<btl::CheckResult> results = btl::run_verification(options);
    if (failures_out != nullptr) {
      *failures_out = btl::count_failures(results);
    }
    if (report_out != nullptr) {
      *report_out = dup_string(btl::format_report(options, results));
      if (*report_out == nullptr) {
        set_error("out of memory");
        return BTL_ERR_ARGUMENT;
      }
    }
    return BTL_OK;
  });
}

void btl_string_free(char* text) { std::free(text); }

}  // extern "C"
