#include "btl/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace btl {
namespace {

std::vector<Index> parse_integers(std::istringstream& line, const std::string& what) {
  std::vector<Index> values;
  Index v = 0;
  while (line >> v) values.push_back(v);
  if (!line.eof()) {
    throw ParseError("malformed " + what + " entry");
  }
  return values;
}

}  // namespace

TensorFile read_tensor(std::istream& in) {
  std::string line;
  std::optional<std::vector<Index>> dims;
  std::vector<std::optional<std::vector<Index>>> parts;
  std::string rest;

  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string keyword;
    ls >> keyword;
    if (keyword == "dims:") {
      if (dims) throw ParseError("duplicate dims line");
      dims = parse_integers(ls, "dims");
      if (dims->empty()) throw ParseError("dims line is empty");
      parts.assign(dims->size(), std::nullopt);
    } else if (keyword == "blocking") {
      if (!dims) throw ParseError("blocking line before dims line");
      Index mode = 0;
      char colon = '\0';
      if (!(ls >> mode >> colon) || colon != ':') {
        throw ParseError("malformed blocking line; expected 'blocking k: ...'");
      }
      if (mode < 1 || mode > static_cast<Index>(dims->size())) {
        throw ParseError("blocking mode " + std::to_string(mode) + " out of range 1.." +
                         std::to_string(dims->size()));
      }
      auto& slot = parts[static_cast<std::size_t>(mode - 1)];
      if (slot) throw ParseError("duplicate blocking line for mode " + std::to_string(mode));
      slot = parse_integers(ls, "blocking");
      if (slot->empty()) throw ParseError("blocking line for mode " + std::to_string(mode) +
                                          " is empty");
    } else {
      // First data line; keep it and stop scanning headers.
      rest = line;
      break;
    }
  }
  if (!dims) throw ParseError("missing dims line");

  Shape shape = [&] {
    try {
      return Shape(*dims);
    } catch (const Error& e) {
      throw ParseError(e.what());
    }
  }();
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(shape.count()));
  auto consume = [&data](std::istream& s) {
    double v = 0.0;
    while (s >> v) data.push_back(v);
    if (!s.eof()) throw ParseError("malformed scalar in tensor data");
  };
  {
    std::istringstream first(rest);
    consume(first);
  }
  consume(in);
  if (static_cast<Index>(data.size()) != shape.count()) {
    throw ParseError("tensor data has " + std::to_string(data.size()) + " scalars, expected " +
                     std::to_string(shape.count()));
  }

  TensorFile out{DenseTensor(shape, std::move(data)), std::nullopt};
  const bool any_blocking =
      std::any_of(parts.begin(), parts.end(), [](const auto& p) { return p.has_value(); });
  if (any_blocking) {
    std::vector<std::vector<Index>> all;
    for (Index k = 1; k <= shape.order(); ++k) {
      const auto& slot = parts[static_cast<std::size_t>(k - 1)];
      all.push_back(slot ? *slot : std::vector<Index>{shape.dim(k)});
    }
    try {
      out.blocking = Blocking(shape, std::move(all));
    } catch (const Error& e) {
      throw ParseError(e.what());
    }
  }
  return out;
}

TensorFile read_tensor_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path + " for reading");
  return read_tensor(in);
}

std::string format_scalar(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_tensor(std::ostream& out, const DenseTensor& tensor, const Blocking* blocking) {
  out << "dims:";
  for (Index d : tensor.shape().dims()) out << ' ' << d;
  out << '\n';
  if (blocking != nullptr) {
    if (!(blocking->shape() == tensor.shape())) {
      throw ShapeError("blocking does not match tensor shape");
    }
    for (Index k = 1; k <= blocking->order(); ++k) {
      out << "blocking " << k << ':';
      for (Index m : blocking->part(k)) out << ' ' << m;
      out << '\n';
    }
  }
  std::size_t column = 0;
  for (double v : tensor.vec()) {
    out << format_scalar(v);
    if (++column % 8 == 0) {
      out << '\n';
    } else {
      out << ' ';
    }
  }
  if (column % 8 != 0) out << '\n';
}

void write_tensor_file(const std::string& path, const DenseTensor& tensor,
                       const Blocking* blocking) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_tensor(out, tensor, blocking);
  if (!out) throw IoError("failed writing " + path);
}

void write_matrix(std::ostream& out, const DenseMatrix& matrix) {
  for (Index i = 1; i <= matrix.rows(); ++i) {
    for (Index j = 1; j <= matrix.cols(); ++j) {
      if (j > 1) out << ' ';
      out << format_scalar(matrix.at(i, j));
    }
    out << '\n';
  }
}

}  // namespace btl
