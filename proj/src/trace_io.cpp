#include "rmscale/trace_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "rmscale/csv.hpp"

static_assert(std::endian::native == std::endian::little,
              "trace binary format assumes a little-endian host");

namespace rmscale {

namespace {

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::ifstream& in) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw std::runtime_error("trace file truncated");
  return v;
}

}  // namespace

void write_trace_csv(const ChainTrace& trace, const std::string& path,
                     const std::vector<int>& coords) {
  std::vector<int> cols = coords;
  if (cols.empty()) {
    int dim = trace.states.empty() ? 0 : static_cast<int>(trace.states[0].size());
    for (int k = 0; k < dim; ++k) cols.push_back(k);
  }
  CsvWriter w(path);
  w.comment("target: " + trace.meta.target);
  w.comment("method: " + trace.meta.method);
  w.comment("seed: " + std::to_string(trace.meta.seed) +
            " stream: " + std::to_string(trace.meta.stream));
  std::vector<std::string> names = {"step"};
  for (int k : cols) names.push_back("x" + std::to_string(k + 1));
  names.push_back("accepted");
  names.push_back("sigma");
  w.header(names);
  for (size_t t = 0; t < trace.states.size(); ++t) {
    std::vector<std::string> cells = {std::to_string(t + 1)};
    for (int k : cols) cells.push_back(fmt6(trace.states[t][k]));
    cells.push_back(trace.accepted[t] ? "1" : "0");
    cells.push_back(fmt6(trace.sigma_path[t + 1]));
    w.row(cells);
  }
  if (!w.ok()) throw std::runtime_error("failed writing trace csv: " + path);
}

void write_trace_rmt1(const ChainTrace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.write("RMT1", 4);
  put<std::uint16_t>(out, 1);
  put<std::uint16_t>(out, 0);
  put<std::uint64_t>(out, trace.states.size());
  const std::uint32_t dim =
      trace.states.empty() ? 0 : static_cast<std::uint32_t>(trace.states[0].size());
  put<std::uint32_t>(out, dim);
  put<double>(out, trace.sigma_path.empty() ? 0.0 : trace.sigma_path[0]);
  for (size_t t = 0; t < trace.states.size(); ++t) {
    for (std::uint32_t k = 0; k < dim; ++k) put<double>(out, trace.states[t][k]);
    put<std::uint8_t>(out, trace.accepted[t]);
    put<double>(out, trace.sigma_path[t + 1]);
  }
  if (!out) throw std::runtime_error("failed writing trace binary: " + path);
}

ChainTrace read_trace_rmt1(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "RMT1", 4) != 0)
    throw std::runtime_error("not a trace file: " + path);
  if (get<std::uint16_t>(in) != 1)
    throw std::runtime_error("unsupported trace version: " + path);
  get<std::uint16_t>(in);  // reserved
  const std::uint64_t iters = get<std::uint64_t>(in);
  const std::uint32_t dim = get<std::uint32_t>(in);

  ChainTrace trace;
  trace.meta.iters = static_cast<int>(iters);
  trace.sigma_path.reserve(iters + 1);
  trace.sigma_path.push_back(get<double>(in));
  trace.states.reserve(iters);
  trace.accepted.reserve(iters);
  for (std::uint64_t t = 0; t < iters; ++t) {
    Eigen::VectorXd x(dim);
    for (std::uint32_t k = 0; k < dim; ++k) x[k] = get<double>(in);
    trace.states.push_back(std::move(x));
    trace.accepted.push_back(get<std::uint8_t>(in));
    trace.sigma_path.push_back(get<double>(in));
  }
  return trace;
}

}  // namespace rmscale
