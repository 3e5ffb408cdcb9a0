#include "liftoff/io.hpp"

#include "liftoff/error.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

namespace liftoff {

namespace {

using Header = std::map<std::string, std::string>;

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\r')) --last;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) fail(ErrorCode::kIo, "malformed number '" + s + "'");
  return v;
}

template <typename Int>
Int parse_int(const std::string& s) {
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) fail(ErrorCode::kIo, "malformed integer '" + s + "'");
  return v;
}

std::vector<double> split_row(const std::string& line) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= line.size()) {
    const auto comma = line.find(',', start);
    const auto end = comma == std::string::npos ? line.size() : comma;
    out.push_back(parse_double(line.substr(start, end - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// Reads the '#' header block; the first line must carry `magic`.
Header read_header(std::istream& is, const std::string& magic) {
  Header h;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# " + magic, 0) != 0) {
    fail(ErrorCode::kIo, "missing '" + magic + "' header");
  }
  while (is.peek() == '#') {
    std::getline(is, line);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto key = line.substr(1, eq - 1);
    key.erase(0, key.find_first_not_of(' '));
    key.erase(key.find_last_not_of(' ') + 1);
    h[key] = line.substr(eq + 1);
  }
  return h;
}

const std::string& require(const Header& h, const std::string& key) {
  auto it = h.find(key);
  if (it == h.end()) fail(ErrorCode::kIo, "header is missing '" + key + "'");
  return it->second;
}

std::string next_data_line(std::istream& is) {
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return line;
  }
  fail(ErrorCode::kIo, "unexpected end of file");
}

void expect_section(std::istream& is, const std::string& name) {
  if (next_data_line(is) != "[" + name + "]") fail(ErrorCode::kIo, "expected section [" + name + "]");
}

void write_vectors(std::ostream& os, const MeasurementEnsemble& e) {
  for (Eigen::Index i = 0; i < e.m(); ++i) {
    for (Eigen::Index j = 0; j < e.d(); ++j) {
      if (j > 0) os << ',';
      os << format_double(e.vectors()(j, i).real()) << ',' << format_double(e.vectors()(j, i).imag());
    }
    os << '\n';
  }
}

Eigen::MatrixXcd read_vectors(std::istream& is, Eigen::Index d, Eigen::Index m) {
  Eigen::MatrixXcd a(d, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto row = split_row(next_data_line(is));
    if (static_cast<Eigen::Index>(row.size()) != 2 * d) fail(ErrorCode::kIo, "ensemble row has wrong width");
    for (Eigen::Index j = 0; j < d; ++j) a(j, i) = Complex(row[2 * j], row[2 * j + 1]);
  }
  return a;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorCode::kIo, "cannot open '" + path + "'");
  return is;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

Field parse_field(const std::string& s) {
  if (s == "real") return Field::kReal;
  if (s == "complex") return Field::kComplex;
  fail(ErrorCode::kInvalidArgument, "field must be 'real' or 'complex', got '" + s + "'");
}

const char* to_string(Field f) { return f == Field::kReal ? "real" : "complex"; }

void write_ensemble(std::ostream& os, const MeasurementEnsemble& e) {
  os << "# liftoff-ensemble v1\n"
     << "# d=" << e.d() << "\n# m=" << e.m() << "\n# field=" << to_string(e.field()) << "\n# seed=" << e.seed()
     << '\n';
  write_vectors(os, e);
}

MeasurementEnsemble read_ensemble(std::istream& is) {
  const Header h = read_header(is, "liftoff-ensemble");
  const auto d = parse_int<Eigen::Index>(require(h, "d"));
  const auto m = parse_int<Eigen::Index>(require(h, "m"));
  const Field field = parse_field(require(h, "field"));
  const auto seed = parse_int<std::uint64_t>(require(h, "seed"));
  return MeasurementEnsemble(read_vectors(is, d, m), field, seed);
}

void save_ensemble(const std::string& path, const MeasurementEnsemble& e) {
  auto os = open_out(path);
  write_ensemble(os, e);
  if (!os) fail(ErrorCode::kIo, "write failed for '" + path + "'");
}

MeasurementEnsemble load_ensemble(const std::string& path) {
  auto is = open_in(path);
  return read_ensemble(is);
}

void write_instance(std::ostream& os, const ProblemInstance& inst) {
  os << "# liftoff-instance v1\n"
     << "# d=" << inst.d() << "\n# m=" << inst.m() << "\n# k=" << inst.k() << "\n# field=" << to_string(inst.field())
     << "\n# seed=" << inst.seed << "\n# snr_db=" << (inst.snr_db ? format_double(*inst.snr_db) : "none")
     << "\n# ensemble_seed=" << inst.ensemble.seed() << '\n';
  os << "[x0]\n";
  for (Eigen::Index j = 0; j < inst.d(); ++j)
    os << format_double(inst.x0(j).real()) << ',' << format_double(inst.x0(j).imag()) << '\n';
  os << "[support]\n";
  for (auto j : inst.support) os << j << '\n';
  os << "[b]\n";
  for (Eigen::Index i = 0; i < inst.m(); ++i) os << format_double(inst.b(i)) << '\n';
  os << "[w]\n";
  for (Eigen::Index i = 0; i < inst.m(); ++i) os << format_double(inst.w(i)) << '\n';
  os << "[ensemble]\n";
  write_vectors(os, inst.ensemble);
}

ProblemInstance read_instance(std::istream& is) {
  const Header h = read_header(is, "liftoff-instance");
  const auto d = parse_int<Eigen::Index>(require(h, "d"));
  const auto m = parse_int<Eigen::Index>(require(h, "m"));
  const auto k = parse_int<Eigen::Index>(require(h, "k"));
  const Field field = parse_field(require(h, "field"));
  ProblemInstance inst;
  inst.seed = parse_int<std::uint64_t>(require(h, "seed"));
  const std::string& snr = require(h, "snr_db");
  if (snr != "none") inst.snr_db = parse_double(snr);
  std::uint64_t ens_seed = 0;
  if (auto it = h.find("ensemble_seed"); it != h.end()) ens_seed = parse_int<std::uint64_t>(it->second);

  expect_section(is, "x0");
  inst.x0.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto row = split_row(next_data_line(is));
    if (row.size() != 2) fail(ErrorCode::kIo, "x0 row must be 're,im'");
    inst.x0(j) = Complex(row[0], row[1]);
  }
  expect_section(is, "support");
  for (Eigen::Index j = 0; j < k; ++j) inst.support.push_back(parse_int<Eigen::Index>(next_data_line(is)));
  expect_section(is, "b");
  inst.b.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) inst.b(i) = parse_double(next_data_line(is));
  expect_section(is, "w");
  inst.w.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) inst.w(i) = parse_double(next_data_line(is));
  expect_section(is, "ensemble");
  inst.ensemble = MeasurementEnsemble(read_vectors(is, d, m), field, ens_seed);
  return inst;
}

void save_instance(const std::string& path, const ProblemInstance& inst) {
  auto os = open_out(path);
  write_instance(os, inst);
  if (!os) fail(ErrorCode::kIo, "write failed for '" + path + "'");
}

ProblemInstance load_instance(const std::string& path) {
  auto is = open_in(path);
  return read_instance(is);
}

void write_objective_trace(std::ostream& os, const SolveResult& r) {
  os << "outer_iter,objective,step,eigengap,inner_iters\n";
  if (!r.objective_trace.empty()) os << "0," << format_double(r.objective_trace.front()) << ",0,0,0\n";
  for (const auto& row : r.trace) {
    os << row.iteration << ',' << format_double(row.objective) << ',' << format_double(row.step) << ','
       << format_double(row.eigengap) << ',' << row.inner_iters << '\n';
  }
}

AdmmTraceSink csv_admm_trace(std::ostream& os) {
  return [&os](const AdmmTraceRow& row) {
    os << row.iteration << ',' << format_double(row.delta) << ',' << format_double(row.primal_res) << ','
       << format_double(row.dual_res) << ',' << format_double(row.objective) << '\n';
  };
}

}  // namespace liftoff
