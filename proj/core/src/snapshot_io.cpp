#include "vposc/snapshot_io.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "vposc/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary artifact formats are little-endian");

namespace vposc {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw FormatError("cannot open " + path.string());
  return in;
}

// Reads "key value..." lines up to a line "end".
std::map<std::string, std::string> read_header(std::istream& in, std::string_view magic) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty file");
  std::istringstream first(line);
  std::string word, version;
  first >> word >> version;
  if (word != magic) throw FormatError("expected '" + std::string(magic) + "' header");
  if (version != "1") throw FormatError("unsupported " + std::string(magic) + " version " + version);
  std::map<std::string, std::string> header;
  while (std::getline(in, line)) {
    if (line == "end") return header;
    const auto space = line.find(' ');
    if (space == std::string::npos) throw FormatError("malformed header line '" + line + "'");
    header[line.substr(0, space)] = line.substr(space + 1);
  }
  throw FormatError("header not terminated by 'end'");
}

const std::string& field(const std::map<std::string, std::string>& h, const std::string& key) {
  const auto it = h.find(key);
  if (it == h.end()) throw FormatError("header lacks '" + key + "'");
  return it->second;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw FormatError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw FormatError("not a number: '" + s + "'");
  return v;
}

std::uint64_t to_u64(const std::string& s, int base = 10) {
  std::uint64_t v = 0;
  const char* first = s.data();
  if (base == 16 && s.rfind("0x", 0) == 0) first += 2;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v, base);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw FormatError("not an integer: '" + s + "'");
  return v;
}

template <class T>
void write_raw(std::ostream& out, const std::vector<T>& v) {
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <class T>
void read_raw(std::istream& in, std::vector<T>& v, std::size_t n) {
  v.resize(n);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
  if (static_cast<std::size_t>(in.gcount()) != n * sizeof(T)) throw FormatError("truncated binary block");
}

template <class T>
void write_value(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T read_value(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (in.gcount() != sizeof(T)) throw FormatError("truncated binary block");
  return v;
}

std::vector<double> split_numbers(const std::string& line) {
  std::vector<double> out;
  std::istringstream ls(line);
  std::string tok;
  while (ls >> tok) out.push_back(to_double(tok));
  return out;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

void write_snapshot(std::ostream& out, const ParticleEnsemble& ens, double time,
                    std::uint64_t hash) {
  char hex[24];
  std::snprintf(hex, sizeof hex, "0x%016llx", static_cast<unsigned long long>(hash));
  out << "vposc-snapshot 1\n"
      << "count " << ens.size() << '\n'
      << "time " << fmt(time) << '\n'
      << "config_hash " << hex << '\n'
      << "columns r w L weight\n"
      << "encoding float64-le columnar\n"
      << "end\n";
  write_raw(out, ens.r);
  write_raw(out, ens.w);
  write_raw(out, ens.L);
  write_raw(out, ens.weight);
  if (!out) throw Error("snapshot write failed");
}

void write_snapshot(const std::filesystem::path& path, const ParticleEnsemble& ens, double time,
                    std::uint64_t hash) {
  auto out = open_out(path, true);
  write_snapshot(out, ens, time, hash);
}

Snapshot read_snapshot(std::istream& in) {
  const auto h = read_header(in, "vposc-snapshot");
  if (field(h, "columns") != "r w L weight") throw FormatError("unexpected snapshot columns");
  if (field(h, "encoding") != "float64-le columnar") throw FormatError("unexpected snapshot encoding");
  Snapshot s;
  const auto n = static_cast<std::size_t>(to_u64(field(h, "count")));
  s.time = to_double(field(h, "time"));
  s.config_hash = to_u64(field(h, "config_hash"), 16);
  read_raw(in, s.ensemble.r, n);
  read_raw(in, s.ensemble.w, n);
  read_raw(in, s.ensemble.L, n);
  read_raw(in, s.ensemble.weight, n);
  return s;
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  auto in = open_in(path, true);
  return read_snapshot(in);
}

void write_series_csv(std::ostream& out, const DiagnosticSeries& s) {
  out << "t,E_kin,E_pot,H,mass,r_max\n";
  for (std::size_t i = 0; i < s.samples(); ++i) {
    out << fmt(s.times[i]) << ',' << fmt(s.e_kin[i]) << ',' << fmt(s.e_pot[i]) << ','
        << fmt(s.h_total[i]) << ',' << fmt(s.mass[i]) << ',' << fmt(s.r_support[i]) << '\n';
  }
}

void write_series_csv(const std::filesystem::path& path, const DiagnosticSeries& s) {
  auto out = open_out(path, false);
  write_series_csv(out, s);
}

DiagnosticSeries read_series_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "t,E_kin,E_pot,H,mass,r_max") {
    throw FormatError("series CSV header must be 't,E_kin,E_pot,H,mass,r_max'");
  }
  DiagnosticSeries s;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> v;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      v.push_back(to_double(line.substr(start, comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (v.size() != 6) throw FormatError("series CSV row needs 6 columns");
    s.times.push_back(v[0]);
    s.e_kin.push_back(v[1]);
    s.e_pot.push_back(v[2]);
    s.h_total.push_back(v[3]);
    s.mass.push_back(v[4]);
    s.r_support.push_back(v[5]);
  }
  return s;
}

DiagnosticSeries read_series_csv(const std::filesystem::path& path) {
  auto in = open_in(path, false);
  return read_series_csv(in);
}

void write_histograms(std::ostream& out, const DiagnosticSeries& s) {
  if (s.histograms.size() != s.snapshots()) throw InvalidArgument("series has no histograms");
  const HistogramBinning& b = s.binning;
  out << "vposc-histograms 1\n"
      << "snapshots " << s.snapshots() << '\n'
      << "bins " << b.nr << ' ' << b.nw << ' ' << b.nL << '\n'
      << "box " << fmt(b.r_lo) << ' ' << fmt(b.r_hi) << ' ' << fmt(b.w_lo) << ' ' << fmt(b.w_hi)
      << ' ' << fmt(b.L_lo) << ' ' << fmt(b.L_hi) << '\n'
      << "layout time:float64 overflow:float64 weights:float32[r][w][L]\n"
      << "end\n";
  for (std::size_t i = 0; i < s.snapshots(); ++i) {
    if (s.histograms[i].weights.size() != b.bins()) throw InvalidArgument("histogram size mismatch");
    write_value(out, s.snapshot_times[i]);
    write_value(out, s.histograms[i].overflow);
    write_raw(out, s.histograms[i].weights);
  }
  if (!out) throw Error("histogram write failed");
}

void write_histograms(const std::filesystem::path& path, const DiagnosticSeries& s) {
  auto out = open_out(path, true);
  write_histograms(out, s);
}

void read_histograms(std::istream& in, DiagnosticSeries& s) {
  const auto h = read_header(in, "vposc-histograms");
  const auto n = static_cast<std::size_t>(to_u64(field(h, "snapshots")));
  const auto bins = split_numbers(field(h, "bins"));
  const auto box = split_numbers(field(h, "box"));
  if (bins.size() != 3 || box.size() != 6) throw FormatError("malformed histogram binning");
  HistogramBinning b;
  b.nr = static_cast<int>(bins[0]);
  b.nw = static_cast<int>(bins[1]);
  b.nL = static_cast<int>(bins[2]);
  if (b.nr < 1 || b.nw < 1 || b.nL < 1) throw FormatError("histogram bins must be positive");
  b.r_lo = box[0];
  b.r_hi = box[1];
  b.w_lo = box[2];
  b.w_hi = box[3];
  b.L_lo = box[4];
  b.L_hi = box[5];
  s.binning = b;
  s.snapshot_times.clear();
  s.histograms.clear();
  for (std::size_t i = 0; i < n; ++i) {
    s.snapshot_times.push_back(read_value<double>(in));
    PhaseHistogram hist;
    hist.overflow = read_value<double>(in);
    read_raw(in, hist.weights, b.bins());
    s.histograms.push_back(std::move(hist));
  }
}

void read_histograms(const std::filesystem::path& path, DiagnosticSeries& s) {
  auto in = open_in(path, true);
  read_histograms(in, s);
}

void write_densities(std::ostream& out, const DiagnosticSeries& s) {
  if (s.densities.size() != s.snapshots()) throw InvalidArgument("series has no densities");
  out << "# vposc-densities 1\n"
      << "# snapshots " << s.snapshots() << '\n'
      << "# columns t dr rho_0 ... rho_n (rho_j at r = j dr)\n";
  for (std::size_t i = 0; i < s.snapshots(); ++i) {
    out << fmt(s.snapshot_times[i]) << ' ' << fmt(s.densities[i].dr);
    for (double v : s.densities[i].rho) out << ' ' << fmt(v);
    out << '\n';
  }
}

void write_densities(const std::filesystem::path& path, const DiagnosticSeries& s) {
  auto out = open_out(path, false);
  write_densities(out, s);
}

void read_densities(std::istream& in, DiagnosticSeries& s) {
  std::string line;
  if (!std::getline(in, line) || line != "# vposc-densities 1") {
    throw FormatError("expected '# vposc-densities 1' header");
  }
  s.snapshot_times.clear();
  s.densities.clear();
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto v = split_numbers(line);
    if (v.size() < 4) throw FormatError("density row needs t, dr and at least two nodes");
    s.snapshot_times.push_back(v[0]);
    s.densities.push_back({v[1], std::vector<double>(v.begin() + 2, v.end())});
  }
}

void read_densities(const std::filesystem::path& path, DiagnosticSeries& s) {
  auto in = open_in(path, false);
  read_densities(in, s);
}

void write_matrix(std::ostream& out, const NamedMatrix& m) {
  if (m.times.size() != m.matrix.n) throw InvalidArgument("matrix and time grid differ in size");
  out << "# vposc-matrix 1\n"
      << "# name " << m.name << '\n'
      << "# n " << m.matrix.n << '\n'
      << "# times";
  for (double t : m.times) out << ' ' << fmt(t);
  out << '\n';
  for (std::size_t i = 0; i < m.matrix.n; ++i) {
    for (std::size_t j = 0; j < m.matrix.n; ++j) {
      if (j > 0) out << ' ';
      out << fmt(m.matrix(i, j));
    }
    out << '\n';
  }
}

void write_matrix(const std::filesystem::path& path, const NamedMatrix& m) {
  auto out = open_out(path, false);
  write_matrix(out, m);
}

NamedMatrix read_matrix(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "# vposc-matrix 1") {
    throw FormatError("expected '# vposc-matrix 1' header");
  }
  NamedMatrix m;
  std::size_t n = 0;
  bool have_n = false;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string key;
      ls >> key;
      std::string rest;
      std::getline(ls >> std::ws, rest);
      if (key == "name") m.name = rest;
      if (key == "n") {
        n = static_cast<std::size_t>(to_u64(rest));
        m.matrix = DenseMatrix(n);
        have_n = true;
      }
      if (key == "times") m.times = split_numbers(rest);
      continue;
    }
    if (!have_n) throw FormatError("matrix rows before '# n'");
    const auto v = split_numbers(line);
    if (v.size() != n || row >= n) throw FormatError("matrix row has the wrong length");
    for (std::size_t j = 0; j < n; ++j) m.matrix(row, j) = v[j];
    ++row;
  }
  if (!have_n || row != n || m.times.size() != n) throw FormatError("incomplete matrix");
  return m;
}

NamedMatrix read_matrix(const std::filesystem::path& path) {
  auto in = open_in(path, false);
  return read_matrix(in);
}

}  // namespace vposc
