#include "vposc/profile_io.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>

#include "vposc/errors.hpp"

namespace vposc {

void write_profile(std::ostream& out, const SteadyStateProfile& p) {
  const AnsatzModel& a = p.ansatz();
  out << std::setprecision(17);
  out << "# vposc-profile 1\n"
      << "# family " << to_string(a.family) << '\n'
      << "# k " << a.k << '\n'
      << "# l " << a.l << '\n'
      << "# L0 " << a.L0 << '\n'
      << "# y0 " << p.y0() << '\n'
      << "# R " << p.R() << '\n'
      << "# Ri " << p.Ri() << '\n'
      << "# E0 " << p.E0() << '\n'
      << "# M_total " << p.M_total() << '\n'
      << "# dr " << p.dr() << '\n'
      << "# columns r y rho m dUdr\n";
  for (std::size_t j = 0; j < p.nodes(); ++j) {
    out << p.radius(j) << ' ' << p.y()[j] << ' ' << p.rho()[j] << ' ' << p.mass()[j] << ' '
        << p.field()[j] << '\n';
  }
}

void write_profile(const std::filesystem::path& path, const SteadyStateProfile& profile) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_profile(out, profile);
}

SteadyStateProfile read_profile(std::istream& in) {
  std::map<std::string, std::string> header;
  std::vector<double> y, rho, mass, field;
  std::string line;
  bool magic = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string key, value;
      ls >> key;
      std::getline(ls >> std::ws, value);
      if (key == "vposc-profile") {
        if (value != "1") throw FormatError("unsupported profile version " + value);
        magic = true;
      }
      header[key] = value;
      continue;
    }
    std::istringstream ls(line);
    double r, yv, rv, mv, fv;
    if (!(ls >> r >> yv >> rv >> mv >> fv)) throw FormatError("bad profile row: " + line);
    y.push_back(yv);
    rho.push_back(rv);
    mass.push_back(mv);
    field.push_back(fv);
  }
  if (!magic) throw FormatError("missing '# vposc-profile 1' header");
  auto num = [&](const std::string& key) {
    auto it = header.find(key);
    if (it == header.end()) throw FormatError("profile header lacks '" + key + "'");
    try {
      return std::stod(it->second);
    } catch (const std::exception&) {
      throw FormatError("profile header '" + key + "' is not a number");
    }
  };
  if (y.size() < 2) throw FormatError("profile has fewer than two rows");
  AnsatzModel a;
  auto family = header.find("family");
  if (family == header.end()) throw FormatError("profile header lacks 'family'");
  a.family = family_from_string(family->second);
  a.k = num("k");
  a.l = num("l");
  a.L0 = num("L0");
  return SteadyStateProfile(a, num("y0"), num("dr"), std::move(y), std::move(rho),
                            std::move(mass), std::move(field), num("R"), num("Ri"),
                            num("M_total"));
}

SteadyStateProfile read_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_profile(in);
}

}  // namespace vposc
