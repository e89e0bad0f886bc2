#include "l1emd/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <vector>

#include "l1emd/errors.hpp"

namespace l1emd {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) {
    out.push_back(tok);
  }
  return out;
}

double parse_double(const std::string& tok) {
  double value = 0.0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw InvalidArgument("not a finite decimal: '" + tok + "'");
  }
  return value;
}

bool parse_int(const std::string& tok, int& value) {
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, value);
  return ec == std::errc() && ptr == end;
}

bool is_atom_line(const std::vector<std::string>& t, int n) {
  int a = 0;
  int b = 0;
  return t.size() == 3 && parse_int(t[0], a) && parse_int(t[1], b) && a >= 0 && a < n && b >= 0 && b < n;
}

} // namespace

SignedMeasure read_measure(std::istream& in, MeasureFormat format) {
  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(in, line)) {
    auto tokens = split(line);
    if (tokens.empty() || tokens.front().starts_with('#')) {
      continue;
    }
    lines.push_back(std::move(tokens));
  }
  if (lines.empty()) {
    throw InvalidArgument("measure file is empty");
  }
  const auto& header = lines.front();
  int n = 0;
  if (header.size() != 3 || header[0] != "n" || !parse_int(header[1], n) || n < 1) {
    throw InvalidArgument("measure header must be 'n <n> <grid|torus>'");
  }
  Topology topology;
  if (header[2] == "grid") {
    topology = Topology::Grid;
  } else if (header[2] == "torus") {
    topology = Topology::Torus;
  } else {
    throw InvalidArgument("unknown topology '" + header[2] + "'");
  }
  const DomainSpec domain(n, topology);
  const std::span<const std::vector<std::string>> data(lines.begin() + 1, lines.end());

  if (format == MeasureFormat::Auto) {
    const bool dense_shape = static_cast<int>(data.size()) == n &&
                             std::all_of(data.begin(), data.end(), [n](const auto& t) {
                               return static_cast<int>(t.size()) == n;
                             });
    format = MeasureFormat::Sparse;
    if (dense_shape) {
      const bool all_atoms =
          std::all_of(data.begin(), data.end(), [n](const auto& t) { return is_atom_line(t, n); });
      if (n != 3 || !all_atoms) {
        format = MeasureFormat::Dense;
      }
    }
  }

  Field mass = Field::Zero(n, n);
  if (format == MeasureFormat::Dense) {
    if (static_cast<int>(data.size()) != n) {
      throw InvalidArgument("dense measure needs " + std::to_string(n) + " rows");
    }
    for (int a = 0; a < n; ++a) {
      if (static_cast<int>(data[a].size()) != n) {
        throw InvalidArgument("dense row " + std::to_string(a) + " needs " + std::to_string(n) + " values");
      }
      for (int b = 0; b < n; ++b) {
        mass(a, b) = parse_double(data[a][b]);
      }
    }
  } else {
    std::set<std::pair<int, int>> seen;
    for (const auto& t : data) {
      if (!is_atom_line(t, n)) {
        std::string joined;
        for (const auto& s : t) {
          joined += s + " ";
        }
        throw InvalidArgument("bad atom line '" + joined + "'");
      }
      int a = 0;
      int b = 0;
      parse_int(t[0], a);
      parse_int(t[1], b);
      if (!seen.insert({a, b}).second) {
        throw InvalidArgument("duplicate atom at (" + t[0] + ", " + t[1] + ")");
      }
      mass(a, b) = parse_double(t[2]);
    }
  }
  return SignedMeasure(domain, std::move(mass));
}

SignedMeasure read_measure_file(const std::string& path, MeasureFormat format) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidArgument("cannot open measure file '" + path + "'");
  }
  return read_measure(in, format);
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

namespace {

void write_header(std::ostream& out, const SignedMeasure& x) {
  out << "n " << x.n() << ' ' << (x.domain().is_torus() ? "torus" : "grid") << '\n';
}

} // namespace

void write_sparse(std::ostream& out, const SignedMeasure& x) {
  write_header(out, x);
  for (const Point& p : x.support()) {
    out << p.a << ' ' << p.b << ' ' << format_double(x(p)) << '\n';
  }
}

void write_dense(std::ostream& out, const SignedMeasure& x) {
  write_header(out, x);
  for (int a = 0; a < x.n(); ++a) {
    for (int b = 0; b < x.n(); ++b) {
      out << (b ? " " : "") << format_double(x(a, b));
    }
    out << '\n';
  }
}

void write_plan(std::ostream& out, const TransportPlan& plan) {
  for (const auto& e : plan.entries) {
    out << e.source.a << ' ' << e.source.b << ' ' << e.target.a << ' ' << e.target.b << ' '
        << format_double(e.mass) << '\n';
  }
  out << "cost " << format_double(plan.cost) << '\n';
}

void write_embedded(std::ostream& out, const EmbeddedVector& v) {
  out << "n " << v.domain.n << " embedded\n";
  for (const Field* part : {&v.partA, &v.partB}) {
    for (Eigen::Index a = 0; a < part->rows(); ++a) {
      for (Eigen::Index b = 0; b < part->cols(); ++b) {
        out << format_double((*part)(a, b)) << '\n';
      }
    }
  }
}

} // namespace l1emd
