#include "rosce/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

namespace rosce {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(std::string_view field, std::size_t line, std::size_t column) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end) {
    throw SchemaError("'" + std::string(field) + "' is not a number", line, column);
  }
  if (!std::isfinite(value)) throw SchemaError("non-finite value", line, column);
  return value;
}

std::string where(std::size_t line, std::size_t column) {
  if (line == 0) return "";
  std::string s = "line " + std::to_string(line);
  if (column != 0) s += ", column " + std::to_string(column);
  return s + ": ";
}

std::vector<std::string> location_header(const SpaceDomain& domain, bool short_1d) {
  if (domain.is_discrete()) return {"region"};
  if (short_1d && domain.dimension() == 1) return {"s"};
  std::vector<std::string> h;
  for (int a = 0; a < domain.dimension(); ++a) h.push_back("s" + std::to_string(a + 1));
  return h;
}

void write_location(std::ostream& out, const SpaceDomain& domain, const Location& s) {
  if (domain.is_discrete()) {
    out << s.region_index();
    return;
  }
  for (int a = 0; a < s.dim(); ++a) {
    if (a > 0) out << ',';
    out << format_double(s[a]);
  }
}

void write_header(std::ostream& out, const std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
}

}  // namespace

SchemaError::SchemaError(const std::string& what, std::size_t line, std::size_t column)
    : ConfigError(where(line, column) + what), line_(line), column_(column) {}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw DataError("cannot format number");
  return std::string(buf, ptr);
}

Dataset read_dataset_csv(std::istream& in, const std::optional<SpaceDomain>& domain) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw SchemaError("empty input; a header row is required", 1, 0);
  ++line_no;
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);

  const auto header = split(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::string name(header[c]);
    if (name == "s") name = "s1";
    static const std::vector<std::string> known{"y", "z", "w_hat", "v_hat", "s1", "s2", "s3", "region"};
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      throw SchemaError("unknown column '" + std::string(header[c]) + "'", 1, c + 1);
    }
    if (!col.emplace(name, c).second) {
      throw SchemaError("duplicate column '" + std::string(header[c]) + "'", 1, c + 1);
    }
  }

  const bool residual = col.contains("w_hat") || col.contains("v_hat");
  const std::string ycol = residual ? "w_hat" : "y";
  const std::string zcol = residual ? "v_hat" : "z";
  if (residual && (col.contains("y") || col.contains("z"))) {
    throw SchemaError("columns y,z cannot be mixed with w_hat,v_hat", 1, 0);
  }
  for (const auto& name : {ycol, zcol}) {
    if (!col.contains(name)) throw SchemaError("missing required column '" + name + "'", 1, 0);
  }
  const bool discrete = col.contains("region");
  int dims = 0;
  while (dims < kMaxSpatialDim && col.contains("s" + std::to_string(dims + 1))) ++dims;
  for (int a = dims; a < kMaxSpatialDim; ++a) {
    if (col.contains("s" + std::to_string(a + 1))) {
      throw SchemaError("location columns must be s1..sk without gaps; missing 's" +
                            std::to_string(dims + 1) + "'",
                        1, 0);
    }
  }
  if (discrete && dims > 0) throw SchemaError("use either 'region' or s1.., not both", 1, 0);
  if (!discrete && dims == 0) throw SchemaError("missing required column 's1' (or 'region')", 1, 0);

  std::vector<double> y, z;
  std::vector<Location> s;
  const std::size_t width = header.size();
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != width) {
      throw SchemaError("expected " + std::to_string(width) + " fields, found " +
                            std::to_string(fields.size()),
                        line_no, 0);
    }
    auto num = [&](const std::string& name) {
      const auto c = col.at(name);
      return parse_number(fields[c], line_no, c + 1);
    };
    y.push_back(num(ycol));
    z.push_back(num(zcol));
    if (discrete) {
      const double r = num("region");
      if (r < 1.0 || r != std::floor(r) || r > 1e9) {
        throw SchemaError("region must be a positive integer", line_no, col.at("region") + 1);
      }
      s.push_back(Location::region(static_cast<int>(r)));
    } else {
      std::array<double, kMaxSpatialDim> c{};
      for (int a = 0; a < dims; ++a) c[static_cast<std::size_t>(a)] = num("s" + std::to_string(a + 1));
      s.emplace_back(std::span<const double>(c.data(), static_cast<std::size_t>(dims)));
    }
  }
  if (s.size() < 2) throw SchemaError("at least two data rows are required", line_no, 0);

  std::optional<SpaceDomain> dom = domain;
  if (!dom) {
    if (discrete) {
      int d = 0;
      for (const auto& loc : s) d = std::max(d, loc.region_index());
      dom = SpaceDomain::discrete(d);
    } else {
      std::vector<Interval> bounds;
      for (int a = 0; a < dims; ++a) {
        Interval iv{s[0][a], s[0][a]};
        for (const auto& loc : s) {
          iv.lower = std::min(iv.lower, loc[a]);
          iv.upper = std::max(iv.upper, loc[a]);
        }
        if (!(iv.lower < iv.upper)) {
          throw SchemaError("column s" + std::to_string(a + 1) + " is constant", 0, 0);
        }
        bounds.push_back(iv);
      }
      dom = SpaceDomain::continuous(std::move(bounds));
    }
  } else if (dom->is_discrete() != discrete || (!discrete && dom->dimension() != dims)) {
    throw SchemaError("location columns do not match the configured domain " + dom->describe(), 1, 0);
  }

  Dataset data{*dom, Eigen::Map<Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size())),
               Eigen::Map<Eigen::VectorXd>(z.data(), static_cast<Eigen::Index>(z.size())),
               std::move(s), residual};
  data.validate();
  return data;
}

Dataset read_dataset_csv(const std::filesystem::path& path, const std::optional<SpaceDomain>& domain) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  return read_dataset_csv(in, domain);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  std::vector<std::string> cols;
  if (data.residual_level) {
    cols = {"w_hat", "v_hat"};
  } else {
    cols = {"y", "z"};
  }
  for (auto& c : location_header(data.domain, data.residual_level)) cols.push_back(c);
  write_header(out, cols);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out << format_double(data.y[k]) << ',' << format_double(data.z[k]) << ',';
    write_location(out, data.domain, data.s[i]);
    out << '\n';
  }
}

void write_truth_csv(std::ostream& out, const Dataset& data, const Truth& truth) {
  auto cols = location_header(data.domain, false);
  for (const char* c : {"tau", "beta", "exposure_mean"}) cols.emplace_back(c);
  write_header(out, cols);
  auto at = [](const Eigen::VectorXd& v, Eigen::Index k) { return k < v.size() ? v[k] : 0.0; };
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    write_location(out, data.domain, data.s[i]);
    out << ',' << format_double(truth.tau(data.s[i])) << ',' << format_double(at(truth.beta, k))
        << ',' << format_double(at(truth.exposure_mean, k)) << '\n';
  }
}

void write_effect_csv(std::ostream& out, const SpaceDomain& domain, std::span<const Location> grid,
                      const Eigen::VectorXd& tau) {
  auto cols = location_header(domain, false);
  cols.emplace_back("tau_hat");
  write_header(out, cols);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    write_location(out, domain, grid[i]);
    out << ',' << format_double(tau[static_cast<Eigen::Index>(i)]) << '\n';
  }
}

void write_band_csv(std::ostream& out, const SpaceDomain& domain, const CIBand& band) {
  auto cols = location_header(domain, false);
  for (const char* c : {"point", "lower", "upper"}) cols.emplace_back(c);
  write_header(out, cols);
  for (std::size_t i = 0; i < band.grid.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    write_location(out, domain, band.grid[i]);
    out << ',' << format_double(band.point[k]) << ',' << format_double(band.lower[k]) << ','
        << format_double(band.upper[k]) << '\n';
  }
}

void write_dispersion_csv(std::ostream& out, const SpaceDomain& domain,
                          const Dispersion& dispersion) {
  auto cols = location_header(domain, false);
  cols.emplace_back("truth");
  for (const auto& m : dispersion.methods) {
    const std::string name(to_string(m.method));
    cols.push_back(name + "_q_lo");
    cols.push_back(name + "_q_hi");
  }
  write_header(out, cols);
  for (std::size_t i = 0; i < dispersion.grid.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    write_location(out, domain, dispersion.grid[i]);
    out << ',' << format_double(dispersion.truth[k]);
    for (const auto& m : dispersion.methods) {
      out << ',' << format_double(m.q_lo[k]) << ',' << format_double(m.q_hi[k]);
    }
    out << '\n';
  }
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    writer(out);
    out.flush();
    if (!out) throw ConfigError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ConfigError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

}  // namespace rosce
