#include "fpa/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "fpa/error.hpp"

namespace fpa::config {

namespace {

[[noreturn]] void fail_at(const YAML::Mark& mark, const std::string& what) {
  const auto pos = mark.pos < 0 ? std::size_t{0} : static_cast<std::size_t>(mark.pos);
  throw ParseError(pos, "config line " + std::to_string(mark.line + 1) + ", column " +
                            std::to_string(mark.column + 1) + ": " + what);
}

long long as_int(const YAML::Node& n, const std::string& field) {
  if (!n.IsScalar()) fail_at(n.Mark(), field + " must be an integer");
  try {
    return n.as<long long>();
  } catch (const YAML::BadConversion&) {
    fail_at(n.Mark(), field + " must be an integer, got '" + n.Scalar() + "'");
  }
}

int as_small_int(const YAML::Node& n, const std::string& field) {
  const long long v = as_int(n, field);
  if (v < -laurent::kMaxExponent || v > laurent::kMaxExponent) fail_at(n.Mark(), field + " is out of range");
  return static_cast<int>(v);
}

sparse::Coord as_coord(const YAML::Node& n, const std::string& field, std::size_t d) {
  if (!n.IsSequence() || n.size() != 2) fail_at(n.Mark(), field + " must be [component, exponent]");
  const long long comp = as_int(n[0], field + " component");
  if (comp < 1 || static_cast<unsigned long long>(comp) > d) {
    throw Error(ErrorKind::MalformedSpec, field + " component " + std::to_string(comp) + " is outside [1, " +
                                              std::to_string(d) + "]");
  }
  return {static_cast<std::size_t>(comp - 1), as_small_int(n[1], field + " exponent")};
}

const YAML::Node require(const YAML::Node& doc, const char* key) {
  const YAML::Node n = doc[key];
  if (!n) throw Error(ErrorKind::MalformedSpec, std::string("config is missing '") + key + "'");
  return n;
}

}  // namespace

std::pair<int, int> parse_window(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ParseError(0, "window must look like LO:HI");
  auto read = [&](std::string_view part, std::size_t offset) {
    int v = 0;
    const auto* end = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(part.data(), end, v);
    if (ec != std::errc() || ptr != end || part.empty()) {
      throw ParseError(offset, "window bound '" + std::string(part) + "' is not an integer");
    }
    return v;
  };
  const int lo = read(text.substr(0, colon), 0);
  const int hi = read(text.substr(colon + 1), colon + 1);
  if (lo >= hi) throw ParseError(0, "window needs LO < HI");
  return {lo, hi};
}

RunConfig parse_config(std::string_view text) {
  YAML::Node doc;
  try {
    doc = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    fail_at(e.mark, e.msg);
  }
  if (!doc.IsMap()) throw ParseError(0, "config must be a mapping");

  const YAML::Node pn = require(doc, "p");
  const long long p = as_int(pn, "p");
  if (p < 2 || p > static_cast<long long>(linalg::kMaxPrime) || !linalg::is_prime(static_cast<std::uint32_t>(p))) {
    throw Error(ErrorKind::MalformedSpec, "p = " + std::to_string(p) + " is not a prime in [2, 97]");
  }
  const linalg::PrimeField field(static_cast<std::uint32_t>(p));
  const long long d = as_int(require(doc, "d"), "d");
  if (d < 1 || d > static_cast<long long>(action::kMaxDimension)) {
    throw Error(ErrorKind::MalformedSpec, "d = " + std::to_string(d) + " is outside [1, 16]");
  }
  const auto dim = static_cast<std::size_t>(d);

  const YAML::Node seed = require(doc, "seed");
  if (!seed.IsSequence()) fail_at(seed.Mark(), "seed must be a list of entries");
  std::vector<sparse::TapEntry> entries;
  for (const auto& e : seed) {
    if (!e.IsMap()) fail_at(e.Mark(), "seed entry must be {in: [c, e], out: [c, e], coeff: c}");
    for (const auto& kv : e) {
      const auto key = kv.first.as<std::string>();
      if (key != "in" && key != "out" && key != "coeff") fail_at(kv.first.Mark(), "unknown seed key '" + key + "'");
    }
    if (!e["in"] || !e["out"] || !e["coeff"]) fail_at(e.Mark(), "seed entry needs in, out and coeff");
    entries.push_back({as_coord(e["in"], "in", dim), as_coord(e["out"], "out", dim),
                       field.reduce(as_int(e["coeff"], "coeff"))});
  }

  RunConfig c{{field, dim, sparse::SparsePerturbation(field, dim, std::move(entries)), "", ""}, 4, 3, 4, {}};
  if (const auto n = doc["label"]) c.spec.label = n.as<std::string>();
  if (const auto n = doc["description"]) c.spec.description = n.as<std::string>();
  if (const auto n = doc["precision"]) c.precision = as_small_int(n, "precision");
  if (const auto n = doc["l_max"]) c.l_max = as_small_int(n, "l_max");
  if (const auto n = doc["n_max"]) c.n_max = as_small_int(n, "n_max");
  if (const auto n = doc["window"]) c.window = parse_window(n.as<std::string>());
  if (c.precision < 1) throw Error(ErrorKind::MalformedSpec, "precision must be at least 1");
  if (c.l_max < 0) throw Error(ErrorKind::MalformedSpec, "l_max must be nonnegative");
  if (c.n_max < 1) throw Error(ErrorKind::MalformedSpec, "n_max must be at least 1");
  for (const auto& kv : doc) {
    static const std::vector<std::string> known{"p",         "d",     "label", "description", "seed",
                                                "precision", "l_max", "n_max", "window"};
    const auto key = kv.first.as<std::string>();
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      fail_at(kv.first.Mark(), "unknown key '" + key + "'");
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string render_config(const RunConfig& c) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "p" << YAML::Value << c.spec.field.p();
  out << YAML::Key << "d" << YAML::Value << c.spec.d;
  if (!c.spec.label.empty()) out << YAML::Key << "label" << YAML::Value << c.spec.label;
  if (!c.spec.description.empty()) out << YAML::Key << "description" << YAML::Value << c.spec.description;
  out << YAML::Key << "seed" << YAML::Value;
  if (c.spec.seed.empty()) {
    out << YAML::Flow;
  }
  out << YAML::BeginSeq;
  for (const auto& e : c.spec.seed.entries()) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "in" << YAML::Value << YAML::Flow << YAML::BeginSeq << e.in.comp + 1 << e.in.exp
        << YAML::EndSeq;
    out << YAML::Key << "out" << YAML::Value << YAML::Flow << YAML::BeginSeq << e.out.comp + 1 << e.out.exp
        << YAML::EndSeq;
    out << YAML::Key << "coeff" << YAML::Value << e.coeff;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "precision" << YAML::Value << c.precision;
  out << YAML::Key << "l_max" << YAML::Value << c.l_max;
  out << YAML::Key << "n_max" << YAML::Value << c.n_max;
  if (c.window) {
    out << YAML::Key << "window" << YAML::Value << YAML::DoubleQuoted
        << (std::to_string(c.window->first) + ":" + std::to_string(c.window->second));
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace fpa::config
