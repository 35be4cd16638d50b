#pragma once

// JSON and CSV serialization. Matrices are {"rows", "cols", "data"} with data
// an array of rows of [re, im] pairs; doubles round-trip bit-exactly. Indices
// in every file format are 1-based.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "psdkit/bloch.hpp"
#include "psdkit/channel.hpp"
#include "psdkit/errors.hpp"
#include "psdkit/matrix.hpp"
#include "psdkit/positivity.hpp"
#include "psdkit/relax.hpp"
#include "psdkit/schur.hpp"

namespace psdkit::io {

using json = nlohmann::json;

// Malformed or unreadable input.
class FormatError : public Error {
public:
  using Error::Error;
};

inline json to_json(const ComplexMatrix& m) {
  json data = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    data.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline double number(const json& j, const char* what) {
  if (!j.is_number()) throw FormatError(std::string(what) + ": expected a number");
  return j.get<double>();
}

inline ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw FormatError("matrix: expected object with rows, cols, data");
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  const json& data = j.at("data");
  if (!data.is_array() || data.size() != rows) throw FormatError("matrix: data row count");
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!data[r].is_array() || data[r].size() != cols) throw FormatError("matrix: data column count");
    for (std::size_t c = 0; c < cols; ++c) {
      const json& e = data[r][c];
      if (e.is_number()) {
        m(r, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2) {
        m(r, c) = cplx(number(e[0], "matrix entry"), number(e[1], "matrix entry"));
      } else {
        throw FormatError("matrix: entries must be [re, im] pairs");
      }
    }
  }
  return m;
}

// "re+imj" token, e.g. "1.5-2e-3j"; a token without 'j' is real.
inline cplx parse_complex_token(const std::string& raw) {
  std::string t;
  for (char ch : raw)
    if (ch != ' ' && ch != '\t' && ch != '\r') t += ch;
  if (t.empty()) throw FormatError("csv: empty token");
  try {
    if (t.back() != 'j') return std::stod(t);
    std::string body = t.substr(0, t.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t i = body.size(); i-- > 1;)
      if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
        split = i;
        break;
      }
    if (split == std::string::npos) {
      const std::string im = body.empty() || body == "+" || body == "-" ? body + "1" : body;
      return cplx(0.0, std::stod(im));
    }
    std::string im = body.substr(split);
    if (im == "+" || im == "-") im += "1";
    return cplx(std::stod(body.substr(0, split)), std::stod(im));
  } catch (const std::logic_error&) {
    throw FormatError("csv: cannot parse token '" + raw + "'");
  }
}

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string to_csv(const ComplexMatrix& m) {
  std::string out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      const cplx z = m(r, c);
      out += format_double(z.real());
      out += std::signbit(z.imag()) ? "-" : "+";
      out += format_double(std::abs(z.imag()));
      out += 'j';
    }
    out += '\n';
  }
  return out;
}

inline ComplexMatrix matrix_from_csv(const std::string& text) {
  std::vector<std::vector<cplx>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<cplx> row;
    std::istringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) row.push_back(parse_complex_token(tok));
    if (!rows.empty() && row.size() != rows.front().size())
      throw FormatError("csv: ragged rows");
    rows.push_back(std::move(row));
  }
  const std::size_t r = rows.size(), c = r ? rows.front().size() : 0;
  std::vector<cplx> data;
  data.reserve(r * c);
  for (auto& row : rows) data.insert(data.end(), row.begin(), row.end());
  return ComplexMatrix(r, c, std::move(data));
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

// Reads a matrix from a .csv file or a JSON matrix file.
inline ComplexMatrix load_matrix(const std::string& path) {
  const std::string text = read_file(path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return matrix_from_csv(text);
  return matrix_from_json(parse_json(text));
}

// --- Schur parameter sets -------------------------------------------------

inline json to_json(const schur::Parameters& p) {
  json roots = json::array();
  for (std::size_t k = 0; k < p.d(); ++k) roots.push_back(to_json(p.root(k)));
  json gammas = json::array();
  for (const auto& [kj, g] : p.gammas())
    gammas.push_back({{"k", kj.first + 1}, {"j", kj.second + 1}, {"value", to_json(g)}});
  return {{"d", p.d()}, {"block", p.block()}, {"L", std::move(roots)}, {"gamma", std::move(gammas)}};
}

inline bool looks_like_parameters(const json& j) {
  return j.is_object() && j.contains("d") && j.contains("L") && j.contains("gamma");
}

inline schur::Parameters parameters_from_json(const json& j) {
  if (!looks_like_parameters(j)) throw FormatError("parameters: expected d, L, gamma");
  const auto d = j.at("d").get<std::size_t>();
  const auto block = j.value("block", std::size_t{1});
  schur::Parameters p(d, block);
  const json& roots = j.at("L");
  if (!roots.is_array() || roots.size() != d) throw FormatError("parameters: L must have d entries");
  try {
    for (std::size_t k = 0; k < d; ++k) p.set_root(k, matrix_from_json(roots[k]));
    for (const auto& g : j.at("gamma")) {
      const auto k = g.at("k").get<std::size_t>();
      const auto jj = g.at("j").get<std::size_t>();
      if (k < 1 || jj < 1) throw FormatError("parameters: indices are 1-based");
      p.set_gamma(k - 1, jj - 1, matrix_from_json(g.at("value")));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("parameters: ") + e.what());
  } catch (const DomainError& e) {
    throw FormatError(std::string("parameters: ") + e.what());
  }
  return p;
}

// --- Kraus sets -----------------------------------------------------------

inline json to_json(const channel::KrausSet& k) {
  json ops = json::array();
  for (const auto& v : k.ops) ops.push_back(to_json(v));
  return {{"d_in", k.d_in}, {"d_out", k.d_out}, {"ops", std::move(ops)}};
}

inline channel::KrausSet kraus_from_json(const json& j) {
  if (!j.is_object() || !j.contains("ops")) throw FormatError("kraus: expected d_in, d_out, ops");
  channel::KrausSet k{j.at("d_in").get<std::size_t>(), j.at("d_out").get<std::size_t>(), {}};
  for (const auto& m : j.at("ops")) k.ops.push_back(matrix_from_json(m));
  try {
    channel::validate(k);
  } catch (const DimensionError& e) {
    throw FormatError(e.what());
  }
  return k;
}

// --- Real vectors -----------------------------------------------------------

inline std::vector<double> real_vector_from_json(const json& j) {
  const json& arr = j.is_object() && j.contains("beta") ? j.at("beta") : j;
  if (!arr.is_array()) throw FormatError("expected a JSON array of reals");
  std::vector<double> v;
  for (const auto& x : arr) v.push_back(number(x, "vector entry"));
  return v;
}

// --- Verdicts -------------------------------------------------------------

inline json to_json(const positivity::Verdict& v) {
  json out = {{"is_psd", v.is_psd}, {"method", positivity::to_string(v.method)}};
  if (v.necessary_only) out["necessary_only"] = true;
  if (v.witness) {
    const auto& w = *v.witness;
    json wj = {{"kind", w.kind}, {"value", w.value}};
    if (w.index) wj["index"] = *w.index;
    if (!w.subset.empty()) wj["subset"] = w.subset;
    if (w.vector) wj["vector"] = to_json(*w.vector);
    out["witness"] = std::move(wj);
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

// --- Relaxation rates -----------------------------------------------------

// "12" or "1,2" -> (0, 1)
inline std::pair<std::size_t, std::size_t> parse_pair_key(const std::string& key) {
  std::size_t a = 0, b = 0;
  try {
    const auto comma = key.find(',');
    if (comma != std::string::npos) {
      a = std::stoul(key.substr(0, comma));
      b = std::stoul(key.substr(comma + 1));
    } else if (key.size() == 2 && std::isdigit(static_cast<unsigned char>(key[0])) &&
               std::isdigit(static_cast<unsigned char>(key[1]))) {
      a = static_cast<std::size_t>(key[0] - '0');
      b = static_cast<std::size_t>(key[1] - '0');
    } else {
      throw FormatError("");
    }
  } catch (const std::exception&) {
    throw FormatError("rate key must look like \"12\" or \"1,2\": " + key);
  }
  if (a < 1 || b < 1 || a == b) throw FormatError("rate key has invalid levels: " + key);
  return {a - 1, b - 1};
}

inline relax::DephasingRates4 dephasing4_from_json(const json& j) {
  const json& gd = j.is_object() && j.contains("Gamma_d") ? j.at("Gamma_d") : j;
  if (!gd.is_object()) throw FormatError("rates: expected a Gamma_d object");
  relax::DephasingRates4 r;
  for (const auto& [key, value] : gd.items()) {
    auto [a, b] = parse_pair_key(key);
    if (a > b) std::swap(a, b);
    const double v = number(value, "rate");
    if (b > 3) throw FormatError("rates: level index exceeds 4");
    const std::size_t code = (a + 1) * 10 + (b + 1);
    switch (code) {
      case 12: r.g12 = v; break;
      case 13: r.g13 = v; break;
      case 14: r.g14 = v; break;
      case 23: r.g23 = v; break;
      case 24: r.g24 = v; break;
      case 34: r.g34 = v; break;
      default: throw FormatError("rates: unknown pair " + key);
    }
  }
  return r;
}

// {"levels": N, "gamma": [[..]] | {"kn": x}, "Gamma_p": {...}, "Gamma_d": {...}}
inline relax::RelaxationRates rates_from_json(const json& j, std::size_t levels) {
  if (!j.is_object()) throw FormatError("rates: expected an object");
  if (levels == 0) levels = j.value("levels", std::size_t{0});
  if (levels == 0) throw FormatError("rates: number of levels is required");
  relax::RelaxationRates r(levels);
  auto check = [&](std::size_t a, std::size_t b) {
    if (a >= levels || b >= levels) throw FormatError("rates: level index out of range");
  };
  if (j.contains("gamma")) {
    const json& g = j.at("gamma");
    if (g.is_array()) {
      if (g.size() != levels) throw FormatError("rates: gamma must be N x N");
      for (std::size_t k = 0; k < levels; ++k) {
        if (!g[k].is_array() || g[k].size() != levels) throw FormatError("rates: gamma must be N x N");
        for (std::size_t m = 0; m < levels; ++m) r.set_population(k, m, number(g[k][m], "gamma"));
      }
    } else {
      for (const auto& [key, value] : g.items()) {
        const auto [a, b] = parse_pair_key(key);
        check(a, b);
        r.set_population(a, b, number(value, "gamma"));
      }
    }
  }
  for (const char* name : {"Gamma_p", "Gamma_d"}) {
    if (!j.contains(name)) continue;
    for (const auto& [key, value] : j.at(name).items()) {
      const auto [a, b] = parse_pair_key(key);
      check(a, b);
      const double v = number(value, name);
      if (std::string(name) == "Gamma_p")
        r.set_dephasing_population(a, b, v);
      else
        r.set_dephasing_pure(a, b, v);
    }
  }
  return r;
}

inline json to_json(const relax::CpReport& r) {
  json b = json::array();
  for (const auto& row : r.b) b.push_back(row);
  auto opt = [](const std::optional<double>& x) { return x ? json(*x) : json(nullptr); };
  const auto& v = r.inequalities;
  return {{"b", std::move(b)},
          {"diag_ok", r.diag_ok},
          {"g12", opt(r.g12)},
          {"g23", opt(r.g23)},
          {"g13", opt(r.g13)},
          {"degenerate", r.degenerate},
          {"inequality_values",
           {{"b_diagonal", v.diagonal}, {"g12", v.g12}, {"g23", v.g23}, {"g13", v.g13}}},
          {"inequality_verdict", r.inequality_verdict},
          {"verdict", r.verdict}};
}

}  // namespace psdkit::io
