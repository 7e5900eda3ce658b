#include "otsense/io.hpp"

#include "otsense/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace otsense {

using Json = nlohmann::ordered_json;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw DataError("cannot read " + path.string());
  return ss.str();
}

void spill(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw DataError("cannot write " + path.string());
}

std::vector<std::vector<std::string>> split_records(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t i = 0;
  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    const bool blank = record.size() == 1 && record[0].empty() && !field_started;
    if (!blank) records.push_back(std::move(record));
    record.clear();
    field_started = false;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      ++i;
      continue;
    }
    if (c == '"') {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (c == '\r' || c == '\n') {
      end_record();
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
    } else {
      field.push_back(c);
      field_started = true;
    }
    ++i;
  }
  if (quoted) throw DataError("unterminated quoted field");
  if (!field.empty() || !record.empty() || field_started) end_record();
  return records;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_decimal(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == 'e' || c == 'E' ||
          c == '+')) {
      return false;
    }
  }
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
  if (text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xEF &&
      static_cast<unsigned char>(text[1]) == 0xBB && static_cast<unsigned char>(text[2]) == 0xBF) {
    text.remove_prefix(3);
  }
  auto records = split_records(text);
  if (records.empty()) throw DataError("empty file");
  CsvTable t;
  for (auto& h : records[0]) t.header.emplace_back(trim(h));
  const auto cols = static_cast<Index>(t.header.size());
  const auto rows = static_cast<Index>(records.size() - 1);
  t.values.resize(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const auto& rec = records[static_cast<std::size_t>(r + 1)];
    if (static_cast<Index>(rec.size()) != cols) {
      throw DataError("row " + std::to_string(r + 2) + " has " + std::to_string(rec.size()) + " fields, expected " +
                      std::to_string(cols));
    }
    for (Index c = 0; c < cols; ++c) {
      double v;
      if (!parse_decimal(rec[static_cast<std::size_t>(c)], v)) {
        throw DataError("non-numeric at row " + std::to_string(r + 2) + ", column " +
                        t.header[static_cast<std::size_t>(c)]);
      }
      t.values(r, c) = v;
    }
  }
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
  return parse_csv(slurp(path));
}

std::vector<Index> resolve_columns(const std::vector<std::string>& header, std::string_view selector) {
  std::vector<Index> out;
  const auto by_name = [&](std::string_view name) -> Index {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<Index>(it - header.begin());
  };
  const auto as_position = [&](std::string_view s, Index& v) {
    int x = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size()) return false;
    v = x;
    return true;
  };
  const auto check_position = [&](Index p, std::string_view tok) {
    if (p < 1 || p > static_cast<Index>(header.size())) {
      throw DataError("missing column " + std::string(tok) + " (position out of range)");
    }
    return p - 1;
  };
  std::size_t start = 0;
  while (start <= selector.size()) {
    const auto comma = selector.find(',', start);
    const auto tok = trim(selector.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                  : comma - start));
    start = comma == std::string_view::npos ? selector.size() + 1 : comma + 1;
    if (tok.empty()) continue;
    if (const Index pos = by_name(tok); pos >= 0) {
      out.push_back(pos);
      continue;
    }
    Index a = 0, b = 0;
    const auto dash = tok.find('-', 1);
    if (dash != std::string_view::npos && as_position(trim(tok.substr(0, dash)), a) &&
        as_position(trim(tok.substr(dash + 1)), b)) {
      a = check_position(a, tok);
      b = check_position(b, tok);
      if (a > b) throw std::invalid_argument("descending column range " + std::string(tok));
      for (Index p = a; p <= b; ++p) out.push_back(p);
      continue;
    }
    if (as_position(tok, a)) {
      out.push_back(check_position(a, tok));
      continue;
    }
    throw DataError("missing column " + std::string(tok));
  }
  if (out.empty()) throw std::invalid_argument("empty column selector");
  std::vector<Index> seen = out;
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw std::invalid_argument("column selected twice in '" + std::string(selector) + "'");
  }
  return out;
}

SensitivityDataset read_dataset_csv(const std::filesystem::path& path, std::string_view inputs,
                                    std::string_view outputs) {
  const CsvTable t = read_csv(path);
  const auto ys = resolve_columns(t.header, outputs);
  std::vector<Index> xs;
  if (trim(inputs).empty()) {
    for (Index c = 0; c < static_cast<Index>(t.header.size()); ++c) {
      if (std::find(ys.begin(), ys.end(), c) == ys.end()) xs.push_back(c);
    }
    if (xs.empty()) throw std::invalid_argument("no input columns left after selecting outputs");
  } else {
    xs = resolve_columns(t.header, inputs);
  }
  for (Index c : xs) {
    if (std::find(ys.begin(), ys.end(), c) != ys.end()) {
      throw std::invalid_argument("column " + t.header[static_cast<std::size_t>(c)] +
                                  " selected as both input and output");
    }
  }
  const auto take = [&](const std::vector<Index>& cols, std::vector<std::string>& names) {
    Matrix m(t.values.rows(), static_cast<Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
      m.col(static_cast<Index>(j)) = t.values.col(cols[j]);
      names.push_back(t.header[static_cast<std::size_t>(cols[j])]);
    }
    return m;
  };
  std::vector<std::string> xn, yn;
  Matrix x = take(xs, xn);
  Matrix y = take(ys, yn);
  return validate_dataset(std::move(x), std::move(y), std::move(xn), std::move(yn));
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string join_row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line.push_back(',');
    line += cells[i];
  }
  line.push_back('\n');
  return line;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header, const Matrix& values) {
  std::string text;
  std::vector<std::string> cells;
  for (const auto& h : header) cells.push_back(csv_field(h));
  text += join_row(cells);
  for (Index r = 0; r < values.rows(); ++r) {
    cells.clear();
    for (Index c = 0; c < values.cols(); ++c) cells.push_back(format_number(values(r, c)));
    text += join_row(cells);
  }
  spill(path, text);
}

std::string results_json(const IndexEstimate& est, std::optional<double> threshold) {
  Json doc;
  doc["method"] = est.method;
  doc["bound"] = est.bound;
  doc["converged"] = est.converged;
  Json inputs = Json::array();
  for (const auto& in : est.inputs) {
    Json j;
    j["name"] = in.name;
    j["index"] = in.index;
    if (in.components) {
      j["components"] = {{"advective", in.components->advective},
                         {"diffusive", in.components->diffusive},
                         {"residual", in.components->residual}};
    }
    if (est.bootstrap) {
      if (const auto* e = est.bootstrap->find(in.name, est.method)) {
        j["ci"] = {{"low", e->ci_low},
                   {"high", e->ci_high},
                   {"type", std::string(to_string(est.bootstrap->type))},
                   {"conf", est.bootstrap->confidence}};
      }
    }
    inputs.push_back(std::move(j));
  }
  doc["inputs"] = std::move(inputs);
  Json seps = Json::array();
  for (const auto& row : local_separations(est)) {
    seps.push_back({{"input", row.input}, {"class", row.partition}, {"x", row.x}, {"value", row.value}});
  }
  doc["separations"] = std::move(seps);
  if (est.bootstrap) {
    const auto& b = *est.bootstrap;
    Json entries = Json::array();
    for (const auto& e : b.entries) {
      entries.push_back({{"input", e.input},
                         {"component", e.component},
                         {"original", e.original},
                         {"bias", e.bias},
                         {"low", e.ci_low},
                         {"high", e.ci_high}});
    }
    doc["bootstrap"] = {{"replicates", b.replicates},
                        {"type", std::string(to_string(b.type))},
                        {"conf", b.confidence},
                        {"entries", std::move(entries)}};
  }
  if (threshold) doc["threshold"] = *threshold;
  return doc.dump(2) + "\n";
}

ResultsDocument parse_results_json(std::string_view text) {
  ResultsDocument out;
  try {
    const Json doc = Json::parse(text);
    auto& est = out.estimate;
    est.method = doc.at("method").get<std::string>();
    est.bound = doc.at("bound").get<double>();
    est.converged = doc.value("converged", true);
    for (const auto& j : doc.at("inputs")) {
      InputIndex in;
      in.name = j.at("name").get<std::string>();
      in.index = j.at("index").get<double>();
      if (j.contains("components")) {
        const auto& c = j["components"];
        in.components = Components{c.at("advective").get<double>(), c.at("diffusive").get<double>(),
                                   c.at("residual").get<double>()};
      }
      est.inputs.push_back(std::move(in));
    }
    for (const auto& s : doc.at("separations")) {
      const auto name = s.at("input").get<std::string>();
      auto it = std::find_if(est.inputs.begin(), est.inputs.end(), [&](const auto& in) { return in.name == name; });
      if (it == est.inputs.end()) throw DataError("separation for unknown input " + name);
      it->separations.push_back(s.at("value").get<double>());
      it->representatives.push_back(s.at("x").get<double>());
    }
    if (doc.contains("bootstrap")) {
      const auto& b = doc["bootstrap"];
      BootstrapResult res;
      res.replicates = b.at("replicates").get<int>();
      res.type = parse_ci_type(b.at("type").get<std::string>());
      res.confidence = b.at("conf").get<double>();
      for (const auto& e : b.at("entries")) {
        res.entries.push_back(BootstrapEntry{e.at("input").get<std::string>(), e.at("component").get<std::string>(),
                                             e.at("original").get<double>(), e.at("bias").get<double>(),
                                             e.at("low").get<double>(), e.at("high").get<double>()});
      }
      est.bootstrap = std::move(res);
    }
    if (doc.contains("threshold")) out.threshold = doc["threshold"].get<double>();
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed results file: ") + e.what());
  }
  return out;
}

ResultsDocument read_results_json(const std::filesystem::path& path) {
  return parse_results_json(slurp(path));
}

void write_results(const IndexEstimate& est, std::optional<double> threshold, const std::filesystem::path& dir,
                   bool plot) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());

  spill(dir / "indices.json", results_json(est, threshold));

  const bool comps = std::any_of(est.inputs.begin(), est.inputs.end(), [](const auto& in) { return in.components.has_value(); });
  std::vector<std::string> header{"input", "index"};
  if (comps) header.insert(header.end(), {"advective", "diffusive", "residual"});
  if (est.bootstrap) header.insert(header.end(), {"ci_low", "ci_high"});
  std::string text = join_row(header);
  for (const auto& in : est.inputs) {
    std::vector<std::string> cells{csv_field(in.name), format_number(in.index)};
    if (comps) {
      const Components c = in.components.value_or(Components{});
      cells.insert(cells.end(), {format_number(c.advective), format_number(c.diffusive), format_number(c.residual)});
    }
    if (est.bootstrap) {
      const auto* e = est.bootstrap->find(in.name, est.method);
      cells.push_back(e ? format_number(e->ci_low) : "");
      cells.push_back(e ? format_number(e->ci_high) : "");
    }
    text += join_row(cells);
  }
  spill(dir / "indices.csv", text);

  text = join_row({"input", "class", "x", "value"});
  for (const auto& row : local_separations(est)) {
    text += join_row({csv_field(row.input), std::to_string(row.partition), format_number(row.x), format_number(row.value)});
  }
  spill(dir / "separations.csv", text);

  if (est.bootstrap) {
    text = join_row({"input", "component", "original", "bias", "ci_low", "ci_high"});
    for (const auto& e : est.bootstrap->entries) {
      text += join_row({csv_field(e.input), csv_field(e.component), format_number(e.original), format_number(e.bias),
                        format_number(e.ci_low), format_number(e.ci_high)});
    }
    spill(dir / "bootstrap.csv", text);
  }

  if (plot) {
    spill(dir / "indices.svg", indices_svg(est, threshold));
    spill(dir / "separations.svg", separations_svg(est));
  }
}

void write_smap(const SensitivityMap& map, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());
  std::string text;
  {
    std::vector<std::string> header{"output"};
    for (const auto& n : map.inputs) header.push_back(csv_field(n));
    text = join_row(header);
    for (Index r = 0; r < map.values.rows(); ++r) {
      std::vector<std::string> cells{csv_field(map.outputs[static_cast<std::size_t>(r)])};
      for (Index c = 0; c < map.values.cols(); ++c) cells.push_back(format_number(map.values(r, c)));
      text += join_row(cells);
    }
  }
  spill(dir / "smap.csv", text);
  Json doc;
  doc["method"] = "1d";
  doc["inputs"] = map.inputs;
  doc["outputs"] = map.outputs;
  Json rows = Json::array();
  for (Index r = 0; r < map.values.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < map.values.cols(); ++c) row.push_back(map.values(r, c));
    rows.push_back(std::move(row));
  }
  doc["values"] = std::move(rows);
  spill(dir / "smap.json", doc.dump(2) + "\n");
}

}  // namespace otsense
