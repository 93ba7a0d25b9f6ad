#include "dsl/ingestion.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "dsl/error.hpp"
#include "dsl/random.hpp"

namespace dsl {

namespace {

using Row = std::vector<std::string>;

std::vector<Row> split_csv(const std::string& text) {
  std::vector<Row> rows;
  Row row;
  std::string cell;
  bool quoted = false;
  bool any = false;
  for (std::size_t k = 0; k < text.size(); ++k) {
    const char c = text[k];
    if (quoted) {
      if (c == '"') {
        if (k + 1 < text.size() && text[k + 1] == '"') {
          cell += '"';
          ++k;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && k + 1 < text.size() && text[k + 1] == '\n') ++k;
      if (any || !cell.empty()) {
        row.push_back(std::move(cell));
        rows.push_back(std::move(row));
      }
      row.clear();
      cell.clear();
      any = false;
    } else {
      cell += c;
      any = true;
    }
  }
  if (any || !cell.empty()) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::size_t resolve_column(const ColumnRef& ref, const Row* header, std::size_t width) {
  if (const auto* index = std::get_if<std::size_t>(&ref)) {
    if (*index >= width)
      throw Error(ErrorCode::InvalidSpec, "column index " + std::to_string(*index) + " out of range");
    return *index;
  }
  const auto& name = std::get<std::string>(ref);
  if (header) {
    for (std::size_t c = 0; c < header->size(); ++c)
      if (trim((*header)[c]) == name) return c;
  }
  // Purely numeric names select by index, which also covers header-less files.
  std::size_t index = 0;
  const auto* end = name.data() + name.size();
  if (!name.empty() && std::from_chars(name.data(), end, index).ptr == end && index < width)
    return index;
  throw Error(ErrorCode::InvalidSpec, "no column named '" + name + "'");
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

Normalization parse_normalization(const std::string& name) {
  if (name == "none") return Normalization::None;
  if (name == "minmax") return Normalization::MinMax;
  if (name == "zscore") return Normalization::ZScore;
  throw Error(ErrorCode::InvalidSpec, "unknown normalization '" + name + "'");
}

Dataset parse_csv(const std::string& text, const CsvOptions& options) {
  const auto rows = split_csv(text);
  if (rows.empty() || (options.header && rows.size() == 1))
    throw Error(ErrorCode::EmptyFile, "CSV input has no data rows");

  const Row* header = options.header ? &rows.front() : nullptr;
  const std::size_t first = options.header ? 1 : 0;
  const std::size_t width = rows[first].size();
  if (header && header->size() != width)
    throw Error(ErrorCode::ParseError, "row 1: header has " + std::to_string(header->size()) +
                                           " columns, data has " + std::to_string(width));

  std::optional<std::size_t> label_col;
  std::optional<std::size_t> id_col;
  if (options.label_column) label_col = resolve_column(*options.label_column, header, width);
  if (options.id_column) id_col = resolve_column(*options.id_column, header, width);

  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < width; ++c)
    if (c != label_col && c != id_col) feature_cols.push_back(c);
  if (feature_cols.empty()) throw Error(ErrorCode::InvalidSpec, "CSV has no feature columns");

  const std::size_t n = rows.size() - first;
  const std::size_t d = feature_cols.size();
  std::vector<double> values;
  values.reserve(n * d);
  Labeling labels;
  std::vector<std::string> label_names;
  std::unordered_map<std::string, int> label_ids;
  std::vector<std::string> ids;

  for (std::size_t r = first; r < rows.size(); ++r) {
    const Row& row = rows[r];
    const std::size_t line = r + 1;
    if (row.size() != width)
      throw Error(ErrorCode::ParseError, "row " + std::to_string(line) + ": expected " +
                                             std::to_string(width) + " columns, found " +
                                             std::to_string(row.size()));
    for (std::size_t c : feature_cols) {
      const std::string cell = trim(row[c]);
      double v = 0.0;
      const char* begin = cell.data();
      const char* end = begin + cell.size();
      auto [ptr, ec] = std::from_chars(begin, end, v);
      if (cell.empty() || ec != std::errc() || ptr != end) {
        // from_chars rejects a leading '+', strtod does not.
        char* stop = nullptr;
        v = std::strtod(cell.c_str(), &stop);
        if (cell.empty() || stop != cell.c_str() + cell.size())
          throw Error(ErrorCode::ParseError, "row " + std::to_string(line) + ", column " +
                                                 std::to_string(c + 1) + ": '" + cell +
                                                 "' is not a number");
      }
      if (!std::isfinite(v))
        throw Error(ErrorCode::NonFiniteValue, "row " + std::to_string(line) + ", column " +
                                                   std::to_string(c + 1) + " is not finite");
      values.push_back(v);
    }
    if (label_col) {
      const std::string name = trim(row[*label_col]);
      auto [it, fresh] = label_ids.try_emplace(name, static_cast<int>(label_names.size()));
      if (fresh) label_names.push_back(name);
      labels.push_back(it->second);
    }
    if (id_col) ids.push_back(trim(row[*id_col]));
  }

  Dataset ds(n, d, std::move(values));
  if (label_col) ds.set_labels(std::move(labels), std::move(label_names));
  if (id_col) ds.set_ids(std::move(ids));
  if (header) {
    std::vector<std::string> names;
    for (std::size_t c : feature_cols) names.push_back(trim((*header)[c]));
    ds.set_feature_names(std::move(names));
  }
  normalize(ds, options.normalize);
  return ds;
}

Dataset load_csv(const std::string& path, const CsvOptions& options) {
  return parse_csv(read_text_file(path), options);
}

std::string to_csv(const Dataset& ds) {
  std::ostringstream out;
  const bool labeled = ds.has_labels();
  const bool with_ids = !ds.ids().empty();
  if (with_ids) out << "id,";
  for (std::size_t k = 0; k < ds.dims(); ++k) {
    if (k) out << ',';
    out << quote_if_needed(ds.feature_names().empty() ? "x" + std::to_string(k) : ds.feature_names()[k]);
  }
  if (labeled) out << ",label";
  out << '\n';
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto row = ds.row(static_cast<NodeId>(i));
    if (with_ids) out << quote_if_needed(ds.ids()[i]) << ',';
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out << ',';
      out << fmt17(row[k]);
    }
    if (labeled) {
      const int l = (*ds.labels())[i];
      const auto& names = ds.label_names();
      out << ',' << quote_if_needed(static_cast<std::size_t>(l) < names.size() ? names[l] : std::to_string(l));
    }
    out << '\n';
  }
  return out.str();
}

void normalize(Dataset& ds, Normalization how) {
  if (how == Normalization::None) return;
  const std::size_t n = ds.size();
  const std::size_t d = ds.dims();
  for (std::size_t k = 0; k < d; ++k) {
    double lo = ds.row(0)[k];
    double hi = lo;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = ds.row(static_cast<NodeId>(i))[k];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      mean += v;
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = ds.row(static_cast<NodeId>(i))[k] - mean;
      var += diff * diff;
    }
    const double sd = std::sqrt(var / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      double& v = ds.mutable_row(static_cast<NodeId>(i))[k];
      if (how == Normalization::MinMax)
        v = hi > lo ? (v - lo) / (hi - lo) : 0.0;
      else
        v = sd > 0.0 ? (v - mean) / sd : 0.0;
    }
  }
}

namespace {

void validate(const BlobSpec& spec) {
  if (spec.k < 1 || spec.n < spec.k || spec.d < 1 || !(spec.spread > 0.0) || !std::isfinite(spec.spread))
    throw Error(ErrorCode::InvalidSpec, "blobs need n >= k >= 1, d >= 1, spread > 0");
}

}  // namespace

BlobSpec parse_blob_spec(const std::string& text, std::uint64_t seed) {
  BlobSpec spec;
  spec.seed = seed;
  bool have_n = false;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::InvalidSpec, "blob spec item '" + item + "' is not key=value");
    const std::string key = trim(item.substr(0, eq));
    const std::string value = trim(item.substr(eq + 1));
    try {
      std::size_t used = 0;
      if (key == "n") {
        spec.n = std::stoul(value, &used);
        have_n = true;
      } else if (key == "k") {
        spec.k = std::stoul(value, &used);
      } else if (key == "d") {
        spec.d = std::stoul(value, &used);
      } else if (key == "spread") {
        spec.spread = std::stod(value, &used);
      } else if (key == "seed") {
        spec.seed = std::stoull(value, &used);
      } else {
        throw Error(ErrorCode::InvalidSpec, "unknown blob spec key '" + key + "'");
      }
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidSpec, "bad value for blob spec key '" + key + "'");
    }
  }
  if (!have_n) throw Error(ErrorCode::InvalidSpec, "blob spec needs n");
  validate(spec);
  return spec;
}

Dataset generate_blobs(const BlobSpec& spec) {
  validate(spec);

  // Smallest lattice side m with m^d >= k; centers are the first k cells.
  std::size_t side = 1;
  for (;;) {
    std::size_t cells = 1;
    for (std::size_t t = 0; t < spec.d && cells < spec.k; ++t) cells *= side;
    if (cells >= spec.k) break;
    ++side;
  }
  const double spacing = 10.0 * spec.spread;
  std::vector<double> centers(spec.k * spec.d, 0.0);
  for (std::size_t c = 0; c < spec.k; ++c) {
    std::size_t code = c;
    for (std::size_t t = 0; t < spec.d; ++t) {
      centers[c * spec.d + t] = spacing * static_cast<double>(code % side);
      code /= side;
    }
  }

  Rng rng(spec.seed);
  std::vector<double> values(spec.n * spec.d);
  Labeling labels(spec.n);
  for (std::size_t p = 0; p < spec.n; ++p) {
    const std::size_t c = p % spec.k;
    labels[p] = static_cast<int>(c);
    for (std::size_t t = 0; t < spec.d; ++t)
      values[p * spec.d + t] = centers[c * spec.d + t] + spec.spread * rng.normal();
  }
  Dataset ds(spec.n, spec.d, std::move(values));
  std::vector<std::string> names;
  for (std::size_t c = 0; c < spec.k; ++c) names.push_back(std::to_string(c));
  ds.set_labels(std::move(labels), std::move(names));
  return ds;
}

nlohmann::ordered_json export_snapshot(const Session& session) {
  auto doc = skeleton_to_json(session.skeleton());
  doc["query_count"] = session.query_count();
  doc["step_count"] = session.step_count();
  doc["phase"] = std::string(to_string(session.phase()));
  doc["labels"] = session.labels();
  auto trace = nlohmann::ordered_json::array();
  for (const auto& s : session.trace().samples()) {
    nlohmann::ordered_json item;
    item["queries"] = s.queries;
    item["ari"] = s.ari ? nlohmann::ordered_json(*s.ari) : nlohmann::ordered_json(nullptr);
    item["clusters"] = s.clusters;
    trace.push_back(std::move(item));
  }
  doc["trace"] = std::move(trace);
  return doc;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path);
}

}  // namespace dsl
