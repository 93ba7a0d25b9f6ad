#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "dsl/dataset.hpp"
#include "dsl/engine.hpp"

namespace dsl {

enum class Normalization { None, MinMax, ZScore };

Normalization parse_normalization(const std::string& name);

/// Column selector: header name or zero-based index.
using ColumnRef = std::variant<std::string, std::size_t>;

struct CsvOptions {
  bool header = true;
  std::optional<ColumnRef> label_column;
  std::optional<ColumnRef> id_column;
  Normalization normalize = Normalization::None;
};

/// RFC 4180 subset: comma separated, optional double quotes, CRLF or LF.
/// Row order becomes node order; labels are densified by first appearance.
/// Throws EmptyFile, ParseError (with 1-based row and column), NonFiniteValue.
Dataset parse_csv(const std::string& text, const CsvOptions& options = {});
/// Also throws IoError for unreadable files.
Dataset load_csv(const std::string& path, const CsvOptions& options = {});

/// Features at 17 significant digits, then the label name column if present.
std::string to_csv(const Dataset& ds);

/// Per feature. Constant features map to 0.
void normalize(Dataset& ds, Normalization how);

struct BlobSpec {
  std::size_t n = 0;
  std::size_t k = 1;
  std::size_t d = 2;
  double spread = 1.0;
  std::uint64_t seed = 0;
};

/// Parses "n=300,k=3,d=2[,spread=..][,seed=..]"; seed defaults to `seed`.
BlobSpec parse_blob_spec(const std::string& text, std::uint64_t seed = 0);

/// k isotropic Gaussian clusters with std `spread`, centers on a lattice
/// with spacing 10 * spread. Point p belongs to cluster p mod k. Sampling
/// uses mt19937_64 and Box-Muller. Throws InvalidSpec.
Dataset generate_blobs(const BlobSpec& spec);

/// Skeleton document plus query/step counters, phase, labels, and trace.
nlohmann::ordered_json export_snapshot(const Session& session);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace dsl
