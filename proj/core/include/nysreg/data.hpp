#ifndef NYSREG_DATA_HPP
#define NYSREG_DATA_HPP

#include "nysreg/dataset.hpp"
#include "nysreg/kernels.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nysreg {

struct CsvOptions {
  bool has_header = false;
  /// Column holding the label; negative values count from the end (-1 = last).
  int label_column = -1;
  /// Rows [0, labeled_count) keep their labels; unset means every row.
  std::optional<std::size_t> labeled_count;
  /// Read at most this many data rows.
  std::optional<std::size_t> max_rows;
};

using RawTable = std::vector<std::vector<std::string>>;

/// Splits a comma-separated file into trimmed string fields.
RawTable read_csv_table(const std::string& path, bool has_header = false,
                        std::optional<std::size_t> max_rows = std::nullopt);

/// Numeric CSV with one label column. Rows stay in file order; rows past
/// `labeled_count` become unlabeled. Parse failures name the row and column.
Dataset load_csv(const std::string& path, const CsvOptions& options);

/// Numeric CSV without labels, e.g. query points.
PointSet load_points(const std::string& path, bool has_header = false);

/// Writes a matrix as CSV with the given significant digits.
void write_csv(std::ostream& out, const Matrix& values, int precision = 17);
void write_csv(std::ostream& out, const PointSet& values, int precision = 17);

/// Writes points followed by one label column per output; unlabeled rows get
/// zero labels, so reload with labeled_count = m.
void write_dataset_csv(std::ostream& out, const Dataset& data, int precision = 17);

/// Per-column min-max scaling to [0,1]. Constant columns map to 0.
struct MinMaxScaler {
  RowVector min;
  RowVector max;

  static MinMaxScaler fit(const PointSet& x);
  PointSet transform(const PointSet& x) const;
};

/// Ordinal codes of the three categorical NSL-KDD attributes.
struct NslKddEncoding {
  std::vector<std::string> services;  // sorted; code = position
  std::vector<std::string> flags;     // sorted; code = position
  std::vector<std::size_t> kept_columns;  // attribute positions (0..40) that survive

  /// Two columns per line: "<attribute>:<string>,<code>".
  void write(std::ostream& out) const;
};

struct NslKddData {
  Dataset dataset;        // normalized over all rows, labels +1 attack / -1 normal
  PointSet encoded;       // encoded, zero columns dropped, not normalized
  Vector labels;          // +1 / -1 for every row
  NslKddEncoding encoding;
  MinMaxScaler scaler;    // statistics of `encoded`
};

/// protocol_type tcp/udp/icmp -> 0/1/2; service and flag by sorted-unique
/// index; attributes that are zero in every row are dropped; min-max scaling;
/// label "normal" -> -1, anything else -> +1. Accepts 42 fields (41
/// attributes + class) or 43 (trailing difficulty level, ignored).
NslKddData preprocess_nslkdd(const RawTable& rows);

struct Fold {
  IndexList train;
  IndexList test;
};

enum class FoldScheme { paper_sequential, shuffled };

/// k contiguous blocks of size n/k (remainder goes to the last block); the
/// shuffled scheme permutes 0..n-1 with `seed` first. Fold i tests block i
/// and trains on the rest.
std::vector<Fold> kfold_split(std::size_t n, std::size_t k, FoldScheme scheme,
                              std::uint64_t seed = 0);

/// Sequential protocol used for the intrusion-detection benchmark: for each
/// of blocks 1..k-1, train on that block alone and test on block k.
std::vector<Fold> paper_protocol_splits(std::size_t n, std::size_t k);

/// f_H = sum_i a_i K(., z_i); planted regression target.
struct SyntheticTarget {
  PointSet anchors;   // k x d
  Vector amplitudes;  // k
  KernelSpec kernel;
  double noise_sigma = 0.0;

  Vector evaluate(const PointSet& x) const;
};

struct SyntheticSample {
  Dataset data;  // first m rows labeled with f_H + noise
  Vector truth;  // f_H at all n points
};

/// Inputs uniform on [0,1]^d from a seeded generator.
SyntheticSample gen_synthetic(const SyntheticTarget& target, std::size_t m, std::size_t n,
                              std::uint64_t seed);

/// Uniform points on [0,1]^d.
PointSet uniform_points(std::size_t n, std::size_t d, std::uint64_t seed);

}  // namespace nysreg

#endif  // NYSREG_DATA_HPP
