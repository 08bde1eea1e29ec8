#ifndef NYSREG_MODEL_IO_HPP
#define NYSREG_MODEL_IO_HPP

#include "nysreg/aggregation.hpp"
#include "nysreg/solver.hpp"

#include <iosfwd>
#include <string>
#include <variant>

namespace nysreg {

/// Plain-text model files. Every number is written with 17 significant
/// digits, so reading a file back reproduces predictions bit for bit.
void write_model(std::ostream& out, const NystromModel& model);
NystromModel read_model(std::istream& in);

void write_aggregate(std::ostream& out, const AggregatedModel& model);
AggregatedModel read_aggregate(std::istream& in);

struct AnyModel {
  std::variant<NystromModel, AggregatedModel> model;

  Matrix predict(const PointSet& queries) const;
  std::size_t dim() const;
};

/// Reads either format, dispatching on the first line.
AnyModel read_any_model(std::istream& in);

void save_model(const std::string& path, const NystromModel& model);
void save_model(const std::string& path, const AggregatedModel& model);
AnyModel load_model(const std::string& path);

}  // namespace nysreg

#endif  // NYSREG_MODEL_IO_HPP
