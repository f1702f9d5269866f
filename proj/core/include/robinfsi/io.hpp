#pragma once

#include <string>
#include <vector>

#include "robinfsi/fe_space.hpp"
#include "robinfsi/fsi_common.hpp"
#include "robinfsi/mesh.hpp"

namespace robinfsi {

/// Shortest round-trippable decimal representation.
std::string format_double(double v);

/// RFC-4180 CSV (CRLF line endings, quoting only where required).
class CsvWriter {
public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();
  void row(const std::vector<std::string>& cells);
  void row_values(const std::vector<double>& values);

private:
  struct Impl;
  Impl* impl_;
};

void write_gnuplot(const std::string& path,
                   const std::vector<std::string>& column_names,
                   const std::vector<std::vector<double>>& rows);

/// Legacy VTK ASCII unstructured grid with optional point data. Vector
/// fields are sampled at mesh vertices.
void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<std::pair<std::string, const FEFunction*>>&
                   point_vectors = {},
               const std::vector<std::pair<std::string, const FEFunction*>>&
                   point_scalars = {});

void write_energy_csv(const std::string& path, const EnergyLog& log);

void ensure_directory(const std::string& path);

}  // namespace robinfsi
