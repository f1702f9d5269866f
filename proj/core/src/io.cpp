#include "robinfsi/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "robinfsi/errors.hpp"

namespace robinfsi {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // prefer the shortest representation that round-trips
  for (int prec = 1; prec <= 16; ++prec) {
    char probe[64];
    std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
    double back;
    std::sscanf(probe, "%lf", &back);
    if (back == v) return probe;
  }
  return buf;
}

struct CsvWriter::Impl {
  std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path) : impl_(new Impl) {
  impl_->out.open(path, std::ios::binary);
  if (!impl_->out)
    fail(ErrorCode::ValidationError, "cannot open for writing: " + path);
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    const std::string& c = cells[i];
    const bool quote = c.find_first_of(",\"\r\n") != std::string::npos;
    if (quote) {
      impl_->out << '"';
      for (char ch : c) {
        if (ch == '"') impl_->out << '"';
        impl_->out << ch;
      }
      impl_->out << '"';
    } else {
      impl_->out << c;
    }
    if (i + 1 < cells.size()) impl_->out << ',';
  }
  impl_->out << "\r\n";
}

void CsvWriter::row_values(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  row(cells);
}

void write_gnuplot(const std::string& path,
                   const std::vector<std::string>& column_names,
                   const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  out << "#";
  for (const auto& n : column_names) out << " " << n;
  out << "\n";
  for (const auto& r : rows) {
    for (size_t i = 0; i < r.size(); ++i)
      out << (i ? " " : "") << format_double(r[i]);
    out << "\n";
  }
}

void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<std::pair<std::string, const FEFunction*>>&
                   point_vectors,
               const std::vector<std::pair<std::string, const FEFunction*>>&
                   point_scalars) {
  std::ofstream out(path, std::ios::binary);
  out << "# vtk DataFile Version 2.0\n";
  out << "robin-fsi fields\n";
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.n_nodes() << " double\n";
  for (const auto& p : mesh.nodes)
    out << format_double(p.x) << " " << format_double(p.y) << " 0\n";
  out << "CELLS " << mesh.n_tris() << " " << 4 * mesh.n_tris() << "\n";
  for (const auto& t : mesh.tris)
    out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  out << "CELL_TYPES " << mesh.n_tris() << "\n";
  for (int t = 0; t < mesh.n_tris(); ++t) out << "5\n";
  if (point_vectors.empty() && point_scalars.empty()) return;
  out << "POINT_DATA " << mesh.n_nodes() << "\n";
  for (const auto& [name, f] : point_vectors) {
    out << "VECTORS " << name << " double\n";
    const FESpace& v = *f->space;
    for (int i = 0; i < mesh.n_nodes(); ++i)
      out << format_double(f->coeffs[v.dof(i, 0)]) << " "
          << format_double(f->coeffs[v.dof(i, 1)]) << " 0\n";
  }
  for (const auto& [name, f] : point_scalars) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (int i = 0; i < mesh.n_nodes(); ++i)
      out << format_double(f->coeffs[i]) << "\n";
  }
}

void write_energy_csv(const std::string& path, const EnergyLog& log) {
  CsvWriter csv(path);
  csv.row({"t", "E", "D", "N1", "N2", "iface_max_disp", "min_J"});
  for (const auto& r : log.rows)
    csv.row_values({r.t, r.e, r.d, r.n1, r.n2, r.iface_max_disp, r.min_j});
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) fail(ErrorCode::ValidationError, "cannot create directory " + path);
}

}  // namespace robinfsi
