#ifndef GRIDPCE_CSV_HPP
#define GRIDPCE_CSV_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gridpce {

// Full-precision, locale-independent float formatting ("%.17g"); used
// everywhere a file must be byte-reproducible.
std::string format_double(double value);

// Writes a matrix as CSV with the given header columns.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Eigen::MatrixXd& rows);

// Reads a CSV of doubles; the first line is treated as a header when it
// contains any non-numeric token.
Eigen::MatrixXd read_csv_matrix(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace gridpce

#endif  // GRIDPCE_CSV_HPP
