#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace stable_stein {

enum class Precision { standard, extended };

std::string to_string(Precision p);
Precision precision_from_string(const std::string& s);

// Labelled grid: header[0] names the row label column, the rest are column labels.
struct Table {
    std::vector<std::string> header;
    std::vector<std::pair<std::string, std::vector<double>>> rows;

    void write_csv(std::ostream& os) const;
    double at(std::size_t row, std::size_t col) const { return rows.at(row).second.at(col); }
};

// {1.1, ..., 1.9} and {0.1, ..., 0.9}.
std::vector<double> default_alpha_grid();
std::vector<double> default_gamma_grid();
// alpha = 1 + j/100, j = 1..99.
std::vector<double> figure1_alpha_grid();

// One row "D_alpha" over the alpha columns.
Table table1(std::span<const double> alphas, Precision p = Precision::standard);
// Rows gamma, columns alpha.
Table table2(std::span<const double> alphas, std::span<const double> gammas, Precision p = Precision::standard);
// Pareto bound with N = inf; rows gamma, columns alpha.
Table table3(double n, std::span<const double> alphas, std::span<const double> gammas,
             Precision p = Precision::standard);

// Optimal gamma for four configurations: Pareto; beta = 4 with A = B; beta = 2 with A = B;
// beta = alpha + 0.1 with A = B. Columns alpha,gamma_star_case1..gamma_star_case4.
Table figure1(double n, std::span<const double> alphas);

}  // namespace stable_stein
