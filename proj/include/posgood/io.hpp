#pragma once

#include <string>
#include <vector>

#include "posgood/distribution.hpp"
#include "posgood/extensions.hpp"
#include "posgood/oracle.hpp"
#include "posgood/phi.hpp"
#include "posgood/value.hpp"

namespace posgood {

// uniform(a,b) | exp(rate) | power(beta) | pareto(shape,scale) | empirical(path.csv)
TypeDistribution parse_distribution(const std::string& text);
// 0 | <number> | const(c) | linear(v0,slope) | poly(c0,c1,...) | sqrt(shift[,scale]) | suffering(v0,slope)
ValueFunction parse_value(const std::string& text);
// identity | pow(r)
PhiTransform parse_phi(const std::string& text);
// quadratic(k) | power(k,r)
CostFunction parse_cost(const std::string& text);

// one sample per line; blank lines and '#' comments are skipped
std::vector<double> read_samples(const std::string& path);

// 12 significant digits
std::string fmt(double x);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

std::string to_csv(const CsvTable& t);
CsvTable parse_csv(const std::string& text);
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

CsvTable economy_table(const DiscreteEconomy& e);
DiscreteEconomy economy_from_table(const CsvTable& t);

}  // namespace posgood
