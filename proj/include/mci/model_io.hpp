#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "mci/estimate.hpp"
#include "mci/interp.hpp"
#include "mci/model.hpp"

namespace mci {

// Model text format, line oriented, complex entries as "re im" pairs:
//   sss <order> <discrete|continuous>
//   <order> rows of A, <order> lines of B, one row of C, one line of D
StateSpaceModel read_model(std::istream& in);
StateSpaceModel read_model_file(const std::string& path);
void write_model(std::ostream& out, const StateSpaceModel& model);
void write_model_file(const std::string& path, const StateSpaceModel& model);

// Rational text format:
//   rtf <num_count> <den_count>
//   num coefficients, then den coefficients, ascending, one "re im" per line
RationalTransferFunction read_rational(std::istream& in);
void write_rational(std::ostream& out, const RationalTransferFunction& model);
void write_rational_file(const std::string& path, const RationalTransferFunction& model);

// Problem file: either a model block or
//   interp <n>
//   <n> rows of Sigma, then <n> lines of H
using Problem = std::variant<StateSpaceModel, InterpolationData>;
Problem read_problem_file(const std::string& path);
void write_interp(std::ostream& out, const InterpolationData& data);
void write_interp_file(const std::string& path, const InterpolationData& data);

// signal stream: one real value per line, or "re im" per line
SignalSeries read_signal(std::istream& in, bool two_column, double sample_period = 1.0);
SignalSeries read_signal_file(const std::string& path, bool two_column,
                              double sample_period = 1.0);

// matrix-market exchange reader (array or coordinate; real, integer or
// complex; general, symmetric or hermitian)
Matrix read_matrix_market(std::istream& in);
Matrix read_matrix_market_file(const std::string& path);

// write-temp-then-rename so partially written files are never observed
void atomic_write_file(const std::string& path, const std::string& content);

} // namespace mci
