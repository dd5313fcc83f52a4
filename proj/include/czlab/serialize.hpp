#pragma once

// JSON and CSV forms of the library's values. Floats are written so that they
// read back bit for bit; non-finite values become the strings "inf", "-inf"
// and "nan".

#include <string>
#include <vector>

#include "json.hpp"

#include "czlab/characteristics.hpp"
#include "czlab/dyadics.hpp"
#include "czlab/lerner.hpp"
#include "czlab/normlab.hpp"
#include "czlab/positive.hpp"
#include "czlab/shifts.hpp"
#include "czlab/stopping.hpp"

namespace czlab {

using Json = nlohmann::ordered_json;

// %.17g.
std::string format_double(double x);
Json number(double x);
double number_from(const Json& j);

Json to_json(const GridSpec& grid);
GridSpec grid_from_json(const Json& j);

Json to_json(const DyadicCube& cube);  // {level, coords}
DyadicCube cube_from_json(const Json& j, int dimension);

Json to_json(const StepFunction& f);  // {d, N, shift, values}
StepFunction step_function_from_json(const Json& j);

Json to_json(const CharacteristicReport& r);  // {value, witness, p}

Json to_json(const HaarShift& s);  // {d, N, m, n, cancellative, entries}
HaarShift shift_from_json(const Json& j);

Json to_json(const TauCoefficients& tau);  // [{cube, tau}]
TauCoefficients tau_from_json(const Json& j, const GridSpec& grid);

Json to_json(const Decomposition& d);  // {q0, median, generations}
Json to_json(const StoppingFamily& s); // {root, nodes:[{cube, parent, children}]}
Json to_json(const TestingReport& r);  // {value, witness}

extern const char* const kSweepCsvHeader;
std::string sweep_csv(const std::vector<SweepRow>& rows);
Json to_json(const SweepRow& row);

// Reads a file; throws io on failure.
std::string read_file(const std::string& path);

}  // namespace czlab
