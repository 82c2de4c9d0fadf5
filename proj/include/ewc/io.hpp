#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ewc/core.hpp"
#include "ewc/sampling.hpp"
#include "ewc/sphere.hpp"

namespace ewc::io {

/// Malformed input; the message carries the source and line number when known.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"mu1":..,"mu2":..,"rho1":..,"rho2":..}
EwcParams parse_params_json(const std::string& text, const std::string& source = "<params>");
EwcParams read_params_file(const std::string& path);
std::string params_to_json(const EwcParams& p);

/// {"rho1":..,"eta1":[..],"rho2":..,"eta2":[..]}; an optional "d" must match the vector lengths.
sphere::SphereParams parse_sphere_json(const std::string& text, const std::string& source = "<params>");
sphere::SphereParams read_sphere_file(const std::string& path);

/// CSV with a `theta` column (other columns ignored). Degrees are converted when asked.
std::vector<double> read_angles_csv(std::istream& in, bool degrees = false, const std::string& source = "<csv>");
std::vector<double> read_angles_file(const std::string& path, bool degrees = false);

/// 17 significant digits.
std::string format_double(double x);

void write_angles_csv(std::ostream& out, const std::vector<double>& angles);
/// Sidecar metadata for a sample file.
std::string sample_metadata_json(const SampleBatch& batch, const EwcParams& p);

}  // namespace ewc::io
