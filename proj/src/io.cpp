#include "ewc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "json_text.hpp"

namespace ewc::io {
namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports a byte offset; translate it to a line.
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw InputError(source + ":" + std::to_string(line) + ": invalid JSON");
  }
}

double number_field(const json& j, const char* key, const std::string& source) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw InputError(source + ": missing numeric field \"" + key + "\"");
  return j.at(key).get<double>();
}

std::vector<double> vector_field(const json& j, const char* key, const std::string& source) {
  if (!j.contains(key) || !j.at(key).is_array()) throw InputError(source + ": missing array field \"" + key + "\"");
  std::vector<double> v;
  for (const auto& x : j.at(key)) {
    if (!x.is_number()) throw InputError(source + ": non-numeric entry in \"" + key + "\"");
    v.push_back(x.get<double>());
  }
  return v;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

EwcParams parse_params_json(const std::string& text, const std::string& source) {
  const json j = parse_json(text, source);
  if (!j.is_object()) throw InputError(source + ": expected a JSON object");
  return {number_field(j, "mu1", source), number_field(j, "mu2", source), number_field(j, "rho1", source),
          number_field(j, "rho2", source)};
}

EwcParams read_params_file(const std::string& path) { return parse_params_json(slurp(path), path); }

std::string params_to_json(const EwcParams& p) {
  std::ostringstream os;
  os << "{\"mu1\": " << format_double(p.mu1().value()) << ", \"mu2\": " << format_double(p.mu2().value())
     << ", \"rho1\": " << format_double(p.rho1()) << ", \"rho2\": " << format_double(p.rho2()) << "}";
  return os.str();
}

sphere::SphereParams parse_sphere_json(const std::string& text, const std::string& source) {
  const json j = parse_json(text, source);
  if (!j.is_object()) throw InputError(source + ": expected a JSON object");
  auto eta1 = vector_field(j, "eta1", source);
  auto eta2 = vector_field(j, "eta2", source);
  if (eta1.size() != eta2.size()) throw InputError(source + ": eta1 and eta2 differ in length");
  if (j.contains("d") && number_field(j, "d", source) != static_cast<double>(eta1.size()))
    throw InputError(source + ": \"d\" does not match the vector length");
  return {number_field(j, "rho1", source), sphere::UnitVector(std::move(eta1)), number_field(j, "rho2", source),
          sphere::UnitVector(std::move(eta2))};
}

sphere::SphereParams read_sphere_file(const std::string& path) { return parse_sphere_json(slurp(path), path); }

std::vector<double> read_angles_csv(std::istream& in, bool degrees, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> column;
  std::vector<double> angles;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || line.front() == '#') continue;
    const auto cells = split_csv(line);
    if (!column) {
      for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i] == "theta") column = i;
      if (!column) throw InputError(source + ":" + std::to_string(line_no) + ": header has no theta column");
      continue;
    }
    if (*column >= cells.size())
      throw InputError(source + ":" + std::to_string(line_no) + ": missing theta value");
    const std::string& cell = cells[*column];
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), x);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(x))
      throw InputError(source + ":" + std::to_string(line_no) + ": invalid angle \"" + cell + "\"");
    angles.push_back(normalize_angle(degrees ? x * kPi / 180.0 : x));
  }
  if (!column) throw InputError(source + ": empty input");
  if (angles.empty()) throw InputError(source + ": no observations");
  return angles;
}

std::vector<double> read_angles_file(const std::string& path, bool degrees) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_angles_csv(in, degrees, path);
}

std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

void write_angles_csv(std::ostream& out, const std::vector<double>& angles) {
  out << "theta\n";
  for (double t : angles) out << format_double(t) << '\n';
}

std::string sample_metadata_json(const SampleBatch& batch, const EwcParams& p) {
  json j;
  j["seed"] = batch.seed;
  j["method"] = std::string(to_string(batch.method));
  j["n"] = batch.angles.size();
  j["params"] = json::parse(params_to_json(p));
  j["proposals"] = batch.diagnostics.proposals;
  j["accepted"] = batch.diagnostics.accepted;
  if (batch.diagnostics.acceptance_rate) j["acceptance_rate"] = *batch.diagnostics.acceptance_rate;
  if (batch.diagnostics.effective_sample_size) j["effective_sample_size"] = *batch.diagnostics.effective_sample_size;
  return to_json_text(j);
}

}  // namespace ewc::io
