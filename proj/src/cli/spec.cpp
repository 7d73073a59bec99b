#include "gwi/cli/spec.hpp"

#include <fstream>
#include <sstream>

#include "gwi/error.hpp"
#include "json.hpp"

namespace gwi::cli {

namespace {

using nlohmann::json;

struct Position {
  std::size_t line = 1;
  std::size_t column = 1;
};

Position position_at(std::string_view text, std::size_t offset) {
  Position pos;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++pos.line;
      pos.column = 1;
    } else {
      ++pos.column;
    }
  }
  return pos;
}

/// Walks the quoted keys of `path` in order through the text; the last one
/// found gives the position. Good enough for hand-written specs.
Position position_of_key(std::string_view text, const std::vector<std::string>& path) {
  std::size_t at = 0;
  std::size_t found = std::string_view::npos;
  for (const auto& key : path) {
    const auto hit = text.find('"' + key + '"', at);
    if (hit == std::string_view::npos) break;
    found = hit;
    at = hit + key.size() + 2;
  }
  return found == std::string_view::npos ? Position{} : position_at(text, found);
}

class SpecReader {
 public:
  SpecReader(std::string_view text, std::string origin, std::filesystem::path base_dir)
      : text_(text), origin_(std::move(origin)), base_dir_(std::move(base_dir)) {}

  [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& message) const {
    std::string key;
    for (const auto& part : path) key += (key.empty() ? "" : ".") + part;
    const Position pos = position_of_key(text_, path);
    throw ParseError(origin_ + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": key '" + key +
                     "': " + message);
  }

  void only_keys(const json& obj, const std::vector<std::string>& path,
                 std::initializer_list<std::string_view> allowed) const {
    for (const auto& [key, value] : obj.items()) {
      bool ok = false;
      for (auto a : allowed) ok |= key == a;
      if (!ok) {
        auto where = path;
        where.push_back(key);
        fail(where, "unknown key");
      }
    }
  }

  double number(const json& obj, const std::vector<std::string>& path, const std::string& key) const {
    auto where = path;
    where.push_back(key);
    if (!obj.contains(key)) fail(where, "missing");
    const auto& v = obj.at(key);
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
  }

  LawSpec law(const json& node, const std::string& role) const {
    const std::vector<std::string> path{role};
    if (!node.is_object()) fail(path, "expected an object with a \"family\" key");
    only_keys(node, path, {"family", "params", "probs", "pmf_file"});
    if (!node.contains("family") || !node.at("family").is_string()) {
      fail({role, "family"}, "expected a family name string");
    }
    const auto family = node.at("family").get<std::string>();

    std::vector<std::string> params_path{role, "params"};
    json params = json::object();
    if (node.contains("params")) {
      params = node.at("params");
      if (!params.is_object()) fail(params_path, "expected an object");
    }
    auto no_params = [&] {
      if (!params.empty()) fail(params_path, "family '" + family + "' takes no parameters");
    };
    if (family != "explicit") {
      for (const char* key : {"probs", "pmf_file"}) {
        if (node.contains(key)) fail({role, key}, "only valid for family 'explicit'");
      }
    }

    if (family == "explicit") {
      no_params();
      const bool inline_probs = node.contains("probs");
      if (inline_probs == node.contains("pmf_file")) {
        fail({role, "probs"}, "explicit laws need exactly one of \"probs\" or \"pmf_file\"");
      }
      if (!inline_probs) {
        const auto& file = node.at("pmf_file");
        if (!file.is_string()) fail({role, "pmf_file"}, "expected a path string");
        std::filesystem::path p = file.get<std::string>();
        if (p.is_relative()) p = base_dir_ / p;
        try {
          return family::Explicit{read_pmf_csv(p)};
        } catch (const Error& e) {
          fail({role, "pmf_file"}, e.what());
        }
      }
      const auto& probs = node.at("probs");
      if (!probs.is_array() || probs.empty()) fail({role, "probs"}, "expected a nonempty array of numbers");
      std::vector<double> out;
      for (const auto& p : probs) {
        if (!p.is_number()) fail({role, "probs"}, "expected a nonempty array of numbers");
        out.push_back(p.get<double>());
      }
      return family::Explicit{std::move(out)};
    }
    if (family == "geometric-critical") {
      no_params();
      return family::GeometricCritical{};
    }
    if (family == "binary") {
      no_params();
      return family::Binary{};
    }
    if (family == "poisson") {
      only_keys(params, params_path, {"mean"});
      return family::Poisson{number(params, params_path, "mean")};
    }
    if (family == "bernoulli01") {
      only_keys(params, params_path, {"q1"});
      return family::Bernoulli01{number(params, params_path, "q1")};
    }
    if (family == "log-heavy-offspring") {
      only_keys(params, params_path, {"beta"});
      return family::LogHeavyOffspring{number(params, params_path, "beta")};
    }
    if (family == "log-heavy-immigration") {
      only_keys(params, params_path, {"beta"});
      return family::LogHeavyImmigration{number(params, params_path, "beta")};
    }
    fail({role, "family"}, "unknown family '" + family + "'");
  }

  Model model() const {
    json doc;
    try {
      doc = json::parse(text_);
    } catch (const json::parse_error& e) {
      const Position pos = position_at(text_, e.byte == 0 ? 0 : e.byte - 1);
      throw ParseError(origin_ + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.column) +
                       ": malformed JSON: " + e.what());
    }
    if (!doc.is_object()) throw ParseError(origin_ + ":1:1: expected a JSON object");
    only_keys(doc, {}, {"offspring", "immigration"});
    for (const char* role : {"offspring", "immigration"}) {
      if (!doc.contains(role)) fail({role}, "missing");
    }
    auto build = [&](const char* role) {
      try {
        return make_law(law(doc.at(role), role));
      } catch (const DomainError& e) {
        fail({role}, e.what());
      }
    };
    Law offspring = build("offspring");
    Law immigration = build("immigration");
    try {
      return make_model(std::move(offspring), std::move(immigration));
    } catch (const DomainError& e) {
      throw ParseError(origin_ + ": invalid model: " + e.what());
    }
  }

 private:
  std::string_view text_;
  std::string origin_;
  std::filesystem::path base_dir_;
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    cells.push_back(cell);
  }
  return cells;
}

}  // namespace

Model parse_model_spec(std::string_view text, const std::string& origin, const std::filesystem::path& base_dir) {
  return SpecReader(text, origin, base_dir).model();
}

Model load_model_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open model spec");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_model_spec(buffer.str(), path.string(), path.parent_path());
}

std::vector<double> read_pmf_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open pmf file");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty pmf file");
  const auto header = split_csv_line(line);
  std::ptrdiff_t k_col = -1;
  std::ptrdiff_t p_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "k") k_col = static_cast<std::ptrdiff_t>(i);
    if (header[i] == "probability") p_col = static_cast<std::ptrdiff_t>(i);
  }
  if (p_col < 0) throw ParseError(path.string() + ":1: no 'probability' column");

  std::vector<double> probs;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    const auto where = path.string() + ":" + std::to_string(line_no);
    if (static_cast<std::ptrdiff_t>(cells.size()) <= std::max(k_col, p_col)) throw ParseError(where + ": short row");
    std::size_t k = probs.size();
    try {
      if (k_col >= 0) k = std::stoull(cells[static_cast<std::size_t>(k_col)]);
      const double p = std::stod(cells[static_cast<std::size_t>(p_col)]);
      if (k < probs.size()) throw ParseError(where + ": k must increase");
      probs.resize(k, 0.0);
      probs.push_back(p);
    } catch (const std::logic_error&) {
      throw ParseError(where + ": not a number");
    }
  }
  if (probs.empty()) throw ParseError(path.string() + ": no rows");
  return probs;
}

}  // namespace gwi::cli
