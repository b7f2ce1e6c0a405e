#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nounforge/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Validator for the subset of JSON Schema keywords used by docs/schema.json.
// Unknown keywords fail loudly so the schema cannot silently outgrow it.
class Validator {
 public:
  explicit Validator(json root) : root_(std::move(root)) {}

  bool valid(const json& value, const std::string& def) const { return check(value, root_["$defs"][def]); }

 private:
  json root_;

  static bool type_matches(const json& v, const std::string& type) {
    if (type == "object") return v.is_object();
    if (type == "array") return v.is_array();
    if (type == "string") return v.is_string();
    if (type == "integer") return v.is_number_integer();
    if (type == "number") return v.is_number();
    if (type == "boolean") return v.is_boolean();
    if (type == "null") return v.is_null();
    throw std::logic_error("unsupported type " + type);
  }

  bool check(const json& v, const json& s) const {
    static const std::set<std::string> known{"type", "required", "additionalProperties", "properties", "items",
                                             "oneOf", "$ref", "minimum", "maximum", "exclusiveMinimum", "pattern"};
    for (const auto& [key, _] : s.items()) {
      if (!known.count(key)) throw std::logic_error("unsupported keyword " + key);
    }
    if (s.contains("$ref")) {
      const auto ref = s["$ref"].get<std::string>();
      return check(v, root_["$defs"][ref.substr(ref.rfind('/') + 1)]);
    }
    if (s.contains("oneOf")) {
      int matches = 0;
      for (const auto& alt : s["oneOf"]) matches += check(v, alt) ? 1 : 0;
      if (matches != 1) return false;
    }
    if (s.contains("type")) {
      bool any = false;
      if (s["type"].is_array()) {
        for (const auto& t : s["type"]) any = any || type_matches(v, t.get<std::string>());
      } else {
        any = type_matches(v, s["type"].get<std::string>());
      }
      if (!any) return false;
    }
    if (v.is_number()) {
      const double x = v.get<double>();
      if (s.contains("minimum") && x < s["minimum"].get<double>()) return false;
      if (s.contains("maximum") && x > s["maximum"].get<double>()) return false;
      if (s.contains("exclusiveMinimum") && x <= s["exclusiveMinimum"].get<double>()) return false;
    }
    if (v.is_string() && s.contains("pattern") &&
        !std::regex_search(v.get<std::string>(), std::regex(s["pattern"].get<std::string>()))) {
      return false;
    }
    if (v.is_array() && s.contains("items")) {
      for (const auto& item : v) {
        if (!check(item, s["items"])) return false;
      }
    }
    if (v.is_object()) {
      for (const auto& r : s.value("required", json::array())) {
        if (!v.contains(r.get<std::string>())) return false;
      }
      const auto props = s.value("properties", json::object());
      for (const auto& [key, value] : v.items()) {
        if (props.contains(key)) {
          if (!check(value, props[key])) return false;
        } else if (s.value("additionalProperties", true) == false) {
          return false;
        }
      }
    }
    return true;
  }
};

std::string run(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  nounforge::cli::run(args, in, out, err);
  return out.str();
}

}  // namespace

TEST_CASE("every command's JSON validates against the shipped schema") {
  std::ifstream schema_file(std::string(NOUNFORGE_DOCS_DIR) + "/schema.json");
  REQUIRE(schema_file);
  const Validator schema(json::parse(schema_file));
  const std::string demo = std::string(NOUNFORGE_DATA_DIR) + "/demo/";

  std::random_device rd;
  const fs::path dir = fs::temp_directory_path() / ("nounforge-schema-" + std::to_string(rd()));
  fs::create_directories(dir);
  const auto model = (dir / "m.model").string();

  CHECK(schema.valid(json::parse(run({"train", "--thesaurus", demo + "thesaurus.tsv", "--pairs", demo + "pairs.tsv",
                                      "--out", model})),
                     "train_summary"));

  std::istringstream lines(run({"analyze", "--model", model}, "pottery coffee mug\nmug\ncoffee mug\nghost mug\n"));
  int records = 0;
  for (std::string line; std::getline(lines, line); ++records) CHECK(schema.valid(json::parse(line), "analyze_record"));
  CHECK(records == 4);

  std::ofstream(dir / "gold.tsv") << "pottery coffee mug\tR\nbroken line\n";
  CHECK(schema.valid(json::parse(run({"eval", "--model", model, "--gold", demo + "gold.tsv"})), "eval_report"));
  CHECK(schema.valid(json::parse(run({"eval", "--model", model, "--gold", (dir / "gold.tsv").string()})),
                     "eval_report"));
  std::ofstream(dir / "empty.tsv") << "";
  CHECK(schema.valid(json::parse(run({"eval", "--model", model, "--gold", (dir / "empty.tsv").string()})),
                     "eval_report"));

  CHECK(schema.valid(json::parse(run({"inspect", "--model", model, "--head", "vessel", "--top-k", "100"})),
                     "inspect_output"));

  // the validator is not vacuous
  CHECK_FALSE(schema.valid(json{{"head", "vessel"}}, "inspect_output"));
  CHECK_FALSE(schema.valid(json{{"head", "vessel"}, {"modifiers", json::array()}, {"extra", 1}}, "inspect_output"));
  CHECK_FALSE(schema.valid(json{{"line", 1}, {"words", json::array()}}, "analyze_record"));

  fs::remove_all(dir);
}
