#include "broadbid/instance_io.hpp"

#include <fstream>
#include <sstream>

#include "broadbid/errors.hpp"
#include "json.hpp"

namespace broadbid {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string require_string(const json& object, const char* key, const std::string& where) {
  const auto it = object.find(key);
  if (it == object.end()) throw ParseError(where + ": missing '" + key + "'");
  if (!it->is_string()) throw ParseError(where + ": '" + key + "' must be a decimal string");
  return it->get<std::string>();
}

}  // namespace

Instance parse_instance(std::string_view document) {
  json root;
  try {
    root = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("instance is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("instance document must be a JSON object");

  InstanceBuilder builder;
  const auto queries = root.find("queries");
  if (queries == root.end() || !queries->is_array()) {
    throw ParseError("instance requires a 'queries' array");
  }
  for (std::size_t i = 0; i < queries->size(); ++i) {
    const json& entry = (*queries)[i];
    const std::string where = "queries[" + std::to_string(i) + "]";
    if (!entry.is_object()) throw ParseError(where + " must be an object");
    const auto id = entry.find("id");
    if (id == entry.end() || !id->is_string()) throw ParseError(where + ": 'id' must be a string");
    const auto biddable = entry.find("biddable");
    if (biddable == entry.end() || !biddable->is_boolean()) {
      throw ParseError(where + ": 'biddable' must be a boolean");
    }
    const Money value = Money::parse(require_string(entry, "value", where));
    const Money cost = Money::parse(require_string(entry, "cost", where));
    const std::int64_t clicks = parse_fixed(require_string(entry, "clicks", where));
    if (clicks < 0) throw ValidationError(where + ": negative clicks");
    builder.add_query(id->get<std::string>(), value, cost, Clicks::from_micros(clicks),
                      biddable->get<bool>());
  }

  if (const auto pairs = root.find("broad_match"); pairs != root.end()) {
    if (!pairs->is_array()) throw ParseError("'broad_match' must be an array");
    for (const json& pair : *pairs) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
        throw ParseError("'broad_match' entries must be [phrase_id, query_id]");
      }
      builder.add_match(pair[0].get<std::string>(), pair[1].get<std::string>());
    }
  }
  if (const auto budget = root.find("budget"); budget != root.end() && !budget->is_null()) {
    if (!budget->is_string()) throw ParseError("'budget' must be a decimal string");
    builder.set_budget(Money::parse(budget->get<std::string>()));
  }
  return builder.build();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

Instance load_instance(const std::filesystem::path& path) {
  return parse_instance(read_text_file(path));
}

std::string instance_to_json(const Instance& inst) {
  ordered_json root;
  root["queries"] = ordered_json::array();
  for (const Query& q : inst.queries()) {
    root["queries"].push_back({{"id", q.id},
                               {"value", q.value.to_string()},
                               {"cost", q.cost.to_string()},
                               {"clicks", q.clicks.to_string()},
                               {"biddable", q.biddable}});
  }
  root["broad_match"] = ordered_json::array();
  for (const auto& [s, q] : inst.broad_match()) {
    root["broad_match"].push_back({inst.query(s).id, inst.query(q).id});
  }
  if (inst.budget()) root["budget"] = inst.budget()->to_string();
  return root.dump(1) + "\n";
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  write_text_file(path, instance_to_json(inst));
}

}  // namespace broadbid
