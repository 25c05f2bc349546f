#include "jumpdiff/json_schema.hpp"

#include "jumpdiff/errors.hpp"

#include <cmath>

namespace jumpdiff {

using nlohmann::json;

namespace {

bool has_type(const json& doc, const std::string& t)
{
  if (t == "object")
    return doc.is_object();
  if (t == "array")
    return doc.is_array();
  if (t == "string")
    return doc.is_string();
  if (t == "boolean")
    return doc.is_boolean();
  if (t == "null")
    return doc.is_null();
  if (t == "number")
    return doc.is_number();
  if (t == "integer") {
    if (doc.is_number_integer())
      return true;
    if (doc.is_number_float()) {
      const double v = doc.get<double>();
      return std::isfinite(v) && v == std::floor(v);
    }
    return false;
  }
  return false;
}

std::string label(const std::string& path)
{
  return path.empty() ? "config" : path;
}

std::string join(const std::string& path, const std::string& key)
{
  return path.empty() ? key : path + "." + key;
}

} // namespace

JsonSchema::JsonSchema(json schema)
  : schema_(std::move(schema))
{}

void JsonSchema::validate(const json& doc) const
{
  check(schema_, doc, "");
}

const json& JsonSchema::resolve(const json& node) const
{
  auto it = node.find("$ref");
  if (it == node.end())
    return node;
  const std::string ref = it->get<std::string>();
  const std::string prefix = "#/definitions/";
  if (ref.rfind(prefix, 0) != 0)
    throw std::logic_error("unsupported schema reference " + ref);
  return resolve(schema_.at("definitions").at(ref.substr(prefix.size())));
}

void JsonSchema::check(const json& raw, const json& doc, const std::string& path) const
{
  const json& node = resolve(raw);

  if (auto it = node.find("type"); it != node.end()) {
    bool ok = false;
    std::string want;
    if (it->is_array()) {
      for (const auto& t : *it) {
        ok = ok || has_type(doc, t.get<std::string>());
        want += (want.empty() ? "" : " or ") + t.get<std::string>();
      }
    } else {
      want = it->get<std::string>();
      ok = has_type(doc, want);
    }
    if (!ok)
      throw ValidationError(label(path), "expected " + want);
  }

  if (auto it = node.find("enum"); it != node.end()) {
    bool found = false;
    for (const auto& v : *it)
      found = found || v == doc;
    if (!found)
      throw ValidationError(label(path), "value " + doc.dump() + " is not one of " + it->dump());
  }
  if (auto it = node.find("const"); it != node.end() && *it != doc)
    throw ValidationError(label(path), "must equal " + it->dump());

  if (doc.is_number()) {
    const double v = doc.get<double>();
    if (auto it = node.find("minimum"); it != node.end() && !(v >= it->get<double>()))
      throw ValidationError(label(path), "must be >= " + it->dump());
    if (auto it = node.find("maximum"); it != node.end() && !(v <= it->get<double>()))
      throw ValidationError(label(path), "must be <= " + it->dump());
    if (auto it = node.find("exclusiveMinimum"); it != node.end() && !(v > it->get<double>()))
      throw ValidationError(label(path), "must be > " + it->dump());
    if (auto it = node.find("exclusiveMaximum"); it != node.end() && !(v < it->get<double>()))
      throw ValidationError(label(path), "must be < " + it->dump());
  }

  if (doc.is_object()) {
    if (auto it = node.find("required"); it != node.end())
      for (const auto& key : *it)
        if (!doc.contains(key.get<std::string>()))
          throw ValidationError(join(path, key.get<std::string>()), "required field is missing");
    const json* props = nullptr;
    if (auto it = node.find("properties"); it != node.end())
      props = &*it;
    const auto add = node.find("additionalProperties");
    const bool closed = add != node.end() && add->is_boolean() && !add->get<bool>();
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      if (props && props->contains(it.key()))
        check(props->at(it.key()), it.value(), join(path, it.key()));
      else if (closed)
        throw ValidationError(join(path, it.key()), "unknown field");
    }
  }

  if (doc.is_array()) {
    if (auto it = node.find("minItems"); it != node.end() && doc.size() < it->get<std::size_t>())
      throw ValidationError(label(path), "needs at least " + it->dump() + " items");
    if (auto it = node.find("items"); it != node.end())
      for (std::size_t i = 0; i < doc.size(); ++i)
        check(*it, doc[i], label(path) + "[" + std::to_string(i) + "]");
  }
}

} // namespace jumpdiff
