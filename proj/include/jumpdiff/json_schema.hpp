#pragma once

#include <json.hpp>

namespace jumpdiff {

//! Validator for the JSON-Schema subset used by the config schema: type,
//! properties, required, additionalProperties (boolean), enum, const, items,
//! minItems, minimum, maximum, exclusiveMinimum, exclusiveMaximum and local
//! "$ref": "#/definitions/...".
class JsonSchema
{
public:
  explicit JsonSchema(nlohmann::json schema);

  //! Throws ValidationError whose field is the dotted path of the first
  //! offending value.
  void validate(const nlohmann::json& doc) const;

private:
  void check(const nlohmann::json& node, const nlohmann::json& doc, const std::string& path) const;
  const nlohmann::json& resolve(const nlohmann::json& node) const;

  nlohmann::json schema_;
};

} // namespace jumpdiff
