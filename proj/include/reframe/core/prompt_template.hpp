#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace reframe {

/// Values for one template rendering. Sections hold lists of nested scopes.
struct TemplateScope {
  std::map<std::string, std::string, std::less<>> values;
  std::map<std::string, std::vector<TemplateScope>, std::less<>> sections;

  TemplateScope& set(std::string key, std::string value)
  {
    values[std::move(key)] = std::move(value);
    return *this;
  }
  TemplateScope& add(const std::string& section, TemplateScope item)
  {
    sections[section].push_back(std::move(item));
    return *this;
  }
};

/// A small mustache subset: `{{name}}` substitutes a value (looked up in the
/// innermost scope first), `{{#list}}...{{/list}}` repeats its body for each
/// item in a section. A first line of the form `#! id` names the template and
/// is not rendered, and one trailing newline is dropped.
class PromptTemplate {
public:
  /// Throws Error(InvalidInput) on unbalanced sections.
  static PromptTemplate parse(std::string_view source);
  /// Looks up a compiled-in asset by name.
  static PromptTemplate from_asset(std::string_view asset_name);

  [[nodiscard]] const std::string& id() const noexcept { return id_; }

  /// Throws Error(InvalidInput) on an unbound variable.
  [[nodiscard]] std::string render(const TemplateScope& scope) const;

private:
  struct Node {
    enum class Kind { Text, Variable, Section } kind;
    std::string value;
    std::vector<Node> children;
  };

  std::string id_;
  std::vector<Node> nodes_;

  static void render_nodes(const std::vector<Node>& nodes,
                           std::vector<const TemplateScope*>& stack, std::string& out);
};

}  // namespace reframe
