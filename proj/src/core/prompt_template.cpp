#include "reframe/core/prompt_template.hpp"

#include "reframe/core/assets.hpp"
#include "reframe/core/error.hpp"
#include "reframe/core/text.hpp"

namespace reframe {

PromptTemplate PromptTemplate::parse(std::string_view source)
{
  PromptTemplate tpl;
  if (source.starts_with("#!")) {
    const auto eol = source.find('\n');
    tpl.id_ = std::string(text::trim(source.substr(2, eol == std::string_view::npos ? eol : eol - 2)));
    source = eol == std::string_view::npos ? std::string_view{} : source.substr(eol + 1);
  }

  if (source.ends_with('\n')) source.remove_suffix(1);

  // Stack of open sections; the bottom is the template root.
  std::vector<std::vector<Node>*> stack{&tpl.nodes_};
  std::vector<std::string> open_names;
  std::size_t pos = 0;
  while (pos < source.size()) {
    const auto open = source.find("{{", pos);
    if (open == std::string_view::npos) {
      stack.back()->push_back({Node::Kind::Text, std::string(source.substr(pos)), {}});
      break;
    }
    if (open > pos) {
      stack.back()->push_back({Node::Kind::Text, std::string(source.substr(pos, open - pos)), {}});
    }
    const auto close = source.find("}}", open + 2);
    if (close == std::string_view::npos) {
      throw Error(ErrorCode::InvalidInput, "unterminated tag in template '" + tpl.id_ + "'");
    }
    const auto tag = text::trim(source.substr(open + 2, close - open - 2));
    pos = close + 2;
    if (tag.starts_with('#')) {
      auto& list = *stack.back();
      list.push_back({Node::Kind::Section, std::string(text::trim(tag.substr(1))), {}});
      stack.push_back(&list.back().children);
      open_names.emplace_back(text::trim(tag.substr(1)));
      // A section tag alone on its line does not emit that line break.
      if (pos < source.size() && source[pos] == '\n') ++pos;
    }
    else if (tag.starts_with('/')) {
      if (open_names.empty() || open_names.back() != text::trim(tag.substr(1))) {
        throw Error(ErrorCode::InvalidInput, "unbalanced section close '" + std::string(tag) +
                                                 "' in template '" + tpl.id_ + "'");
      }
      stack.pop_back();
      open_names.pop_back();
      if (pos < source.size() && source[pos] == '\n') ++pos;
    }
    else {
      stack.back()->push_back({Node::Kind::Variable, std::string(tag), {}});
    }
  }
  if (!open_names.empty()) {
    throw Error(ErrorCode::InvalidInput, "unclosed section '" + open_names.back() +
                                             "' in template '" + tpl.id_ + "'");
  }
  return tpl;
}

PromptTemplate PromptTemplate::from_asset(std::string_view asset_name)
{
  return parse(assets::get(asset_name));
}

std::string PromptTemplate::render(const TemplateScope& scope) const
{
  std::string out;
  std::vector<const TemplateScope*> stack{&scope};
  render_nodes(nodes_, stack, out);
  return out;
}

void PromptTemplate::render_nodes(const std::vector<Node>& nodes,
                                  std::vector<const TemplateScope*>& stack, std::string& out)
{
  for (const auto& node : nodes) {
    switch (node.kind) {
      case Node::Kind::Text: out += node.value; break;
      case Node::Kind::Variable: {
        const std::string* found = nullptr;
        for (auto it = stack.rbegin(); it != stack.rend() && found == nullptr; ++it) {
          if (const auto v = (*it)->values.find(node.value); v != (*it)->values.end()) found = &v->second;
        }
        if (found == nullptr) {
          throw Error(ErrorCode::InvalidInput, "unbound template variable '" + node.value + "'");
        }
        out += *found;
        break;
      }
      case Node::Kind::Section: {
        const std::vector<TemplateScope>* items = nullptr;
        for (auto it = stack.rbegin(); it != stack.rend() && items == nullptr; ++it) {
          if (const auto s = (*it)->sections.find(node.value); s != (*it)->sections.end()) items = &s->second;
        }
        if (items == nullptr) break;
        for (const auto& item : *items) {
          stack.push_back(&item);
          render_nodes(node.children, stack, out);
          stack.pop_back();
        }
        break;
      }
    }
  }
}

}  // namespace reframe
