#include "xml.hpp"

#include <sstream>

#include <expat.h>

namespace duplex::support {

std::string XmlElement::attr(const std::string& key) const {
    auto it = attrs.find(key);
    return it == attrs.end() ? std::string() : it->second;
}

bool XmlElement::has_class(const std::string& cls) const {
    std::istringstream in(attr("class"));
    std::string c;
    while (in >> c)
        if (c == cls) return true;
    return false;
}

namespace {

struct State {
    std::unique_ptr<XmlElement> root;
    std::vector<XmlElement*> stack;
};

void on_start(void* data, const XML_Char* name, const XML_Char** atts) {
    auto* s = static_cast<State*>(data);
    auto el = std::make_unique<XmlElement>();
    el->name = name;
    for (int i = 0; atts[i]; i += 2) el->attrs[atts[i]] = atts[i + 1];
    XmlElement* raw = el.get();
    if (s->stack.empty())
        s->root = std::move(el);
    else
        s->stack.back()->children.push_back(std::move(el));
    s->stack.push_back(raw);
}

void on_end(void* data, const XML_Char*) { static_cast<State*>(data)->stack.pop_back(); }

void on_text(void* data, const XML_Char* text, int len) {
    auto* s = static_cast<State*>(data);
    if (!s->stack.empty()) s->stack.back()->text.append(text, static_cast<std::size_t>(len));
}

void collect(const XmlElement& e, const std::string& name, const std::string& cls,
             std::vector<const XmlElement*>& out) {
    if (e.name == name && (cls.empty() || e.has_class(cls))) out.push_back(&e);
    for (const auto& c : e.children) collect(*c, name, cls, out);
}

} // namespace

XmlResult parse_xml(const std::string& text) {
    State state;
    XML_Parser p = XML_ParserCreate("UTF-8");
    XML_SetUserData(p, &state);
    XML_SetElementHandler(p, on_start, on_end);
    XML_SetCharacterDataHandler(p, on_text);
    XmlResult r;
    if (XML_Parse(p, text.data(), static_cast<int>(text.size()), 1) == XML_STATUS_ERROR) {
        r.error = std::string(XML_ErrorString(XML_GetErrorCode(p))) + " at line " +
                  std::to_string(XML_GetCurrentLineNumber(p));
    } else {
        r.ok = true;
        r.root = std::move(state.root);
    }
    XML_ParserFree(p);
    return r;
}

std::vector<const XmlElement*> find_all(const XmlElement& root, const std::string& name, const std::string& cls) {
    std::vector<const XmlElement*> out;
    collect(root, name, cls, out);
    return out;
}

} // namespace duplex::support
