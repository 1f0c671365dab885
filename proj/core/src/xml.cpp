#include "smellcheck/xml.hpp"

#include <expat.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "util.hpp"

namespace smellcheck::wire {

namespace {

std::string escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c; break;
        }
    }
    return out;
}

void attr(std::ostringstream& os, std::string_view name, std::string_view value) {
    os << ' ' << name << "=\"" << escape(value) << "\"";
}

// Minimal DOM assembled through expat; plenty for the fixed schema.
struct Element {
    std::string name;
    std::map<std::string, std::string> attrs;
    std::vector<Element> children;

    const std::string& require(const std::string& key) const {
        const auto it = attrs.find(key);
        if (it == attrs.end())
            throw WireError("<" + name + "> misses required attribute '" + key + "'");
        return it->second;
    }
    std::string get(const std::string& key, const std::string& fallback = "") const {
        const auto it = attrs.find(key);
        return it == attrs.end() ? fallback : it->second;
    }
};

struct ParserState {
    std::vector<Element*> stack;
    std::optional<Element> root;
};

void XMLCALL on_start(void* user, const XML_Char* name, const XML_Char** atts) {
    ParserState* state = static_cast<ParserState*>(user);
    Element element;
    element.name = name;
    for (int i = 0; atts[i]; i += 2) element.attrs[atts[i]] = atts[i + 1];
    if (state->stack.empty()) {
        state->root = std::move(element);
        state->stack.push_back(&*state->root);
    } else {
        Element* parent = state->stack.back();
        parent->children.push_back(std::move(element));
        state->stack.push_back(&parent->children.back());
    }
}

void XMLCALL on_end(void* user, const XML_Char*) {
    static_cast<ParserState*>(user)->stack.pop_back();
}

Element parse_xml(const std::string& text) {
    // Child vectors may reallocate while siblings are appended, so pointers
    // into them are only touched through the stack discipline above: a node
    // is on the stack only while no sibling can be added next to it.
    ParserState state;
    XML_Parser parser = XML_ParserCreate(nullptr);
    XML_SetUserData(parser, &state);
    XML_SetElementHandler(parser, on_start, on_end);
    const XML_Status status =
        XML_Parse(parser, text.data(), static_cast<int>(text.size()), XML_TRUE);
    if (status != XML_STATUS_OK) {
        const std::string msg = XML_ErrorString(XML_GetErrorCode(parser));
        const long line = static_cast<long>(XML_GetCurrentLineNumber(parser));
        XML_ParserFree(parser);
        throw WireError("XML parse error at line " + std::to_string(line) + ": " + msg);
    }
    XML_ParserFree(parser);
    if (!state.root) throw WireError("empty XML document");
    return std::move(*state.root);
}

double require_number(const Element& e, const std::string& key) {
    bool ok = false;
    const double v = util::parse_number(e.require(key), &ok);
    if (!ok) throw WireError("<" + e.name + "> attribute '" + key + "' is not a number");
    return v;
}

int require_int(const Element& e, const std::string& key) {
    const double v = require_number(e, key);
    if (v != static_cast<int>(v))
        throw WireError("<" + e.name + "> attribute '" + key + "' is not an integer");
    return static_cast<int>(v);
}

Row decode_row(const Element& e) {
    Row row;
    row.application = e.require("application");
    row.package_name = e.get("package");
    row.class_name = e.require("class");
    row.method = e.get("method");
    const int label = require_int(e, "label");
    if (label != 0 && label != 1) throw WireError("<row> label must be 0 or 1");
    row.label = label;
    row.origin = e.require("origin");
    row.timestamp = e.require("timestamp");
    for (const Element& c : e.children) {
        if (c.name != "metric") throw WireError("unexpected <" + c.name + "> inside <row>");
        row.metrics.emplace_back(c.require("name"), require_number(c, "value"));
    }
    return row;
}

}  // namespace

std::string encode(const ExchangeDocument& doc) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<smellchecker version=\"" << doc.version << "\">\n";
    for (const SampleSet& set : doc.samples) {
        os << "  <samples";
        attr(os, "smell", set.smell);
        os << ">\n";
        for (const Row& row : set.rows) {
            os << "    <row";
            attr(os, "application", row.application);
            attr(os, "package", row.package_name);
            attr(os, "class", row.class_name);
            attr(os, "method", row.method);
            attr(os, "label", std::to_string(row.label));
            attr(os, "origin", row.origin);
            attr(os, "timestamp", row.timestamp);
            os << ">\n";
            for (const auto& [name, value] : row.metrics) {
                os << "      <metric";
                attr(os, "name", name);
                attr(os, "value", util::format_number(value));
                os << "/>\n";
            }
            os << "    </row>\n";
        }
        os << "  </samples>\n";
    }
    if (!doc.feedback.empty()) {
        os << "  <feedback>\n";
        for (const FeedbackEvent& ev : doc.feedback) {
            os << "    <event";
            attr(os, "smell", ev.smell);
            attr(os, "application", ev.application);
            attr(os, "package", ev.package_name);
            attr(os, "class", ev.class_name);
            attr(os, "method", ev.method);
            attr(os, "verdict", ev.verdict);
            attr(os, "timestamp", ev.timestamp);
            os << "/>\n";
        }
        os << "  </feedback>\n";
    }
    if (doc.model) {
        const SmellModel& m = *doc.model;
        os << "  <model";
        attr(os, "smell", m.smell);
        attr(os, "version", std::to_string(m.version));
        attr(os, "granularity", to_string(m.granularity));
        attr(os, "threshold", util::format_number(m.threshold_default));
        attr(os, "sample_size", std::to_string(m.sample_size));
        attr(os, "calibrated_at", m.calibrated_at);
        os << ">\n";
        os << "    <coef";
        attr(os, "name", "_intercept");
        attr(os, "value", util::format_number(m.beta.at(0)));
        os << "/>\n";
        for (std::size_t k = 0; k < m.metric_names.size(); ++k) {
            os << "    <coef";
            attr(os, "name", m.metric_names[k]);
            attr(os, "value", util::format_number(m.beta.at(k + 1)));
            os << "/>\n";
        }
        os << "  </model>\n";
    }
    os << "</smellchecker>\n";
    return os.str();
}

ExchangeDocument decode(const std::string& xml_text) {
    const Element root = parse_xml(xml_text);
    if (root.name != "smellchecker")
        throw WireError("expected <smellchecker> root, got <" + root.name + ">");
    ExchangeDocument doc;
    doc.version = require_int(root, "version");
    if (doc.version != 1) throw WireError("unsupported wire version " + std::to_string(doc.version));

    for (const Element& child : root.children) {
        if (child.name == "samples") {
            SampleSet set;
            set.smell = child.require("smell");
            for (const Element& r : child.children) {
                if (r.name != "row") throw WireError("unexpected <" + r.name + "> inside <samples>");
                set.rows.push_back(decode_row(r));
            }
            doc.samples.push_back(std::move(set));
        } else if (child.name == "feedback") {
            for (const Element& e : child.children) {
                if (e.name != "event")
                    throw WireError("unexpected <" + e.name + "> inside <feedback>");
                FeedbackEvent ev;
                ev.smell = e.require("smell");
                ev.application = e.require("application");
                ev.package_name = e.get("package");
                ev.class_name = e.require("class");
                ev.method = e.get("method");
                ev.verdict = e.require("verdict");
                if (ev.verdict != "fp" && ev.verdict != "fn")
                    throw WireError("<event> verdict must be fp or fn");
                ev.timestamp = e.require("timestamp");
                doc.feedback.push_back(std::move(ev));
            }
        } else if (child.name == "model") {
            SmellModel m;
            m.smell = child.require("smell");
            m.version = require_int(child, "version");
            m.granularity = granularity_from_string(child.require("granularity"));
            m.threshold_default = require_number(child, "threshold");
            m.sample_size = require_int(child, "sample_size");
            m.calibrated_at = child.require("calibrated_at");
            bool intercept_seen = false;
            for (const Element& c : child.children) {
                if (c.name != "coef") throw WireError("unexpected <" + c.name + "> inside <model>");
                const std::string name = c.require("name");
                const double value = require_number(c, "value");
                if (name == "_intercept") {
                    if (intercept_seen) throw WireError("duplicate _intercept coefficient");
                    intercept_seen = true;
                    m.beta.insert(m.beta.begin(), value);
                } else {
                    m.metric_names.push_back(name);
                    m.beta.push_back(value);
                }
            }
            if (!intercept_seen) throw WireError("<model> misses the _intercept coefficient");
            doc.model = std::move(m);
        } else {
            throw WireError("unexpected <" + child.name + "> inside <smellchecker>");
        }
    }
    return doc;
}

std::string encode_result(const UploadResult& r) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<result accepted=\"" << r.accepted << "\" duplicates=\"" << r.duplicates << "\"/>\n";
    return os.str();
}

UploadResult decode_result(const std::string& xml_text) {
    const Element root = parse_xml(xml_text);
    if (root.name != "result") throw WireError("expected <result> root");
    UploadResult r;
    r.accepted = static_cast<std::size_t>(require_int(root, "accepted"));
    r.duplicates = static_cast<std::size_t>(require_int(root, "duplicates"));
    return r;
}

Row to_wire(const tagging::SampleRow& row, const std::vector<std::string>& metric_names) {
    Row out;
    out.application = row.application;
    out.package_name = row.package_name;
    out.class_name = row.class_name;
    out.method = row.method;
    out.label = row.label;
    out.origin = to_string(row.origin);
    out.timestamp = row.timestamp;
    for (std::size_t k = 0; k < metric_names.size(); ++k)
        out.metrics.emplace_back(metric_names[k], row.values.at(k));
    return out;
}

tagging::SampleRow from_wire(const Row& row, const std::vector<std::string>& metric_names) {
    tagging::SampleRow out;
    out.application = row.application;
    out.package_name = row.package_name;
    out.class_name = row.class_name;
    out.method = row.method;
    out.label = row.label;
    out.origin = tagging::origin_from_string(row.origin);
    out.timestamp = row.timestamp;
    for (const std::string& name : metric_names) {
        const auto it = std::find_if(row.metrics.begin(), row.metrics.end(),
                                     [&](const auto& m) { return m.first == name; });
        if (it == row.metrics.end())
            throw WireError("row for '" + row.class_name + "." + row.method +
                            "' misses metric '" + name + "'");
        out.values.push_back(it->second);
    }
    return out;
}

}  // namespace smellcheck::wire
